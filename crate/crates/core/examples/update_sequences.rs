//! Long random update sequences: average repair distance and the welfare
//! potential that bounds it.

use ashg::{
    gen_random_game, gen_update_sequence, potential_audit, run_dynamics, run_sequence, ClassTag, Partition, Policy,
    RepairPolicy, StabilityNotion,
};

fn main() -> ashg::Result<()> {
    let n = 8;
    let game = gen_random_game(n, ClassTag::Feng, true, 3, None)?;
    let start = run_dynamics(&game, &Partition::singletons(n), StabilityNotion::Ns, Policy::FirstInOrder, 10_000)
        .final_partition;
    let seq = gen_update_sequence(&game, &start, StabilityNotion::Ns, 1000, 9, None)?;
    let report = run_sequence(&seq, RepairPolicy::GreedyDynamics)?;
    let audit = potential_audit(&report, ClassTag::Feng)?;
    println!("{} updates, {} moves, average {:?}", seq.updates.len(), report.total_distance, report.average);
    println!(
        "smallest deviation gain {:?}, worst update loss {:?}, move budget {}",
        audit.min_deviation_gain, audit.min_update_delta, audit.max_deviations
    );

    let strict = gen_random_game(n, ClassTag::Strict, true, 3, None)?;
    let start = run_dynamics(&strict, &Partition::singletons(n), StabilityNotion::Cns, Policy::FirstInOrder, 10_000)
        .final_partition;
    let seq = gen_update_sequence(&strict, &start, StabilityNotion::Cns, 200, 9, None)?;
    let report = run_sequence(&seq, RepairPolicy::CloseCns)?;
    println!("CNS repair: total {} within ledger: {}", report.total_distance, report.within_cns_ledger());
    print!("{}", report.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}
