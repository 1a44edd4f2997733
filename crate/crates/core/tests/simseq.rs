//! Long update sequences against their accounting bounds.

use ashg::{
    build_fig5_updown, enumerate_all_stable, gen_random_game, gen_update_sequence, partition_distance, potential_audit,
    run_sequence, social_welfare, ClassTag, Game, Partition, Rational, RepairPolicy, SequenceReport, StabilityNotion,
    UpdateSequence,
};

use StabilityNotion::*;

fn start(g: &Game, x: StabilityNotion) -> Partition {
    enumerate_all_stable(g, x, 10).unwrap().swap_remove(0)
}

fn random_run(n: usize, class: ClassTag, x: StabilityNotion, m: usize, seed: u64, policy: RepairPolicy) -> SequenceReport {
    let g = gen_random_game(n, class, true, seed, None).unwrap();
    let p = start(&g, x);
    let seq = gen_update_sequence(&g, &p, x, m, seed.wrapping_mul(31) + 7, None).unwrap();
    let rep = run_sequence(&seq, policy).unwrap();
    assert!(rep.completed, "{:?}", rep.failure);
    rep
}

#[test]
fn close_cns_ledger_and_average() {
    for seed in 0..10 {
        let (n, m) = (7, 120);
        let rep = random_run(n, ClassTag::Strict, Cns, m, seed, RepairPolicy::CloseCns);
        assert!(rep.within_cns_ledger(), "seed {seed}");
        assert!(rep.average.clone().unwrap() <= Rational::from(4) + Rational::new(n as i64, m as i64).unwrap());
        assert_eq!(rep.total_distance, rep.per_step.iter().map(|s| s.distance).sum::<usize>());
    }
}

#[test]
fn cis_dynamics_never_exceed_three() {
    for seed in 0..10 {
        let rep = random_run(7, ClassTag::Strict, Cis, 80, seed, RepairPolicy::CisDynamics);
        assert!(rep.per_step.iter().all(|s| s.distance <= 3), "seed {seed}");
        assert!(rep.average.unwrap() <= Rational::from(3));
    }
}

#[test]
fn greedy_feng_long_runs_average_two_at_most() {
    let n = 5;
    let m = 100 * n * n;
    for seed in 0..3 {
        let rep = random_run(n, ClassTag::Feng, Ns, m, seed, RepairPolicy::GreedyDynamics);
        let audit = potential_audit(&rep, ClassTag::Feng).unwrap();
        assert!(Rational::from(audit.deviations as i64) <= audit.max_deviations);
        assert!(rep.average.unwrap() <= Rational::from(2), "seed {seed}");
    }
}

#[test]
fn welfare_stays_in_range() {
    let n = 6;
    let bound = Rational::from((n * (n - 1)) as i64);
    for seed in 0..5 {
        let rep = random_run(n, ClassTag::Feng, Ns, 150, seed, RepairPolicy::GreedyDynamics);
        for s in &rep.per_step {
            assert!(s.sw <= bound && s.sw >= -bound.clone());
        }
    }
}

#[test]
fn non_symmetric_cis_audit() {
    let n = 6;
    for seed in 0..5 {
        let g = gen_random_game(n, ClassTag::Feng, false, seed, None).unwrap();
        let p = start(&g, Cis);
        let seq = gen_update_sequence(&g, &p, Cis, 100, seed, None).unwrap();
        let rep = run_sequence(&seq, RepairPolicy::GreedyDynamics).unwrap();
        assert!(rep.completed);
        let audit = potential_audit(&rep, ClassTag::Feng).unwrap();
        assert_eq!(audit.deviation_bound, Rational::one());
        assert_eq!(audit.update_bound, Rational::from(-2));
    }
}

#[test]
fn up_down_alternation_forces_half() {
    for n in [6, 8, 10] {
        let u = build_fig5_updown(n).unwrap();
        let down = enumerate_all_stable(&u.down.game, Is, n).unwrap();
        let up = enumerate_all_stable(&u.up_game().unwrap(), Is, n).unwrap();
        assert_eq!((down.len(), up.len()), (1, 1));
        assert_eq!(partition_distance(&down[0], &up[0]).unwrap(), n / 2);
        let seq = UpdateSequence {
            initial_game: u.down.game.clone(),
            initial_partition: u.down.partition.clone(),
            updates: u.alternating(10),
            notion: Is,
        };
        let rep = run_sequence(&seq, RepairPolicy::NearestStable(n / 2)).unwrap();
        assert!(rep.completed);
        assert!(rep.per_step.iter().all(|s| s.distance == n / 2));
        assert_eq!(rep.average, Some(Rational::from((n / 2) as i64)));
        assert_eq!(rep.per_step[0].sw, social_welfare(&u.up_game().unwrap(), &up[0]).unwrap());
    }
}
