//! After a valuation update, find the closest partition that is stable again.

use ashg::{build_fig3_tight, nearest_stable, nearest_stable_up_to_symmetry, partition_distance, StabilityNotion};

fn main() -> ashg::Result<()> {
    let bundle = build_fig3_tight();
    let mut inst = bundle.instance();
    println!("start {} is CNS; update {:?}", bundle.partition, bundle.update.entries);

    for k in 3..=4 {
        inst.k = k;
        let out = nearest_stable(&inst)?;
        match &out.partition {
            Some(p) => println!("k = {k}: {p} at distance {}", partition_distance(&bundle.partition, p)?),
            None => println!("k = {k}: nothing stable ({} partitions examined)", out.explored),
        }
    }

    // Agents with identical valuation rows are interchangeable; the reduced
    // search explores one representative per class.
    let reduced = nearest_stable_up_to_symmetry(
        &bundle.altered_game()?,
        &bundle.partition,
        StabilityNotion::Cns,
        4,
        1_000_000,
    )?;
    println!("symmetry-reduced search: distance {:?}, {} classes examined", reduced.distance, reduced.explored);
    Ok(())
}
