//! Single-agent-move distance between partitions, and the ball around one.

use ashg::nearby::enumerate_within;
use ashg::{partition_distance, Partition};

fn main() -> ashg::Result<()> {
    let a = Partition::from_coalitions(6, vec![vec![0, 1, 2], vec![3, 4], vec![5]])?;
    let b = Partition::from_coalitions(6, vec![vec![0, 1], vec![2, 3, 4, 5]])?;
    println!("d({a}, {b}) = {}", partition_distance(&a, &b)?);

    let mut per_depth = vec![0usize; 3];
    for item in enumerate_within(&a, 2) {
        per_depth[item?.1] += 1;
    }
    println!("partitions at distance 0, 1, 2 from {a}: {per_depth:?}");
    Ok(())
}
