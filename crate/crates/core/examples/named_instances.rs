//! The three hand-built instances: a tight repair, a directed cycle and an
//! alternating pair of updates.

use ashg::{
    build_fig4_cycle, build_fig5_updown, enumerate_all_stable, partition_distance, StabilityNotion,
};

fn main() -> ashg::Result<()> {
    let cycle = build_fig4_cycle(6, StabilityNotion::Cis)?;
    let after = enumerate_all_stable(&cycle.altered_game()?, StabilityNotion::Cis, 10)?;
    let closest = after.iter().map(|p| partition_distance(&cycle.partition, p)).collect::<ashg::Result<Vec<_>>>()?;
    println!("cycle: {} CIS partitions after the update, closest at {:?}", after.len(), closest.iter().min());

    let updown = build_fig5_updown(8)?;
    let down = enumerate_all_stable(&updown.down.game, StabilityNotion::Is, 10)?;
    let up = enumerate_all_stable(&updown.up_game()?, StabilityNotion::Is, 10)?;
    println!("up-down: IS partitions {} -> {}", down[0], up[0]);
    println!("every flip moves {} agents", partition_distance(&down[0], &up[0])?);
    Ok(())
}
