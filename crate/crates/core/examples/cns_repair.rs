//! Repair a contractually Nash stable partition after a single-pair update
//! and compare with the exhaustive optimum.

use ashg::{
    apply_update, close_cns, enumerate_all_stable, gen_random_game, nearest_stable_in, ClassTag, Partition, Rational,
    RepairReport, StabilityNotion, UpdateEvent,
};

fn main() -> ashg::Result<()> {
    let n = 7;
    let game = gen_random_game(n, ClassTag::Strict, true, 42, None)?;
    let extremes = [Rational::from(-3 * n as i64), Rational::from(3 * n as i64)];

    // Try every stable start and every strong update; keep the hardest.
    let mut worst: Option<(Partition, (usize, usize), Rational, RepairReport)> = None;
    for start in enumerate_all_stable(&game, StabilityNotion::Cns, 10)? {
        for a in 0..n {
            for b in a + 1..n {
                for v in &extremes {
                    let report = close_cns(&game, &start, (a, b), v)?;
                    if worst.as_ref().is_none_or(|w| report.distance > w.3.distance) {
                        worst = Some((start.clone(), (a, b), v.clone(), report));
                    }
                }
            }
        }
    }
    let (start, (a, b), v, report) = worst.expect("a strict symmetric game has a CNS partition");
    println!("start  {start}");
    println!("update v({a},{b}) := {v}");
    println!("result {} after {} moves (guarantee {})", report.result, report.distance, report.bound);
    for act in &report.phase_one {
        println!("  first phase: {act:?}");
    }
    for s in &report.steps.steps {
        println!("  agent {} -> {} ({} to {})", s.agent, s.target, s.u_before, s.u_after);
    }

    let altered = apply_update(&game, &UpdateEvent::single_pair(a, b, v))?;
    let best = nearest_stable_in(&altered, &start, StabilityNotion::Cns, report.distance, 10_000_000)?;
    println!("exhaustive optimum: {:?}", best.distance);
    Ok(())
}
