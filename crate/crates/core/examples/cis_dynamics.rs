//! Contractually individually stable repair by plain dynamics, checked
//! against the polynomial decider.

use ashg::{
    cis_repair, decide_cis_111_sym, enumerate_all_stable, gen_random_game, AlteredInstance, ClassTag, Partition,
    Policy, Rational, StabilityNotion, UpdateEvent,
};

fn main() -> ashg::Result<()> {
    let n = 7;
    let game = gen_random_game(n, ClassTag::Strict, true, 7, None)?;
    let extremes = [Rational::from(-3 * n as i64), Rational::from(3 * n as i64)];

    // The start and update on which first-in-order dynamics move most.
    let mut worst: Option<(usize, Partition, (usize, usize), Rational)> = None;
    for start in enumerate_all_stable(&game, StabilityNotion::Cis, 10)? {
        for a in 0..n {
            for b in a + 1..n {
                for v in &extremes {
                    let d = cis_repair(&game, &start, (a, b), v, Policy::FirstInOrder)?.distance;
                    if worst.as_ref().is_none_or(|w| d > w.0) {
                        worst = Some((d, start.clone(), (a, b), v.clone()));
                    }
                }
            }
        }
    }
    let (_, start, pair, v) = worst.expect("a strict symmetric game has a CIS partition");
    println!("start {start}, update v{pair:?} := {v}");

    for policy in [Policy::FirstInOrder, Policy::LargestTargetCoalition, Policy::Random(1)] {
        let r = cis_repair(&game, &start, pair, &v, policy)?;
        println!("{policy:?}: {} in {} moves", r.result, r.distance);
    }
    for k in 0..=3 {
        let inst = AlteredInstance {
            game: game.clone(),
            stable_start: start.clone(),
            update: UpdateEvent::single_pair(pair.0, pair.1, v.clone()),
            notion: StabilityNotion::Cis,
            k,
        };
        println!("stable partition within {k}: {}", decide_cis_111_sym(&inst)?.found);
    }
    Ok(())
}
