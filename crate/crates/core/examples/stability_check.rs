//! Classify every single-agent deviation in a small game.

use ashg::{enumerate_deviations, io, is_stable, social_welfare, utility, Game, Partition, StabilityNotion};

fn main() -> ashg::Result<()> {
    // Two friendly pairs; agent 4 dislikes everyone and is disliked back.
    let game: Game = io::from_json_str(
        r#"{"n": 5, "symmetric": true, "class": "general", "valuations": [
            [0, 1, "2"], [1, 0, "2"], [2, 3, "1"], [3, 2, "1"],
            [0, 2, "1/2"], [2, 0, "1/2"],
            [4, 0, "-1"], [0, 4, "-1"], [4, 1, "-1"], [1, 4, "-1"]
        ]}"#,
    )?;
    let p = Partition::from_coalitions(5, vec![vec![0, 1, 4], vec![2, 3]])?;

    println!("partition {p}, welfare {}", social_welfare(&game, &p)?);
    for i in 0..game.n() {
        println!("  u_{i} = {}", utility(&game, &p, i)?);
    }
    for x in StabilityNotion::ALL {
        println!("{x:>3}: stable = {}", is_stable(&game, &p, x));
    }
    for d in enumerate_deviations(&game, &p, StabilityNotion::Ns) {
        let kinds: Vec<String> = d.kinds.iter().map(|k| k.to_string()).collect();
        println!("agent {} -> {}: {}", d.agent, d.target, kinds.join(", "));
    }
    Ok(())
}
