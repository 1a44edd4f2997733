//! Seeded random games in each valuation class, round-tripped through JSON.

use ashg::{enumerate_all_stable, gen_random_game, io, ClassTag, Game, StabilityNotion};

fn main() -> ashg::Result<()> {
    for class in [ClassTag::Feng, ClassTag::Feg, ClassTag::Afg, ClassTag::Aeg, ClassTag::Strict] {
        let g = gen_random_game(6, class, true, 1, None)?;
        let json = io::to_json_string(&g);
        let back: Game = io::from_json_str(&json)?;
        assert_eq!(back, g);
        let values: Vec<String> = g.distinct_values().iter().map(|v| v.to_string()).collect();
        let counts: Vec<usize> = StabilityNotion::ALL
            .iter()
            .map(|&x| enumerate_all_stable(&g, x, 10).map(|v| v.len()))
            .collect::<ashg::Result<_>>()?;
        println!("{class:>7}: values {{{}}}, stable partitions NS/IS/CNS/CIS = {counts:?}", values.join(", "));
    }
    Ok(())
}
