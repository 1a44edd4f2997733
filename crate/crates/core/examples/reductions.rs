//! Compile a set cover instance into a game and check that small covers and
//! cheap repairs go together.

use ashg::{
    compile, verify_correspondence, CoverInstance, CoverVariant, Reduction, ReductionParams, StabilityNotion,
    VerifyMode,
};

fn main() -> ashg::Result<()> {
    let params = ReductionParams::default();
    for k in 0..2 {
        let cover = CoverInstance::from_indices(CoverVariant::SetCover, 2, vec![vec![0], vec![1], vec![0, 1]], Some(k))?;
        let bundle = compile(&cover, &params, StabilityNotion::Is, Reduction::Hub, true)?;
        let report = verify_correspondence(&bundle, VerifyMode::FullIff)?;
        println!(
            "k = {k}: {} agents, budget {}, cover {} / repair {} ({} classes searched)",
            bundle.game.n(),
            bundle.budget,
            report.cover_exists,
            report.stable_within_budget,
            report.explored
        );
    }

    // The large gadgets are checked one way: a known exact cover yields a
    // stable partition inside the budget.
    let rx3c = CoverInstance::cyclic_rx3c(6)?;
    let bundle = compile(&rx3c, &params, StabilityNotion::Ns, Reduction::Friends, true)?;
    let report = verify_correspondence(&bundle, VerifyMode::Witness(Some(vec![0, 3, 6, 9, 12, 15])))?;
    println!(
        "friends gadget: {} agents, class {}, witness at distance {:?} of budget {}",
        bundle.game.n(),
        bundle.game.class(),
        report.distance,
        bundle.budget
    );
    Ok(())
}
