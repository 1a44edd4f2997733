//! Game families: random restricted-class games, three small
//! counterexamples, and gadgets compiled from covering problems.

mod cover;
mod figures;
mod reductions;
mod verify;

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{ClassTag, Game};
use crate::nearby::AlteredInstance;
use crate::partition::Partition;
use crate::rational::Rational;
use crate::stability::{is_stable, StabilityNotion};
use crate::update::{apply_update, UpdateEvent};

pub use cover::{CoverInstance, CoverVariant, Element};
pub use figures::{build_fig3_tight, build_fig4_cycle, build_fig5_updown, UpDownGadget};
pub use reductions::{compile, compile_setcover, compile_x3c, Reduction, ReductionParams, ValueFn};
pub use verify::{verify_correspondence, CorrespondenceReport, VerifyMode};

/// A named, contiguous range of agents inside a gadget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Role {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Role {
    pub fn agents(&self) -> Range<usize> {
        self.start..self.start + self.len
    }
}

/// A game, a start partition stable in it, a valuation update and a
/// distance budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetBundle {
    pub game: Game,
    pub partition: Partition,
    pub update: UpdateEvent,
    pub notion: StabilityNotion,
    pub budget: usize,
    /// The family this bundle was built from.
    pub provenance: String,
    #[serde(default)]
    pub roles: Vec<Role>,
    /// The covering instance a reduction gadget encodes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover: Option<CoverInstance>,
}

/// The parts of a bundle before its start partition has been checked.
pub(crate) struct Draft {
    pub game: Game,
    pub partition: Partition,
    pub update: UpdateEvent,
    pub notion: StabilityNotion,
    pub budget: usize,
    pub roles: Vec<Role>,
}

impl Draft {
    /// Fails unless the start partition is stable and the update applies.
    pub fn seal(self, provenance: &str, cover: Option<CoverInstance>) -> Result<GadgetBundle> {
        let Draft { game, partition, update, notion, budget, roles } = self;
        if !is_stable(&game, &partition, notion) {
            return Err(Error::contract(format!("{provenance}: start partition is not {notion}")));
        }
        apply_update(&game, &update)?;
        Ok(GadgetBundle { game, partition, update, notion, budget, provenance: provenance.into(), roles, cover })
    }
}

impl GadgetBundle {
    pub fn altered_game(&self) -> Result<Game> {
        apply_update(&self.game, &self.update)
    }

    /// The bundle as a search instance with its own budget.
    pub fn instance(&self) -> AlteredInstance {
        AlteredInstance {
            game: self.game.clone(),
            stable_start: self.partition.clone(),
            update: self.update.clone(),
            notion: self.notion,
            k: self.budget,
        }
    }

    /// The construction a reduction gadget came from.
    pub fn reduction(&self) -> Option<Reduction> {
        Reduction::ALL.into_iter().find(|r| r.name() == self.provenance)
    }

    /// The repaired partition that the chosen sets certify.
    pub fn witness(&self, cover: &[usize]) -> Result<Partition> {
        let r = self
            .reduction()
            .ok_or_else(|| Error::input(format!("{} is not a reduction gadget", self.provenance)))?;
        reductions::witness(self, r, cover)
    }

    pub fn role(&self, name: &str) -> Result<Range<usize>> {
        self.roles
            .iter()
            .find(|r| r.name == name)
            .map(Role::agents)
            .ok_or_else(|| Error::input(format!("{} has no role {name:?}", self.provenance)))
    }
}

/// The value palette used when none is given.
pub fn default_palette(class: ClassTag, n: usize) -> Vec<Rational> {
    let ints = |v: &[i64]| v.iter().map(|&x| Rational::from(x)).collect();
    match class {
        ClassTag::General => ints(&[-2, -1, 0, 1, 2]),
        ClassTag::Strict => ints(&[-3, -2, -1, 1, 2, 3]),
        other => other.value_set(n).expect("restricted classes have a value set"),
    }
}

/// A random game whose valuations are drawn uniformly from `palette`
/// (the class default when `None`), deterministic in `seed`.
pub fn gen_random_game(
    n: usize,
    class: ClassTag,
    symmetric: bool,
    seed: u64,
    palette: Option<&[Rational]>,
) -> Result<Game> {
    let palette = palette.map_or_else(|| default_palette(class, n), <[Rational]>::to_vec);
    if palette.is_empty() {
        return Err(Error::input("empty value palette"));
    }
    if let Some(v) = palette.iter().find(|v| !class.allows(v, n)) {
        return Err(Error::input(format!("palette value {v} is not allowed in class {class} with n = {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j || (symmetric && j < i) {
                continue;
            }
            let v = palette.choose(&mut rng).expect("nonempty");
            entries.push((i, j, v.clone()));
        }
    }
    Game::from_entries(n, symmetric, class, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_games_respect_class_and_seed() {
        let g = gen_random_game(5, ClassTag::Feg, true, 1, None).unwrap();
        assert!(g.is_symmetric());
        assert!(g.distinct_values().iter().all(|v| v.abs() == Rational::one()));
        assert_eq!(g, gen_random_game(5, ClassTag::Feg, true, 1, None).unwrap());
        let h = gen_random_game(4, ClassTag::Aeg, true, 7, None).unwrap();
        assert!(h.distinct_values().iter().all(|v| *v == Rational::from(-4) || *v == Rational::one()));
        let bad = gen_random_game(4, ClassTag::Feg, true, 7, Some(&[Rational::zero()]));
        assert!(matches!(bad, Err(Error::Input(_))));
    }

    #[test]
    fn nonsymmetric_random_games_fill_both_directions() {
        let g = gen_random_game(6, ClassTag::Strict, false, 3, None).unwrap();
        assert!(!g.is_symmetric());
        assert!((0..6).all(|i| (0..6).all(|j| i == j || !g.value(i, j).is_zero())));
    }
}
