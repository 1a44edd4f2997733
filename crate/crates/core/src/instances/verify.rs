//! Checks that a reduction gadget agrees with its covering instance.

use serde::Serialize;

use super::GadgetBundle;
use crate::distance::partition_distance;
use crate::error::{Error, Result};
use crate::nearby::{nearest_stable_up_to_symmetry, DEFAULT_VISITED_CAP};
use crate::partition::Partition;
use crate::stability::is_stable;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyMode {
    /// Solve both sides exhaustively and compare the answers.
    FullIff,
    /// Build the partition a cover certifies and check it. With `None`
    /// the cover comes from the covering oracle.
    Witness(Option<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceReport {
    pub mode: VerifyMode,
    pub cover_exists: bool,
    /// Whether a stable partition within the budget exists (full mode), or
    /// whether the witness is one (witness mode).
    pub stable_within_budget: bool,
    pub agree: bool,
    pub distance: Option<usize>,
    pub witness: Option<Partition>,
    /// Partition classes examined by the search; 0 in witness mode.
    pub explored: usize,
}

/// Compares a gadget with the covering instance it was compiled from.
///
/// Full mode searches the altered game exhaustively (up to agent
/// symmetry) and fails with a resource error past the visited cap.
pub fn verify_correspondence(bundle: &GadgetBundle, mode: VerifyMode) -> Result<CorrespondenceReport> {
    let inst = bundle.cover.as_ref().ok_or_else(|| Error::input("bundle carries no covering instance"))?;
    let altered = bundle.altered_game()?;
    match mode {
        VerifyMode::FullIff => {
            let cover = inst.solve();
            let found = nearest_stable_up_to_symmetry(
                &altered,
                &bundle.partition,
                bundle.notion,
                bundle.budget,
                DEFAULT_VISITED_CAP,
            )?;
            Ok(CorrespondenceReport {
                agree: cover.is_some() == found.found,
                cover_exists: cover.is_some(),
                stable_within_budget: found.found,
                distance: found.distance,
                witness: found.partition,
                explored: found.explored,
                mode: VerifyMode::FullIff,
            })
        }
        VerifyMode::Witness(given) => {
            let Some(cover) = given.clone().or_else(|| inst.solve()) else {
                return Ok(CorrespondenceReport {
                    mode: VerifyMode::Witness(given),
                    cover_exists: false,
                    stable_within_budget: false,
                    agree: true,
                    distance: None,
                    witness: None,
                    explored: 0,
                });
            };
            let valid = if inst.variant().is_exact() {
                inst.is_exact_cover(&cover)
            } else {
                inst.is_cover(&cover) && cover.len() <= inst.k()
            };
            if !valid {
                return Err(Error::input(format!("{cover:?} is not a solution of the covering instance")));
            }
            let w = bundle.witness(&cover)?;
            let d = partition_distance(&bundle.partition, &w)?;
            let ok = d <= bundle.budget && is_stable(&altered, &w, bundle.notion);
            Ok(CorrespondenceReport {
                mode: VerifyMode::Witness(given),
                cover_exists: true,
                stable_within_budget: ok,
                agree: ok,
                distance: Some(d),
                witness: Some(w),
                explored: 0,
            })
        }
    }
}
