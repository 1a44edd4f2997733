//! Single-agent deviations and the four stability notions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval;
use crate::game::Game;
use crate::partition::{Partition, Target};
use crate::rational::Rational;

/// Nash (NS), individual (IS), contractual Nash (CNS) and contractual
/// individual (CIS) stability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityNotion {
    Ns,
    Is,
    Cns,
    Cis,
}

impl StabilityNotion {
    pub const ALL: [StabilityNotion; 4] =
        [StabilityNotion::Ns, StabilityNotion::Is, StabilityNotion::Cns, StabilityNotion::Cis];

    pub fn name(self) -> &'static str {
        match self {
            StabilityNotion::Ns => "ns",
            StabilityNotion::Is => "is",
            StabilityNotion::Cns => "cns",
            StabilityNotion::Cis => "cis",
        }
    }

    fn bit(self) -> u8 {
        match self {
            StabilityNotion::Ns => 1,
            StabilityNotion::Is => 2,
            StabilityNotion::Cns => 4,
            StabilityNotion::Cis => 8,
        }
    }
}

impl fmt::Display for StabilityNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name().to_uppercase())
    }
}

impl FromStr for StabilityNotion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StabilityNotion::ALL
            .into_iter()
            .find(|x| x.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown stability notion {s:?}")))
    }
}

/// The set of deviation kinds a single move qualifies as.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Kinds(u8);

impl Kinds {
    pub const NONE: Kinds = Kinds(0);

    /// Kinds of a Nash deviation given the two side conditions.
    pub(crate) fn from_flags(joined_ok: bool, left_ok: bool) -> Kinds {
        let mut k = StabilityNotion::Ns.bit();
        if joined_ok {
            k |= StabilityNotion::Is.bit();
        }
        if left_ok {
            k |= StabilityNotion::Cns.bit();
        }
        if joined_ok && left_ok {
            k |= StabilityNotion::Cis.bit();
        }
        Kinds(k)
    }

    pub fn contains(self, x: StabilityNotion) -> bool {
        self.0 & x.bit() != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = StabilityNotion> {
        StabilityNotion::ALL.into_iter().filter(move |x| self.contains(x.to_owned()))
    }

    pub fn from_notions(notions: impl IntoIterator<Item = StabilityNotion>) -> Kinds {
        Kinds(notions.into_iter().fold(0, |k, x| k | x.bit()))
    }
}

impl fmt::Debug for Kinds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for Kinds {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// One available move and the kinds it qualifies as. `target` indexes the
/// coalitions of the partition the agent moves out of.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassifiedDeviation {
    pub agent: usize,
    #[serde(serialize_with = "crate::io::serialize_target")]
    pub target: Target,
    pub kinds: Kinds,
}

/// `u_i(pi)`: the sum of `i`'s valuations of its coalition-mates.
pub fn utility(g: &Game, p: &Partition, i: usize) -> Result<Rational> {
    check_sizes(g, p)?;
    if i >= g.n() {
        return Err(Error::input(format!("agent {i} out of range for n = {}", g.n())));
    }
    Ok(eval::utility(g, p, i))
}

/// Sum of all agents' utilities.
pub fn social_welfare(g: &Game, p: &Partition) -> Result<Rational> {
    check_sizes(g, p)?;
    Ok(eval::social_welfare(g, p))
}

fn check_sizes(g: &Game, p: &Partition) -> Result<()> {
    if g.n() != p.n() {
        return Err(Error::input(format!(
            "partition covers {} agents but the game has {}",
            p.n(),
            g.n()
        )));
    }
    Ok(())
}

/// Kinds of the move of agent `i` to `target`; empty when the move is not
/// a Nash deviation.
pub fn classify_deviation(g: &Game, p: &Partition, i: usize, target: Target) -> Result<Kinds> {
    check_sizes(g, p)?;
    if i >= g.n() {
        return Err(Error::input(format!("agent {i} out of range for n = {}", g.n())));
    }
    // Reuses the partition's own checks on the target.
    p.moved(i, target)?;
    Ok(eval::agent_moves(g, p, i)
        .into_iter()
        .find(|m| m.target == target)
        .map_or(Kinds::NONE, |m| m.kinds))
}

/// Whether no agent has a deviation of kind `x`.
///
/// # Panics
/// If `p` and `g` disagree on the number of agents.
pub fn is_stable(g: &Game, p: &Partition, x: StabilityNotion) -> bool {
    !eval::has_deviation(g, p, x)
}

/// All deviations of kind `x`, by agent then target with the new singleton
/// last.
///
/// # Panics
/// If `p` and `g` disagree on the number of agents.
pub fn enumerate_deviations(g: &Game, p: &Partition, x: StabilityNotion) -> Vec<ClassifiedDeviation> {
    eval::moves(g, p, Some(x), false)
        .into_iter()
        .map(|m| ClassifiedDeviation { agent: m.agent, target: m.target, kinds: m.kinds })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::ClassTag;
    use crate::update::{apply_update, UpdateEvent};

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    fn fig3() -> (Game, Partition) {
        let pos = |i: usize, j: usize| {
            let (a, b) = (i.min(j), i.max(j));
            (a, b) == (6, 7) || ([0, 4, 5].contains(&a) && [1, 2, 3].contains(&b))
                || ([0, 4, 5].contains(&b) && [1, 2, 3].contains(&a))
        };
        let g = Game::from_fn(8, true, ClassTag::Feg, |i, j| if pos(i, j) { r(1) } else { r(-1) }).unwrap();
        let p = Partition::from_coalitions(8, [vec![0, 1, 2, 3, 6, 7], vec![4], vec![5]]).unwrap();
        (g, p)
    }

    #[test]
    fn fig3_utilities() {
        let (g, p) = fig3();
        assert_eq!(utility(&g, &p, 0).unwrap(), r(1));
        assert_eq!(utility(&g, &p, 6).unwrap(), r(-3));
        assert_eq!(utility(&g, &p, 4).unwrap(), r(0));
        assert!(utility(&g, &p, 8).is_err());
    }

    #[test]
    fn fig3_is_cns_then_broken_by_update() {
        let (g, p) = fig3();
        assert!(is_stable(&g, &p, StabilityNotion::Cns));
        let h = apply_update(&g, &UpdateEvent::single_pair(6, 7, r(-1))).unwrap();
        assert!(!is_stable(&h, &p, StabilityNotion::Cns));
        let k = classify_deviation(&h, &p, 6, Target::NewSingleton).unwrap();
        assert_eq!(k, Kinds::from_notions(StabilityNotion::ALL));
        let devs = enumerate_deviations(&h, &p, StabilityNotion::Cns);
        let pairs: Vec<(usize, Target)> = devs.iter().map(|d| (d.agent, d.target)).collect();
        assert!(pairs.contains(&(6, Target::NewSingleton)));
        assert!(pairs.contains(&(7, Target::NewSingleton)));
    }

    #[test]
    fn mutual_friends_merge() {
        let g = Game::from_entries(2, true, ClassTag::Feg, [(0, 1, r(1))]).unwrap();
        let p = Partition::singletons(2);
        let k = classify_deviation(&g, &p, 0, Target::Coalition(1)).unwrap();
        assert_eq!(k, Kinds::from_notions(StabilityNotion::ALL));
        assert!(classify_deviation(&g, &p, 0, Target::NewSingleton).is_err());
        assert!(classify_deviation(&g, &p, 0, Target::Coalition(0)).is_err());
    }

    #[test]
    fn grand_coalition_of_friends_is_nash_stable() {
        let g = Game::from_fn(5, true, ClassTag::Feg, |_, _| r(1)).unwrap();
        assert!(is_stable(&g, &Partition::grand(5), StabilityNotion::Ns));
        assert_eq!(social_welfare(&g, &Partition::grand(5)).unwrap(), r(20));
        assert_eq!(social_welfare(&g, &Partition::singletons(5)).unwrap(), r(0));
    }

    #[test]
    fn notion_names_round_trip() {
        for x in StabilityNotion::ALL {
            assert_eq!(x.name().parse::<StabilityNotion>().unwrap(), x);
        }
        assert_eq!(serde_json::to_string(&Kinds::from_notions([StabilityNotion::Ns])).unwrap(), "[\"ns\"]");
    }
}
