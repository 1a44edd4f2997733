//! Valuation updates.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::rational::Rational;

/// Replacement valuations `v'_i(j)` restricted to `i` in `d` and `j` in `e`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateEvent {
    #[serde(rename = "D")]
    pub d: Vec<usize>,
    #[serde(rename = "E")]
    pub e: Vec<usize>,
    pub entries: Vec<(usize, usize, Rational)>,
}

impl UpdateEvent {
    pub fn empty() -> Self {
        UpdateEvent { d: Vec::new(), e: Vec::new(), entries: Vec::new() }
    }

    /// Sets `v'_a(b)` (and `v'_b(a)` in a symmetric game).
    pub fn single_pair(a: usize, b: usize, value: Rational) -> Self {
        UpdateEvent { d: vec![a], e: vec![b], entries: vec![(a, b, value)] }
    }

    /// The unordered pair touched when this event changes exactly one pair.
    pub fn as_single_pair(&self) -> Option<(usize, usize, &Rational)> {
        let mut pairs = self.entries.iter().map(|(i, j, v)| ((*i).min(*j), (*i).max(*j), v));
        let first = pairs.next()?;
        pairs.all(|p| p.0 == first.0 && p.1 == first.1 && p.2 == first.2).then_some(first)
    }

    fn check_footprint(&self, g: &Game) -> Result<()> {
        let d: BTreeSet<usize> = self.d.iter().copied().collect();
        let e: BTreeSet<usize> = self.e.iter().copied().collect();
        for &x in d.iter().chain(&e) {
            if x >= g.n() {
                return Err(Error::input(format!("update names agent {x}, but n = {}", g.n())));
            }
        }
        for (i, j, _) in &self.entries {
            if *i >= g.n() || *j >= g.n() {
                return Err(Error::input(format!("update entry ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::input(format!("update entry ({i}, {i}) is a self-valuation")));
            }
            let inside = d.contains(i) && e.contains(j);
            let mirrored = g.is_symmetric() && d.contains(j) && e.contains(i);
            if !inside && !mirrored {
                return Err(Error::contract(format!(
                    "update entry ({i}, {j}) lies outside D x E"
                )));
            }
        }
        Ok(())
    }
}

/// The game `g` with the replacements of `u` applied. Symmetric games get
/// both directions of every touched pair.
pub fn apply_update(g: &Game, u: &UpdateEvent) -> Result<Game> {
    u.check_footprint(g)?;
    let mut out = g.clone();
    if u.entries.is_empty() {
        return Ok(out);
    }
    let mut written: std::collections::HashMap<(usize, usize), &Rational> = Default::default();
    for (i, j, v) in &u.entries {
        let mut pairs = vec![(*i, *j)];
        if g.is_symmetric() {
            pairs.push((*j, *i));
        }
        for (a, b) in pairs {
            if let Some(prev) = written.insert((a, b), v) {
                if prev != v {
                    return Err(Error::contract(format!(
                        "update sets v({a}, {b}) to both {prev} and {v}"
                    )));
                }
            }
        }
    }
    for &(a, b) in written.keys() {
        out.isolate(a);
        out.isolate(b);
    }
    for (&(a, b), v) in &written {
        out.set_isolated(a, b, (*v).clone());
    }
    out.revalidate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{BlockGameBuilder, ClassTag};

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    fn clique(n: usize) -> Game {
        let mut b = BlockGameBuilder::new(r(-1));
        let x = b.block(n);
        b.within(x, r(1));
        b.build(true, ClassTag::Feg).unwrap()
    }

    #[test]
    fn empty_update_is_identity() {
        let g = clique(4);
        assert_eq!(apply_update(&g, &UpdateEvent::empty()).unwrap(), g);
    }

    #[test]
    fn symmetric_update_touches_both_directions_only() {
        let g = clique(4);
        let h = apply_update(&g, &UpdateEvent::single_pair(1, 2, r(-1))).unwrap();
        assert_eq!(*h.value(1, 2), r(-1));
        assert_eq!(*h.value(2, 1), r(-1));
        for i in 0..4 {
            for j in 0..4 {
                if i != j && (i.min(j), i.max(j)) != (1, 2) {
                    assert_eq!(*h.value(i, j), r(1));
                }
            }
        }
    }

    #[test]
    fn class_and_footprint_are_enforced() {
        let g = clique(3);
        let err = apply_update(&g, &UpdateEvent::single_pair(0, 1, r(0))).unwrap_err();
        assert!(matches!(err, Error::Class(_)));
        let bad = UpdateEvent { d: vec![0], e: vec![1], entries: vec![(0, 2, r(-1))] };
        assert!(matches!(apply_update(&g, &bad), Err(Error::Contract(_))));
    }

    #[test]
    fn directed_update_in_asymmetric_game() {
        let g = Game::from_fn(3, false, ClassTag::Feg, |_, _| r(1)).unwrap();
        let h = apply_update(&g, &UpdateEvent::single_pair(2, 0, r(-1))).unwrap();
        assert_eq!(*h.value(2, 0), r(-1));
        assert_eq!(*h.value(0, 2), r(1));
        let mirrored = UpdateEvent { d: vec![2], e: vec![0], entries: vec![(0, 2, r(-1))] };
        assert!(apply_update(&g, &mirrored).is_err());
    }
}
