//! Integer-weight evaluation of utilities and deviations.
//!
//! Agents in the same block and the same coalition face identical
//! deviation options, so classification is done once per (block, coalition)
//! group and shared by its members.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::game::{Game, Weights};
use crate::partition::{Partition, Target};
use crate::rational::Rational;
use crate::stability::{Kinds, StabilityNotion};

pub(crate) trait Weight: Clone + Ord + Zero {
    fn times(&self, k: usize) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Weight for i128 {
    fn times(&self, k: usize) -> Self {
        self * k as i128
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Weight for BigInt {
    fn times(&self, k: usize) -> Self {
        self * BigInt::from(k)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// A candidate move with its classification and the mover's utilities.
#[derive(Clone, Debug)]
pub(crate) struct Move {
    pub agent: usize,
    pub target: Target,
    pub kinds: Kinds,
    pub before: Rational,
    pub after: Rational,
}

struct Candidate<W> {
    target: Target,
    kinds: Kinds,
    before: W,
    after: W,
}

struct Snapshot<'a, W> {
    game: &'a Game,
    w: &'a [W],
    nb: usize,
    part: &'a Partition,
    /// Per coalition: (block, member count) pairs.
    profiles: Vec<Vec<(usize, usize)>>,
    util: HashMap<(usize, usize), W>,
}

impl<'a, W: Weight> Snapshot<'a, W> {
    fn new(game: &'a Game, w: &'a [W], part: &'a Partition) -> Self {
        assert_eq!(game.n(), part.n(), "partition and game disagree on the number of agents");
        let profiles = part
            .coalitions()
            .iter()
            .map(|members| {
                let mut counts: HashMap<usize, usize> = HashMap::new();
                for &i in members {
                    *counts.entry(game.block_of(i)).or_insert(0) += 1;
                }
                let mut v: Vec<(usize, usize)> = counts.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        Snapshot { game, w, nb: game.num_blocks(), part, profiles, util: HashMap::new() }
    }

    fn weight(&self, from: usize, to: usize) -> &W {
        &self.w[from * self.nb + to]
    }

    /// Sum of block-`b` valuations toward every member of coalition `c`.
    fn raw_util(&mut self, b: usize, c: usize) -> W {
        if let Some(u) = self.util.get(&(b, c)) {
            return u.clone();
        }
        let mut acc = W::zero();
        for &(blk, cnt) in &self.profiles[c] {
            acc = acc.plus(&self.weight(b, blk).times(cnt));
        }
        self.util.insert((b, c), acc.clone());
        acc
    }

    /// Utility of a block-`b` agent sitting in its own coalition `o`.
    fn own_util(&mut self, b: usize, o: usize) -> W {
        let raw = self.raw_util(b, o);
        raw.minus(self.weight(b, b))
    }

    /// Whether every member of `c`, other than one block-`skip` agent when
    /// given, values a block-`b` agent with a sign accepted by `ok`.
    fn incoming_all(&self, b: usize, c: usize, skip: Option<usize>, ok: impl Fn(&W) -> bool) -> bool {
        self.profiles[c].iter().all(|&(blk, cnt)| {
            let eff = if Some(blk) == skip { cnt - 1 } else { cnt };
            eff == 0 || ok(self.weight(blk, b))
        })
    }

    fn options(&mut self, b: usize, o: usize, filter: Option<StabilityNotion>) -> Vec<Candidate<W>> {
        let before = self.own_util(b, o);
        let lone = self.part.members(o).len() == 1;
        let mut out = Vec::new();
        let targets = (0..self.part.num_coalitions())
            .filter(|&c| c != o)
            .map(Target::Coalition)
            .chain((!lone).then_some(Target::NewSingleton));
        for t in targets.collect::<Vec<_>>() {
            let after = match t {
                Target::Coalition(c) => self.raw_util(b, c),
                Target::NewSingleton => W::zero(),
            };
            if after <= before {
                continue;
            }
            let is = match t {
                Target::Coalition(c) => self.incoming_all(b, c, None, |w| *w >= W::zero()),
                Target::NewSingleton => true,
            };
            let cns = self.incoming_all(b, o, Some(b), |w| *w <= W::zero());
            let kinds = Kinds::from_flags(is, cns);
            if filter.is_none_or(|x| kinds.contains(x)) {
                out.push(Candidate { target: t, kinds, before: before.clone(), after });
            }
        }
        out
    }

    fn to_rational(&self, w: &W) -> Rational {
        Rational::new(w.to_big(), self.game.scale().clone()).expect("positive scale")
    }
}

fn groups(game: &Game, part: &Partition) -> Vec<(usize, usize)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for i in 0..game.n() {
        let key = (game.block_of(i), part.coalition_of(i));
        if seen.insert(key) {
            out.push(key);
        }
    }
    out
}

fn has_deviation_impl<W: Weight>(g: &Game, w: &[W], p: &Partition, x: StabilityNotion) -> bool {
    let mut snap = Snapshot::new(g, w, p);
    groups(g, p).into_iter().any(|(b, o)| !snap.options(b, o, Some(x)).is_empty())
}

pub(crate) fn has_deviation(g: &Game, p: &Partition, x: StabilityNotion) -> bool {
    match &g.weights {
        Weights::Small(w) => has_deviation_impl(g, w, p, x),
        Weights::Big(w) => has_deviation_impl(g, w, p, x),
    }
}

fn moves_impl<W: Weight>(
    g: &Game,
    w: &[W],
    p: &Partition,
    filter: Option<StabilityNotion>,
    first_only: bool,
) -> Vec<Move> {
    let mut snap = Snapshot::new(g, w, p);
    let mut cache: HashMap<(usize, usize), Vec<Candidate<W>>> = HashMap::new();
    let mut out = Vec::new();
    for i in 0..g.n() {
        let key = (g.block_of(i), p.coalition_of(i));
        cache.entry(key).or_insert_with(|| {
            
            snap.options(key.0, key.1, filter)
        });
        for opt in &cache[&key] {
            out.push(Move {
                agent: i,
                target: opt.target,
                kinds: opt.kinds,
                before: snap.to_rational(&opt.before),
                after: snap.to_rational(&opt.after),
            });
            if first_only {
                return out;
            }
        }
    }
    out
}

/// Every Nash deviation (restricted to kind `filter` when given) in agent
/// order, then target order with the new singleton last.
pub(crate) fn moves(g: &Game, p: &Partition, filter: Option<StabilityNotion>, first_only: bool) -> Vec<Move> {
    match &g.weights {
        Weights::Small(w) => moves_impl(g, w, p, filter, first_only),
        Weights::Big(w) => moves_impl(g, w, p, filter, first_only),
    }
}

fn agent_moves_impl<W: Weight>(g: &Game, w: &[W], p: &Partition, i: usize) -> Vec<Move> {
    let mut snap = Snapshot::new(g, w, p);
    snap.options(g.block_of(i), p.coalition_of(i), None)
        .into_iter()
        .map(|opt| Move {
            agent: i,
            target: opt.target,
            kinds: opt.kinds,
            before: snap.to_rational(&opt.before),
            after: snap.to_rational(&opt.after),
        })
        .collect()
}

/// Nash deviations available to agent `i` alone.
pub(crate) fn agent_moves(g: &Game, p: &Partition, i: usize) -> Vec<Move> {
    match &g.weights {
        Weights::Small(w) => agent_moves_impl(g, w, p, i),
        Weights::Big(w) => agent_moves_impl(g, w, p, i),
    }
}

fn utility_impl<W: Weight>(g: &Game, w: &[W], p: &Partition, i: usize) -> Rational {
    let mut snap = Snapshot::new(g, w, p);
    let u = snap.own_util(g.block_of(i), p.coalition_of(i));
    snap.to_rational(&u)
}

pub(crate) fn utility(g: &Game, p: &Partition, i: usize) -> Rational {
    match &g.weights {
        Weights::Small(w) => utility_impl(g, w, p, i),
        Weights::Big(w) => utility_impl(g, w, p, i),
    }
}

fn welfare_impl<W: Weight>(g: &Game, w: &[W], p: &Partition) -> Rational {
    let mut snap = Snapshot::new(g, w, p);
    let mut total = W::zero();
    for c in 0..p.num_coalitions() {
        for (b, cnt) in snap.profiles[c].clone() {
            total = total.plus(&snap.own_util(b, c).times(cnt));
        }
    }
    snap.to_rational(&total)
}

pub(crate) fn social_welfare(g: &Game, p: &Partition) -> Rational {
    match &g.weights {
        Weights::Small(w) => welfare_impl(g, w, p),
        Weights::Big(w) => welfare_impl(g, w, p),
    }
}
