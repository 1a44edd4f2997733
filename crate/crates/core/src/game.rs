//! Additively separable hedonic games.
//!
//! Valuations are stored per *block*: agents sharing a block are
//! interchangeable, both in how they value others and in how they are
//! valued. Small games simply give every agent its own block; the reduction
//! gadgets, which run to tens of thousands of agents, use one block per role
//! group and stay cheap to store and evaluate.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Valuation class of a game.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassTag {
    General,
    /// No valuation is zero.
    Strict,
    /// Values in {-1, 0, 1}.
    Feng,
    /// Values in {-1, 1}.
    Feg,
    /// Values in {-1, n}.
    Afg,
    /// Values in {-n, 1}.
    Aeg,
}

impl ClassTag {
    pub const ALL: [ClassTag; 6] = [
        ClassTag::General,
        ClassTag::Strict,
        ClassTag::Feng,
        ClassTag::Feg,
        ClassTag::Afg,
        ClassTag::Aeg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ClassTag::General => "general",
            ClassTag::Strict => "strict",
            ClassTag::Feng => "feng",
            ClassTag::Feg => "feg",
            ClassTag::Afg => "afg",
            ClassTag::Aeg => "aeg",
        }
    }

    /// Whether `v` is a legal valuation in an `n`-agent game of this class.
    pub fn allows(self, v: &Rational, n: usize) -> bool {
        let n = Rational::from(n);
        match self {
            ClassTag::General => true,
            ClassTag::Strict => !v.is_zero(),
            ClassTag::Feng => *v == Rational::from(-1) || v.is_zero() || *v == Rational::one(),
            ClassTag::Feg => *v == Rational::from(-1) || *v == Rational::one(),
            ClassTag::Afg => *v == Rational::from(-1) || *v == n,
            ClassTag::Aeg => *v == -n || *v == Rational::one(),
        }
    }

    /// The finite value set of the restricted classes, `None` for
    /// `General` and `Strict`.
    pub fn value_set(self, n: usize) -> Option<Vec<Rational>> {
        let n = Rational::from(n);
        let one = Rational::one();
        let m1 = Rational::from(-1);
        match self {
            ClassTag::General | ClassTag::Strict => None,
            ClassTag::Feng => Some(vec![m1, Rational::zero(), one]),
            ClassTag::Feg => Some(vec![m1, one]),
            ClassTag::Afg => Some(vec![m1, n]),
            ClassTag::Aeg => Some(vec![-n, one]),
        }
    }

    /// Zero is forbidden in every class except `General` and `Feng`.
    pub fn is_strict(self) -> bool {
        !matches!(self, ClassTag::General | ClassTag::Feng)
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ClassTag::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown game class {s:?}")))
    }
}

/// Integer images of the valuations after multiplying by a common
/// denominator. `i128` is used whenever every sum the evaluator can form is
/// guaranteed to fit.
#[derive(Clone, Debug)]
pub(crate) enum Weights {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

/// An additively separable hedonic game over agents `0..n`.
#[derive(Clone)]
pub struct Game {
    n: usize,
    symmetric: bool,
    class: ClassTag,
    block_of: Vec<u32>,
    block_size: Vec<usize>,
    /// Row-major `nb x nb`: value a member of block `r` assigns to a member
    /// of block `c`. The diagonal applies to distinct members of one block.
    values: Vec<Rational>,
    scale: BigInt,
    pub(crate) weights: Weights,
}

impl Game {
    /// Builds a game from explicit directed entries; omitted pairs are 0.
    /// For symmetric games a single direction suffices, and conflicting
    /// directions are rejected.
    pub fn from_entries(
        n: usize,
        symmetric: bool,
        class: ClassTag,
        entries: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Game> {
        let mut values = vec![Rational::zero(); n * n];
        let mut seen: HashMap<(usize, usize), Rational> = HashMap::new();
        for (i, j, v) in entries {
            if i >= n || j >= n {
                return Err(Error::input(format!("valuation ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::input(format!("self-valuation ({i}, {i}) is not allowed")));
            }
            let mut put = |a: usize, b: usize, v: &Rational| -> Result<()> {
                if let Some(prev) = seen.get(&(a, b)) {
                    if prev != v {
                        return Err(Error::input(format!(
                            "conflicting values {prev} and {v} for pair ({a}, {b})"
                        )));
                    }
                }
                seen.insert((a, b), v.clone());
                values[a * n + b] = v.clone();
                Ok(())
            };
            put(i, j, &v)?;
            if symmetric {
                put(j, i, &v)?;
            }
        }
        Game::from_blocks((0..n as u32).collect(), values, symmetric, class)
    }

    /// Builds a game with one block per agent from a valuation function.
    pub fn from_fn(
        n: usize,
        symmetric: bool,
        class: ClassTag,
        mut f: impl FnMut(usize, usize) -> Rational,
    ) -> Result<Game> {
        let mut values = vec![Rational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    values[i * n + j] = f(i, j);
                }
            }
        }
        Game::from_blocks((0..n as u32).collect(), values, symmetric, class)
    }

    /// Builds a game from a block assignment and an `nb x nb` value matrix.
    pub fn from_blocks(
        block_of: Vec<u32>,
        mut values: Vec<Rational>,
        symmetric: bool,
        class: ClassTag,
    ) -> Result<Game> {
        let n = block_of.len();
        let nb = block_of.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
        if values.len() != nb * nb {
            return Err(Error::input(format!(
                "block value matrix has {} entries, expected {}",
                values.len(),
                nb * nb
            )));
        }
        let mut block_size = vec![0usize; nb];
        for &b in &block_of {
            block_size[b as usize] += 1;
        }
        if let Some(b) = block_size.iter().position(|&s| s == 0) {
            return Err(Error::input(format!("block {b} has no members")));
        }
        // A lone member never meets another member of its own block.
        for b in 0..nb {
            if block_size[b] == 1 {
                values[b * nb + b] = Rational::zero();
            }
        }
        let (scale, weights) = scale_values(&values, n);
        let game = Game { n, symmetric, class, block_of, block_size, values, scale, weights };
        game.validate()?;
        Ok(game)
    }

    fn validate(&self) -> Result<()> {
        let nb = self.num_blocks();
        for r in 0..nb {
            for c in 0..nb {
                if !self.is_live(r, c) {
                    continue;
                }
                let v = &self.values[r * nb + c];
                if !self.class.allows(v, self.n) {
                    let (i, j) = self.witness_pair(r, c);
                    return Err(Error::class(format!(
                        "valuation v({i}, {j}) = {v} not allowed in class {} (n = {})",
                        self.class, self.n
                    )));
                }
                if self.symmetric && *v != self.values[c * nb + r] {
                    let (i, j) = self.witness_pair(r, c);
                    return Err(Error::input(format!(
                        "game declared symmetric but v({i}, {j}) = {v} differs from v({j}, {i}) = {}",
                        self.values[c * nb + r]
                    )));
                }
            }
        }
        Ok(())
    }

    fn is_live(&self, r: usize, c: usize) -> bool {
        r != c || self.block_size[r] >= 2
    }

    fn witness_pair(&self, r: usize, c: usize) -> (usize, usize) {
        let i = self.block_of.iter().position(|&b| b as usize == r).unwrap_or(0);
        let j = self
            .block_of
            .iter()
            .enumerate()
            .position(|(j, &b)| b as usize == c && j != i)
            .unwrap_or(0);
        (i, j)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn class(&self) -> ClassTag {
        self.class
    }

    /// `v_i(j)`. Panics on `i == j` or out-of-range ids; see
    /// [`Game::valuation`] for the checked form.
    pub fn value(&self, i: usize, j: usize) -> &Rational {
        assert!(i != j, "no self-valuation for agent {i}");
        let nb = self.num_blocks();
        &self.values[self.block_of[i] as usize * nb + self.block_of[j] as usize]
    }

    pub fn valuation(&self, i: usize, j: usize) -> Result<Rational> {
        if i >= self.n || j >= self.n {
            return Err(Error::input(format!("agent pair ({i}, {j}) out of range for n = {}", self.n)));
        }
        if i == j {
            return Err(Error::input(format!("agent {i} has no self-valuation")));
        }
        Ok(self.value(i, j).clone())
    }

    pub fn num_blocks(&self) -> usize {
        self.block_size.len()
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i] as usize
    }

    pub fn block_assignment(&self) -> &[u32] {
        &self.block_of
    }

    pub fn block_size(&self, b: usize) -> usize {
        self.block_size[b]
    }

    /// Value a member of block `r` assigns to a (distinct) member of block `c`.
    pub fn block_value(&self, r: usize, c: usize) -> &Rational {
        &self.values[r * self.num_blocks() + c]
    }

    /// All nonzero directed valuations `(i, j, v_i(j))` in row-major order.
    /// Quadratic in `n`.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        (0..self.n).flat_map(move |i| {
            (0..self.n).filter(move |&j| j != i).filter_map(move |j| {
                let v = self.value(i, j);
                (!v.is_zero()).then_some((i, j, v))
            })
        })
    }

    /// Distinct values that some ordered agent pair actually carries.
    pub fn distinct_values(&self) -> BTreeSet<Rational> {
        let nb = self.num_blocks();
        let mut out = BTreeSet::new();
        for r in 0..nb {
            for c in 0..nb {
                if self.is_live(r, c) {
                    out.insert(self.values[r * nb + c].clone());
                }
            }
        }
        out
    }

    /// The common denominator applied to obtain the integer weights.
    pub(crate) fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// Moves `agent` into a fresh block of its own, so its row and column can
    /// be edited without touching its former block-mates.
    pub(crate) fn isolate(&mut self, agent: usize) {
        let old = self.block_of[agent] as usize;
        if self.block_size[old] == 1 {
            return;
        }
        let nb = self.num_blocks();
        let nb2 = nb + 1;
        let mut values = vec![Rational::zero(); nb2 * nb2];
        for r in 0..nb {
            for c in 0..nb {
                values[r * nb2 + c] = self.values[r * nb + c].clone();
            }
        }
        for k in 0..nb {
            values[nb * nb2 + k] = self.values[old * nb + k].clone();
            values[k * nb2 + nb] = self.values[k * nb + old].clone();
        }
        values[nb * nb2 + old] = self.values[old * nb + old].clone();
        values[old * nb2 + nb] = self.values[old * nb + old].clone();
        self.values = values;
        self.block_of[agent] = nb as u32;
        self.block_size[old] -= 1;
        self.block_size.push(1);
        if self.block_size[old] == 1 {
            self.values[old * nb2 + old] = Rational::zero();
        }
    }

    /// Overwrites `v_i(j)`; `i` and `j` must already be isolated.
    pub(crate) fn set_isolated(&mut self, i: usize, j: usize, v: Rational) {
        let nb = self.num_blocks();
        let (r, c) = (self.block_of[i] as usize, self.block_of[j] as usize);
        debug_assert!(self.block_size[r] == 1 && self.block_size[c] == 1);
        self.values[r * nb + c] = v;
    }

    /// The same game under another class tag, if every valuation fits it.
    pub fn with_class(mut self, class: ClassTag) -> Result<Game> {
        self.class = class;
        self.validate()?;
        Ok(self)
    }

    /// The most specific class every valuation of this game fits.
    pub fn tightest_class(&self) -> ClassTag {
        let values = self.distinct_values();
        [ClassTag::Feg, ClassTag::Afg, ClassTag::Aeg, ClassTag::Feng, ClassTag::Strict]
            .into_iter()
            .find(|c| values.iter().all(|v| c.allows(v, self.n)))
            .unwrap_or(ClassTag::General)
    }

    /// Re-derives the integer weights and re-checks the class constraints.
    pub(crate) fn revalidate(&mut self) -> Result<()> {
        let (scale, weights) = scale_values(&self.values, self.n);
        self.scale = scale;
        self.weights = weights;
        self.validate()
    }
}

impl PartialEq for Game {
    /// Semantic equality: same agents, flags and pairwise valuations,
    /// regardless of how agents are grouped into blocks.
    fn eq(&self, other: &Game) -> bool {
        if self.n != other.n || self.symmetric != other.symmetric || self.class != other.class {
            return false;
        }
        // Agents agreeing on both block ids are interchangeable in both games,
        // so comparing one representative per joint block is enough.
        let mut reps: HashMap<(u32, u32), (usize, usize)> = HashMap::new();
        for i in 0..self.n {
            let e = reps.entry((self.block_of[i], other.block_of[i])).or_insert((i, 0));
            e.1 += 1;
        }
        let reps: Vec<(usize, usize)> = reps.into_values().collect();
        for &(i, ci) in &reps {
            for &(j, _) in &reps {
                if i != j && self.value(i, j) != other.value(i, j) {
                    return false;
                }
            }
            if ci >= 2 {
                let r = self.block_of[i] as usize;
                let o = other.block_of[i] as usize;
                if self.block_value(r, r) != other.block_value(o, o) {
                    return false;
                }
            }
        }
        true
    }
}

impl Eq for Game {}

impl fmt::Debug for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Game")
            .field("n", &self.n)
            .field("symmetric", &self.symmetric)
            .field("class", &self.class)
            .field("blocks", &self.num_blocks())
            .finish()
    }
}

fn scale_values(values: &[Rational], n: usize) -> (BigInt, Weights) {
    let mut lcm = BigInt::one();
    for v in values {
        lcm = lcm.lcm(v.denom());
    }
    let ints: Vec<BigInt> = values.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let max = ints.iter().map(|w| w.abs()).max().unwrap_or_default();
    // Social welfare sums at most n^2 terms; leave generous headroom.
    let bound = max * BigInt::from(n + 1) * BigInt::from(n + 1) * 4;
    let weights = if bound < BigInt::from(i128::MAX) {
        Weights::Small(ints.iter().map(|w| w.to_i128().expect("checked bound")).collect())
    } else {
        Weights::Big(ints)
    };
    (lcm, weights)
}

/// Assembles a block-structured game with contiguous agent ids per block.
#[derive(Clone, Debug)]
pub struct BlockGameBuilder {
    sizes: Vec<usize>,
    default: Rational,
    entries: HashMap<(usize, usize), Rational>,
}

impl BlockGameBuilder {
    /// `default` is the value of every pair not set explicitly.
    pub fn new(default: Rational) -> Self {
        BlockGameBuilder { sizes: Vec::new(), default, entries: HashMap::new() }
    }

    /// Appends a block of `size` agents and returns its id. Agent ids are
    /// assigned consecutively in block order.
    pub fn block(&mut self, size: usize) -> usize {
        self.sizes.push(size);
        self.sizes.len() - 1
    }

    pub fn first_agent(&self, b: usize) -> usize {
        self.sizes[..b].iter().sum()
    }

    pub fn size(&self, b: usize) -> usize {
        self.sizes[b]
    }

    /// Value a member of `from` assigns to a member of `to`.
    pub fn set(&mut self, from: usize, to: usize, v: Rational) -> &mut Self {
        self.entries.insert((from, to), v);
        self
    }

    pub fn set_sym(&mut self, a: usize, b: usize, v: Rational) -> &mut Self {
        self.entries.insert((a, b), v.clone());
        self.entries.insert((b, a), v);
        self
    }

    /// Value between distinct members of one block.
    pub fn within(&mut self, b: usize, v: Rational) -> &mut Self {
        self.set(b, b, v)
    }

    pub fn build(&self, symmetric: bool, class: ClassTag) -> Result<Game> {
        let mut block_of = Vec::new();
        for (b, &s) in self.sizes.iter().enumerate() {
            if s == 0 {
                return Err(Error::input(format!("block {b} is empty")));
            }
            block_of.extend(std::iter::repeat_n(b as u32, s));
        }
        let nb = self.sizes.len();
        let mut values = vec![self.default.clone(); nb * nb];
        for (&(r, c), v) in &self.entries {
            values[r * nb + c] = v.clone();
        }
        Game::from_blocks(block_of, values, symmetric, class)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    #[test]
    fn class_value_sets() {
        assert!(ClassTag::Aeg.allows(&r(-4), 4));
        assert!(!ClassTag::Aeg.allows(&r(-5), 4));
        assert!(ClassTag::Afg.allows(&r(7), 7));
        assert!(!ClassTag::Feg.allows(&r(0), 3));
        assert!(ClassTag::Feng.allows(&r(0), 3));
        assert!(!ClassTag::Strict.allows(&r(0), 3));
        assert_eq!("FEG".parse::<ClassTag>().unwrap(), ClassTag::Feg);
    }

    #[test]
    fn omitted_pairs_are_zero_and_rejected_for_strict() {
        let g = Game::from_entries(3, false, ClassTag::General, [(0, 1, r(2))]).unwrap();
        assert_eq!(*g.value(1, 0), r(0));
        assert_eq!(*g.value(0, 1), r(2));
        let err = Game::from_entries(3, true, ClassTag::Strict, [(0, 1, r(2))]).unwrap_err();
        assert!(matches!(err, Error::Class(_)));
    }

    #[test]
    fn symmetric_entries_mirror_and_conflicts_fail() {
        let g = Game::from_entries(2, true, ClassTag::Feg, [(0, 1, r(1))]).unwrap();
        assert_eq!(*g.value(1, 0), r(1));
        let err = Game::from_entries(2, true, ClassTag::Feg, [(0, 1, r(1)), (1, 0, r(-1))]);
        assert!(err.is_err());
        let err = Game::from_entries(2, false, ClassTag::General, [(1, 1, r(1))]);
        assert!(matches!(err, Err(Error::Input(_))));
    }

    #[test]
    fn blocks_expand_to_pairwise_values() {
        let mut b = BlockGameBuilder::new(r(-1));
        let x = b.block(3);
        let y = b.block(2);
        b.within(x, r(1)).set(x, y, r(1));
        let g = b.build(false, ClassTag::Feg).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(*g.value(0, 2), r(1));
        assert_eq!(*g.value(0, 4), r(1));
        assert_eq!(*g.value(4, 0), r(-1));
        assert_eq!(*g.value(3, 4), r(-1));
    }

    #[test]
    fn isolating_an_agent_keeps_semantics() {
        let mut b = BlockGameBuilder::new(r(-1));
        let x = b.block(3);
        b.within(x, r(1));
        let g = b.build(true, ClassTag::Feg).unwrap();
        let mut h = g.clone();
        h.isolate(1);
        h.revalidate().unwrap();
        assert_eq!(h.num_blocks(), 2);
        assert_eq!(g, h);
        h.set_isolated(1, 1, r(0));
        assert_eq!(g, h);
    }

    #[test]
    fn huge_values_switch_to_big_weights() {
        let big: Rational = "10000000000000000000000000000000000000000".parse().unwrap();
        let g = Game::from_entries(3, true, ClassTag::General, [(0, 1, big)]).unwrap();
        assert!(matches!(g.weights, Weights::Big(_)));
        let g = Game::from_entries(3, true, ClassTag::General, [(0, 1, r(5))]).unwrap();
        assert!(matches!(g.weights, Weights::Small(_)));
    }

    #[test]
    fn fractional_values_share_one_scale() {
        let g = Game::from_entries(
            3,
            false,
            ClassTag::General,
            [(0, 1, Rational::new(1, 2).unwrap()), (1, 2, Rational::new(-2, 3).unwrap())],
        )
        .unwrap();
        assert_eq!(*g.scale(), BigInt::from(6));
    }
}
