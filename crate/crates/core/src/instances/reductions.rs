//! Gadgets that encode covering problems as stability-repair instances.
//!
//! Every builder lays agents out as: elements `E`, sets `S`, then the
//! auxiliary groups of its construction. Side conditions on the covering
//! instance are checked, never patched up.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CoverInstance, CoverVariant, Draft, GadgetBundle, Role};
use crate::error::{Error, Result};
use crate::game::{BlockGameBuilder, ClassTag};
use crate::partition::Partition;
use crate::rational::Rational;
use crate::stability::StabilityNotion;
use crate::update::UpdateEvent;

/// A positive value as a function of the number of agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ValueFn {
    /// `c`, whatever `n` is.
    Const(Rational),
    /// `c * n`.
    Linear(Rational),
}

impl ValueFn {
    pub fn eval(&self, n: usize) -> Rational {
        match self {
            ValueFn::Const(c) => c.clone(),
            ValueFn::Linear(c) => c.clone() * Rational::from(n),
        }
    }
}

impl fmt::Display for ValueFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueFn::Const(c) => write!(f, "const({c})"),
            ValueFn::Linear(c) => write!(f, "linear({c})"),
        }
    }
}

/// Accepts `c`, `const(c)`, `linear` and `linear(c)` with rational `c`.
impl FromStr for ValueFn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = |prefix: &str| {
            s.strip_prefix(prefix).and_then(|rest| rest.strip_prefix('(')).and_then(|rest| rest.strip_suffix(')'))
        };
        if s == "linear" {
            return Ok(ValueFn::Linear(Rational::one()));
        }
        if let Some(c) = inner("linear") {
            return Ok(ValueFn::Linear(c.parse()?));
        }
        if let Some(c) = inner("const") {
            return Ok(ValueFn::Const(c.parse()?));
        }
        s.parse().map(ValueFn::Const).map_err(|_| Error::Parse(format!("cannot read value function {s:?}")))
    }
}

/// The positive and the negative magnitude used by the set-cover gadgets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    pub alpha: ValueFn,
    pub beta: ValueFn,
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams { alpha: ValueFn::Const(Rational::one()), beta: ValueFn::Const(Rational::one()) }
    }
}

impl ReductionParams {
    fn eval(&self, n: usize) -> Result<(Rational, Rational)> {
        let (a, b) = (self.alpha.eval(n), self.beta.eval(n));
        if !a.is_positive() || !b.is_positive() {
            return Err(Error::input(format!("alpha = {a} and beta = {b} must both be positive")));
        }
        Ok((a, b))
    }
}

/// The available constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// Set cover, any notion: a hub pair `z1, z2` over a neutral group `Y`.
    Hub,
    /// Set cover, CNS/CIS: one agent changes all its valuations of `E`.
    Star,
    /// Set cover, CNS, values `{-2M, -1, 1}`.
    Clique,
    /// Set cover, CNS, non-symmetric: a directed chain `z1, z2, z3`.
    Chain,
    /// Exact cover by 3-sets, CIS, non-symmetric, with blocker agents.
    Blockers,
    /// Set cover, IS, with layered friend groups `X` and `Y`.
    Layered,
    /// Exact cover by 3-sets, IS/NS, values `{-n, 1}`.
    Enemies,
    /// Restricted exact cover, NS, values `{-1, 1}`.
    Friends,
    /// Restricted exact cover, NS, values `{-1, n}`.
    Appreciation,
}

impl Reduction {
    pub const ALL: [Reduction; 9] = [
        Reduction::Hub,
        Reduction::Star,
        Reduction::Clique,
        Reduction::Chain,
        Reduction::Blockers,
        Reduction::Layered,
        Reduction::Enemies,
        Reduction::Friends,
        Reduction::Appreciation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Reduction::Hub => "hub",
            Reduction::Star => "star",
            Reduction::Clique => "clique",
            Reduction::Chain => "chain",
            Reduction::Blockers => "blockers",
            Reduction::Layered => "layered",
            Reduction::Enemies => "enemies",
            Reduction::Friends => "friends",
            Reduction::Appreciation => "appreciation",
        }
    }

    /// Short selector codes accepted next to the names.
    fn code(self) -> &'static str {
        match self {
            Reduction::Hub => "thm43",
            Reduction::Star => "thm51",
            Reduction::Clique => "thm52",
            Reduction::Chain => "thm57-cns",
            Reduction::Blockers => "thm57-cis",
            Reduction::Layered => "thm58",
            Reduction::Enemies => "thm59",
            Reduction::Friends => "thm510",
            Reduction::Appreciation => "thm510-afg",
        }
    }

    /// Resolves a selector, using the notion to pick between the two
    /// constructions that share the code `thm57`.
    pub fn select(s: &str, notion: StabilityNotion) -> Result<Reduction> {
        let s = s.trim().to_ascii_lowercase();
        if s == "thm57" {
            return Ok(if notion == StabilityNotion::Cis { Reduction::Blockers } else { Reduction::Chain });
        }
        Reduction::ALL
            .into_iter()
            .find(|r| r.name() == s || r.code() == s)
            .ok_or_else(|| Error::Parse(format!("unknown construction {s:?}")))
    }

    /// The covering problem the construction reads.
    pub fn source(self) -> CoverVariant {
        match self {
            Reduction::Hub | Reduction::Star | Reduction::Clique | Reduction::Chain | Reduction::Layered => {
                CoverVariant::SetCover
            }
            Reduction::Blockers | Reduction::Enemies => CoverVariant::X3c,
            Reduction::Friends | Reduction::Appreciation => CoverVariant::Rx3c,
        }
    }

    /// Notions the construction is built for.
    pub fn notions(self) -> &'static [StabilityNotion] {
        use StabilityNotion::*;
        match self {
            Reduction::Hub => &[Ns, Is, Cns, Cis],
            Reduction::Star => &[Cns, Cis],
            Reduction::Clique | Reduction::Chain => &[Cns],
            Reduction::Blockers => &[Cis],
            Reduction::Layered => &[Is],
            Reduction::Enemies => &[Is, Ns],
            Reduction::Friends | Reduction::Appreciation => &[Ns],
        }
    }
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reduction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Reduction::select(s, StabilityNotion::Cns)
    }
}

/// Block layout with named agent ranges.
struct Plan {
    b: BlockGameBuilder,
    roles: Vec<Role>,
    n: usize,
}

impl Plan {
    fn new(default: Rational) -> Plan {
        Plan { b: BlockGameBuilder::new(default), roles: Vec::new(), n: 0 }
    }

    /// A role made of `sizes.len()` consecutive blocks.
    fn group(&mut self, name: &str, sizes: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let start = self.n;
        let blocks: Vec<usize> = sizes
            .into_iter()
            .map(|s| {
                self.n += s;
                self.b.block(s)
            })
            .collect();
        self.roles.push(Role { name: name.into(), start, len: self.n - start });
        blocks
    }

    fn one(&mut self, name: &str, size: usize) -> usize {
        self.group(name, [size])[0]
    }

    fn agent(&self, block: usize) -> usize {
        self.b.first_agent(block)
    }

    /// `v` between every pair drawn from `blocks`, including within each.
    fn clique(&mut self, blocks: &[usize], v: &Rational) {
        for (i, &a) in blocks.iter().enumerate() {
            self.b.within(a, v.clone());
            for &c in &blocks[i + 1..] {
                self.b.set_sym(a, c, v.clone());
            }
        }
    }

    fn finish(
        self,
        symmetric: bool,
        coalitions: Vec<Vec<usize>>,
        update: UpdateEvent,
        notion: StabilityNotion,
        budget: usize,
    ) -> Result<Draft> {
        let game = self.b.build(symmetric, ClassTag::General)?;
        let class = game.tightest_class();
        let game = game.with_class(class)?;
        let partition = Partition::from_coalitions(self.n, coalitions)?;
        Ok(Draft { game, partition, update, notion, budget, roles: self.roles })
    }
}

fn require(ok: bool, condition: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::input(format!("side condition violated: {condition}")))
    }
}

/// Builds the gadget `reduction` for `inst` and checks its start partition.
pub fn compile(
    inst: &CoverInstance,
    params: &ReductionParams,
    notion: StabilityNotion,
    reduction: Reduction,
    symmetric: bool,
) -> Result<GadgetBundle> {
    let want = reduction.source();
    let fits = match want {
        CoverVariant::SetCover => inst.variant() == CoverVariant::SetCover,
        CoverVariant::X3c => inst.variant().is_exact(),
        CoverVariant::Rx3c => inst.variant() == CoverVariant::Rx3c,
    };
    if !fits {
        return Err(Error::input(format!("{reduction} reads a {want} instance, got {}", inst.variant())));
    }
    if !reduction.notions().contains(&notion) {
        return Err(Error::input(format!("{reduction} is not built for {notion}")));
    }
    require(inst.family_covers(), "the sets cover E")?;
    let draft = match reduction {
        Reduction::Hub => hub(inst, params, notion, symmetric)?,
        Reduction::Star => star(inst, params, notion, symmetric)?,
        Reduction::Clique => clique(inst, symmetric)?,
        Reduction::Chain => chain(inst, params, symmetric)?,
        Reduction::Blockers => blockers(inst, params, symmetric)?,
        Reduction::Layered => layered(inst, params, symmetric)?,
        Reduction::Enemies => enemies(inst, notion, symmetric)?,
        Reduction::Friends => friends(inst, symmetric)?,
        Reduction::Appreciation => appreciation(inst, symmetric)?,
    };
    draft.seal(reduction.name(), Some(inst.clone()))
}

/// [`compile`] restricted to the set-cover constructions.
pub fn compile_setcover(
    inst: &CoverInstance,
    params: &ReductionParams,
    notion: StabilityNotion,
    reduction: Reduction,
    symmetric: bool,
) -> Result<GadgetBundle> {
    if reduction.source() != CoverVariant::SetCover {
        return Err(Error::input(format!("{reduction} reads an exact-cover instance")));
    }
    compile(inst, params, notion, reduction, symmetric)
}

/// [`compile`] restricted to the exact-cover constructions, with unit
/// magnitudes.
pub fn compile_x3c(
    inst: &CoverInstance,
    notion: StabilityNotion,
    reduction: Reduction,
    symmetric: bool,
) -> Result<GadgetBundle> {
    if reduction.source() == CoverVariant::SetCover {
        return Err(Error::input(format!("{reduction} reads a set-cover instance")));
    }
    compile(inst, &ReductionParams::default(), notion, reduction, symmetric)
}

fn sizes(inst: &CoverInstance) -> (usize, usize, usize) {
    (inst.num_elements(), inst.num_sets(), inst.k())
}

fn singles(count: usize) -> impl Iterator<Item = usize> {
    std::iter::repeat_n(1, count)
}

/// Agents of `blocks` as one list.
fn agents_of(p: &Plan, blocks: &[usize]) -> Vec<usize> {
    blocks.iter().flat_map(|&b| p.agent(b)..p.agent(b) + p.b.size(b)).collect()
}

fn hub(inst: &CoverInstance, params: &ReductionParams, notion: StabilityNotion, symmetric: bool) -> Result<Draft> {
    let (m, s, k) = sizes(inst);
    require(k < m, "k < |E|")?;
    require(k < s, "k < |S|")?;
    let ny = m + s + 3;
    let (alpha, beta) = params.eval(m + s + ny + 2)?;
    if matches!(notion, StabilityNotion::Ns | StabilityNotion::Cns) {
        require(alpha <= beta, "alpha <= beta for NS and CNS")?;
    }
    let mut p = Plan::new(Rational::zero());
    let e = p.group("E", singles(m));
    let sb = p.group("S", singles(s));
    let y = p.one("Y", ny);
    let z1 = p.one("z1", 1);
    let z2 = p.one("z2", 1);
    for (j, set) in inst.sets().iter().enumerate() {
        for &i in set {
            p.b.set_sym(e[i], sb[j], -beta.clone());
        }
    }
    for &ei in &e {
        p.b.set_sym(z1, ei, alpha.clone()).set_sym(z2, ei, -beta.clone());
    }
    for &sj in &sb {
        p.b.set_sym(z2, sj, -beta.clone());
    }
    p.b.set_sym(z1, y, alpha.clone());
    let (a1, a2) = (p.agent(z1), p.agent(z2));
    let update = if symmetric {
        p.b.set_sym(z1, z2, alpha);
        UpdateEvent::single_pair(a1, a2, -beta)
    } else {
        p.b.set(z2, z1, alpha);
        UpdateEvent::single_pair(a2, a1, -beta)
    };
    let mut cs: Vec<Vec<usize>> = (0..m + s).map(|i| vec![i]).collect();
    cs.push(agents_of(&p, &[y, z1, z2]));
    p.finish(symmetric, cs, update, notion, k + 1)
}

fn star(inst: &CoverInstance, params: &ReductionParams, notion: StabilityNotion, symmetric: bool) -> Result<Draft> {
    require(symmetric, "the star construction is symmetric")?;
    let (m, s, k) = sizes(inst);
    require(k > 1, "k > 1")?;
    require(k + 1 < m, "k < |E| - 1")?;
    require(k + 1 < s, "k < |S| - 1")?;
    let (alpha, beta) = params.eval(m + s + 1)?;
    let mut p = Plan::new(-beta.clone());
    let e = p.group("E", singles(m));
    let sb = p.group("S", singles(s));
    let z = p.one("z", 1);
    for (j, set) in inst.sets().iter().enumerate() {
        for &i in set {
            p.b.set_sym(e[i], sb[j], alpha.clone());
        }
    }
    for &ei in &e {
        p.b.set_sym(ei, z, alpha.clone());
    }
    p.clique(&sb, &alpha);
    let za = p.agent(z);
    let update = UpdateEvent {
        d: vec![za],
        e: (0..m).collect(),
        entries: (0..m).map(|i| (za, i, -beta.clone())).collect(),
    };
    let cs = vec![(0..m).chain([za]).collect(), (m..m + s).collect()];
    p.finish(symmetric, cs, update, notion, k + 1)
}

fn clique(inst: &CoverInstance, symmetric: bool) -> Result<Draft> {
    let (m, s, k) = sizes(inst);
    require(k > 2, "k > 2")?;
    require(k + 1 < m, "k < |E| - 1")?;
    require(k + 1 < s, "k < |S| - 1")?;
    let big = Rational::from(2 * (m + s));
    let (one, neg) = (Rational::one(), Rational::from(-1));
    let mut p = Plan::new(neg.clone());
    let e = p.group("E", singles(m));
    let sb = p.group("S", singles(s));
    let hubs = if symmetric { 2 } else { 3 };
    let z: Vec<usize> = (0..hubs).map(|i| p.one(&format!("z{}", i + 1), 1)).collect();
    let y = p.one("Y", m + s);
    for (j, set) in inst.sets().iter().enumerate() {
        for &i in set {
            p.b.set_sym(e[i], sb[j], -big.clone());
        }
    }
    p.clique(&sb, &one);
    p.b.within(y, one.clone());
    for &ei in &e {
        p.b.set_sym(y, ei, one.clone()).set_sym(z[0], ei, -big.clone());
    }
    let za: Vec<usize> = z.iter().map(|&b| p.agent(b)).collect();
    let update = if symmetric {
        p.b.set_sym(z[0], z[1], one);
        UpdateEvent::single_pair(za[0], za[1], neg)
    } else {
        for i in 0..3 {
            p.b.set(z[i], z[(i + 1) % 3], one.clone());
        }
        UpdateEvent::single_pair(za[2], za[0], neg)
    };
    let mut cs: Vec<Vec<usize>> = (0..m).map(|i| vec![i]).collect();
    cs.push((m..m + s).collect());
    cs.push(agents_of(&p, &z).into_iter().chain(agents_of(&p, &[y])).collect());
    let budget = k + hubs;
    p.finish(symmetric, cs, update, StabilityNotion::Cns, budget)
}

fn chain(inst: &CoverInstance, params: &ReductionParams, symmetric: bool) -> Result<Draft> {
    require(!symmetric, "the chain construction is non-symmetric")?;
    let (m, s, k) = sizes(inst);
    require(k > 2, "k > 2")?;
    require(k + 1 < m, "k < |E| - 1")?;
    require(k + 1 < s, "k < |S| - 1")?;
    let ny = 4 * (m + s) + 7;
    let (alpha, beta) = params.eval(m + s + ny + 3)?;
    let mut p = Plan::new(-beta.clone());
    let e = p.group("E", singles(m));
    let sb = p.group("S", singles(s));
    let y = p.one("Y", ny);
    let z: Vec<usize> = (1..=3).map(|i| p.one(&format!("z{i}"), 1)).collect();
    p.clique(&sb, &alpha);
    for (j, set) in inst.sets().iter().enumerate() {
        for &i in set {
            p.b.set_sym(e[i], sb[j], alpha.clone());
        }
    }
    for &ei in &e {
        p.b.set(z[0], ei, alpha.clone());
    }
    for &zi in &z {
        p.b.set(zi, y, alpha.clone());
    }
    for (a, b) in [(0, 1), (1, 2), (2, 1), (2, 0)] {
        p.b.set(z[a], z[b], alpha.clone());
    }
    p.b.within(y, alpha);
    let update = UpdateEvent::single_pair(p.agent(z[1]), p.agent(z[2]), -beta);
    let cs = vec![
        (0..m).chain(agents_of(&p, &z)).collect(),
        (m..m + s).collect(),
        agents_of(&p, &[y]),
    ];
    p.finish(false, cs, update, StabilityNotion::Cns, k + 3)
}

fn blockers(inst: &CoverInstance, params: &ReductionParams, symmetric: bool) -> Result<Draft> {
    require(!symmetric, "the blocker construction is non-symmetric")?;
    let (m, f, _) = sizes(inst);
    require(m > 6, "|E| > 6")?;
    require(m % 3 == 0, "|E| divisible by 3")?;
    let big = m + f;
    let (ny, nw) = (big * big, big * big * big);
    let n = m + f + m * (ny + m - 1) + nw + 3;
    let (alpha, beta) = params.eval(n)?;
    let mut p = Plan::new(-beta.clone());
    let e = p.group("E", singles(m));
    let fb = p.group("S", singles(f));
    // Group i holds Y_i followed by the blockers b_{i,j}, j != i.
    let mut groups = Vec::with_capacity(m);
    for i in 0..m {
        let blocks = p.group(&format!("Y{i}"), std::iter::once(ny).chain(singles(m - 1)));
        groups.push(blocks);
    }
    let w = p.one("W", nw);
    let z: Vec<usize> = (1..=3).map(|i| p.one(&format!("z{i}"), 1)).collect();
    p.clique(&e, &alpha);
    p.clique(&fb, &alpha);
    for (j, set) in inst.sets().iter().enumerate() {
        for i in (0..m).filter(|i| !set.contains(i)) {
            p.b.set_sym(e[i], fb[j], alpha.clone());
        }
    }
    p.b.within(w, alpha.clone());
    for &ei in &e {
        p.b.set_sym(ei, w, alpha.clone());
    }
    for (i, blocks) in groups.iter().enumerate() {
        p.clique(blocks, &alpha);
        p.b.set(e[i], blocks[0], alpha.clone());
        let others = (0..m).filter(|&j| j != i);
        for (&b, j) in blocks[1..].iter().zip(others) {
            for l in (0..m).filter(|&l| l != i && l != j) {
                p.b.set_sym(e[l], b, alpha.clone());
            }
        }
    }
    for i in 0..3 {
        p.b.set(z[i], z[(i + 1) % 3], alpha.clone());
    }
    let update = UpdateEvent::single_pair(p.agent(z[1]), p.agent(z[2]), -beta);
    let mut cs: Vec<Vec<usize>> =
        groups.iter().enumerate().map(|(i, blocks)| std::iter::once(i).chain(agents_of(&p, blocks)).collect()).collect();
    cs.push((m..m + f).collect());
    cs.push(agents_of(&p, &[w]).into_iter().chain(agents_of(&p, &z)).collect());
    p.finish(false, cs, update, StabilityNotion::Cis, m / 3 + 3)
}

fn layered(inst: &CoverInstance, params: &ReductionParams, symmetric: bool) -> Result<Draft> {
    let (m, s, k) = sizes(inst);
    require(k > 1, "k > 1")?;
    require(k + 1 < m, "k < |E| - 1")?;
    require(k + 1 < s, "k < |S| - 1")?;
    let big = 4 * (m + s);
    let (nx2, ny) = (big * big / 4, big * big * big);
    let (alpha, beta) = params.eval(m + s + 4 * nx2 + ny + 2)?;
    require(alpha >= beta, "alpha >= beta")?;
    let mut p = Plan::new(-beta.clone());
    let e = p.group("E", singles(m));
    let sb = p.group("S", singles(s));
    let x = p.group("X", [3 * nx2, nx2]);
    let y = p.one("Y", ny);
    let z1 = p.one("z1", 1);
    let z2 = p.one("z2", 1);
    for (j, set) in inst.sets().iter().enumerate() {
        for i in (0..m).filter(|i| !set.contains(i)) {
            p.b.set_sym(e[i], sb[j], alpha.clone());
        }
        p.b.set_sym(sb[j], x[0], alpha.clone());
    }
    p.clique(&e, &alpha);
    p.clique(&x, &alpha);
    for &ei in &e {
        for &xb in &x {
            p.b.set_sym(ei, xb, alpha.clone());
        }
    }
    for &xb in &x {
        p.b.set_sym(z1, xb, alpha.clone());
    }
    p.b.set_sym(z1, y, alpha.clone()).set_sym(z2, y, alpha.clone()).within(y, alpha.clone());
    let (a1, a2) = (p.agent(z1), p.agent(z2));
    let update = if symmetric {
        UpdateEvent::single_pair(a1, a2, alpha)
    } else {
        p.b.set(z1, z2, alpha.clone());
        UpdateEvent::single_pair(a2, a1, alpha)
    };
    let mut cs: Vec<Vec<usize>> = vec![(0..m).collect()];
    cs.extend((m..m + s).map(|j| vec![j]));
    cs.push(std::iter::once(a1).chain(agents_of(&p, &x)).collect());
    cs.push(std::iter::once(a2).chain(agents_of(&p, &[y])).collect());
    p.finish(symmetric, cs, update, StabilityNotion::Is, k + 1)
}

fn enemies(inst: &CoverInstance, notion: StabilityNotion, symmetric: bool) -> Result<Draft> {
    let (m, f, _) = sizes(inst);
    require(m % 3 == 0, "|E| divisible by 3")?;
    let big = m + f + 7;
    let (nx, ny, nw) = (big * big, big * big * big, big * big * big * big);
    let n = m + 2 * f + 2 * nx + ny + nw + 2;
    let one = Rational::one();
    let mut p = Plan::new(-Rational::from(n));
    let e = p.group("E", singles(m));
    let fb = p.group("S", singles(f));
    let x1 = p.one("X1", nx);
    let x2 = p.one("X2", nx);
    let y = p.one("Y", ny);
    let yf = p.group("YS", singles(f));
    let z1 = p.one("z1", 1);
    let z2 = p.one("z2", 1);
    let w = p.one("W", nw);
    let ys: Vec<usize> = std::iter::once(y).chain(yf.iter().copied()).collect();
    for (j, set) in inst.sets().iter().enumerate() {
        for i in (0..m).filter(|i| !set.contains(i)) {
            p.b.set_sym(e[i], fb[j], one.clone());
        }
        p.b.set_sym(fb[j], x2, one.clone()).set_sym(fb[j], y, one.clone());
        for (jj, &yb) in yf.iter().enumerate() {
            if jj != j {
                p.b.set_sym(fb[j], yb, one.clone());
            }
        }
    }
    p.clique(&e, &one);
    p.clique(&ys, &one);
    p.clique(&fb, &one);
    p.b.within(x1, one.clone()).within(x2, one.clone()).within(w, one.clone());
    for &ei in &e {
        p.b.set_sym(ei, x1, one.clone());
        for &yb in &ys {
            p.b.set_sym(ei, yb, one.clone());
        }
    }
    for &yb in &ys {
        p.b.set_sym(z1, yb, one.clone());
    }
    p.b.set_sym(z1, w, one.clone()).set_sym(z2, w, one.clone());
    let (a1, a2) = (p.agent(z1), p.agent(z2));
    // In the directed variant z2 already likes z1 and z1 comes around, so
    // z1 has no reason to leave for W before the update.
    let update = if symmetric {
        UpdateEvent::single_pair(a1, a2, one)
    } else {
        p.b.set(z2, z1, one.clone());
        UpdateEvent::single_pair(a1, a2, one)
    };
    let cs = vec![
        (0..m).chain(agents_of(&p, &[x1])).collect(),
        (m..m + f).chain(agents_of(&p, &[x2])).collect(),
        std::iter::once(a1).chain(agents_of(&p, &ys)).collect(),
        std::iter::once(a2).chain(agents_of(&p, &[w])).collect(),
    ];
    p.finish(symmetric, cs, update, notion, 2 * m / 3 + 1)
}

/// Shared layout of the two restricted-exact-cover constructions.
struct Friendly {
    friend: Rational,
    t: usize,
    w: usize,
    x: Vec<usize>,
    y: Vec<usize>,
    z: usize,
}

fn friendly(inst: &CoverInstance, symmetric: bool, shape: Friendly, budget: usize) -> Result<Draft> {
    let (m, f, _) = sizes(inst);
    let v = shape.friend.clone();
    let mut p = Plan::new(Rational::from(-1));
    let e = p.group("E", singles(m));
    let fb = p.group("S", singles(f));
    let t = p.one("T", shape.t);
    let w = p.one("W", shape.w);
    let x = p.group("X", shape.x.iter().copied());
    let y = p.group("Y", shape.y.iter().copied());
    let z = p.one("Z", shape.z);
    let sets = inst.sets();
    for a in 0..f {
        for b in a + 1..f {
            if sets[a].iter().all(|i| !sets[b].contains(i)) {
                p.b.set_sym(fb[a], fb[b], v.clone());
            }
        }
        p.b.set_sym(t, fb[a], v.clone());
        for i in (0..m).filter(|i| !sets[a].contains(i)) {
            p.b.set_sym(e[i], fb[a], v.clone());
        }
    }
    p.b.within(t, v.clone()).within(w, v.clone());
    p.clique(&e, &v);
    // Elements like the last block of X (if X is split) and the first of Y.
    let e_likes: Vec<usize> = x[1..].iter().chain(y.iter().take(usize::from(y.len() > 1))).copied().chain([z]).collect();
    let w_likes: Vec<usize> = x.iter().take(usize::from(x.len() > 1)).chain(&y).copied().chain([z]).collect();
    for &ei in &e {
        p.b.set_sym(ei, w, v.clone());
        for &b in &e_likes {
            p.b.set_sym(ei, b, v.clone());
        }
    }
    for &b in &w_likes {
        p.b.set_sym(w, b, v.clone());
    }
    let xyz: Vec<usize> = x.iter().chain(&y).copied().chain([z]).collect();
    p.clique(&xyz, &v);
    let (wt, xt) = (p.agent(w), p.agent(*x.last().expect("X has a block")));
    let update = if symmetric {
        UpdateEvent::single_pair(wt, xt, v)
    } else {
        UpdateEvent { d: vec![wt], e: vec![xt], entries: vec![(wt, xt, v)] }
    };
    let cs = vec![
        (0..m).chain(agents_of(&p, &[w])).collect(),
        (m..m + f).chain(agents_of(&p, &[t])).collect(),
        agents_of(&p, &xyz),
    ];
    p.finish(symmetric, cs, update, StabilityNotion::Ns, budget)
}

fn friends(inst: &CoverInstance, symmetric: bool) -> Result<Draft> {
    let k = inst.num_elements() / 3;
    require(k >= 6, "|E| / 3 >= 6")?;
    require(k.is_multiple_of(2), "|E| / 3 even")?;
    let shape = Friendly {
        friend: Rational::one(),
        t: 2 * k - 1,
        w: k,
        x: vec![3 * k * k, 3 * k * k],
        y: vec![k / 2 + 1, k / 2 + 1],
        z: 3 * k - 3,
    };
    friendly(inst, symmetric, shape, 2 * k)
}

fn appreciation(inst: &CoverInstance, symmetric: bool) -> Result<Draft> {
    let (m, f, _) = sizes(inst);
    let k = m / 3;
    require(k >= 8, "|E| / 3 >= 8")?;
    let n = m + f + (2 * k - 1) + (k - 1) + 8 * k + (k - 1) + (3 * k - 1);
    let shape =
        Friendly { friend: Rational::from(n), t: 2 * k - 1, w: k - 1, x: vec![8 * k], y: vec![k - 1], z: 3 * k - 1 };
    friendly(inst, symmetric, shape, 2 * k - 1)
}

/// The repaired partition a cover certifies, following each
/// construction's forward direction.
pub(crate) fn witness(bundle: &GadgetBundle, reduction: Reduction, cover: &[usize]) -> Result<Partition> {
    let inst = bundle.cover.as_ref().ok_or_else(|| Error::input("bundle carries no covering instance"))?;
    let n = bundle.game.n();
    let (m, s) = (inst.num_elements(), inst.num_sets());
    if let Some(&c) = cover.iter().find(|&&c| c >= s) {
        return Err(Error::input(format!("cover names set {c}, but there are only {s}")));
    }
    let chosen: Vec<usize> = cover.iter().map(|&c| m + c).collect();
    let rest: Vec<usize> = (0..s).filter(|c| !cover.contains(c)).map(|c| m + c).collect();
    let role = |name: &str| bundle.role(name).map(Iterator::collect::<Vec<usize>>);
    let union = |parts: Vec<Vec<usize>>| parts.concat();
    let mut cs: Vec<Vec<usize>> = Vec::new();
    match reduction {
        Reduction::Hub => {
            cs.extend((0..m).map(|i| vec![i]));
            cs.extend(rest.iter().map(|&c| vec![c]));
            cs.push(union(vec![chosen, role("Y")?, role("z1")?]));
            cs.push(role("z2")?);
        }
        Reduction::Star => {
            cs.push(union(vec![(0..m).collect(), chosen]));
            cs.push(rest);
            cs.push(role("z")?);
        }
        Reduction::Clique => {
            cs.extend((0..m).map(|i| vec![i]));
            cs.push(rest);
            cs.push(union(vec![chosen, role("Y")?]));
            if bundle.game.is_symmetric() {
                cs.push(role("z1")?);
                cs.push(role("z2")?);
            } else {
                cs.push(union(vec![role("z1")?, role("z2")?]));
                cs.push(role("z3")?);
            }
        }
        Reduction::Chain => {
            cs.push(union(vec![(0..m).collect(), chosen]));
            cs.push(rest);
            cs.push(union(vec![role("Y")?, role("z1")?, role("z2")?, role("z3")?]));
        }
        Reduction::Blockers => {
            cs.push(rest);
            for i in 0..m {
                cs.push(union(vec![vec![i], role(&format!("Y{i}"))?]));
            }
            cs.push(union(vec![chosen, role("W")?]));
            cs.extend(["z1", "z2", "z3"].iter().map(|z| role(z)).collect::<Result<Vec<_>>>()?);
        }
        Reduction::Layered => {
            cs.push((0..m).collect());
            cs.extend(rest.iter().map(|&c| vec![c]));
            cs.push(union(vec![chosen, role("X")?]));
            cs.push(union(vec![role("z1")?, role("z2")?, role("Y")?]));
        }
        Reduction::Enemies => {
            let ys = bundle.role("YS")?.start;
            let y_of = |agents: &[usize]| agents.iter().map(|&a| ys + (a - m)).collect::<Vec<_>>();
            cs.push(union(vec![(0..m).collect(), role("X1")?]));
            cs.push(union(vec![rest.clone(), role("X2")?]));
            cs.push(union(vec![chosen.clone(), role("Y")?, y_of(&rest)]));
            cs.push(y_of(&chosen));
            cs.push(union(vec![role("z1")?, role("z2")?, role("W")?]));
        }
        Reduction::Friends | Reduction::Appreciation => {
            cs.push(union(vec![(0..m).collect(), chosen]));
            cs.push(union(vec![rest, role("T")?]));
            cs.push(union(vec![role("W")?, role("X")?, role("Y")?, role("Z")?]));
        }
    }
    cs.retain(|c| !c.is_empty());
    Partition::from_coalitions(n, cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::is_stable;

    fn tiny() -> CoverInstance {
        CoverInstance::from_indices(CoverVariant::SetCover, 2, vec![vec![0], vec![1], vec![0, 1]], Some(1)).unwrap()
    }

    #[test]
    fn value_fn_parsing() {
        assert_eq!("3/2".parse::<ValueFn>().unwrap().eval(10), Rational::new(3, 2).unwrap());
        assert_eq!("linear".parse::<ValueFn>().unwrap().eval(10), Rational::from(10));
        assert_eq!("linear(2)".parse::<ValueFn>().unwrap().eval(10), Rational::from(20));
        assert_eq!("const(4)".parse::<ValueFn>().unwrap().eval(10), Rational::from(4));
        assert!("square".parse::<ValueFn>().is_err());
    }

    #[test]
    fn selectors() {
        assert_eq!(Reduction::select("thm57", StabilityNotion::Cis).unwrap(), Reduction::Blockers);
        assert_eq!(Reduction::select("thm57", StabilityNotion::Cns).unwrap(), Reduction::Chain);
        assert_eq!("thm510-afg".parse::<Reduction>().unwrap(), Reduction::Appreciation);
        assert_eq!("hub".parse::<Reduction>().unwrap(), Reduction::Hub);
    }

    #[test]
    fn hub_layout_and_witness() {
        let b = compile_setcover(&tiny(), &ReductionParams::default(), StabilityNotion::Cns, Reduction::Hub, true)
            .unwrap();
        assert_eq!(b.game.n(), 15);
        assert_eq!(b.budget, 2);
        let w = witness(&b, Reduction::Hub, &[2]).unwrap();
        assert!(is_stable(&b.altered_game().unwrap(), &w, StabilityNotion::Cns));
    }

    #[test]
    fn side_conditions_are_named() {
        let inst =
            CoverInstance::from_indices(CoverVariant::SetCover, 2, vec![vec![0], vec![1], vec![0, 1]], Some(2)).unwrap();
        let err = compile_setcover(&inst, &ReductionParams::default(), StabilityNotion::Ns, Reduction::Hub, true)
            .unwrap_err();
        assert!(err.to_string().contains("k < |E|"), "{err}");
        let params = ReductionParams { alpha: ValueFn::Const(Rational::from(2)), beta: ValueFn::Const(Rational::one()) };
        let err = compile_setcover(&tiny(), &params, StabilityNotion::Ns, Reduction::Hub, true).unwrap_err();
        assert!(err.to_string().contains("alpha <= beta"), "{err}");
        assert!(compile_setcover(&tiny(), &params, StabilityNotion::Is, Reduction::Hub, true).is_ok());
    }
}
