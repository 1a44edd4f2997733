//! Covering problems that feed the reduction gadgets, with small exact
//! solvers used as oracles.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which covering problem an instance poses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverVariant {
    /// Cover the universe with at most `k` sets.
    SetCover,
    /// Partition the universe into 3-element sets from the family.
    X3c,
    /// `X3c` where every element lies in exactly three sets.
    Rx3c,
}

impl CoverVariant {
    pub fn name(self) -> &'static str {
        match self {
            CoverVariant::SetCover => "setcover",
            CoverVariant::X3c => "x3c",
            CoverVariant::Rx3c => "rx3c",
        }
    }

    pub fn is_exact(self) -> bool {
        self != CoverVariant::SetCover
    }
}

impl fmt::Display for CoverVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CoverVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [CoverVariant::SetCover, CoverVariant::X3c, CoverVariant::Rx3c]
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Parse(format!("unknown cover variant {s:?}")))
    }
}

/// An element label: a number or a string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Element {
    Id(u64),
    Name(String),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Id(i) => write!(f, "{i}"),
            Element::Name(s) => f.write_str(s),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CoverFile {
    variant: CoverVariant,
    #[serde(rename = "E")]
    universe: Vec<Element>,
    sets: Vec<Vec<Element>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
}

/// A covering instance. Sets are stored as sorted element indices into the
/// universe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInstance {
    variant: CoverVariant,
    universe: Vec<Element>,
    sets: Vec<Vec<usize>>,
    k: Option<usize>,
}

impl CoverInstance {
    /// Validates and indexes an instance over labelled elements.
    pub fn new(
        variant: CoverVariant,
        universe: Vec<Element>,
        sets: Vec<Vec<Element>>,
        k: Option<usize>,
    ) -> Result<CoverInstance> {
        let mut index = HashMap::new();
        for (i, e) in universe.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::input(format!("element {e} listed twice")));
            }
        }
        let mut indexed = Vec::with_capacity(sets.len());
        for (s, set) in sets.iter().enumerate() {
            let mut ids = Vec::with_capacity(set.len());
            for e in set {
                let i = *index
                    .get(e)
                    .ok_or_else(|| Error::input(format!("set {s} mentions {e}, which is not in E")))?;
                ids.push(i);
            }
            ids.sort_unstable();
            if ids.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("set {s} repeats an element")));
            }
            indexed.push(ids);
        }
        let inst = CoverInstance { variant, universe, sets: indexed, k };
        inst.validate()?;
        Ok(inst)
    }

    /// Instance over elements `0..m` with index-based sets.
    pub fn from_indices(variant: CoverVariant, m: usize, sets: Vec<Vec<usize>>, k: Option<usize>) -> Result<Self> {
        let universe = (0..m as u64).map(Element::Id).collect();
        let sets = sets.into_iter().map(|s| s.into_iter().map(|i| Element::Id(i as u64)).collect()).collect();
        CoverInstance::new(variant, universe, sets, k)
    }

    /// The restricted instance on `3q` elements whose sets are the `3q`
    /// cyclic windows `{i, i+1, i+2} mod 3q`. The windows starting at
    /// multiples of 3 form an exact cover.
    pub fn cyclic_rx3c(q: usize) -> Result<Self> {
        if q < 2 {
            return Err(Error::input("cyclic windows need at least 6 elements"));
        }
        let m = 3 * q;
        let sets = (0..m).map(|i| vec![i, (i + 1) % m, (i + 2) % m]).collect();
        CoverInstance::from_indices(CoverVariant::Rx3c, m, sets, None)
    }

    fn validate(&self) -> Result<()> {
        match self.variant {
            CoverVariant::SetCover => {
                if self.k.is_none() {
                    return Err(Error::input("a set cover instance needs a target size k"));
                }
            }
            CoverVariant::X3c | CoverVariant::Rx3c => {
                if let Some(s) = self.sets.iter().position(|s| s.len() != 3) {
                    return Err(Error::input(format!("set {s} does not have exactly 3 elements")));
                }
                if self.variant == CoverVariant::Rx3c {
                    let occ = self.occurrences();
                    if let Some(e) = occ.iter().position(|&c| c != 3) {
                        return Err(Error::input(format!(
                            "element {} occurs in {} sets, not exactly 3",
                            self.universe[e], occ[e]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.universe.len()];
        for s in &self.sets {
            for &e in s {
                occ[e] += 1;
            }
        }
        occ
    }

    pub fn variant(&self) -> CoverVariant {
        self.variant
    }

    pub fn universe(&self) -> &[Element] {
        &self.universe
    }

    pub fn num_elements(&self) -> usize {
        self.universe.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn num_sets(&self) -> usize {
        self.sets.len()
    }

    /// Target size; for the exact variants, `|E| / 3`.
    pub fn k(&self) -> usize {
        self.k.unwrap_or(self.universe.len() / 3)
    }

    /// Whether the whole family covers the universe.
    pub fn family_covers(&self) -> bool {
        self.occurrences().iter().all(|&c| c > 0)
    }

    /// Whether the chosen sets cover every element.
    pub fn is_cover(&self, chosen: &[usize]) -> bool {
        let mut hit = vec![false; self.universe.len()];
        for &s in chosen {
            if let Some(set) = self.sets.get(s) {
                for &e in set {
                    hit[e] = true;
                }
            } else {
                return false;
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Whether the chosen sets cover every element exactly once.
    pub fn is_exact_cover(&self, chosen: &[usize]) -> bool {
        let total: usize = chosen.iter().filter_map(|&s| self.sets.get(s)).map(Vec::len).sum();
        total == self.universe.len() && self.is_cover(chosen)
    }

    /// A smallest cover, lexicographically first among the smallest.
    /// Exponential in the number of sets; meant for tiny instances.
    pub fn min_cover(&self) -> Option<Vec<usize>> {
        let m = self.sets.len();
        (0..=m).find_map(|size| Combinations::new(m, size).find(|c| self.is_cover(c)))
    }

    /// Whether some cover uses at most `k` sets.
    pub fn has_cover_within(&self, k: usize) -> bool {
        self.min_cover().is_some_and(|c| c.len() <= k)
    }

    /// An exact cover, found by branching on the first uncovered element.
    pub fn exact_cover(&self) -> Option<Vec<usize>> {
        let mut by_elem: Vec<Vec<usize>> = vec![Vec::new(); self.universe.len()];
        for (s, set) in self.sets.iter().enumerate() {
            for &e in set {
                by_elem[e].push(s);
            }
        }
        let mut used = vec![false; self.universe.len()];
        let mut chosen = Vec::new();
        self.exact_dfs(&by_elem, &mut used, &mut chosen).then(|| {
            chosen.sort_unstable();
            chosen
        })
    }

    fn exact_dfs(&self, by_elem: &[Vec<usize>], used: &mut [bool], chosen: &mut Vec<usize>) -> bool {
        let Some(e) = used.iter().position(|u| !u) else {
            return true;
        };
        for &s in &by_elem[e] {
            let set = &self.sets[s];
            if set.iter().any(|&x| used[x]) {
                continue;
            }
            set.iter().for_each(|&x| used[x] = true);
            chosen.push(s);
            if self.exact_dfs(by_elem, used, chosen) {
                return true;
            }
            chosen.pop();
            set.iter().for_each(|&x| used[x] = false);
        }
        false
    }

    /// The answer the covering problem asks for: a cover of size at most
    /// `k`, or an exact cover.
    pub fn solve(&self) -> Option<Vec<usize>> {
        match self.variant {
            CoverVariant::SetCover => self.min_cover().filter(|c| c.len() <= self.k()),
            CoverVariant::X3c | CoverVariant::Rx3c => self.exact_cover(),
        }
    }
}

impl Serialize for CoverInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let sets = self.sets.iter().map(|set| set.iter().map(|&e| self.universe[e].clone()).collect()).collect();
        CoverFile { variant: self.variant, universe: self.universe.clone(), sets, k: self.k }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoverInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = CoverFile::deserialize(d)?;
        CoverInstance::new(f.variant, f.universe, f.sets, f.k).map_err(serde::de::Error::custom)
    }
}

/// `size`-subsets of `0..m` in lexicographic order.
struct Combinations {
    m: usize,
    cur: Option<Vec<usize>>,
}

impl Combinations {
    fn new(m: usize, size: usize) -> Self {
        Combinations { m, cur: (size <= m).then(|| (0..size).collect()) }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let c = self.cur.as_mut().expect("checked above");
        let size = c.len();
        let mut i = size;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if c[i] < self.m - size + i {
                c[i] += 1;
                for j in i + 1..size {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}
