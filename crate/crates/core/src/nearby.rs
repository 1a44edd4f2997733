//! Exact search for a nearest stable partition after a valuation update.
//!
//! Partitions within distance `k` of a start are enumerated breadth-first
//! over single-agent moves. Each BFS layer is sorted canonically, so the
//! first stable partition met is both nearest and canonically smallest
//! among the nearest.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::partition::{Partition, SetPartitions};
use crate::stability::{is_stable, StabilityNotion};
use crate::update::{apply_update, UpdateEvent};

/// Default bound on distinct partitions a search may visit.
pub const DEFAULT_VISITED_CAP: usize = 10_000_000;

/// Default largest game handed to exhaustive enumeration of all partitions.
pub const DEFAULT_ENUMERATION_CAP: usize = 10;

/// A stable partition, a valuation update, and a distance budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlteredInstance {
    pub game: Game,
    #[serde(rename = "partition")]
    pub stable_start: Partition,
    pub update: UpdateEvent,
    pub notion: StabilityNotion,
    pub k: usize,
}

impl AlteredInstance {
    /// Checks the instance promise and returns the altered game.
    pub fn altered_game(&self) -> Result<Game> {
        if self.stable_start.n() != self.game.n() {
            return Err(Error::input(format!(
                "partition covers {} agents but the game has {}",
                self.stable_start.n(),
                self.game.n()
            )));
        }
        if !is_stable(&self.game, &self.stable_start, self.notion) {
            return Err(Error::contract(format!(
                "start partition is not {} in the original game",
                self.notion
            )));
        }
        apply_update(&self.game, &self.update)
    }
}

/// Result of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub found: bool,
    pub distance: Option<usize>,
    pub partition: Option<Partition>,
    /// Distinct partitions examined.
    pub explored: usize,
}

impl SearchOutcome {
    pub fn hit(partition: Partition, distance: usize, explored: usize) -> Self {
        SearchOutcome { found: true, distance: Some(distance), partition: Some(partition), explored }
    }

    pub fn miss(explored: usize) -> Self {
        SearchOutcome { found: false, distance: None, partition: None, explored }
    }
}

/// Lazy breadth-first stream of `(partition, distance)` pairs.
pub struct WithinDistance {
    k: usize,
    cap: usize,
    depth: usize,
    layer: Vec<Vec<u32>>,
    pos: usize,
    visited: HashSet<Vec<u32>>,
    failed: bool,
}

/// Every partition within `k` single-agent moves of `p`, each once, in
/// nondecreasing distance and canonical order within a distance.
pub fn enumerate_within(p: &Partition, k: usize) -> WithinDistance {
    enumerate_within_capped(p, k, DEFAULT_VISITED_CAP)
}

/// As [`enumerate_within`], failing with a resource error once more than
/// `cap` partitions have been visited.
pub fn enumerate_within_capped(p: &Partition, k: usize, cap: usize) -> WithinDistance {
    let start = p.key().to_vec();
    let mut visited = HashSet::new();
    visited.insert(start.clone());
    WithinDistance { k, cap, depth: 0, layer: vec![start], pos: 0, visited, failed: false }
}

impl WithinDistance {
    pub fn visited(&self) -> usize {
        self.visited.len()
    }

    fn expand(&mut self) -> Result<bool> {
        if self.depth >= self.k {
            return Ok(false);
        }
        let mut next = Vec::new();
        let mut labels = Vec::new();
        for key in &self.layer {
            let m = key.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
            let mut sizes = vec![0usize; m];
            for &c in key {
                sizes[c as usize] += 1;
            }
            for i in 0..key.len() {
                let own = key[i] as usize;
                let fresh = (sizes[own] > 1).then_some(m);
                for c in (0..m).filter(|&c| c != own).chain(fresh) {
                    labels.clear();
                    labels.extend_from_slice(key);
                    labels[i] = c as u32;
                    let canon = canonical(&labels);
                    if !self.visited.contains(&canon) {
                        self.visited.insert(canon.clone());
                        next.push(canon);
                        if self.visited.len() > self.cap {
                            return Err(Error::Resource {
                                what: format!("more than {} partitions within distance {}", self.cap, self.k),
                                visited: self.visited.len(),
                            });
                        }
                    }
                }
            }
        }
        next.sort_unstable();
        self.layer = next;
        self.pos = 0;
        self.depth += 1;
        Ok(!self.layer.is_empty())
    }
}

fn canonical(labels: &[u32]) -> Vec<u32> {
    let mut map = vec![u32::MAX; labels.len() + 1];
    let mut next = 0u32;
    labels
        .iter()
        .map(|&l| {
            let slot = &mut map[l as usize];
            if *slot == u32::MAX {
                *slot = next;
                next += 1;
            }
            *slot
        })
        .collect()
}

impl Iterator for WithinDistance {
    type Item = Result<(Partition, usize)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        while self.pos >= self.layer.len() {
            match self.expand() {
                Ok(true) => {}
                Ok(false) => return None,
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
        }
        let key = self.layer[self.pos].clone();
        self.pos += 1;
        Some(Ok((Partition::from_rgs(key), self.depth)))
    }
}

/// Nearest `notion`-stable partition of `game` within `k` moves of `start`.
pub fn nearest_stable_in(
    game: &Game,
    start: &Partition,
    notion: StabilityNotion,
    k: usize,
    cap: usize,
) -> Result<SearchOutcome> {
    if start.n() != game.n() {
        return Err(Error::input("partition and game disagree on the number of agents"));
    }
    let mut explored = 0;
    for item in enumerate_within_capped(start, k, cap) {
        let (p, d) = item?;
        explored += 1;
        if is_stable(game, &p, notion) {
            return Ok(SearchOutcome::hit(p, d, explored));
        }
    }
    Ok(SearchOutcome::miss(explored))
}

/// Solves the altered-game search problem exactly.
pub fn nearest_stable(inst: &AlteredInstance) -> Result<SearchOutcome> {
    nearest_stable_capped(inst, DEFAULT_VISITED_CAP)
}

pub fn nearest_stable_capped(inst: &AlteredInstance, cap: usize) -> Result<SearchOutcome> {
    let altered = inst.altered_game()?;
    nearest_stable_in(&altered, &inst.stable_start, inst.notion, inst.k, cap)
}

/// As [`nearest_stable_in`], but visits one partition per class of
/// partitions that differ only by swapping interchangeable agents: agents of
/// one block that share a start coalition, or are all singletons in it.
/// The distance is exact; the partition returned is a representative of its
/// class. Reduction gadgets with large identical groups need this to stay
/// searchable.
pub fn nearest_stable_up_to_symmetry(
    game: &Game,
    start: &Partition,
    notion: StabilityNotion,
    k: usize,
    cap: usize,
) -> Result<SearchOutcome> {
    if start.n() != game.n() {
        return Err(Error::input("partition and game disagree on the number of agents"));
    }
    let cells = Cells::new(game, start);
    let first = cells.canonical(start.key());
    let mut visited: HashSet<Vec<u32>> = HashSet::new();
    visited.insert(first.clone());
    let mut layer = vec![first];
    let mut explored = 0;
    for depth in 0..=k {
        for key in &layer {
            explored += 1;
            let p = Partition::from_rgs(key.clone());
            if is_stable(game, &p, notion) {
                return Ok(SearchOutcome::hit(p, depth, explored));
            }
        }
        if depth == k {
            break;
        }
        let mut next = Vec::new();
        for key in &layer {
            for labels in cells.representative_moves(key) {
                let canon = cells.canonical(&labels);
                if visited.insert(canon.clone()) {
                    next.push(canon);
                    if visited.len() > cap {
                        return Err(Error::Resource {
                            what: format!("more than {cap} partition classes within distance {k}"),
                            visited: visited.len(),
                        });
                    }
                }
            }
        }
        next.sort_unstable();
        layer = next;
    }
    Ok(SearchOutcome::miss(explored))
}

/// Groups of interchangeable agents with respect to a game and a start.
struct Cells {
    cell_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl Cells {
    fn new(game: &Game, start: &Partition) -> Cells {
        let mut ids: std::collections::HashMap<(usize, Option<usize>), usize> = Default::default();
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut cell_of = Vec::with_capacity(game.n());
        for i in 0..game.n() {
            let c = start.coalition_of(i);
            let slot = (start.members(c).len() > 1).then_some(c);
            let next = members.len();
            let id = *ids.entry((game.block_of(i), slot)).or_insert(next);
            if id == next {
                members.push(Vec::new());
            }
            members[id].push(i);
            cell_of.push(id);
        }
        Cells { cell_of, members }
    }

    fn profiles(&self, labels: &[u32]) -> Vec<Vec<(usize, usize)>> {
        let m = labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut counts: Vec<std::collections::BTreeMap<usize, usize>> = vec![Default::default(); m];
        for (i, &l) in labels.iter().enumerate() {
            *counts[l as usize].entry(self.cell_of[i]).or_default() += 1;
        }
        counts.into_iter().map(|c| c.into_iter().collect()).collect()
    }

    fn canonical(&self, labels: &[u32]) -> Vec<u32> {
        let mut profiles = self.profiles(labels);
        profiles.retain(|p| !p.is_empty());
        profiles.sort_unstable();
        let mut next_of_cell = vec![0usize; self.members.len()];
        let mut out = vec![0u32; labels.len()];
        for (rank, profile) in profiles.iter().enumerate() {
            for &(cell, count) in profile {
                let start = next_of_cell[cell];
                for &agent in &self.members[cell][start..start + count] {
                    out[agent] = rank as u32;
                }
                next_of_cell[cell] += count;
            }
        }
        canonical(&out)
    }

    /// One move per (coalition, cell, target): moving any other agent of
    /// the same cell out of the same coalition gives an equivalent result.
    fn representative_moves<'a>(&'a self, key: &'a [u32]) -> impl Iterator<Item = Vec<u32>> + 'a {
        let m = key.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut sizes = vec![0usize; m];
        for &c in key {
            sizes[c as usize] += 1;
        }
        let mut seen = HashSet::new();
        let movers: Vec<usize> = (0..key.len()).filter(|&i| seen.insert((key[i], self.cell_of[i]))).collect();
        movers.into_iter().flat_map(move |i| {
            let own = key[i] as usize;
            let fresh = (sizes[own] > 1).then_some(m);
            (0..m).filter(move |&c| c != own).chain(fresh).map(move |c| {
                let mut labels = key.to_vec();
                labels[i] = c as u32;
                labels
            })
        })
    }
}

/// All `x`-stable partitions of `g`, in canonical order.
pub fn enumerate_all_stable(g: &Game, x: StabilityNotion, n_cap: usize) -> Result<Vec<Partition>> {
    if g.n() > n_cap {
        return Err(Error::Resource {
            what: format!("exhaustive enumeration of {} agents exceeds the cap of {n_cap}", g.n()),
            visited: 0,
        });
    }
    Ok(SetPartitions::new(g.n()).filter(|p| is_stable(g, p, x)).collect())
}
