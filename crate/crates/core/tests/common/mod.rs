//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls the library's own search or evaluation code.
#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use ashg::{Game, Partition, Rational, StabilityNotion};
use rand::Rng;

/// Label vector with labels renumbered by first appearance.
pub fn normalize(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect()
}

pub fn labels_of(p: &Partition) -> Vec<usize> {
    (0..p.n()).map(|i| p.coalition_of(i)).collect()
}

pub fn partition_of(labels: &[usize]) -> Partition {
    let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &l) in labels.iter().enumerate() {
        groups.entry(l).or_default().push(i);
    }
    Partition::from_coalitions(labels.len(), groups.into_values()).unwrap()
}

/// Every set partition of `0..n`, as normalized label vectors.
pub fn all_label_vectors(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let max = prefix.iter().copied().max().map_or(0, |m| m + 1);
        for l in 0..=max {
            prefix.push(l);
            go(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// Neighbours of a label vector: one agent changes coalition.
pub fn neighbours(labels: &[usize]) -> Vec<Vec<usize>> {
    let fresh = labels.iter().max().map_or(0, |m| m + 1);
    let mut out = Vec::new();
    for i in 0..labels.len() {
        let alone = labels.iter().filter(|&&l| l == labels[i]).count() == 1;
        let mut targets: Vec<usize> = labels.iter().copied().filter(|&l| l != labels[i]).collect();
        targets.sort_unstable();
        targets.dedup();
        if !alone {
            targets.push(fresh);
        }
        for t in targets {
            let mut next = labels.to_vec();
            next[i] = t;
            out.push(normalize(&next));
        }
    }
    out
}

/// Shortest path length in the single-move graph.
pub fn bfs_distance(a: &[usize], b: &[usize]) -> usize {
    let (a, b) = (normalize(a), normalize(b));
    let mut seen = HashSet::from([a.clone()]);
    let mut queue = VecDeque::from([(a, 0)]);
    while let Some((cur, d)) = queue.pop_front() {
        if cur == b {
            return d;
        }
        for nb in neighbours(&cur) {
            if seen.insert(nb.clone()) {
                queue.push_back((nb, d + 1));
            }
        }
    }
    unreachable!("the move graph is connected")
}

/// Move-graph distance from `a` to every partition.
pub fn bfs_all(a: &[usize]) -> HashMap<Vec<usize>, usize> {
    let a = normalize(a);
    let mut dist = HashMap::from([(a.clone(), 0)]);
    let mut queue = VecDeque::from([a]);
    while let Some(cur) = queue.pop_front() {
        let d = dist[&cur];
        for nb in neighbours(&cur) {
            if !dist.contains_key(&nb) {
                dist.insert(nb.clone(), d + 1);
                queue.push_back(nb);
            }
        }
    }
    dist
}

pub fn random_labels(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let k = rng.gen_range(1..=n);
    normalize(&(0..n).map(|_| rng.gen_range(0..k)).collect::<Vec<_>>())
}

pub fn utility(g: &Game, labels: &[usize], i: usize, coalition: usize) -> Rational {
    let mut u = Rational::zero();
    for (j, &l) in labels.iter().enumerate() {
        if j != i && l == coalition {
            u = u + g.value(i, j).clone();
        }
    }
    u
}

/// Notions for which moving `i` to coalition label `t` is a deviation,
/// straight from the definitions. `t` may be an unused label (a new
/// coalition).
pub fn kinds(g: &Game, labels: &[usize], i: usize, t: usize) -> Vec<StabilityNotion> {
    let own = labels[i];
    let before = utility(g, labels, i, own);
    let after = utility(g, labels, i, t);
    if after <= before {
        return Vec::new();
    }
    let joined_ok = (0..labels.len()).all(|j| labels[j] != t || j == i || !g.value(j, i).is_negative());
    let left_ok = (0..labels.len()).all(|j| labels[j] != own || j == i || !g.value(j, i).is_positive());
    let mut out = vec![StabilityNotion::Ns];
    if joined_ok {
        out.push(StabilityNotion::Is);
    }
    if left_ok {
        out.push(StabilityNotion::Cns);
    }
    if joined_ok && left_ok {
        out.push(StabilityNotion::Cis);
    }
    out
}

pub fn stable(g: &Game, labels: &[usize], x: StabilityNotion) -> bool {
    let fresh = labels.iter().max().map_or(0, |m| m + 1);
    for i in 0..labels.len() {
        let alone = labels.iter().filter(|&&l| l == labels[i]).count() == 1;
        let mut targets: Vec<usize> = labels.iter().copied().filter(|&l| l != labels[i]).collect();
        targets.sort_unstable();
        targets.dedup();
        if !alone {
            targets.push(fresh);
        }
        if targets.into_iter().any(|t| kinds(g, labels, i, t).contains(&x)) {
            return false;
        }
    }
    true
}

pub fn welfare(g: &Game, labels: &[usize]) -> Rational {
    (0..labels.len()).map(|i| utility(g, labels, i, labels[i])).fold(Rational::zero(), |a, b| a + b)
}

/// A random game over `palette`, independent of the library generator.
pub fn random_game(rng: &mut impl Rng, n: usize, symmetric: bool, class: ashg::ClassTag, palette: &[i64]) -> Game {
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && (!symmetric || i < j) {
                entries.push((i, j, Rational::from(palette[rng.gen_range(0..palette.len())])));
            }
        }
    }
    Game::from_entries(n, symmetric, class, entries).unwrap()
}
