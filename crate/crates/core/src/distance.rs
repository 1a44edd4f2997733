//! Single-agent-move distance between partitions.
//!
//! The distance is `n` minus the largest total overlap achievable by
//! matching coalitions of one partition to coalitions of the other
//! one-to-one. The matching is a maximum-weight assignment, solved with the
//! Hungarian method.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Minimum number of single-agent coalition changes turning `a` into `b`.
pub fn partition_distance(a: &Partition, b: &Partition) -> Result<usize> {
    if a.n() != b.n() {
        return Err(Error::input(format!(
            "partitions over different agent counts ({} vs {})",
            a.n(),
            b.n()
        )));
    }
    Ok(a.n() - max_overlap(a, b))
}

fn max_overlap(a: &Partition, b: &Partition) -> usize {
    // A coalition present in both partitions is always matched to itself in
    // some optimal assignment (it overlaps nothing else), so only the
    // differing coalitions go into the assignment problem.
    let mut common = 0usize;
    let mut rows = Vec::new();
    for (ca, members) in a.coalitions().iter().enumerate() {
        let cb = b.coalition_of(members[0]);
        if b.members(cb) == members.as_slice() {
            common += members.len();
        } else {
            rows.push(ca);
        }
    }
    if rows.is_empty() {
        return common;
    }
    let mut cols: HashMap<usize, usize> = HashMap::new();
    let mut overlaps: HashMap<(usize, usize), i64> = HashMap::new();
    for (r, &ca) in rows.iter().enumerate() {
        for &i in a.members(ca) {
            let next = cols.len();
            let c = *cols.entry(b.coalition_of(i)).or_insert(next);
            *overlaps.entry((r, c)).or_insert(0) += 1;
        }
    }
    let size = rows.len().max(cols.len());
    let mut cost = vec![0i64; size * size];
    for (&(r, c), &w) in &overlaps {
        cost[r * size + c] = -w;
    }
    common + (-min_cost_assignment(&cost, size)) as usize
}

/// Minimum-cost perfect assignment on a square `size x size` cost matrix
/// (row-major). Returns the optimal total cost.
pub(crate) fn min_cost_assignment(cost: &[i64], size: usize) -> i64 {
    if size == 0 {
        return 0;
    }
    // Potentials-based O(size^3) Hungarian method with 1-based sentinels.
    let inf = i64::MAX / 4;
    let mut u = vec![0i64; size + 1];
    let mut v = vec![0i64; size + 1];
    let mut way = vec![0usize; size + 1];
    let mut matched = vec![0usize; size + 1];
    for row in 1..=size {
        matched[0] = row;
        let mut col0 = 0usize;
        let mut minv = vec![inf; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[col0] = true;
            let r = matched[col0];
            let mut delta = inf;
            let mut col1 = 0usize;
            for col in 1..=size {
                if used[col] {
                    continue;
                }
                let cur = cost[(r - 1) * size + (col - 1)] - u[r] - v[col];
                if cur < minv[col] {
                    minv[col] = cur;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=size {
                if used[col] {
                    u[matched[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if matched[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            matched[col0] = matched[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    (1..=size).map(|col| cost[(matched[col] - 1) * size + (col - 1)]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: usize, cs: &[&[usize]]) -> Partition {
        Partition::from_coalitions(n, cs.iter().map(|c| c.to_vec())).unwrap()
    }

    #[test]
    fn small_cases() {
        let a = p(3, &[&[0, 1], &[2]]);
        assert_eq!(partition_distance(&a, &a).unwrap(), 0);
        assert_eq!(partition_distance(&a, &Partition::grand(3)).unwrap(), 1);
        assert_eq!(partition_distance(&Partition::singletons(3), &Partition::grand(3)).unwrap(), 2);
        assert!(partition_distance(&a, &Partition::grand(4)).is_err());
    }

    #[test]
    fn assignment_beats_greedy() {
        // Greedy would pair row 0 with column 0 (weight 3) and lose 4.
        let cost = [-3, -2, -2, 0];
        assert_eq!(min_cost_assignment(&cost, 2), -4);
        let cost = [4, 1, 3, 2, 0, 5, 3, 2, 2];
        assert_eq!(min_cost_assignment(&cost, 3), 5);
    }

    #[test]
    fn shared_coalitions_are_free() {
        let a = p(6, &[&[0, 1, 2], &[3], &[4], &[5]]);
        let b = p(6, &[&[0, 1, 2], &[3, 4], &[5]]);
        assert_eq!(partition_distance(&a, &b).unwrap(), 1);
    }
}
