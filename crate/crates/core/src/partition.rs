//! Coalition structures in canonical form.

use std::fmt;

use crate::error::{Error, Result};

/// Where a deviating agent goes: an existing coalition (by index in the
/// partition it leaves) or a fresh singleton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Coalition(usize),
    NewSingleton,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Coalition(c) => write!(f, "{c}"),
            Target::NewSingleton => f.write_str("new"),
        }
    }
}

/// A partition of `0..n` into nonempty coalitions.
///
/// Always canonical: coalitions are ordered by their smallest member and
/// members are ascending. The assignment vector is then a restricted growth
/// string, which doubles as the identity key: two partitions are equal iff
/// their assignments are, and the derived `Ord` is the canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    assign: Vec<u32>,
    coalitions: Vec<Vec<usize>>,
}

impl Partition {
    pub fn singletons(n: usize) -> Partition {
        Partition::from_rgs((0..n as u32).collect())
    }

    pub fn grand(n: usize) -> Partition {
        Partition::from_rgs(vec![0; n])
    }

    /// Builds a partition from coalitions covering `0..n` exactly once.
    pub fn from_coalitions<C, I>(n: usize, coalitions: C) -> Result<Partition>
    where
        C: IntoIterator<Item = I>,
        I: IntoIterator<Item = usize>,
    {
        let mut label = vec![u32::MAX; n];
        for (c, members) in coalitions.into_iter().enumerate() {
            let mut empty = true;
            for i in members {
                empty = false;
                if i >= n {
                    return Err(Error::input(format!("agent {i} out of range for n = {n}")));
                }
                if label[i] != u32::MAX {
                    return Err(Error::input(format!("agent {i} appears in more than one coalition")));
                }
                label[i] = c as u32;
            }
            if empty {
                return Err(Error::input("empty coalition"));
            }
        }
        if let Some(i) = label.iter().position(|&l| l == u32::MAX) {
            return Err(Error::input(format!("agent {i} is not in any coalition")));
        }
        Ok(Partition::from_labels(&label))
    }

    /// Canonicalizes an arbitrary labelling: agents with equal labels share
    /// a coalition.
    pub fn from_labels<L: Copy + Eq + std::hash::Hash>(labels: &[L]) -> Partition {
        let mut map = std::collections::HashMap::new();
        let assign = labels
            .iter()
            .map(|l| {
                let next = map.len() as u32;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Partition::from_rgs(assign)
    }

    /// Wraps an assignment that is already a restricted growth string.
    pub(crate) fn from_rgs(assign: Vec<u32>) -> Partition {
        debug_assert!(is_rgs(&assign));
        let m = assign.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut coalitions = vec![Vec::new(); m];
        for (i, &c) in assign.iter().enumerate() {
            coalitions[c as usize].push(i);
        }
        Partition { assign, coalitions }
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn coalitions(&self) -> &[Vec<usize>] {
        &self.coalitions
    }

    pub fn num_coalitions(&self) -> usize {
        self.coalitions.len()
    }

    /// Index of the coalition containing `i`.
    pub fn coalition_of(&self, i: usize) -> usize {
        self.assign[i] as usize
    }

    pub fn members(&self, c: usize) -> &[usize] {
        &self.coalitions[c]
    }

    /// Members of the coalition containing `i`.
    pub fn coalition_containing(&self, i: usize) -> &[usize] {
        &self.coalitions[self.assign[i] as usize]
    }

    /// The canonical key (restricted growth string).
    pub fn key(&self) -> &[u32] {
        &self.assign
    }

    pub fn same_coalition(&self, i: usize, j: usize) -> bool {
        self.assign[i] == self.assign[j]
    }

    pub fn count_singletons(&self) -> usize {
        self.coalitions.iter().filter(|c| c.len() == 1).count()
    }

    /// The partition after agent `i` moves to `target`.
    pub fn moved(&self, i: usize, target: Target) -> Result<Partition> {
        let own = self.assign[i] as usize;
        let mut labels = self.assign.clone();
        match target {
            Target::Coalition(c) if c >= self.coalitions.len() => {
                return Err(Error::input(format!("coalition index {c} out of range")));
            }
            Target::Coalition(c) if c == own => {
                return Err(Error::input(format!("agent {i} already belongs to coalition {c}")));
            }
            Target::Coalition(c) => labels[i] = c as u32,
            Target::NewSingleton if self.coalitions[own].len() == 1 => {
                return Err(Error::input(format!("agent {i} is already a singleton")));
            }
            Target::NewSingleton => labels[i] = self.coalitions.len() as u32,
        }
        Ok(Partition::from_labels(&labels))
    }

    /// Union of the coalitions containing `a` and `b`.
    pub fn merged(&self, a: usize, b: usize) -> Partition {
        let (ca, cb) = (self.assign[a], self.assign[b]);
        let labels: Vec<u32> = self.assign.iter().map(|&c| if c == cb { ca } else { c }).collect();
        Partition::from_labels(&labels)
    }

    /// All single-agent moves, in agent order then target order with the
    /// new singleton last.
    pub fn moves(&self) -> impl Iterator<Item = (usize, Target)> + '_ {
        (0..self.n()).flat_map(move |i| {
            let own = self.assign[i] as usize;
            let lone = self.coalitions[own].len() == 1;
            (0..self.coalitions.len())
                .filter(move |&c| c != own)
                .map(Target::Coalition)
                .chain((!lone).then_some(Target::NewSingleton))
                .map(move |t| (i, t))
        })
    }
}

pub(crate) fn is_rgs(assign: &[u32]) -> bool {
    let mut next = 0u32;
    assign.iter().all(|&c| {
        if c < next {
            true
        } else if c == next {
            next += 1;
            true
        } else {
            false
        }
    })
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, c) in self.coalitions.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str("{")?;
            for (t, i) in c.iter().enumerate() {
                if t > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{i}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// Iterator over all partitions of `0..n` in restricted-growth-string order.
pub struct SetPartitions {
    rgs: Vec<u32>,
    maxes: Vec<u32>,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        SetPartitions { rgs: vec![0; n], maxes: vec![0; n], done: false }
    }
}

impl Iterator for SetPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.done {
            return None;
        }
        let out = Partition::from_rgs(self.rgs.clone());
        // maxes[i] = max(rgs[0..i]); position i may grow up to maxes[i] + 1.
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.maxes[i] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.rgs[j] = 0;
                    self.maxes[j] = self.maxes[j - 1].max(self.rgs[j - 1]);
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form_orders_by_min_member() {
        let p = Partition::from_coalitions(6, [vec![5, 4], vec![3], vec![2, 0, 1]]).unwrap();
        assert_eq!(p.coalitions(), &[vec![0, 1, 2], vec![3], vec![4, 5]]);
        assert_eq!(p.key(), &[0, 0, 0, 1, 2, 2]);
        assert_eq!(p.to_string(), "{{0,1,2}, {3}, {4,5}}");
    }

    #[test]
    fn invalid_families_are_rejected() {
        assert!(Partition::from_coalitions(3, [vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_coalitions(3, [vec![0, 1]]).is_err());
        assert!(Partition::from_coalitions(3, [vec![0, 1, 2], vec![]]).is_err());
        assert!(Partition::from_coalitions(2, [vec![0, 1, 2]]).is_err());
    }

    #[test]
    fn singletons_counted() {
        assert_eq!(Partition::singletons(5).count_singletons(), 5);
        assert_eq!(Partition::grand(5).count_singletons(), 0);
        assert_eq!(Partition::grand(1).count_singletons(), 1);
    }

    #[test]
    fn moves_stay_canonical() {
        let p = Partition::from_coalitions(3, [vec![0, 1], vec![2]]).unwrap();
        let q = p.moved(0, Target::Coalition(1)).unwrap();
        assert_eq!(q.coalitions(), &[vec![0, 2], vec![1]]);
        let q = p.moved(1, Target::NewSingleton).unwrap();
        assert_eq!(q, Partition::singletons(3));
        assert!(p.moved(2, Target::NewSingleton).is_err());
        assert!(p.moved(2, Target::Coalition(1)).is_err());
        assert_eq!(p.moves().count(), 2 * 2 + 1);
    }

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..8).map(|n| SetPartitions::new(n).count()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 15, 52, 203, 877]);
        let all: Vec<Partition> = SetPartitions::new(4).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
