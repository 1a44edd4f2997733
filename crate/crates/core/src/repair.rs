//! Constructive repair after a single symmetric valuation change, with the
//! deciders built on top of it.

use serde::Serialize;

use crate::distance::partition_distance;
use crate::dynamics::{default_max_steps, run_dynamics, DynamicsTrace, Policy};
use crate::error::{Error, Result};
use crate::eval;
use crate::game::Game;
use crate::nearby::{nearest_stable_in, AlteredInstance, SearchOutcome, DEFAULT_VISITED_CAP};
use crate::partition::{Partition, Target};
use crate::rational::Rational;
use crate::stability::{is_stable, StabilityNotion};
use crate::update::{apply_update, UpdateEvent};

/// Which distance guarantee a report is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `4 + phi(start) - phi(result)`.
    GeneralCns,
    /// 4, when the games carry at most one negative valuation value.
    OneNegativeCns,
    /// 3, for contractual individual stability.
    Cis,
}

/// A move made before the final dynamics of the CNS repair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PhaseOneAction {
    /// The singleton `singleton` joined the coalition of `agent`.
    Merge { agent: usize, singleton: usize },
    /// `agent` made a CNS deviation.
    Deviate {
        agent: usize,
        #[serde(serialize_with = "crate::io::serialize_target")]
        target: Target,
    },
}

impl PhaseOneAction {
    /// The agent whose coalition membership changed.
    pub fn mover(&self) -> usize {
        match self {
            PhaseOneAction::Merge { singleton, .. } => *singleton,
            PhaseOneAction::Deviate { agent, .. } => *agent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepairReport {
    pub result: Partition,
    pub distance: usize,
    /// `phi(start) - phi(result)`, the change in the number of singletons.
    pub singleton_delta: i64,
    pub bound_used: BoundKind,
    /// The numeric value of the guarantee for this run.
    pub bound: i64,
    pub phase_one: Vec<PhaseOneAction>,
    pub steps: DynamicsTrace,
}

impl RepairReport {
    pub fn within_bound(&self) -> bool {
        (self.distance as i64) <= self.bound
    }

    /// Every agent whose coalition changed at some point, with repetitions.
    pub fn moves(&self) -> Vec<usize> {
        self.phase_one.iter().map(PhaseOneAction::mover).chain(self.steps.steps.iter().map(|s| s.agent)).collect()
    }
}

fn check_strict_symmetric(g: &Game) -> Result<()> {
    if !g.is_symmetric() {
        return Err(Error::contract("repair requires a symmetric game"));
    }
    if g.distinct_values().iter().any(Rational::is_zero) {
        return Err(Error::contract("repair requires a strict game (no zero valuations)"));
    }
    Ok(())
}

fn altered(g: &Game, p: &Partition, pair: (usize, usize), new_value: &Rational, x: StabilityNotion) -> Result<Game> {
    check_strict_symmetric(g)?;
    let (a, b) = pair;
    if a >= g.n() || b >= g.n() || a == b {
        return Err(Error::input(format!("invalid agent pair ({a}, {b}) for n = {}", g.n())));
    }
    if p.n() != g.n() {
        return Err(Error::input("partition and game disagree on the number of agents"));
    }
    if new_value.is_zero() {
        return Err(Error::contract("the new valuation must be nonzero to keep the game strict"));
    }
    if !is_stable(g, p, x) {
        return Err(Error::contract(format!("start partition is not {x} in the original game")));
    }
    apply_update(g, &UpdateEvent::single_pair(a, b, new_value.clone()))
}

/// Number of distinct negative valuation values across both games.
fn negative_values(g: &Game, h: &Game) -> usize {
    let mut vals = g.distinct_values();
    vals.extend(h.distinct_values());
    vals.iter().filter(|v| v.is_negative()).count()
}

/// The CNS repair with FirstInOrder final dynamics.
pub fn close_cns(g: &Game, p: &Partition, pair: (usize, usize), new_value: &Rational) -> Result<RepairReport> {
    close_cns_with_policy(g, p, pair, new_value, Policy::FirstInOrder)
}

/// The CNS repair with the final dynamics driven by `policy`.
///
/// If `a` and `b` share a coalition, each of them in turn either absorbs a
/// singleton it values positively (smallest id first) or, failing that,
/// makes a CNS deviation to the largest coalition it values nonnegatively
/// (a fresh singleton when there is none, smallest index on ties). CNS
/// dynamics then run to convergence.
pub fn close_cns_with_policy(
    g: &Game,
    p: &Partition,
    pair: (usize, usize),
    new_value: &Rational,
    policy: Policy,
) -> Result<RepairReport> {
    let h = altered(g, p, pair, new_value, StabilityNotion::Cns)?;
    let (a, b) = pair;
    let mut cur = p.clone();
    let mut phase_one = Vec::new();
    if p.same_coalition(a, b) && !is_stable(&h, p, StabilityNotion::Cns) {
        for x in [a, b] {
            let friend = (0..h.n()).find(|&s| {
                s != x && cur.coalition_containing(s).len() == 1 && h.value(x, s).is_positive()
            });
            if let Some(s) = friend {
                if !cur.same_coalition(x, s) {
                    cur = cur.merged(x, s);
                    phase_one.push(PhaseOneAction::Merge { agent: x, singleton: s });
                }
                continue;
            }
            let size = |t: Target, q: &Partition| match t {
                Target::Coalition(c) => q.members(c).len(),
                Target::NewSingleton => 0,
            };
            let mut best: Option<Target> = None;
            for m in eval::agent_moves(&h, &cur, x) {
                if !m.kinds.contains(StabilityNotion::Cns) || m.after.is_negative() {
                    continue;
                }
                if best.is_none_or(|t| size(m.target, &cur) > size(t, &cur)) {
                    best = Some(m.target);
                }
            }
            if let Some(t) = best {
                cur = cur.moved(x, t)?;
                phase_one.push(PhaseOneAction::Deviate { agent: x, target: t });
            }
        }
    }
    let steps = run_dynamics(&h, &cur, StabilityNotion::Cns, policy, default_max_steps(h.n()));
    let result = steps.final_partition.clone();
    let distance = partition_distance(p, &result)?;
    let singleton_delta = p.count_singletons() as i64 - result.count_singletons() as i64;
    let (bound_used, bound) = if negative_values(g, &h) <= 1 {
        (BoundKind::OneNegativeCns, 4)
    } else {
        (BoundKind::GeneralCns, 4 + singleton_delta)
    };
    Ok(RepairReport { result, distance, singleton_delta, bound_used, bound, phase_one, steps })
}

/// CIS dynamics in the altered game, starting from `p`.
pub fn cis_repair(
    g: &Game,
    p: &Partition,
    pair: (usize, usize),
    new_value: &Rational,
    policy: Policy,
) -> Result<RepairReport> {
    let h = altered(g, p, pair, new_value, StabilityNotion::Cis)?;
    let steps = run_dynamics(&h, p, StabilityNotion::Cis, policy, default_max_steps(h.n()));
    let result = steps.final_partition.clone();
    let distance = partition_distance(p, &result)?;
    let singleton_delta = p.count_singletons() as i64 - result.count_singletons() as i64;
    Ok(RepairReport {
        result,
        distance,
        singleton_delta,
        bound_used: BoundKind::Cis,
        bound: 3,
        phase_one: Vec::new(),
        steps,
    })
}

fn single_pair_instance(inst: &AlteredInstance, x: StabilityNotion) -> Result<(usize, usize, Rational)> {
    if inst.notion != x {
        return Err(Error::contract(format!("this decider handles {x} only, got {}", inst.notion)));
    }
    check_strict_symmetric(&inst.game)?;
    let (a, b, v) = inst
        .update
        .as_single_pair()
        .ok_or_else(|| Error::contract("the update must change exactly one pair of agents"))?;
    Ok((a, b, v.clone()))
}

/// Exhaustive search up to `exhaustive` moves; beyond that, the repair's
/// output is minimal because nothing closer exists.
fn decide(
    inst: &AlteredInstance,
    exhaustive: usize,
    repair: impl FnOnce() -> Result<RepairReport>,
) -> Result<SearchOutcome> {
    let h = inst.altered_game()?;
    let depth = inst.k.min(exhaustive);
    let near = nearest_stable_in(&h, &inst.stable_start, inst.notion, depth, DEFAULT_VISITED_CAP)?;
    if near.found || inst.k <= exhaustive {
        return Ok(near);
    }
    let report = repair()?;
    if report.distance <= inst.k && is_stable(&h, &report.result, inst.notion) {
        Ok(SearchOutcome::hit(report.result, report.distance, near.explored + 1))
    } else {
        Err(Error::contract(format!(
            "repair returned distance {} beyond its guarantee; the input violates the decider's assumptions",
            report.distance
        )))
    }
}

/// Exact decision for CIS after one symmetric pair update in a strict game.
pub fn decide_cis_111_sym(inst: &AlteredInstance) -> Result<SearchOutcome> {
    let (a, b, v) = single_pair_instance(inst, StabilityNotion::Cis)?;
    decide(inst, 2, || cis_repair(&inst.game, &inst.stable_start, (a, b), &v, Policy::FirstInOrder))
}

/// Exact decision for CNS after one symmetric pair update in a strict game
/// with at most one negative valuation value.
pub fn decide_cns_111_sym_one_negative(inst: &AlteredInstance) -> Result<SearchOutcome> {
    let (a, b, v) = single_pair_instance(inst, StabilityNotion::Cns)?;
    let h = inst.altered_game()?;
    if negative_values(&inst.game, &h) > 1 {
        return Err(Error::contract(
            "more than one negative valuation value; use the exhaustive nearest-stable search instead",
        ));
    }
    decide(inst, 3, || close_cns(&inst.game, &inst.stable_start, (a, b), &v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::ClassTag;

    fn r(v: i64) -> Rational {
        Rational::from(v)
    }

    fn fig3() -> (Game, Partition) {
        let friends = |a: usize, b: usize| {
            (a, b) == (6, 7) || ([0, 4, 5].contains(&a) && [1, 2, 3].contains(&b))
        };
        let g = Game::from_fn(8, true, ClassTag::Feg, |i, j| {
            if friends(i.min(j), i.max(j)) || friends(i.max(j), i.min(j)) { r(1) } else { r(-1) }
        })
        .unwrap();
        let p = Partition::from_coalitions(8, [vec![0, 1, 2, 3, 6, 7], vec![4], vec![5]]).unwrap();
        (g, p)
    }

    #[test]
    fn fig3_needs_four_moves() {
        let (g, p) = fig3();
        let rep = close_cns(&g, &p, (6, 7), &r(-1)).unwrap();
        let want = Partition::from_coalitions(8, [vec![0, 1, 2, 3, 4, 5], vec![6], vec![7]]).unwrap();
        assert_eq!(rep.result, want);
        assert_eq!(rep.distance, 4);
        assert_eq!(rep.bound_used, BoundKind::OneNegativeCns);
        let mut movers = rep.moves();
        movers.sort_unstable();
        assert_eq!(movers, [4, 5, 6, 7]);
    }

    #[test]
    fn raising_a_valuation_inside_a_coalition_changes_nothing() {
        let g = Game::from_fn(3, true, ClassTag::Strict, |_, _| r(1)).unwrap();
        let rep = close_cns(&g, &Partition::grand(3), (0, 1), &r(2)).unwrap();
        assert_eq!(rep.distance, 0);
        assert_eq!(rep.result, Partition::grand(3));
    }

    #[test]
    fn lonely_agent_merges_after_update() {
        // Agent 0 sits alone; 1 and 2 are friends. Making 0 and 1 strong
        // friends lets 0 join, at distance 1.
        let g = Game::from_entries(3, true, ClassTag::Strict, [(0, 1, r(-1)), (0, 2, r(-1)), (1, 2, r(1))]).unwrap();
        let p = Partition::from_coalitions(3, [vec![0], vec![1, 2]]).unwrap();
        let rep = close_cns(&g, &p, (0, 1), &r(5)).unwrap();
        assert_eq!(rep.result, Partition::grand(3));
        assert_eq!(rep.distance, 1);
        // Agent 2 dislikes 0 and 2 keeps 1 in place, so no CIS move exists.
        let rep = cis_repair(&g, &p, (0, 1), &r(5), Policy::Random(1)).unwrap();
        assert_eq!(rep.result, p);
    }

    #[test]
    fn enemies_turned_friends_merge_under_cis() {
        let g = Game::from_entries(2, true, ClassTag::Feg, [(0, 1, r(-1))]).unwrap();
        let rep = cis_repair(&g, &Partition::singletons(2), (0, 1), &r(1), Policy::FirstInOrder).unwrap();
        assert_eq!(rep.distance, 1);
        assert_eq!(rep.result, Partition::grand(2));
    }

    #[test]
    fn preconditions_are_enforced() {
        let (g, p) = fig3();
        assert!(matches!(close_cns(&g, &p, (6, 7), &r(0)), Err(Error::Contract(_)) | Err(Error::Class(_))));
        let bad = Partition::singletons(8);
        assert!(matches!(close_cns(&g, &bad, (6, 7), &r(-1)), Err(Error::Contract(_))));
        let asym = Game::from_fn(3, false, ClassTag::Feg, |_, _| r(1)).unwrap();
        assert!(matches!(close_cns(&asym, &Partition::grand(3), (0, 1), &r(-1)), Err(Error::Contract(_))));
    }

    #[test]
    fn fig3_deciders() {
        let (g, p) = fig3();
        let mut inst = AlteredInstance {
            game: g,
            stable_start: p,
            update: UpdateEvent::single_pair(6, 7, r(-1)),
            notion: StabilityNotion::Cns,
            k: 4,
        };
        let out = decide_cns_111_sym_one_negative(&inst).unwrap();
        assert_eq!(out.distance, Some(4));
        inst.k = 3;
        assert!(!decide_cns_111_sym_one_negative(&inst).unwrap().found);
        inst.notion = StabilityNotion::Cis;
        assert!(decide_cns_111_sym_one_negative(&inst).is_err());
    }
}
