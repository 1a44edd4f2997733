//! Sequences of valuation updates, each followed by a repair, with the
//! distance and welfare bookkeeping needed to audit long runs.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distance::partition_distance;
use crate::dynamics::{default_max_steps, run_dynamics, Policy};
use crate::error::{Error, Result};
use crate::eval;
use crate::game::{ClassTag, Game};
use crate::instances::default_palette;
use crate::nearby::{nearest_stable_in, DEFAULT_VISITED_CAP};
use crate::partition::Partition;
use crate::rational::Rational;
use crate::repair::{cis_repair, close_cns};
use crate::stability::{is_stable, StabilityNotion};
use crate::update::{apply_update, UpdateEvent};

/// A start state and the single-pair updates applied to it in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UpdateSequence {
    pub initial_game: Game,
    pub initial_partition: Partition,
    pub updates: Vec<UpdateEvent>,
    pub notion: StabilityNotion,
}

/// How the partition is restored after each update.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairPolicy {
    /// The CNS repair; CNS in strict symmetric games.
    CloseCns,
    /// CIS dynamics from the old partition; CIS in strict symmetric games.
    CisDynamics,
    /// A nearest stable partition within the given distance.
    NearestStable(usize),
    /// First-in-order deviation dynamics. Symmetric games, or CIS in any
    /// game, where welfare is a potential.
    GreedyDynamics,
}

impl RepairPolicy {
    fn is_dynamics(self) -> bool {
        matches!(self, RepairPolicy::CisDynamics | RepairPolicy::GreedyDynamics)
    }
}

impl fmt::Display for RepairPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepairPolicy::CloseCns => f.write_str("close-cns"),
            RepairPolicy::CisDynamics => f.write_str("cis"),
            RepairPolicy::NearestStable(k) => write!(f, "nearest:{k}"),
            RepairPolicy::GreedyDynamics => f.write_str("greedy"),
        }
    }
}

/// `close-cns`, `cis`, `nearest:k` or `greedy`.
impl FromStr for RepairPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "close-cns" => Ok(RepairPolicy::CloseCns),
            "cis" | "cis-dynamics" => Ok(RepairPolicy::CisDynamics),
            "greedy" => Ok(RepairPolicy::GreedyDynamics),
            other => other
                .strip_prefix("nearest:")
                .and_then(|k| k.parse().ok())
                .map(RepairPolicy::NearestStable)
                .ok_or_else(|| Error::Parse(format!("unknown repair policy {other:?}"))),
        }
    }
}

/// Bookkeeping for one update and its repair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub distance: usize,
    /// Singletons after the repair.
    pub phi: usize,
    /// Welfare after the repair, in the updated game.
    pub sw: Rational,
    /// Welfare of the old partition in the old game.
    pub sw_before_update: Rational,
    /// Welfare of the old partition in the updated game.
    pub sw_after_update: Rational,
    /// Welfare change of each single-agent deviation, in order. Empty for
    /// policies that do not move one agent at a time.
    pub deviation_gains: Vec<Rational>,
}

impl StepRecord {
    pub fn update_delta(&self) -> Rational {
        self.sw_after_update.clone() - self.sw_before_update.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub policy: RepairPolicy,
    pub notion: StabilityNotion,
    pub n: usize,
    pub symmetric: bool,
    pub initial_phi: usize,
    pub initial_sw: Rational,
    pub per_step: Vec<StepRecord>,
    pub total_distance: usize,
    /// `total_distance / m`; absent for an empty or aborted run.
    pub average: Option<Rational>,
    pub completed: bool,
    /// Why the run stopped early.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl SequenceReport {
    pub fn final_phi(&self) -> usize {
        self.per_step.last().map_or(self.initial_phi, |s| s.phi)
    }

    /// Whether `sum d_i <= 4m + phi(start) - phi(end)`.
    pub fn within_cns_ledger(&self) -> bool {
        let m = self.per_step.len() as i64;
        (self.total_distance as i64) <= 4 * m + self.initial_phi as i64 - self.final_phi() as i64
    }

    /// `step,distance,phi,sw` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,distance,phi,sw\n");
        for (i, s) in self.per_step.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", i + 1, s.distance, s.phi, s.sw));
        }
        out
    }
}

fn check_policy(seq: &UpdateSequence, policy: RepairPolicy) -> Result<()> {
    let g = &seq.initial_game;
    let strict_sym = g.is_symmetric() && !g.distinct_values().iter().any(Rational::is_zero);
    let fail = |why: &str| Err(Error::contract(format!("policy {policy} {why}")));
    match policy {
        RepairPolicy::CloseCns if seq.notion != StabilityNotion::Cns => fail("repairs CNS only"),
        RepairPolicy::CisDynamics if seq.notion != StabilityNotion::Cis => fail("repairs CIS only"),
        RepairPolicy::CloseCns | RepairPolicy::CisDynamics if !strict_sym => {
            fail("needs a strict symmetric game")
        }
        RepairPolicy::GreedyDynamics if !g.is_symmetric() && seq.notion != StabilityNotion::Cis => {
            fail("needs a symmetric game unless the notion is CIS")
        }
        _ => Ok(()),
    }
}

/// Welfare change of each move of `steps`, replayed from `start`.
fn replay_gains(h: &Game, start: &Partition, steps: &crate::dynamics::DynamicsTrace) -> Result<Vec<Rational>> {
    let mut p = start.clone();
    let mut sw = eval::social_welfare(h, &p);
    let mut gains = Vec::with_capacity(steps.steps.len());
    for s in &steps.steps {
        p = p.moved(s.agent, s.target)?;
        let next = eval::social_welfare(h, &p);
        gains.push(next.clone() - sw);
        sw = next;
    }
    Ok(gains)
}

/// Applies every update in turn and repairs with `policy`.
///
/// A policy that cannot restore stability ends the run; the report then
/// holds the steps completed so far and `failure` says why.
pub fn run_sequence(seq: &UpdateSequence, policy: RepairPolicy) -> Result<SequenceReport> {
    let g0 = &seq.initial_game;
    if seq.initial_partition.n() != g0.n() {
        return Err(Error::input("partition and game disagree on the number of agents"));
    }
    if !is_stable(g0, &seq.initial_partition, seq.notion) {
        return Err(Error::contract(format!("initial partition is not {}", seq.notion)));
    }
    check_policy(seq, policy)?;
    let mut report = SequenceReport {
        policy,
        notion: seq.notion,
        n: g0.n(),
        symmetric: g0.is_symmetric(),
        initial_phi: seq.initial_partition.count_singletons(),
        initial_sw: eval::social_welfare(g0, &seq.initial_partition),
        per_step: Vec::with_capacity(seq.updates.len()),
        total_distance: 0,
        average: None,
        completed: false,
        failure: None,
    };
    let mut g = g0.clone();
    let mut p = seq.initial_partition.clone();
    for (i, u) in seq.updates.iter().enumerate() {
        let pair = u.as_single_pair().map(|(a, b, v)| ((a, b), v.clone()));
        let Some((pair, value)) = pair else {
            return Err(Error::input(format!("update {i} does not change exactly one pair")));
        };
        let h = apply_update(&g, u)?;
        let sw_before_update = eval::social_welfare(&g, &p);
        let sw_after_update = eval::social_welfare(&h, &p);
        let (next, gains) = match policy {
            RepairPolicy::CloseCns => (close_cns(&g, &p, pair, &value)?.result, Vec::new()),
            RepairPolicy::CisDynamics => {
                let r = cis_repair(&g, &p, pair, &value, Policy::FirstInOrder)?;
                let gains = replay_gains(&h, &p, &r.steps)?;
                (r.result, gains)
            }
            RepairPolicy::GreedyDynamics => {
                let t = run_dynamics(&h, &p, seq.notion, Policy::FirstInOrder, default_max_steps(h.n()));
                if !t.converged {
                    report.failure = Some(format!("update {i}: dynamics did not converge"));
                    return Ok(report);
                }
                let gains = replay_gains(&h, &p, &t)?;
                (t.final_partition, gains)
            }
            RepairPolicy::NearestStable(k) => {
                let found = nearest_stable_in(&h, &p, seq.notion, k, DEFAULT_VISITED_CAP)?;
                match found.partition {
                    Some(q) => (q, Vec::new()),
                    None => {
                        report.failure = Some(format!("update {i}: no {} partition within distance {k}", seq.notion));
                        return Ok(report);
                    }
                }
            }
        };
        if !is_stable(&h, &next, seq.notion) {
            report.failure = Some(format!("update {i}: repair left a partition that is not {}", seq.notion));
            return Ok(report);
        }
        let distance = partition_distance(&p, &next)?;
        report.total_distance += distance;
        report.per_step.push(StepRecord {
            distance,
            phi: next.count_singletons(),
            sw: eval::social_welfare(&h, &next),
            sw_before_update,
            sw_after_update,
            deviation_gains: gains,
        });
        g = h;
        p = next;
    }
    report.completed = true;
    if !report.per_step.is_empty() {
        report.average = Some(Rational::new(report.total_distance as i64, report.per_step.len() as i64)?);
    }
    Ok(report)
}

/// `m` random single-pair updates, deterministic in `seed`. Each picks a
/// uniform pair and a palette value other than the pair's current one that
/// the game's class allows. `palette` defaults to the class palette.
pub fn gen_update_sequence(
    g0: &Game,
    p0: &Partition,
    notion: StabilityNotion,
    m: usize,
    seed: u64,
    palette: Option<&[Rational]>,
) -> Result<UpdateSequence> {
    let n = g0.n();
    if n < 2 && m > 0 {
        return Err(Error::input("updates need at least two agents"));
    }
    let palette = palette.map_or_else(|| default_palette(g0.class(), n), <[Rational]>::to_vec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = g0.clone();
    let mut updates = Vec::with_capacity(m);
    const RETRIES: usize = 1000;
    for _ in 0..m {
        let mut chosen = None;
        for _ in 0..RETRIES {
            let a = rng.gen_range(0..n);
            let b = (a + rng.gen_range(1..n)) % n;
            let current = g.value(a, b);
            let legal: Vec<&Rational> =
                palette.iter().filter(|v| *v != current && g.class().allows(v, n)).collect();
            if let Some(v) = legal.choose(&mut rng) {
                chosen = Some(UpdateEvent::single_pair(a, b, (*v).clone()));
                break;
            }
        }
        let u = chosen.ok_or_else(|| Error::input("the palette leaves no legal new value"))?;
        g = apply_update(&g, &u)?;
        updates.push(u);
    }
    Ok(UpdateSequence { initial_game: g0.clone(), initial_partition: p0.clone(), updates, notion })
}

/// The welfare ledger of a dynamics run, re-derived from its report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PotentialAudit {
    /// Least welfare gain a deviation may have.
    pub deviation_bound: Rational,
    /// Least welfare change an update may cause.
    pub update_bound: Rational,
    pub deviations: usize,
    /// `(2 n(n-1) - update_bound * m) / deviation_bound`.
    pub max_deviations: Rational,
    pub min_deviation_gain: Option<Rational>,
    pub min_update_delta: Option<Rational>,
}

/// Checks a dynamics run on a `{-1, 0, 1}` game against the welfare
/// potential: the per-deviation gain, the per-update loss, that the
/// deltas telescope, the welfare range and the implied deviation count.
pub fn potential_audit(report: &SequenceReport, class: ClassTag) -> Result<PotentialAudit> {
    if !matches!(class, ClassTag::Feng | ClassTag::Feg) {
        return Err(Error::contract(format!("the audit needs values in {{-1, 0, 1}}, got class {class}")));
    }
    if !report.policy.is_dynamics() {
        return Err(Error::contract(format!("policy {} does not move one agent at a time", report.policy)));
    }
    let (dev_bound, upd_bound) = if report.symmetric {
        (Rational::from(2), Rational::from(-4))
    } else if report.notion == StabilityNotion::Cis {
        (Rational::one(), Rational::from(-2))
    } else {
        return Err(Error::contract("non-symmetric runs are audited for CIS only"));
    };
    let n = report.n as i64;
    let sw_max = Rational::from(n * (n - 1));
    let in_range = |sw: &Rational| *sw <= sw_max && *sw >= -sw_max.clone();
    if !in_range(&report.initial_sw) {
        return Err(Error::contract(format!("initial welfare {} out of range", report.initial_sw)));
    }
    let mut sw = report.initial_sw.clone();
    let mut deviations = 0;
    let mut min_dev: Option<Rational> = None;
    let mut min_upd: Option<Rational> = None;
    for (i, s) in report.per_step.iter().enumerate() {
        let step = i + 1;
        if s.sw_before_update != sw {
            return Err(Error::contract(format!("step {step}: welfare does not carry over from the previous step")));
        }
        let du = s.update_delta();
        if du < upd_bound {
            return Err(Error::contract(format!("step {step}: update changed welfare by {du} < {upd_bound}")));
        }
        min_upd = Some(min_upd.map_or(du.clone(), |m| m.min(du)));
        let mut cur = s.sw_after_update.clone();
        for (j, gain) in s.deviation_gains.iter().enumerate() {
            if *gain < dev_bound {
                return Err(Error::contract(format!(
                    "step {step}, deviation {}: welfare gain {gain} < {dev_bound}",
                    j + 1
                )));
            }
            min_dev = Some(min_dev.map_or(gain.clone(), |m| m.min(gain.clone())));
            cur = cur + gain.clone();
            if !in_range(&cur) {
                return Err(Error::contract(format!("step {step}: welfare {cur} out of range")));
            }
        }
        if cur != s.sw {
            return Err(Error::contract(format!("step {step}: deviation gains do not sum to the recorded welfare")));
        }
        deviations += s.deviation_gains.len();
        sw = s.sw.clone();
    }
    let m = Rational::from(report.per_step.len());
    let budget = Rational::from(2) * sw_max - upd_bound.clone() * m;
    let max_deviations = Rational::new(budget.numer().clone(), budget.denom().clone() * dev_bound.numer())?;
    if Rational::from(deviations) > max_deviations {
        return Err(Error::contract(format!("{deviations} deviations exceed the potential bound {max_deviations}")));
    }
    Ok(PotentialAudit {
        deviation_bound: dev_bound,
        update_bound: upd_bound,
        deviations,
        max_deviations,
        min_deviation_gain: min_dev,
        min_update_delta: min_upd,
    })
}
