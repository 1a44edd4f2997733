//! Deviation dynamics: repeatedly let one agent deviate until none can.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::eval::{self, Move};
use crate::game::Game;
use crate::partition::{Partition, Target};
use crate::rational::Rational;
use crate::stability::StabilityNotion;

/// Which available deviation is applied at each step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Lowest agent id, then first target in canonical order.
    FirstInOrder,
    /// Largest target coalition (a new singleton counts as size 0), ties
    /// broken as in `FirstInOrder`.
    LargestTargetCoalition,
    /// Uniform among all available deviations.
    Random(u64),
}

/// One applied deviation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicsStep {
    pub agent: usize,
    /// Members of the coalition the agent left, including the agent.
    pub source: Vec<usize>,
    /// Index into the partition before the move.
    #[serde(serialize_with = "crate::io::serialize_target")]
    pub target: Target,
    pub u_before: Rational,
    pub u_after: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DynamicsTrace {
    pub steps: Vec<DynamicsStep>,
    pub converged: bool,
    #[serde(rename = "final")]
    pub final_partition: Partition,
}

impl DynamicsTrace {
    /// One JSON object per step, newline-terminated.
    pub fn to_json_lines(&self) -> String {
        #[derive(Serialize)]
        struct Line<'a> {
            agent: usize,
            #[serde(serialize_with = "crate::io::serialize_target")]
            target: Target,
            u_before: &'a Rational,
            u_after: &'a Rational,
        }
        self.steps
            .iter()
            .map(|s| {
                let line = Line { agent: s.agent, target: s.target, u_before: &s.u_before, u_after: &s.u_after };
                serde_json::to_string(&line).expect("plain data") + "\n"
            })
            .collect()
    }

    /// Distinct agents that moved, in order of first move.
    pub fn movers(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        for s in &self.steps {
            if !out.contains(&s.agent) {
                out.push(s.agent);
            }
        }
        out
    }
}

/// Default step cap: `10 n^3`.
pub fn default_max_steps(n: usize) -> usize {
    10 * n.max(1).pow(3)
}

struct Chooser {
    policy: Policy,
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    fn new(policy: Policy) -> Self {
        let rng = match policy {
            Policy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            _ => None,
        };
        Chooser { policy, rng }
    }

    fn pick(&mut self, g: &Game, p: &Partition, x: StabilityNotion) -> Option<Move> {
        match self.policy {
            Policy::FirstInOrder => eval::moves(g, p, Some(x), true).into_iter().next(),
            Policy::LargestTargetCoalition => {
                let size = |m: &Move| match m.target {
                    Target::Coalition(c) => p.members(c).len(),
                    Target::NewSingleton => 0,
                };
                let mut best: Option<Move> = None;
                for m in eval::moves(g, p, Some(x), false) {
                    if best.as_ref().is_none_or(|b| size(&m) > size(b)) {
                        best = Some(m);
                    }
                }
                best
            }
            Policy::Random(_) => {
                let mut all = eval::moves(g, p, Some(x), false);
                if all.is_empty() {
                    return None;
                }
                let k = self.rng.as_mut().expect("seeded").gen_range(0..all.len());
                Some(all.swap_remove(k))
            }
        }
    }
}

/// Applies `x`-deviations chosen by `policy` until none is left or
/// `max_steps` moves have been made.
///
/// # Panics
/// If `p0` and `g` disagree on the number of agents.
pub fn run_dynamics(
    g: &Game,
    p0: &Partition,
    x: StabilityNotion,
    policy: Policy,
    max_steps: usize,
) -> DynamicsTrace {
    let mut chooser = Chooser::new(policy);
    let mut p = p0.clone();
    let mut steps = Vec::new();
    loop {
        let Some(m) = chooser.pick(g, &p, x) else {
            return DynamicsTrace { steps, converged: true, final_partition: p };
        };
        if steps.len() >= max_steps {
            return DynamicsTrace { steps, converged: false, final_partition: p };
        }
        let next = p.moved(m.agent, m.target).expect("evaluator only proposes legal moves");
        steps.push(DynamicsStep {
            agent: m.agent,
            source: p.coalition_containing(m.agent).to_vec(),
            target: m.target,
            u_before: m.before,
            u_after: m.after,
        });
        p = next;
    }
}
