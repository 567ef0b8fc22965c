//! Closed-form min-cut bound `Q` for a concrete assignment.
//!
//! For a repair scenario the bound contributes, per position `i`,
//! `min{α_λi, Σ β(λi, μ, S)}` where `μ` ranges over the chosen helpers that
//! have not already failed earlier in the sequence. `Q` is the minimum of the
//! per-scenario sums over every reconstruction set, node order and
//! surviving-set choice.

use num_traits::Zero;
use thiserror::Error;

use crate::enumeration::{
    flow_graph_count, node_sequences, repair_scenarios, CountOverflow, NodeSequence, RepairScenario,
};
use crate::model::{Assignment, DssSpec};
use crate::number::Rational;

pub const DEFAULT_MAX_SCENARIOS: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("{count} scenarios exceed the enumeration ceiling of {limit}; raise --max-scenarios")]
    TooManyScenarios { count: u128, limit: u128 },
    #[error(transparent)]
    Overflow(#[from] CountOverflow),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub q: Rational,
    /// First minimizing scenario in enumeration order.
    pub argmin: RepairScenario,
    /// Minimum term per reconstruction set, in spec order.
    pub per_set: Vec<Rational>,
}

fn check_limit(spec: &DssSpec, limit: u128) -> Result<(), BoundError> {
    let count = flow_graph_count(spec)?;
    if count > limit {
        return Err(BoundError::TooManyScenarios { count, limit });
    }
    Ok(())
}

/// Download from the helpers of set `choice` of `node` that are not in `failed`.
fn fresh_download(
    spec: &DssSpec,
    assignment: &Assignment,
    node: usize,
    choice: usize,
    failed: &[usize],
) -> Rational {
    spec.surviving_sets(node)[choice]
        .iter()
        .zip(assignment.set_downloads(node, choice))
        .filter(|(helper, _)| !failed.contains(helper))
        .fold(Rational::zero(), |acc, (_, b)| acc + b)
}

/// Closed-form cut value of one scenario.
pub fn scenario_term(spec: &DssSpec, assignment: &Assignment, scenario: &RepairScenario) -> Rational {
    let nodes = &scenario.sequence.nodes;
    scenario
        .steps()
        .enumerate()
        .map(|(p, (node, choice))| {
            let download = fresh_download(spec, assignment, node, choice, &nodes[..p]);
            std::cmp::min(assignment.alpha()[node].clone(), download)
        })
        .fold(Rational::zero(), |acc, t| acc + t)
}

pub fn q_bound(spec: &DssSpec, assignment: &Assignment) -> Result<BoundReport, BoundError> {
    q_bound_with_limit(spec, assignment, DEFAULT_MAX_SCENARIOS)
}

/// Minimizes [`scenario_term`] over every scenario.
pub fn q_bound_with_limit(
    spec: &DssSpec,
    assignment: &Assignment,
    max_scenarios: u128,
) -> Result<BoundReport, BoundError> {
    check_limit(spec, max_scenarios)?;
    let mut best: Option<(Rational, RepairScenario)> = None;
    let mut per_set = Vec::with_capacity(spec.reconstruction_sets().len());
    for t in 0..spec.reconstruction_sets().len() {
        let mut set_best: Option<Rational> = None;
        for seq in node_sequences(spec, t) {
            for scenario in repair_scenarios(spec, &seq) {
                let term = scenario_term(spec, assignment, &scenario);
                if set_best.as_ref().is_none_or(|b| term < *b) {
                    set_best = Some(term.clone());
                }
                if best.as_ref().is_none_or(|(b, _)| term < *b) {
                    best = Some((term, scenario));
                }
            }
        }
        per_set.push(set_best.expect("every set has at least one scenario"));
    }
    let (q, argmin) = best.expect("validated specs have reconstruction sets");
    Ok(BoundReport { q, argmin, per_set })
}

pub fn q_bound_exchanged(spec: &DssSpec, assignment: &Assignment) -> Result<Rational, BoundError> {
    q_bound_exchanged_with_limit(spec, assignment, DEFAULT_MAX_SCENARIOS)
}

/// Same value as [`q_bound`], with the surviving-set minimum taken
/// independently at each position of every node sequence.
pub fn q_bound_exchanged_with_limit(
    spec: &DssSpec,
    assignment: &Assignment,
    max_scenarios: u128,
) -> Result<Rational, BoundError> {
    check_limit(spec, max_scenarios)?;
    let mut best: Option<Rational> = None;
    for t in 0..spec.reconstruction_sets().len() {
        for seq in node_sequences(spec, t) {
            let value = sequence_value(spec, assignment, &seq);
            if best.as_ref().is_none_or(|b| value < *b) {
                best = Some(value);
            }
        }
    }
    Ok(best.expect("validated specs have reconstruction sets"))
}

/// `Σ_i min{α_λi, min_ℓ fresh download}` for one node sequence.
pub fn sequence_value(spec: &DssSpec, assignment: &Assignment, seq: &NodeSequence) -> Rational {
    seq.nodes
        .iter()
        .enumerate()
        .map(|(p, &node)| {
            let cheapest = (0..spec.surviving_set_count(node))
                .map(|choice| fresh_download(spec, assignment, node, choice, &seq.nodes[..p]))
                .min()
                .expect("every node has a surviving set");
            std::cmp::min(assignment.alpha()[node].clone(), cheapest)
        })
        .fold(Rational::zero(), |acc, t| acc + t)
}

/// `Σ_{i=1}^{k} min{α, (d − i + 1)·β}` for the homogeneous system where any
/// `k` nodes reconstruct and any `d` nodes repair. Coefficients that would go
/// negative (`i > d + 1`) are clamped to zero.
pub fn homogeneous_term(alpha: &Rational, beta: &Rational, k: usize, d: usize) -> Rational {
    (1..=k)
        .map(|i| {
            let helpers = (d + 1).saturating_sub(i);
            std::cmp::min(alpha.clone(), beta * Rational::from_integer(helpers.into()))
        })
        .fold(Rational::zero(), |acc, t| acc + t)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileSizeCheck {
    pub feasible: bool,
    pub q: Rational,
    /// `Q − B`; negative when infeasible.
    pub margin: Rational,
}

/// Whether the system's file size fits under `Q` for this assignment.
pub fn file_size_check(spec: &DssSpec, assignment: &Assignment) -> Result<FileSizeCheck, BoundError> {
    file_size_check_with_limit(spec, assignment, DEFAULT_MAX_SCENARIOS)
}

pub fn file_size_check_with_limit(
    spec: &DssSpec,
    assignment: &Assignment,
    max_scenarios: u128,
) -> Result<FileSizeCheck, BoundError> {
    let q = q_bound_with_limit(spec, assignment, max_scenarios)?.q;
    let margin = &q - spec.file_size();
    Ok(FileSizeCheck {
        feasible: spec.file_size() <= &q,
        q,
        margin,
    })
}
