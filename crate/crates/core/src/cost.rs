//! System storage cost, per-node repair cost and system repair cost.
//!
//! All three are normalized per unit of file: `C_s = (1/B) Σ s_j α_j`,
//! `r(β_i) = (1/(B τ_i)) Σ_ℓ Σ_{j ∈ S_i^(ℓ)} r_j β(i, j, S_i^(ℓ))` and
//! `C_r = Σ_i r(β_i)`. The repair average weights every surviving set of a
//! node equally.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::model::{Assignment, DssSpec};
use crate::number::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("file size must be positive to normalize costs")]
    NonPositiveFileSize,
    #[error("expected {expected} storage amounts, got {got}")]
    AlphaLength { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostReport {
    pub storage: Rational,
    pub node_repair: Vec<Rational>,
    pub repair: Rational,
}

fn check_file_size(spec: &DssSpec) -> Result<(), CostError> {
    if spec.file_size().is_positive() {
        Ok(())
    } else {
        Err(CostError::NonPositiveFileSize)
    }
}

pub fn storage_cost(spec: &DssSpec, alpha: &[Rational]) -> Result<Rational, CostError> {
    check_file_size(spec)?;
    if alpha.len() != spec.node_count() {
        return Err(CostError::AlphaLength {
            expected: spec.node_count(),
            got: alpha.len(),
        });
    }
    let weighted = spec
        .storage_cost()
        .iter()
        .zip(alpha)
        .fold(Rational::zero(), |acc, (s, a)| acc + s * a);
    Ok(weighted / spec.file_size())
}

pub fn node_repair_cost(spec: &DssSpec, assignment: &Assignment, node: usize) -> Result<Rational, CostError> {
    check_file_size(spec)?;
    let costs = spec.download_cost();
    let total = spec
        .surviving_sets(node)
        .iter()
        .enumerate()
        .flat_map(|(l, set)| set.iter().zip(assignment.set_downloads(node, l)))
        .fold(Rational::zero(), |acc, (helper, beta)| {
            acc + &costs[helper] * beta
        });
    let tau = Rational::from_integer(spec.surviving_set_count(node).into());
    Ok(total / (spec.file_size() * tau))
}

pub fn system_repair_cost(spec: &DssSpec, assignment: &Assignment) -> Result<Rational, CostError> {
    Ok(evaluate(spec, assignment)?.repair)
}

pub fn evaluate(spec: &DssSpec, assignment: &Assignment) -> Result<CostReport, CostError> {
    let storage = storage_cost(spec, assignment.alpha())?;
    let node_repair = (0..spec.node_count())
        .map(|i| node_repair_cost(spec, assignment, i))
        .collect::<Result<Vec<_>, _>>()?;
    let repair = node_repair.iter().fold(Rational::zero(), |acc, r| acc + r);
    Ok(CostReport {
        storage,
        node_repair,
        repair,
    })
}

/// Objective coefficient of α_j in `C_s`.
pub fn storage_coefficient(spec: &DssSpec, node: usize) -> Rational {
    &spec.storage_cost()[node] / spec.file_size()
}

/// Objective coefficient of β(node, set, helper) in `C_r`.
pub fn repair_coefficient(spec: &DssSpec, node: usize, helper: usize) -> Rational {
    let tau = Rational::from_integer(spec.surviving_set_count(node).into());
    &spec.download_cost()[helper] / (spec.file_size() * tau)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{example_system, SpecDraft};
    use crate::number::{int, ratio};

    #[test]
    fn fixture_costs_match_worked_example() {
        let (spec, asg) = example_system();
        let report = evaluate(&spec, &asg).unwrap();
        assert_eq!(report.storage, int(68));
        assert_eq!(
            report.node_repair,
            vec![ratio(1, 2), ratio(4, 3), ratio(1, 2), ratio(3, 4), ratio(1, 2)]
        );
        assert_eq!(report.repair, ratio(43, 12));
    }

    #[test]
    fn zero_inputs_cost_nothing() {
        let (spec, _) = example_system();
        let zero = Assignment::uniform(&spec, int(0), int(0));
        let report = evaluate(&spec, &zero).unwrap();
        assert_eq!(report.storage, int(0));
        assert_eq!(report.repair, int(0));
    }

    #[test]
    fn costs_scale_linearly() {
        let (spec, asg) = example_system();
        let doubled = Assignment::from_triples(
            &spec,
            asg.alpha().iter().map(|a| a * int(2)).collect(),
            asg.triples(&spec).map(|(i, l, j, b)| (i, l, j, b * int(2))),
        )
        .unwrap();
        let base = evaluate(&spec, &asg).unwrap();
        let twice = evaluate(&spec, &doubled).unwrap();
        assert_eq!(twice.storage, &base.storage * int(2));
        assert_eq!(twice.repair, &base.repair * int(2));

        let mut draft = spec.to_draft();
        draft.download_cost = draft.download_cost.iter().map(|r| r * int(3)).collect();
        let scaled = DssSpec::new(&draft).unwrap();
        for i in 0..5 {
            assert_eq!(
                node_repair_cost(&scaled, &asg, i).unwrap(),
                node_repair_cost(&spec, &asg, i).unwrap() * int(3)
            );
        }
    }

    #[test]
    fn single_node_repair_equals_system_repair() {
        let draft = SpecDraft {
            file_size: int(2),
            storage_cost: vec![int(1), int(1)],
            download_cost: vec![int(3), int(5)],
            reconstruction_sets: vec![vec![0]],
            surviving_sets: vec![vec![vec![1]], vec![vec![0]]],
        };
        let spec = DssSpec::new(&draft).unwrap();
        let asg = Assignment::from_fn(&spec, vec![int(1), int(0)], |i, _, _| {
            int(if i == 0 { 1 } else { 0 })
        })
        .unwrap();
        assert_eq!(
            system_repair_cost(&spec, &asg).unwrap(),
            node_repair_cost(&spec, &asg, 0).unwrap()
        );
        assert_eq!(node_repair_cost(&spec, &asg, 0).unwrap(), ratio(5, 2));
    }

    #[test]
    fn zero_file_size_is_rejected() {
        let (spec, asg) = example_system();
        let mut draft = spec.to_draft();
        draft.file_size = int(0);
        let spec = DssSpec::new(&draft).unwrap();
        assert_eq!(
            storage_cost(&spec, asg.alpha()),
            Err(CostError::NonPositiveFileSize)
        );
    }
}
