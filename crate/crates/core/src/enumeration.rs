//! Node sequences and repair scenarios over which the min-cut bound is
//! minimized.
//!
//! Both streams are lazy and hold only O(sequence length) state. Order is
//! lexicographic: node sequences permute the sorted reconstruction set, and
//! scenarios advance the last position's surviving-set choice fastest.
//!
//! A node sequence of length `k` has `τ_1 · … · τ_k` scenarios (one choice
//! per position); there is no factorial on that product.

use thiserror::Error;

use crate::model::DssSpec;

/// An ordering of the members of one reconstruction set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSequence {
    pub set_index: usize,
    pub nodes: Vec<usize>,
}

/// A node sequence plus one surviving-set choice per position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RepairScenario {
    pub sequence: NodeSequence,
    /// `choices[p]` indexes the surviving sets of `sequence.nodes[p]`.
    pub choices: Vec<usize>,
}

impl RepairScenario {
    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// `(node, chosen set)` pairs in failure order.
    pub fn steps(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.sequence
            .nodes
            .iter()
            .copied()
            .zip(self.choices.iter().copied())
    }

    /// Checks that the scenario's sequence is a permutation of its set and
    /// every choice is in range.
    pub fn is_consistent_with(&self, spec: &DssSpec) -> bool {
        let Some(set) = spec.reconstruction_sets().get(self.sequence.set_index) else {
            return false;
        };
        let mut sorted = self.sequence.nodes.clone();
        sorted.sort_unstable();
        sorted.as_slice() == set.as_slice()
            && self.choices.len() == self.sequence.nodes.len()
            && self
                .steps()
                .all(|(node, choice)| choice < spec.surviving_set_count(node))
    }
}

/// Lexicographic permutations of one reconstruction set.
pub struct NodeSequences {
    set_index: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for NodeSequences {
    type Item = NodeSequence;

    fn next(&mut self) -> Option<NodeSequence> {
        let nodes = self.current.take()?;
        let mut next = nodes.clone();
        if next_permutation(&mut next) {
            self.current = Some(next);
        }
        Some(NodeSequence {
            set_index: self.set_index,
            nodes,
        })
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let pivot = i - 1;
    let j = (i..v.len()).rev().find(|&j| v[j] > v[pivot]).unwrap();
    v.swap(pivot, j);
    v[i..].reverse();
    true
}

/// All node sequences of reconstruction set `set_index`.
///
/// # Panics
/// If `set_index` is out of range.
pub fn node_sequences(spec: &DssSpec, set_index: usize) -> NodeSequences {
    let set = &spec.reconstruction_sets()[set_index];
    NodeSequences {
        set_index,
        current: Some(set.as_slice().to_vec()),
    }
}

/// Cartesian product of surviving-set choices for one node sequence.
pub struct RepairScenarios {
    sequence: NodeSequence,
    radix: Vec<usize>,
    current: Option<Vec<usize>>,
}

impl Iterator for RepairScenarios {
    type Item = RepairScenario;

    fn next(&mut self) -> Option<RepairScenario> {
        let choices = self.current.take()?;
        let mut next = choices.clone();
        let mut advanced = false;
        for p in (0..next.len()).rev() {
            next[p] += 1;
            if next[p] < self.radix[p] {
                advanced = true;
                break;
            }
            next[p] = 0;
        }
        if advanced {
            self.current = Some(next);
        }
        Some(RepairScenario {
            sequence: self.sequence.clone(),
            choices,
        })
    }
}

pub fn repair_scenarios(spec: &DssSpec, sequence: &NodeSequence) -> RepairScenarios {
    let radix: Vec<usize> = sequence
        .nodes
        .iter()
        .map(|&n| spec.surviving_set_count(n))
        .collect();
    let current = radix.iter().all(|&r| r > 0).then(|| vec![0; radix.len()]);
    RepairScenarios {
        sequence: sequence.clone(),
        radix,
        current,
    }
}

/// Every scenario of every reconstruction set, in set order.
pub fn all_scenarios(spec: &DssSpec) -> impl Iterator<Item = RepairScenario> + '_ {
    (0..spec.reconstruction_sets().len())
        .flat_map(move |t| node_sequences(spec, t).flat_map(move |seq| repair_scenarios(spec, &seq)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("scenario count does not fit in 128 bits")]
pub struct CountOverflow;

/// Number of scenarios of one reconstruction set: `k_t! · ∏ τ`.
pub fn scenario_count(spec: &DssSpec, set_index: usize) -> Result<u128, CountOverflow> {
    let set = &spec.reconstruction_sets()[set_index];
    let mut count: u128 = 1;
    for (i, node) in set.iter().enumerate() {
        count = count
            .checked_mul((i + 1) as u128)
            .and_then(|c| c.checked_mul(spec.surviving_set_count(node) as u128))
            .ok_or(CountOverflow)?;
    }
    Ok(count)
}

/// Total number of information flow graphs, `Σ_t k_t! · ∏_{j ∈ A_t} τ_j`.
pub fn flow_graph_count(spec: &DssSpec) -> Result<u128, CountOverflow> {
    (0..spec.reconstruction_sets().len()).try_fold(0u128, |acc, t| {
        acc.checked_add(scenario_count(spec, t)?).ok_or(CountOverflow)
    })
}
