//! Information flow graphs and exact max-flow / min-cut on them.
//!
//! [`Network`] is a plain directed graph with [`Capacity`] edges and an
//! Edmonds–Karp max-flow over exact rationals. [`FlowGraph`] builds the
//! network for one repair scenario:
//!
//! * `s → In_i` (∞) and `In_i → Out_i` (α_i) for every node at step 0;
//! * for each position `p` of the sequence, `In'_p → Out'_p` (α of the node)
//!   and `Out'_p → D` (∞);
//! * one download edge per helper of the chosen surviving set, leaving the
//!   helper's most recent `Out'` if it was repaired earlier in the sequence
//!   and its step-0 `Out` otherwise.

use std::collections::VecDeque;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::enumeration::RepairScenario;
use crate::model::{Assignment, DssSpec};
use crate::number::{Capacity, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub capacity: Capacity,
}

/// Directed graph with exact capacities.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Network {
    vertex_count: usize,
    edges: Vec<Edge>,
}

/// Result of a max-flow computation. `edge_flow[e]` is the flow on edge `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxFlow {
    pub value: Capacity,
    pub edge_flow: Vec<Rational>,
}

/// A source/sink separating cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutValue {
    pub capacity: Capacity,
    /// Indices of the edges leaving the source side.
    pub edges: Vec<usize>,
    pub cardinality: usize,
    pub source_side: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("exhaustive cut enumeration over {free} free vertices exceeds the limit of {limit}")]
pub struct TooLarge {
    pub free: usize,
    pub limit: usize,
}

/// Largest number of non-terminal vertices [`Network::exhaustive_min_cut`]
/// will enumerate.
pub const EXHAUSTIVE_VERTEX_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Arc {
    Forward(usize),
    Backward(usize),
}

impl Network {
    pub fn new(vertex_count: usize) -> Self {
        Network {
            vertex_count,
            edges: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, capacity: Capacity) -> usize {
        assert!(from < self.vertex_count && to < self.vertex_count);
        assert!(!matches!(&capacity, Capacity::Finite(c) if c.is_negative()));
        self.edges.push(Edge { from, to, capacity });
        self.edges.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn adjacency(&self) -> Vec<Vec<(usize, Arc)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (e, edge) in self.edges.iter().enumerate() {
            adj[edge.from].push((edge.to, Arc::Forward(e)));
            adj[edge.to].push((edge.from, Arc::Backward(e)));
        }
        adj
    }

    fn residual(&self, arc: Arc, flow: &[Rational]) -> Capacity {
        match arc {
            Arc::Forward(e) => self.edges[e].capacity.minus(&flow[e]),
            Arc::Backward(e) => Capacity::Finite(flow[e].clone()),
        }
    }

    /// Edmonds–Karp on exact rationals. An augmenting path made only of
    /// infinite edges makes the value infinite and stops the search.
    pub fn max_flow(&self, source: usize, sink: usize) -> MaxFlow {
        let adj = self.adjacency();
        let mut flow = vec![Rational::zero(); self.edges.len()];
        let mut value = Rational::zero();
        loop {
            let mut parent: Vec<Option<(usize, Arc)>> = vec![None; self.vertex_count];
            let mut seen = vec![false; self.vertex_count];
            seen[source] = true;
            let mut queue = VecDeque::from([source]);
            while let Some(v) = queue.pop_front() {
                if v == sink {
                    break;
                }
                for &(w, arc) in &adj[v] {
                    if !seen[w] && self.residual(arc, &flow).is_positive() {
                        seen[w] = true;
                        parent[w] = Some((v, arc));
                        queue.push_back(w);
                    }
                }
            }
            if !seen[sink] {
                return MaxFlow {
                    value: Capacity::Finite(value),
                    edge_flow: flow,
                };
            }

            let mut path = Vec::new();
            let mut bottleneck = Capacity::Infinite;
            let mut v = sink;
            while let Some((u, arc)) = parent[v] {
                bottleneck = bottleneck.min_of(self.residual(arc, &flow));
                path.push(arc);
                v = u;
            }
            let Capacity::Finite(delta) = bottleneck else {
                return MaxFlow {
                    value: Capacity::Infinite,
                    edge_flow: flow,
                };
            };
            for arc in path {
                match arc {
                    Arc::Forward(e) => flow[e] += &delta,
                    Arc::Backward(e) => flow[e] -= &delta,
                }
            }
            value += delta;
        }
    }

    /// Cut induced by a source-side vertex mask.
    pub fn cut(&self, source_side: Vec<bool>) -> CutValue {
        let edges: Vec<usize> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| source_side[e.from] && !source_side[e.to])
            .map(|(i, _)| i)
            .collect();
        let capacity = edges.iter().map(|&e| self.edges[e].capacity.clone()).sum();
        CutValue {
            capacity,
            cardinality: edges.len(),
            edges,
            source_side,
        }
    }

    /// Minimum cut read off the residual graph of a maximum flow.
    pub fn min_cut(&self, source: usize, sink: usize) -> CutValue {
        let flow = self.max_flow(source, sink);
        let adj = self.adjacency();
        let mut side = vec![false; self.vertex_count];
        side[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &(w, arc) in &adj[v] {
                if !side[w] && self.residual(arc, &flow.edge_flow).is_positive() {
                    side[w] = true;
                    queue.push_back(w);
                }
            }
        }
        debug_assert!(flow.value.is_infinite() || !side[sink]);
        self.cut(side)
    }

    /// Fewest edges leaving the source side of any source/sink separation,
    /// computed as a unit-capacity max-flow (Menger).
    pub fn min_cut_cardinality(&self, source: usize, sink: usize) -> usize {
        let mut unit = Network::new(self.vertex_count);
        for e in &self.edges {
            unit.add_edge(e.from, e.to, Capacity::Finite(crate::number::one()));
        }
        match unit.max_flow(source, sink).value {
            Capacity::Finite(v) => v.to_integer().try_into().expect("edge count fits usize"),
            Capacity::Infinite => unreachable!("unit capacities are finite"),
        }
    }

    /// Brute force over every vertex bipartition: returns the minimum cut
    /// capacity and the minimum number of crossing edges among cuts with at
    /// least one crossing edge.
    pub fn exhaustive_min_cut(
        &self,
        source: usize,
        sink: usize,
    ) -> Result<(Capacity, Option<usize>), TooLarge> {
        let free: Vec<usize> = (0..self.vertex_count)
            .filter(|&v| v != source && v != sink)
            .collect();
        if free.len() > EXHAUSTIVE_VERTEX_LIMIT {
            return Err(TooLarge {
                free: free.len(),
                limit: EXHAUSTIVE_VERTEX_LIMIT,
            });
        }
        let mut best = Capacity::Infinite;
        let mut best_card: Option<usize> = None;
        let mut side = vec![false; self.vertex_count];
        for mask in 0u64..(1u64 << free.len()) {
            side[source] = true;
            side[sink] = false;
            for (bit, &v) in free.iter().enumerate() {
                side[v] = mask >> bit & 1 == 1;
            }
            let mut cap = Capacity::zero();
            let mut card = 0;
            for e in &self.edges {
                if side[e.from] && !side[e.to] {
                    cap = cap + e.capacity.clone();
                    card += 1;
                }
            }
            if cap < best {
                best = cap;
            }
            if card > 0 && best_card.is_none_or(|b| card < b) {
                best_card = Some(card);
            }
        }
        Ok((best, best_card))
    }

    /// Checks the capacity constraint on every edge and conservation at
    /// every vertex other than `source` and `sink`.
    pub fn is_valid_flow(&self, flow: &MaxFlow, source: usize, sink: usize) -> bool {
        let capacity_ok = self
            .edges
            .iter()
            .zip(&flow.edge_flow)
            .all(|(e, f)| !f.is_negative() && Capacity::Finite(f.clone()) <= e.capacity);
        let mut balance = vec![Rational::zero(); self.vertex_count];
        for (e, f) in self.edges.iter().zip(&flow.edge_flow) {
            balance[e.from] -= f;
            balance[e.to] += f;
        }
        let conserved = balance
            .iter()
            .enumerate()
            .all(|(v, b)| v == source || v == sink || b.is_zero());
        let value_ok = match &flow.value {
            Capacity::Finite(v) => balance[sink] == *v,
            Capacity::Infinite => true,
        };
        capacity_ok && conserved && value_ok
    }
}

/// Whether step-0 helpers are limited by their own storage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepZeroStorage {
    /// `In_i → Out_i` carries α_i, as every storage edge does.
    #[default]
    Capped,
    /// `In_i → Out_i` is infinite, so step-0 helpers act as unlimited
    /// sources. Max-flow on this variant equals the closed-form scenario term.
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("scenario does not match the system description")]
    InvalidScenario,
}

pub const SOURCE: usize = 0;
pub const SINK: usize = 1;

/// Information flow graph for one repair scenario.
#[derive(Debug, Clone)]
pub struct FlowGraph {
    network: Network,
    node_count: usize,
    scenario: RepairScenario,
}

impl FlowGraph {
    pub fn build(
        spec: &DssSpec,
        assignment: &Assignment,
        scenario: &RepairScenario,
    ) -> Result<FlowGraph, BuildError> {
        Self::build_with(spec, assignment, scenario, StepZeroStorage::Capped)
    }

    pub fn build_with(
        spec: &DssSpec,
        assignment: &Assignment,
        scenario: &RepairScenario,
        step_zero: StepZeroStorage,
    ) -> Result<FlowGraph, BuildError> {
        if !scenario.is_consistent_with(spec) {
            return Err(BuildError::InvalidScenario);
        }
        let n = spec.node_count();
        let k = scenario.len();
        let mut net = Network::new(2 + 2 * n + 2 * k);
        let alpha = assignment.alpha();
        for i in 0..n {
            net.add_edge(SOURCE, in_vertex(i), Capacity::Infinite);
            let storage = match step_zero {
                StepZeroStorage::Capped => Capacity::Finite(alpha[i].clone()),
                StepZeroStorage::Unbounded => Capacity::Infinite,
            };
            net.add_edge(in_vertex(i), out_vertex(i), storage);
        }
        for (p, (node, choice)) in scenario.steps().enumerate() {
            let helpers = &spec.surviving_sets(node)[choice];
            let downloads = assignment.set_downloads(node, choice);
            for (helper, amount) in helpers.iter().zip(downloads) {
                let from = match scenario.sequence.nodes[..p].iter().rposition(|&m| m == helper) {
                    Some(m) => out_prime_vertex(n, m),
                    None => out_vertex(helper),
                };
                net.add_edge(from, in_prime_vertex(n, p), Capacity::Finite(amount.clone()));
            }
            net.add_edge(
                in_prime_vertex(n, p),
                out_prime_vertex(n, p),
                Capacity::Finite(alpha[node].clone()),
            );
            net.add_edge(out_prime_vertex(n, p), SINK, Capacity::Infinite);
        }
        Ok(FlowGraph {
            network: net,
            node_count: n,
            scenario: scenario.clone(),
        })
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn scenario(&self) -> &RepairScenario {
        &self.scenario
    }

    /// Max-flow from `s` to `D`.
    ///
    /// # Panics
    /// If the flow is unbounded, which cannot happen for built graphs since
    /// every path into `D` crosses a finite storage edge.
    pub fn max_flow(&self) -> Rational {
        match self.network.max_flow(SOURCE, SINK).value {
            Capacity::Finite(v) => v,
            Capacity::Infinite => panic!("flow graph has an infinite s-D path"),
        }
    }

    pub fn min_cut(&self) -> CutValue {
        self.network.min_cut(SOURCE, SINK)
    }

    pub fn min_cut_cardinality(&self) -> usize {
        self.network.min_cut_cardinality(SOURCE, SINK)
    }

    pub fn vertex_label(&self, v: usize) -> String {
        let n = self.node_count;
        match v {
            SOURCE => "s".to_string(),
            SINK => "D".to_string(),
            v if v < 2 + 2 * n => {
                let i = (v - 2) / 2;
                if (v - 2) % 2 == 0 {
                    format!("In_{i}")
                } else {
                    format!("Out_{i}")
                }
            }
            v => {
                let p = (v - 2 - 2 * n) / 2;
                let node = self.scenario.sequence.nodes[p];
                let prefix = if (v - 2 - 2 * n).is_multiple_of(2) {
                    "Inp"
                } else {
                    "Outp"
                };
                format!("{prefix}_{node}_{}", p + 1)
            }
        }
    }

    /// Graphviz rendering; step-0 pairs, repaired pairs and the collector are
    /// grouped by rank.
    pub fn to_dot(&self) -> String {
        let n = self.node_count;
        let mut out = String::from("digraph flow {\n  rankdir=LR;\n  node [shape=circle];\n");
        let _ = writeln!(out, "  \"s\";");
        for i in 0..n {
            let _ = writeln!(
                out,
                "  subgraph step0_{i} {{ rank=same; \"{}\"; \"{}\"; }}",
                self.vertex_label(in_vertex(i)),
                self.vertex_label(out_vertex(i))
            );
        }
        for p in 0..self.scenario.len() {
            let _ = writeln!(
                out,
                "  \"{}\"; \"{}\";",
                self.vertex_label(in_prime_vertex(n, p)),
                self.vertex_label(out_prime_vertex(n, p))
            );
        }
        let _ = writeln!(out, "  \"D\" [shape=doublecircle];");
        for e in self.network.edges() {
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"];",
                self.vertex_label(e.from),
                self.vertex_label(e.to),
                e.capacity
            );
        }
        out.push_str("}\n");
        out
    }
}

fn in_vertex(node: usize) -> usize {
    2 + 2 * node
}

fn out_vertex(node: usize) -> usize {
    3 + 2 * node
}

fn in_prime_vertex(n: usize, position: usize) -> usize {
    2 + 2 * n + 2 * position
}

fn out_prime_vertex(n: usize, position: usize) -> usize {
    3 + 2 * n + 2 * position
}
