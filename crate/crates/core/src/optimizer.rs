//! Weighted-sum LPs for the storage/repair cost tradeoff.
//!
//! The constraint `B ≤ Q(α, β)` is linearized with one auxiliary `z` per
//! (node sequence, position): `z ≤ α` and `z ≤` the fresh download of each
//! surviving set, plus `Σ z ≥ B` per sequence. Because every term of `Q` is a
//! minimum and `Q` only bounds `B` from below, a point `(α, β)` admits such
//! `z` exactly when `B ≤ Q(α, β)`.

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::bound::{self, BoundError};
use crate::cost::{self, CostError};
use crate::enumeration::{node_sequences, repair_scenarios, CountOverflow};
use crate::lp::{self, LinearProgram, Relation, SolverOptions, Status};
use crate::model::{Assignment, DssSpec, SpecDraft};
use crate::number::{from_f64, to_f64, Rational, TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    General,
    /// Any `k` nodes reconstruct; replaces the given reconstruction sets.
    UniformReconstruction {
        k: usize,
    },
    /// Any `d` other nodes repair; replaces the given surviving sets.
    UniformRepairDegree {
        d: usize,
    },
    /// One download amount shared by every (node, set, helper).
    UniformBeta,
    /// Single α and β with any `k` reconstructing and any `d` repairing.
    Homogeneous {
        k: usize,
        d: usize,
    },
}

/// How the nested minimum is turned into rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Linearization {
    /// One `z` per sequence position with a row per surviving set.
    #[default]
    PerPosition,
    /// One `z` per position of every full repair scenario. Same feasible
    /// region, many more rows; kept for cross-checking.
    FullProduct,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemConfig {
    pub mode: Mode,
    pub weights: Vec<f64>,
    pub linearization: Linearization,
    pub max_scenarios: u128,
    pub solver: SolverOptions,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            mode: Mode::General,
            weights: default_grid(),
            linearization: Linearization::PerPosition,
            max_scenarios: bound::DEFAULT_MAX_SCENARIOS,
            solver: SolverOptions::default(),
        }
    }
}

/// Ten weights log-spaced over `[1e-3, 1e3]`.
pub fn default_grid() -> Vec<f64> {
    log_grid(1e-3, 1e3, 10)
}

/// `count` log-spaced weights from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..count)
        .map(|i| {
            let w = 10f64.powf(a + (b - a) * i as f64 / (count - 1) as f64);
            // Snap the endpoints so the grid hits them exactly.
            if i == 0 {
                lo
            } else if i == count - 1 {
                hi
            } else {
                w
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error("weight grid is empty")]
    EmptyGrid,
    #[error("weights must be finite, positive and strictly increasing")]
    BadGrid,
    #[error("mode does not fit a {n}-node system: {reason}")]
    ModeMismatch { n: usize, reason: String },
    #[error("{count} enumerated items exceed the ceiling of {limit}; raise --max-scenarios")]
    TooManyScenarios { count: u128, limit: u128 },
    #[error(transparent)]
    Overflow(#[from] CountOverflow),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Cost(#[from] CostError),
}

impl ProblemConfig {
    pub fn check(&self) -> Result<(), OptimizerError> {
        if self.weights.is_empty() {
            return Err(OptimizerError::EmptyGrid);
        }
        let positive = self.weights.iter().all(|w| w.is_finite() && *w > 0.0);
        let increasing = self.weights.windows(2).all(|p| p[0] < p[1]);
        if positive && increasing {
            Ok(())
        } else {
            Err(OptimizerError::BadGrid)
        }
    }
}

fn subsets(pool: &[usize], size: usize) -> Vec<Vec<usize>> {
    fn go(pool: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            go(pool, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(pool, size, 0, &mut Vec::new(), &mut out);
    out
}

/// The system the LP actually ranges over: `spec` itself, or a copy with
/// its reconstruction and/or surviving sets replaced by all `k`-subsets and
/// all `d`-subsets.
pub fn effective_spec(spec: &DssSpec, mode: Mode) -> Result<DssSpec, OptimizerError> {
    let n = spec.node_count();
    let mismatch = |reason: String| OptimizerError::ModeMismatch { n, reason };
    let (k, d) = match mode {
        Mode::General | Mode::UniformBeta => return Ok(spec.clone()),
        Mode::UniformReconstruction { k } => (Some(k), None),
        Mode::UniformRepairDegree { d } => (None, Some(d)),
        Mode::Homogeneous { k, d } => (Some(k), Some(d)),
    };
    let mut draft: SpecDraft = spec.to_draft();
    if let Some(k) = k {
        if k == 0 || k > n {
            return Err(mismatch(format!("k = {k} must lie in 1..={n}")));
        }
        draft.reconstruction_sets = subsets(&(0..n).collect::<Vec<_>>(), k);
    }
    if let Some(d) = d {
        if d == 0 || d + 1 > n {
            return Err(mismatch(format!(
                "d = {d} must lie in 1..={}",
                n.saturating_sub(1)
            )));
        }
        draft.surviving_sets = (0..n)
            .map(|i| {
                let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                subsets(&others, d)
            })
            .collect();
    }
    DssSpec::new(&draft).map_err(|e| mismatch(e.to_string()))
}

/// What value an auxiliary variable takes at a given point.
#[derive(Debug, Clone, PartialEq, Eq)]
enum ZRule {
    /// `min{α_node, fresh download}`, over every set or just `choice`.
    Fresh {
        node: usize,
        failed: Vec<usize>,
        choice: Option<usize>,
    },
    /// `min{α, helpers · β}` in homogeneous mode.
    Closed { helpers: usize },
}

/// A built LP together with the map from model quantities to its columns.
#[derive(Debug, Clone)]
pub struct BuiltLp {
    pub lp: LinearProgram,
    /// The system the columns refer to; see [`effective_spec`].
    pub spec: DssSpec,
    pub mode: Mode,
    /// Column of α per node. Aliased modes repeat a column.
    pub alpha: Vec<usize>,
    /// Column of β per (node, set, helper position).
    pub beta: Vec<Vec<Vec<usize>>>,
    storage_objective: Vec<f64>,
    repair_objective: Vec<f64>,
    z: Vec<(usize, ZRule)>,
}

fn factorial(k: usize) -> Option<u128> {
    (1..=k as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))
}

fn enumeration_size(spec: &DssSpec, linearization: Linearization) -> Result<u128, CountOverflow> {
    match linearization {
        Linearization::FullProduct => crate::enumeration::flow_graph_count(spec),
        Linearization::PerPosition => spec
            .reconstruction_sets()
            .iter()
            .try_fold(0u128, |acc, set| {
                factorial(set.len()).and_then(|f| acc.checked_add(f))
            })
            .ok_or(CountOverflow),
    }
}

/// Builds the LP for weight `lambda`: minimize `λ·C_s + C_r` subject to
/// `B ≤ Q`.
pub fn build_lp(spec: &DssSpec, config: &ProblemConfig, lambda: f64) -> Result<BuiltLp, OptimizerError> {
    let mut built = build_constraints(spec, config)?;
    built.set_weight(lambda);
    Ok(built)
}

fn build_constraints(spec: &DssSpec, config: &ProblemConfig) -> Result<BuiltLp, OptimizerError> {
    if !spec.file_size().is_positive() {
        return Err(CostError::NonPositiveFileSize.into());
    }
    let eff = effective_spec(spec, config.mode)?;
    let n = eff.node_count();
    let mut lp = LinearProgram::new();

    let alpha: Vec<usize> = match config.mode {
        Mode::Homogeneous { .. } => vec![lp.add_variable("alpha"); n],
        _ => (0..n).map(|i| lp.add_variable(format!("alpha_{i}"))).collect(),
    };
    let shared_beta = match config.mode {
        Mode::Homogeneous { .. } | Mode::UniformBeta => Some(lp.add_variable("beta")),
        _ => None,
    };
    let beta: Vec<Vec<Vec<usize>>> = (0..n)
        .map(|i| {
            eff.surviving_sets(i)
                .iter()
                .enumerate()
                .map(|(l, set)| {
                    set.iter()
                        .map(|j| shared_beta.unwrap_or_else(|| lp.add_variable(format!("beta_{i}_{l}_{j}"))))
                        .collect()
                })
                .collect()
        })
        .collect();

    let file_size = to_f64(eff.file_size());
    let mut z = Vec::new();
    match config.mode {
        Mode::Homogeneous { k, d } => {
            let a = alpha[0];
            let b = shared_beta.expect("homogeneous mode shares β");
            let mut sum = Vec::with_capacity(k);
            for i in 1..=k {
                let helpers = (d + 1).saturating_sub(i);
                let zi = lp.add_variable(format!("z_{i}"));
                lp.add_constraint(format!("z_{i}_alpha"), [(zi, 1.0), (a, -1.0)], Relation::Le, 0.0);
                lp.add_constraint(
                    format!("z_{i}_beta"),
                    [(zi, 1.0), (b, -(helpers as f64))],
                    Relation::Le,
                    0.0,
                );
                sum.push((zi, 1.0));
                z.push((zi, ZRule::Closed { helpers }));
            }
            lp.add_constraint("file_size", sum, Relation::Ge, file_size);
        }
        _ => {
            let count = enumeration_size(&eff, config.linearization)?;
            if count > config.max_scenarios {
                return Err(OptimizerError::TooManyScenarios {
                    count,
                    limit: config.max_scenarios,
                });
            }
            let mut group = 0usize;
            let add_position = |lp: &mut LinearProgram,
                                z: &mut Vec<(usize, ZRule)>,
                                tag: &str,
                                node: usize,
                                failed: &[usize],
                                choice: Option<usize>|
             -> usize {
                let zv = lp.add_variable(format!("z_{tag}"));
                lp.add_constraint(
                    format!("z_{tag}_alpha"),
                    [(zv, 1.0), (alpha[node], -1.0)],
                    Relation::Le,
                    0.0,
                );
                let choices: Vec<usize> = match choice {
                    Some(c) => vec![c],
                    None => (0..eff.surviving_set_count(node)).collect(),
                };
                for l in choices {
                    let mut terms = vec![(zv, 1.0)];
                    for (p, j) in eff.surviving_sets(node)[l].iter().enumerate() {
                        if !failed.contains(&j) {
                            terms.push((beta[node][l][p], -1.0));
                        }
                    }
                    lp.add_constraint(format!("z_{tag}_set{l}"), terms, Relation::Le, 0.0);
                }
                z.push((
                    zv,
                    ZRule::Fresh {
                        node,
                        failed: failed.to_vec(),
                        choice,
                    },
                ));
                zv
            };
            for t in 0..eff.reconstruction_sets().len() {
                for seq in node_sequences(&eff, t) {
                    match config.linearization {
                        Linearization::PerPosition => {
                            let mut sum = Vec::with_capacity(seq.nodes.len());
                            for (p, &node) in seq.nodes.iter().enumerate() {
                                let tag = format!("{group}_{p}");
                                let zv = add_position(&mut lp, &mut z, &tag, node, &seq.nodes[..p], None);
                                sum.push((zv, 1.0));
                            }
                            lp.add_constraint(format!("file_size_{group}"), sum, Relation::Ge, file_size);
                            group += 1;
                        }
                        Linearization::FullProduct => {
                            for scenario in repair_scenarios(&eff, &seq) {
                                let mut sum = Vec::with_capacity(seq.nodes.len());
                                for (p, (node, choice)) in scenario.steps().enumerate() {
                                    let tag = format!("{group}_{p}");
                                    let zv = add_position(
                                        &mut lp,
                                        &mut z,
                                        &tag,
                                        node,
                                        &seq.nodes[..p],
                                        Some(choice),
                                    );
                                    sum.push((zv, 1.0));
                                }
                                lp.add_constraint(format!("file_size_{group}"), sum, Relation::Ge, file_size);
                                group += 1;
                            }
                        }
                    }
                }
            }
        }
    }

    let width = lp.variable_count();
    let mut storage_objective = vec![0.0; width];
    let mut repair_objective = vec![0.0; width];
    for i in 0..n {
        storage_objective[alpha[i]] += to_f64(&cost::storage_coefficient(&eff, i));
        for (l, set) in eff.surviving_sets(i).iter().enumerate() {
            for (p, j) in set.iter().enumerate() {
                repair_objective[beta[i][l][p]] += to_f64(&cost::repair_coefficient(&eff, i, j));
            }
        }
    }

    Ok(BuiltLp {
        lp,
        spec: eff,
        mode: config.mode,
        alpha,
        beta,
        storage_objective,
        repair_objective,
        z,
    })
}

impl BuiltLp {
    /// Resets the objective to `λ·C_s + C_r`.
    pub fn set_weight(&mut self, lambda: f64) {
        for v in 0..self.lp.variable_count() {
            self.lp
                .set_objective(v, lambda * self.storage_objective[v] + self.repair_objective[v]);
        }
    }

    /// Column values for `assignment`, with every auxiliary set to the
    /// minimum it stands for. Aliased columns take the last value written.
    pub fn realized_point(&self, assignment: &Assignment) -> Vec<f64> {
        let mut x = vec![0.0; self.lp.variable_count()];
        for (i, a) in assignment.alpha().iter().enumerate() {
            x[self.alpha[i]] = to_f64(a);
        }
        for (i, sets) in self.beta.iter().enumerate() {
            for (l, cols) in sets.iter().enumerate() {
                for (p, &col) in cols.iter().enumerate() {
                    x[col] = to_f64(&assignment.set_downloads(i, l)[p]);
                }
            }
        }
        for (col, rule) in &self.z {
            let value = match rule {
                ZRule::Fresh { node, failed, choice } => {
                    let fresh = |l: usize| -> Rational {
                        self.spec.surviving_sets(*node)[l]
                            .iter()
                            .zip(assignment.set_downloads(*node, l))
                            .filter(|(j, _)| !failed.contains(j))
                            .fold(Rational::zero(), |acc, (_, b)| acc + b)
                    };
                    let download = match choice {
                        Some(l) => fresh(*l),
                        None => (0..self.spec.surviving_set_count(*node))
                            .map(fresh)
                            .min()
                            .expect("every node has a surviving set"),
                    };
                    std::cmp::min(assignment.alpha()[*node].clone(), download)
                }
                ZRule::Closed { helpers } => {
                    let b = assignment.set_downloads(0, 0)[0].clone();
                    std::cmp::min(
                        assignment.alpha()[0].clone(),
                        b * Rational::from_integer((*helpers).into()),
                    )
                }
            };
            x[*col] = to_f64(&value);
        }
        x
    }

    /// Exact assignment on [`BuiltLp::spec`] read back from column values.
    pub fn assignment_from(&self, values: &[f64]) -> Assignment {
        let alpha = self.alpha.iter().map(|&c| from_f64(values[c].max(0.0))).collect();
        Assignment::from_fn(&self.spec, alpha, |i, l, j| {
            let p = self.spec.surviving_sets(i)[l]
                .position(j)
                .expect("induced triple");
            from_f64(values[self.beta[i][l][p]].max(0.0))
        })
        .expect("columns cover every triple")
    }

    pub fn z_count(&self) -> usize {
        self.z.len()
    }
}

/// One solved weight.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoPoint {
    pub lambda: f64,
    pub storage_cost: Rational,
    pub repair_cost: Rational,
    /// `Q` recomputed exactly at the returned point.
    pub q: Rational,
    /// `B ≤ Q + 1e-9`.
    pub feasible: bool,
    pub assignment: Assignment,
    /// Objective value reported by the solver.
    pub lp_objective: f64,
}

impl ParetoPoint {
    /// `λ·C_s + C_r` from the exact costs.
    pub fn weighted_cost(&self) -> f64 {
        self.lambda * to_f64(&self.storage_cost) + to_f64(&self.repair_cost)
    }

    pub fn costs(&self) -> (f64, f64) {
        (to_f64(&self.storage_cost), to_f64(&self.repair_cost))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub lambda: f64,
    /// The solver status when it did not reach an optimum.
    pub outcome: Result<ParetoPoint, Status>,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    /// The system the points refer to; see [`effective_spec`].
    pub spec: DssSpec,
    pub entries: Vec<SweepEntry>,
}

impl Sweep {
    pub fn points(&self) -> impl Iterator<Item = &ParetoPoint> {
        self.entries.iter().filter_map(|e| e.outcome.as_ref().ok())
    }

    pub fn failures(&self) -> impl Iterator<Item = (f64, Status)> + '_ {
        self.entries
            .iter()
            .filter_map(|e| e.outcome.as_ref().err().map(|s| (e.lambda, *s)))
    }
}

/// Solves one LP per weight. A failed solve is recorded against its weight
/// and does not stop the sweep.
pub fn sweep(spec: &DssSpec, config: &ProblemConfig) -> Result<Sweep, OptimizerError> {
    config.check()?;
    let mut built = build_constraints(spec, config)?;
    let mut entries = Vec::with_capacity(config.weights.len());
    for &lambda in &config.weights {
        built.set_weight(lambda);
        let outcome = solve_point(&built, config, lambda)?;
        entries.push(SweepEntry { lambda, outcome });
    }
    Ok(Sweep {
        spec: built.spec,
        entries,
    })
}

fn solve_point(
    built: &BuiltLp,
    config: &ProblemConfig,
    lambda: f64,
) -> Result<Result<ParetoPoint, Status>, OptimizerError> {
    let solution = lp::solve_with(&built.lp, &config.solver);
    if solution.status != Status::Optimal {
        return Ok(Err(solution.status));
    }
    let assignment = built.assignment_from(&solution.values);
    let costs = cost::evaluate(&built.spec, &assignment)?;
    let q = match built.mode {
        Mode::Homogeneous { k, d } => {
            bound::homogeneous_term(&assignment.alpha()[0], &assignment.set_downloads(0, 0)[0], k, d)
        }
        _ => bound::q_bound_exchanged_with_limit(&built.spec, &assignment, config.max_scenarios)?,
    };
    let feasible = to_f64(built.spec.file_size()) <= to_f64(&q) + TOLERANCE;
    Ok(Ok(ParetoPoint {
        lambda,
        storage_cost: costs.storage,
        repair_cost: costs.repair,
        q,
        feasible,
        assignment,
        lp_objective: solution.objective,
    }))
}

/// Indices of the points not dominated in `(C_s, C_r)`, sorted by `C_s`.
/// Points equal on both objectives within `1e-9` keep only the earliest.
pub fn pareto_front(costs: &[(f64, f64)]) -> Vec<usize> {
    let le = |a: f64, b: f64| a <= b + TOLERANCE;
    let lt = |a: f64, b: f64| a < b - TOLERANCE;
    let mut keep: Vec<usize> = (0..costs.len())
        .filter(|&i| {
            let (s, r) = costs[i];
            !costs.iter().enumerate().any(|(j, &(s2, r2))| {
                let dominates = le(s2, s) && le(r2, r) && (lt(s2, s) || lt(r2, r));
                let earlier_tie = j < i && le(s2, s) && le(s, s2) && le(r2, r) && le(r, r2);
                dominates || earlier_tie
            })
        })
        .collect();
    keep.sort_by(|&a, &b| costs[a].0.total_cmp(&costs[b].0).then(a.cmp(&b)));
    keep
}

/// Non-dominated points sorted by storage cost. Among ties the point with
/// the smallest `λ`, then smallest α vector, is kept.
pub fn pareto_filter(points: &[ParetoPoint]) -> Vec<ParetoPoint> {
    let mut ordered: Vec<&ParetoPoint> = points.iter().collect();
    ordered.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then_with(|| a.assignment.alpha().cmp(b.assignment.alpha()))
    });
    let costs: Vec<(f64, f64)> = ordered.iter().map(|p| p.costs()).collect();
    pareto_front(&costs)
        .into_iter()
        .map(|i| ordered[i].clone())
        .collect()
}
