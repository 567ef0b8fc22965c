//! Dense two-phase tableau simplex with Bland's rule.
//!
//! Rows are normalized to a nonnegative right-hand side; `≤` rows get a
//! slack, `≥` rows a surplus plus an artificial, `=` rows an artificial.
//! Phase one minimizes the artificial sum, phase two the real objective.
//! Entering columns are the lowest-index improving ones and ratio-test ties
//! go to the lowest basic index, which rules out cycling.

use super::{LinearProgram, LpSolution, Relation, Status};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Largest row or bound violation accepted in a returned optimum.
    pub feasibility_tol: f64,
    /// Reduced costs above `-optimality_tol` count as nonnegative.
    pub optimality_tol: f64,
    /// Smallest tableau entry used as a pivot.
    pub pivot_tol: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            feasibility_tol: 1e-9,
            optimality_tol: 1e-9,
            pivot_tol: 1e-11,
            max_iterations: 50_000,
        }
    }
}

pub fn solve(lp: &LinearProgram) -> LpSolution {
    solve_with(lp, &SolverOptions::default())
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    /// Reduced-cost row; the last entry holds minus the objective value.
    cost: Vec<f64>,
    /// Columns allowed to enter the basis.
    allowed: Vec<bool>,
    iterations: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
    IterationLimit,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[c];
                if f != 0.0 {
                    for (v, pv) in row.iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                    row[c] = 0.0;
                }
            }
        }
        let f = self.cost[c];
        if f != 0.0 {
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            self.cost[c] = 0.0;
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, costs: &[f64]) {
        let w = self.width();
        self.cost = vec![0.0; w + 1];
        self.cost[..costs.len()].copy_from_slice(costs);
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = self.cost[b];
            if cb != 0.0 {
                for (v, rv) in self.cost.iter_mut().zip(&self.rows[r]) {
                    *v -= cb * rv;
                }
            }
        }
    }

    fn run(&mut self, opts: &SolverOptions) -> Outcome {
        let w = self.width();
        loop {
            let entering = (0..w).find(|&j| self.allowed[j] && self.cost[j] < -opts.optimality_tol);
            let Some(c) = entering else {
                return Outcome::Optimal;
            };
            if self.iterations >= opts.max_iterations {
                return Outcome::IterationLimit;
            }
            let mut leave: Option<(usize, f64)> = None;
            for (r, row) in self.rows.iter().enumerate() {
                let a = row[c];
                if a > opts.pivot_tol {
                    let ratio = row[w] / a;
                    let better = match leave {
                        None => true,
                        Some((lr, best)) => {
                            ratio < best - 1e-12 || (ratio <= best + 1e-12 && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return Outcome::Unbounded;
            };
            self.pivot(r, c);
            self.iterations += 1;
        }
    }
}

/// Solves `lp`. Returns [`Status::NumericalFailure`] rather than an
/// optimum whose point violates the model by more than the feasibility
/// tolerance.
pub fn solve_with(lp: &LinearProgram, opts: &SolverOptions) -> LpSolution {
    let n = lp.variable_count();
    let failure = |status, iterations| LpSolution {
        status,
        objective: f64::NAN,
        values: vec![0.0; n],
        iterations,
    };
    if lp.check().is_err() {
        return failure(Status::NumericalFailure, 0);
    }

    let m = lp.constraints().len();
    let mut slack_count = 0;
    let mut artificial_count = 0;
    for row in lp.constraints() {
        let rel = effective_relation(row.relation, row.rhs);
        match rel {
            Relation::Le => slack_count += 1,
            Relation::Ge => {
                slack_count += 1;
                artificial_count += 1;
            }
            Relation::Eq => artificial_count += 1,
        }
    }
    let first_art = n + slack_count;
    let width = first_art + artificial_count;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let (mut next_slack, mut next_art) = (n, first_art);
    for row in lp.constraints() {
        let sign = if row.rhs < 0.0 { -1.0 } else { 1.0 };
        let mut dense = vec![0.0; width + 1];
        for &(v, c) in &row.terms {
            dense[v] += sign * c;
        }
        dense[width] = sign * row.rhs;
        match effective_relation(row.relation, row.rhs) {
            Relation::Le => {
                dense[next_slack] = 1.0;
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                dense[next_slack] = -1.0;
                next_slack += 1;
                dense[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                dense[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
        }
        rows.push(dense);
    }

    let mut t = Tableau {
        rows,
        basis,
        cost: vec![0.0; width + 1],
        allowed: vec![true; width],
        iterations: 0,
    };

    if artificial_count > 0 {
        let mut phase_one = vec![0.0; width];
        phase_one[first_art..].iter_mut().for_each(|c| *c = 1.0);
        t.set_objective(&phase_one);
        match t.run(opts) {
            Outcome::Optimal => {}
            Outcome::Unbounded | Outcome::IterationLimit => {
                return failure(Status::NumericalFailure, t.iterations)
            }
        }
        if -t.cost[width] > opts.feasibility_tol {
            return failure(Status::Infeasible, t.iterations);
        }
        // Pivot remaining zero-level artificials out, dropping rows that
        // turn out to be redundant.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= first_art {
                let col = (0..first_art).find(|&j| t.rows[r][j].abs() > opts.pivot_tol);
                match col {
                    Some(c) => {
                        t.pivot(r, c);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }
        for a in first_art..width {
            t.allowed[a] = false;
        }
    }

    t.set_objective(lp.objective());
    match t.run(opts) {
        Outcome::Optimal => {}
        Outcome::Unbounded => return failure(Status::Unbounded, t.iterations),
        Outcome::IterationLimit => return failure(Status::NumericalFailure, t.iterations),
    }

    let mut values = vec![0.0; n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            values[b] = t.rows[r][width];
        }
    }
    for v in values.iter_mut() {
        if *v < 0.0 && *v >= -opts.feasibility_tol {
            *v = 0.0;
        }
    }
    if lp.max_violation(&values) > opts.feasibility_tol {
        return failure(Status::NumericalFailure, t.iterations);
    }
    LpSolution {
        status: Status::Optimal,
        objective: lp.objective_value(&values),
        values,
        iterations: t.iterations,
    }
}

fn effective_relation(relation: Relation, rhs: f64) -> Relation {
    if rhs >= 0.0 {
        return relation;
    }
    match relation {
        Relation::Le => Relation::Ge,
        Relation::Ge => Relation::Le,
        Relation::Eq => Relation::Eq,
    }
}
