//! Linear programs over nonnegative variables and a dense two-phase simplex.

mod simplex;

use std::fmt::Write as _;

use thiserror::Error;

pub use simplex::{solve, solve_with, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// One row, stored sparsely as `(variable, coefficient)` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, values: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * values[v]).sum()
    }

    /// How far `values` is from satisfying the row (0 when satisfied).
    pub fn violation(&self, values: &[f64]) -> f64 {
        let lhs = self.activity(values);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("constraint `{row}` references variable {var}, but only {count} exist")]
    UnknownVariable { row: String, var: usize, count: usize },
    #[error("constraint `{0}` has a non-finite coefficient or right-hand side")]
    NonFinite(String),
    #[error("objective has a non-finite coefficient")]
    NonFiniteObjective,
}

/// Minimize `objective · x` subject to the rows, with `x ≥ 0`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LinearProgram {
    variables: Vec<String>,
    objective: Vec<f64>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>) -> usize {
        self.variables.push(name.into());
        self.objective.push(0.0);
        self.variables.len() - 1
    }

    pub fn set_objective(&mut self, var: usize, coefficient: f64) {
        self.objective[var] = coefficient;
    }

    pub fn add_objective(&mut self, var: usize, coefficient: f64) {
        self.objective[var] += coefficient;
    }

    /// Adds a row; repeated variables in `terms` are summed.
    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: impl IntoIterator<Item = (usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) -> usize {
        let mut merged: Vec<(usize, f64)> = Vec::new();
        for (v, c) in terms {
            match merged.iter_mut().find(|(w, _)| *w == v) {
                Some(slot) => slot.1 += c,
                None => merged.push((v, c)),
            }
        }
        self.constraints.push(Constraint {
            name: name.into(),
            terms: merged,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn objective(&self) -> &[f64] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn check(&self) -> Result<(), ModelError> {
        if self.objective.iter().any(|c| !c.is_finite()) {
            return Err(ModelError::NonFiniteObjective);
        }
        for row in &self.constraints {
            if !row.rhs.is_finite() || row.terms.iter().any(|(_, c)| !c.is_finite()) {
                return Err(ModelError::NonFinite(row.name.clone()));
            }
            if let Some(&(var, _)) = row.terms.iter().find(|(v, _)| *v >= self.variables.len()) {
                return Err(ModelError::UnknownVariable {
                    row: row.name.clone(),
                    var,
                    count: self.variables.len(),
                });
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, values: &[f64]) -> f64 {
        self.objective.iter().zip(values).map(|(c, x)| c * x).sum()
    }

    /// Largest bound or row violation at `values`.
    pub fn max_violation(&self, values: &[f64]) -> f64 {
        let bounds = values.iter().map(|&x| (-x).max(0.0));
        let rows = self.constraints.iter().map(|r| r.violation(values));
        bounds.chain(rows).fold(0.0, f64::max)
    }

    pub fn is_feasible_point(&self, values: &[f64], tolerance: f64) -> bool {
        values.len() == self.variables.len() && self.max_violation(values) <= tolerance
    }

    /// Text in lp_solve's LP format, for cross-checking with external solvers.
    pub fn to_lp_format(&self) -> String {
        let mut out = String::from("/* objective */\nmin:");
        let mut any = false;
        for (v, &c) in self.objective.iter().enumerate() {
            if c != 0.0 {
                let _ = write!(out, " {} {}", signed(c), self.variables[v]);
                any = true;
            }
        }
        if !any {
            out.push_str(" 0");
        }
        out.push_str(";\n\n/* constraints */\n");
        for row in &self.constraints {
            let _ = write!(out, "{}:", row.name);
            if row.terms.is_empty() {
                out.push_str(" 0");
            }
            for &(v, c) in &row.terms {
                let _ = write!(out, " {} {}", signed(c), self.variables[v]);
            }
            let _ = writeln!(out, " {} {};", row.relation.symbol(), row.rhs);
        }
        out
    }
}

fn signed(c: f64) -> String {
    if c < 0.0 {
        format!("-{}", -c)
    } else {
        format!("+{c}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    /// Iteration limit hit or the final point failed its own feasibility check.
    NumericalFailure,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Unbounded => "unbounded",
            Status::NumericalFailure => "numerical_failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: Status,
    /// Meaningful only when `status` is optimal.
    pub objective: f64,
    pub values: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}
