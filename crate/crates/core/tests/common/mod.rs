#![allow(dead_code)]

use dss_tradeoff::lp::{LinearProgram, Relation};
use dss_tradeoff::model::{Assignment, DssSpec, SpecDraft};
use dss_tradeoff::number::{int, ratio, Rational};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random valid system with at most `max_nodes` nodes, at most three
/// surviving sets per node and reconstruction sets of size at most three.
pub fn random_spec<R: Rng>(rng: &mut R, max_nodes: usize) -> DssSpec {
    let n = rng.gen_range(2..=max_nodes);
    let all: Vec<usize> = (0..n).collect();
    let mut surviving = Vec::with_capacity(n);
    for i in 0..n {
        let others: Vec<usize> = all.iter().copied().filter(|&j| j != i).collect();
        let tau = rng.gen_range(1..=3);
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for _ in 0..tau {
            let size = rng.gen_range(1..=others.len().min(3));
            let mut s: Vec<usize> = others.choose_multiple(rng, size).copied().collect();
            s.sort_unstable();
            if !sets.contains(&s) {
                sets.push(s);
            }
        }
        surviving.push(sets);
    }
    let mut recon: Vec<Vec<usize>> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let size = rng.gen_range(1..=n.min(3));
        let mut s: Vec<usize> = all.choose_multiple(rng, size).copied().collect();
        s.sort_unstable();
        if !recon.contains(&s) {
            recon.push(s);
        }
    }
    let draft = SpecDraft {
        file_size: int(rng.gen_range(1..=4)),
        storage_cost: (0..n).map(|_| int(rng.gen_range(0..=5))).collect(),
        download_cost: (0..n).map(|_| int(rng.gen_range(0..=5))).collect(),
        reconstruction_sets: recon,
        surviving_sets: surviving,
    };
    DssSpec::new(&draft).expect("generated drafts are structurally valid")
}

pub fn random_rational<R: Rng>(rng: &mut R, max_numer: i64) -> Rational {
    ratio(rng.gen_range(0..=max_numer), rng.gen_range(1..=3))
}

pub fn random_assignment<R: Rng>(rng: &mut R, spec: &DssSpec) -> Assignment {
    let alpha = (0..spec.node_count()).map(|_| random_rational(rng, 6)).collect();
    Assignment::from_fn(spec, alpha, |_, _, _| random_rational(rng, 4)).unwrap()
}

/// Replaces the file size of `spec`.
pub fn with_file_size(spec: &DssSpec, b: Rational) -> DssSpec {
    let mut draft = spec.to_draft();
    draft.file_size = b;
    DssSpec::new(&draft).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OracleResult {
    Infeasible,
    Optimal(f64),
}

/// Solves a square system by Gaussian elimination with partial pivoting.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r != col {
                let f = a[r][col] / a[col][col];
                if f != 0.0 {
                    for c in col..n {
                        a[r][c] -= f * a[col][c];
                    }
                    b[r] -= f * b[col];
                }
            }
        }
    }
    Some((0..n).map(|i| b[i] / a[i][i]).collect())
}

/// Minimum over every basic feasible point of a bounded LP: each choice of
/// `n` tight constraints among the rows and the bounds `x_j ≥ 0`.
pub fn vertex_enumeration(lp: &LinearProgram) -> OracleResult {
    let n = lp.variable_count();
    let mut rows: Vec<(Vec<f64>, f64)> = lp
        .constraints()
        .iter()
        .map(|c| {
            let mut dense = vec![0.0; n];
            for &(v, k) in &c.terms {
                dense[v] += k;
            }
            (dense, c.rhs)
        })
        .collect();
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        rows.push((e, 0.0));
    }
    let m = rows.len();
    let mut best: Option<f64> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    if n == 0 {
        return OracleResult::Optimal(0.0);
    }
    loop {
        let a = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b = pick.iter().map(|&i| rows[i].1).collect();
        if let Some(x) = solve_square(a, b) {
            if lp.max_violation(&x) <= 1e-9 {
                let v = lp.objective_value(&x);
                best = Some(best.map_or(v, |w: f64| w.min(v)));
            }
        }
        // Next n-combination of 0..m.
        let mut i = n;
        loop {
            if i == 0 {
                return best.map_or(OracleResult::Infeasible, OracleResult::Optimal);
            }
            i -= 1;
            if pick[i] < m - n + i {
                pick[i] += 1;
                for k in i + 1..n {
                    pick[k] = pick[k - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Random LP with up to four variables and up to six rows, one of which
/// is the box row `Σ x ≤ 10` so every feasible instance is bounded.
pub fn random_bounded_lp<R: Rng>(rng: &mut R) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let n = rng.gen_range(1..=4);
    let vars: Vec<usize> = (0..n).map(|j| lp.add_variable(format!("x{j}"))).collect();
    for &v in &vars {
        lp.set_objective(v, rng.gen_range(-5..=5) as f64);
    }
    lp.add_constraint("box", vars.iter().map(|&v| (v, 1.0)), Relation::Le, 10.0);
    for r in 0..rng.gen_range(0..=5) {
        let terms: Vec<(usize, f64)> = vars
            .iter()
            .filter_map(|&v| {
                let c = rng.gen_range(-4..=4);
                (c != 0).then_some((v, c as f64))
            })
            .collect();
        let relation = match rng.gen_range(0..5) {
            0 | 1 => Relation::Le,
            2 | 3 => Relation::Ge,
            _ => Relation::Eq,
        };
        lp.add_constraint(format!("r{r}"), terms, relation, rng.gen_range(-6..=12) as f64);
    }
    lp
}
