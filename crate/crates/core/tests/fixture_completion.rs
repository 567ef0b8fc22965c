//! Exhaustive search over small integer download amounts for the five-node
//! example, to see how much freedom the published numbers leave.
//!
//! Constraints per node `i`: every download is an integer between 1 and the
//! helper's storage, each surviving set delivers at least `α_i`, the three
//! amounts fixed by the example text hold, and the node repair cost equals
//! the published value.

use dss_tradeoff::bound::q_bound;
use dss_tradeoff::cost::{evaluate, node_repair_cost};
use dss_tradeoff::model::{example_system, Assignment, DssSpec};
use dss_tradeoff::number::{int, ratio, Rational};

/// Amounts stated outright: `(node, set, helper, amount)`, 0-based.
const PINNED: [(usize, usize, usize, i64); 3] = [(3, 1, 4, 2), (3, 1, 1, 1), (4, 1, 3, 2)];

fn published() -> [Rational; 5] {
    [ratio(1, 2), ratio(4, 3), ratio(1, 2), ratio(3, 4), ratio(1, 2)]
}

/// Every admissible download vector for `node`, flattened over its sets.
fn completions(spec: &DssSpec, fixture: &Assignment, node: usize) -> Vec<Vec<i64>> {
    let slots: Vec<(usize, usize)> = spec
        .surviving_sets(node)
        .iter()
        .enumerate()
        .flat_map(|(l, s)| s.iter().map(move |j| (l, j)))
        .collect();
    let caps: Vec<i64> = slots
        .iter()
        .map(
            |&(l, j)| match PINNED.iter().find(|p| p.0 == node && p.1 == l && p.2 == j) {
                Some(p) => p.3,
                None => -(fixture.alpha()[j].to_integer().try_into().unwrap_or(i64::MAX)),
            },
        )
        .collect();
    let alpha_i = fixture.alpha()[node].clone();
    let mut out = Vec::new();
    let mut current = vec![0i64; slots.len()];

    fn go(
        p: usize,
        caps: &[i64],
        current: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
        accept: &dyn Fn(&[i64]) -> bool,
    ) {
        if p == caps.len() {
            if accept(current) {
                out.push(current.clone());
            }
            return;
        }
        // Negative caps mean "free, up to |cap|"; positive caps are pinned.
        let range = if caps[p] > 0 {
            caps[p]..=caps[p]
        } else {
            1..=-caps[p]
        };
        for v in range {
            current[p] = v;
            go(p + 1, caps, current, out, accept);
        }
    }

    let accept = |values: &[i64]| -> bool {
        let mut it = values.iter();
        let mut per_set: Vec<Vec<Rational>> = Vec::new();
        for s in spec.surviving_sets(node) {
            let amounts: Vec<Rational> = (0..s.len()).map(|_| int(*it.next().unwrap())).collect();
            let total: Rational = amounts.iter().cloned().sum();
            if total < alpha_i {
                return false;
            }
            per_set.push(amounts);
        }
        let candidate = Assignment::from_fn(spec, fixture.alpha().to_vec(), |i, l, j| {
            if i == node {
                let pos = spec.surviving_sets(i)[l].position(j).unwrap();
                per_set[l][pos].clone()
            } else {
                fixture.beta(spec, i, l, j).unwrap().clone()
            }
        })
        .unwrap();
        node_repair_cost(spec, &candidate, node).unwrap() == published()[node]
    };
    go(0, &caps, &mut current, &mut out, &accept);
    out
}

fn fixture_vector(spec: &DssSpec, fixture: &Assignment, node: usize) -> Vec<i64> {
    (0..spec.surviving_set_count(node))
        .flat_map(|l| fixture.set_downloads(node, l).to_vec())
        .map(|b| b.to_integer().try_into().unwrap())
        .collect()
}

#[test]
fn fixture_is_an_admissible_completion() {
    let (spec, fixture) = example_system();
    for node in 0..5 {
        let found = completions(&spec, &fixture, node);
        assert!(
            found.contains(&fixture_vector(&spec, &fixture, node)),
            "node {node}: fixture not among {found:?}"
        );
    }
}

#[test]
fn completion_is_unique_except_for_two_nodes() {
    let (spec, fixture) = example_system();
    let counts: Vec<usize> = (0..5)
        .map(|node| completions(&spec, &fixture, node).len())
        .collect();
    assert_eq!(counts, vec![1, 5, 1, 2, 1]);
}

#[test]
fn ambiguous_nodes_list_their_alternatives() {
    let (spec, fixture) = example_system();
    // Node 1 (three sets of two helpers): one extra unit on any slot but the
    // first, whose helper costs more than the others.
    let node1 = completions(&spec, &fixture, 1);
    assert_eq!(
        node1,
        vec![
            vec![1, 1, 1, 1, 1, 2],
            vec![1, 1, 1, 1, 2, 1],
            vec![1, 1, 1, 2, 1, 1],
            vec![1, 1, 2, 1, 1, 1],
            vec![1, 2, 1, 1, 1, 1],
        ]
    );
    // Node 3 (sets {1,2}, {1,4}): the first set may split 2+1 either way.
    let node3 = completions(&spec, &fixture, 3);
    assert_eq!(node3, vec![vec![1, 2, 1, 2], vec![2, 1, 1, 2]]);
}

/// The fixture with `node`'s downloads replaced by the flattened `values`.
fn with_node(spec: &DssSpec, fixture: &Assignment, node: usize, values: &[i64]) -> Assignment {
    let mut it = values.iter();
    let per_set: Vec<Vec<Rational>> = spec
        .surviving_sets(node)
        .iter()
        .map(|s| (0..s.len()).map(|_| int(*it.next().unwrap())).collect())
        .collect();
    Assignment::from_fn(spec, fixture.alpha().to_vec(), |i, l, j| {
        if i == node {
            per_set[l][spec.surviving_sets(i)[l].position(j).unwrap()].clone()
        } else {
            fixture.beta(spec, i, l, j).unwrap().clone()
        }
    })
    .unwrap()
}

#[test]
fn alternatives_leave_costs_and_bound_unchanged() {
    let (spec, fixture) = example_system();
    for node in [1, 3] {
        for v in completions(&spec, &fixture, node) {
            let asg = with_node(&spec, &fixture, node, &v);
            let report = evaluate(&spec, &asg).unwrap();
            assert_eq!(report.storage, int(68));
            assert_eq!(report.repair, ratio(43, 12));
            assert_eq!(q_bound(&spec, &asg).unwrap().q, int(2), "node {node} {v:?}");
        }
    }
}
