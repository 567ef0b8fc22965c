mod common;

use dss_tradeoff::bound::{homogeneous_term, q_bound, q_bound_exchanged, scenario_term};
use dss_tradeoff::cost;
use dss_tradeoff::enumeration::{all_scenarios, node_sequences, repair_scenarios, scenario_count};
use dss_tradeoff::flowgraph::{FlowGraph, StepZeroStorage, SINK, SOURCE};
use dss_tradeoff::lp::{self, Status};
use dss_tradeoff::model::{validate, Assignment, SpecDraft};
use dss_tradeoff::number::{int, ratio, to_f64, Capacity, Rational};
use dss_tradeoff::optimizer::{self, Linearization, Mode, ProblemConfig};
use dss_tradeoff::specfile::{load_str, SpecFile};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{
    random_assignment, random_bounded_lp, random_spec, vertex_enumeration, with_file_size, OracleResult,
};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn enumeration_matches_counts(seed in any::<u64>()) {
        let spec = random_spec(&mut rng(seed), 5);
        for t in 0..spec.reconstruction_sets().len() {
            let mut seen = std::collections::HashSet::new();
            let mut count = 0u128;
            for seq in node_sequences(&spec, t) {
                let mut sorted = seq.nodes.clone();
                sorted.sort_unstable();
                prop_assert_eq!(sorted.as_slice(), spec.reconstruction_sets()[t].as_slice());
                prop_assert!(seen.insert(seq.nodes.clone()));
                for s in repair_scenarios(&spec, &seq) {
                    prop_assert!(s.is_consistent_with(&spec));
                    count += 1;
                }
            }
            prop_assert_eq!(count, scenario_count(&spec, t).unwrap());
        }
    }

    #[test]
    fn exchanged_minimum_equals_direct(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 5);
        let asg = random_assignment(&mut r, &spec);
        let report = q_bound(&spec, &asg).unwrap();
        prop_assert_eq!(q_bound_exchanged(&spec, &asg).unwrap(), report.q.clone());
        prop_assert_eq!(scenario_term(&spec, &asg, &report.argmin), report.q.clone());
        prop_assert_eq!(report.per_set.iter().min().unwrap(), &report.q);
    }

    #[test]
    fn bound_is_monotone_in_the_assignment(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 4);
        let asg = random_assignment(&mut r, &spec);
        let bump: Rational = ratio(r.gen_range(0..=3), 2);
        let more = Assignment::from_triples(
            &spec,
            asg.alpha().iter().map(|a| a + &bump).collect(),
            asg.triples(&spec).map(|(i, l, j, b)| (i, l, j, b + &bump)),
        ).unwrap();
        prop_assert!(q_bound(&spec, &more).unwrap().q >= q_bound(&spec, &asg).unwrap().q);
    }

    #[test]
    fn max_flow_against_closed_form(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 4);
        let asg = random_assignment(&mut r, &spec);
        for scenario in all_scenarios(&spec).take(40) {
            let term = scenario_term(&spec, &asg, &scenario);
            let capped = FlowGraph::build(&spec, &asg, &scenario).unwrap();
            let flow = capped.max_flow();
            prop_assert!(flow <= term);
            let cut = capped.min_cut();
            prop_assert_eq!(cut.capacity, Capacity::Finite(flow));
            let open = FlowGraph::build_with(&spec, &asg, &scenario, StepZeroStorage::Unbounded).unwrap();
            prop_assert_eq!(open.max_flow(), term);
        }
    }

    #[test]
    fn storage_cap_is_slack_when_storage_covers_all_downloads(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 4);
        let asg = random_assignment(&mut r, &spec);
        let total: Rational = asg.triples(&spec).map(|(_, _, _, b)| b.clone()).sum();
        let roomy = Assignment::from_triples(
            &spec,
            vec![total; spec.node_count()],
            asg.triples(&spec).map(|(i, l, j, b)| (i, l, j, b.clone())),
        ).unwrap();
        for scenario in all_scenarios(&spec).take(40) {
            let g = FlowGraph::build(&spec, &roomy, &scenario).unwrap();
            prop_assert_eq!(g.max_flow(), scenario_term(&spec, &roomy, &scenario));
        }
    }

    #[test]
    fn exhaustive_cut_agrees_with_flow(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 3);
        let asg = random_assignment(&mut r, &spec);
        for scenario in all_scenarios(&spec).take(10) {
            let g = FlowGraph::build(&spec, &asg, &scenario).unwrap();
            let (capacity, _) = g.network().exhaustive_min_cut(SOURCE, SINK).unwrap();
            prop_assert_eq!(capacity, Capacity::Finite(g.max_flow()));
            let unit = g.min_cut_cardinality();
            let mut unit_net = dss_tradeoff::flowgraph::Network::new(g.network().vertex_count());
            for e in g.network().edges() {
                unit_net.add_edge(e.from, e.to, Capacity::Finite(int(1)));
            }
            let (unit_cap, _) = unit_net.exhaustive_min_cut(SOURCE, SINK).unwrap();
            prop_assert_eq!(unit_cap, Capacity::Finite(int(unit as i64)));
        }
    }

    #[test]
    fn costs_are_linear(seed in any::<u64>(), c in 1i64..5) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 5);
        let asg = random_assignment(&mut r, &spec);
        let scaled = Assignment::from_triples(
            &spec,
            asg.alpha().iter().map(|a| a * int(c)).collect(),
            asg.triples(&spec).map(|(i, l, j, b)| (i, l, j, b * int(c))),
        ).unwrap();
        let base = cost::evaluate(&spec, &asg).unwrap();
        let twice = cost::evaluate(&spec, &scaled).unwrap();
        prop_assert_eq!(twice.storage, base.storage * int(c));
        prop_assert_eq!(twice.repair, base.repair * int(c));
    }

    #[test]
    fn degrees_are_deterministic_and_pruning_keeps_a_set(seed in any::<u64>()) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 5);
        prop_assert_eq!(spec.derive_degrees(), spec.derive_degrees());
        // Add a superset of every node's first set and re-validate.
        let mut draft: SpecDraft = spec.to_draft();
        let n = spec.node_count();
        for (i, sets) in draft.surviving_sets.iter_mut().enumerate() {
            let mut bigger = sets[0].clone();
            if let Some(extra) = (0..n).find(|j| *j != i && !bigger.contains(j)) {
                bigger.push(extra);
                bigger.sort_unstable();
                if !sets.contains(&bigger) {
                    sets.push(bigger);
                }
            }
        }
        let v = validate(&draft);
        let pruned = v.spec.expect("still valid");
        for i in 0..n {
            prop_assert!(pruned.surviving_set_count(i) >= 1);
        }
        prop_assert_eq!(pruned, spec);
    }

    #[test]
    fn spec_files_round_trip(seed in any::<u64>(), with_assignment in any::<bool>()) {
        let mut r = rng(seed);
        let spec = random_spec(&mut r, 5);
        let asg = random_assignment(&mut r, &spec);
        let file = SpecFile::from_spec(&spec, with_assignment.then_some(&asg));
        let loaded = load_str(&file.to_json()).unwrap();
        prop_assert_eq!(&loaded.spec, &spec);
        prop_assert_eq!(loaded.assignment, with_assignment.then_some(asg));
    }

    #[test]
    fn simplex_matches_vertex_enumeration(seed in any::<u64>()) {
        let lp = random_bounded_lp(&mut rng(seed));
        let sol = lp::solve(&lp);
        match vertex_enumeration(&lp) {
            OracleResult::Infeasible => prop_assert_eq!(sol.status, Status::Infeasible),
            OracleResult::Optimal(v) => {
                prop_assert_eq!(sol.status, Status::Optimal);
                prop_assert!((sol.objective - v).abs() <= 1e-9);
                prop_assert!(lp.is_feasible_point(&sol.values, 1e-9));
            }
        }
    }

    #[test]
    fn simplex_argmin_is_scale_invariant(seed in any::<u64>(), c in 0.01f64..100.0) {
        let lp = random_bounded_lp(&mut rng(seed));
        let mut scaled = lp.clone();
        for v in 0..lp.variable_count() {
            scaled.set_objective(v, lp.objective()[v] * c);
        }
        let a = lp::solve(&lp);
        let b = lp::solve(&scaled);
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.values, b.values);
    }

    #[test]
    fn simplex_is_deterministic(seed in any::<u64>()) {
        let lp = random_bounded_lp(&mut rng(seed));
        let (a, b) = (lp::solve(&lp), lp::solve(&lp));
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.values, b.values);
        prop_assert_eq!(a.objective.to_bits(), b.objective.to_bits());
    }

    #[test]
    fn realized_point_feasible_iff_bound_holds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = random_spec(&mut r, 4);
        let asg = random_assignment(&mut r, &base);
        let q = q_bound(&base, &asg).unwrap().q;
        let b = std::cmp::max(&q + ratio(r.gen_range(-2..=2), 3), ratio(1, 9));
        let spec = with_file_size(&base, b.clone());
        for linearization in [Linearization::PerPosition, Linearization::FullProduct] {
            let config = ProblemConfig { linearization, ..Default::default() };
            let built = optimizer::build_lp(&spec, &config, 1.0).unwrap();
            let feasible = built.lp.is_feasible_point(&built.realized_point(&asg), 1e-9);
            prop_assert_eq!(feasible, b <= q);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linearizations_share_an_optimum(seed in any::<u64>(), lambda in 0.01f64..100.0) {
        let spec = random_spec(&mut rng(seed), 4);
        let per = optimizer::build_lp(&spec, &ProblemConfig::default(), lambda).unwrap();
        let full = optimizer::build_lp(
            &spec,
            &ProblemConfig { linearization: Linearization::FullProduct, ..Default::default() },
            lambda,
        ).unwrap();
        let a = lp::solve(&per.lp);
        let b = lp::solve(&full.lp);
        prop_assert_eq!(a.status, Status::Optimal);
        prop_assert_eq!(b.status, Status::Optimal);
        prop_assert!((a.objective - b.objective).abs() <= 1e-9 * (1.0 + a.objective.abs()));
    }

    #[test]
    fn uniform_download_never_beats_general(seed in any::<u64>(), lambda in 0.01f64..100.0) {
        let spec = random_spec(&mut rng(seed), 4);
        let solve = |mode| {
            let config = ProblemConfig { mode, weights: vec![lambda], ..Default::default() };
            let sweep = optimizer::sweep(&spec, &config).unwrap();
            let p = sweep.points().next().cloned().expect("solved");
            prop_assert!(p.feasible);
            Ok(p.weighted_cost())
        };
        let general = solve(Mode::General)?;
        let uniform = solve(Mode::UniformBeta)?;
        prop_assert!(general <= uniform + 1e-9);
    }

    #[test]
    fn swept_points_recompute_consistently(seed in any::<u64>()) {
        let spec = random_spec(&mut rng(seed), 4);
        let sweep = optimizer::sweep(&spec, &ProblemConfig::default()).unwrap();
        prop_assert_eq!(sweep.failures().count(), 0);
        for p in sweep.points() {
            prop_assert!(p.feasible);
            prop_assert!((p.weighted_cost() - p.lp_objective).abs() <= 1e-9 * (1.0 + p.lp_objective.abs()));
        }
        let front = optimizer::pareto_filter(&sweep.points().cloned().collect::<Vec<_>>());
        for w in front.windows(2) {
            let (a, b) = (w[0].costs(), w[1].costs());
            prop_assert!(b.0 > a.0 && b.1 < a.1);
        }
    }

    /// With any `d` helpers and one download amount, the minimizing order
    /// stores ascending and each surviving set holds every earlier node.
    #[test]
    fn uniform_repair_degree_shortcut(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = random_spec(&mut r, 5);
        let n = base.node_count();
        let d = r.gen_range(1..n);
        let spec = optimizer::effective_spec(&base, Mode::UniformRepairDegree { d }).unwrap();
        let alpha: Vec<Rational> = (0..n).map(|_| common::random_rational(&mut r, 6)).collect();
        let beta = common::random_rational(&mut r, 4);
        let asg = Assignment::from_fn(&spec, alpha.clone(), |_, _, _| beta.clone()).unwrap();
        let shortcut = spec.reconstruction_sets().iter().map(|set| {
            let mut stored: Vec<Rational> = set.iter().map(|i| alpha[i].clone()).collect();
            stored.sort();
            stored.iter().enumerate().map(|(p, a)| {
                let fresh = Rational::from_integer((d.saturating_sub(p)).into()) * &beta;
                std::cmp::min(a.clone(), fresh)
            }).sum::<Rational>()
        }).min().unwrap();
        prop_assert_eq!(q_bound(&spec, &asg).unwrap().q, shortcut);
    }

    /// Uniform storage and download on an any-`k`/any-`d` system reduce to
    /// the homogeneous sum.
    #[test]
    fn homogeneous_sum_matches_enumeration(seed in any::<u64>()) {
        let mut r = rng(seed);
        let base = random_spec(&mut r, 5);
        let n = base.node_count();
        let k = r.gen_range(1..=n.min(3));
        let d = r.gen_range(1..n);
        let spec = optimizer::effective_spec(&base, Mode::Homogeneous { k, d }).unwrap();
        let alpha = common::random_rational(&mut r, 6);
        let beta = common::random_rational(&mut r, 4);
        let asg = Assignment::uniform(&spec, alpha.clone(), beta.clone());
        prop_assert_eq!(q_bound(&spec, &asg).unwrap().q, homogeneous_term(&alpha, &beta, k, d));
    }
}

#[test]
fn pareto_filter_keeps_smallest_weight_among_ties() {
    let spec = random_spec(&mut rng(7), 4);
    let sweep = optimizer::sweep(
        &spec,
        &ProblemConfig {
            weights: vec![1e-3, 2e-3, 4e-3],
            ..Default::default()
        },
    )
    .unwrap();
    let points: Vec<_> = sweep.points().cloned().collect();
    let front = optimizer::pareto_filter(&points);
    for p in &front {
        let twins = points.iter().filter(|q| {
            (to_f64(&q.storage_cost) - to_f64(&p.storage_cost)).abs() <= 1e-9
                && (to_f64(&q.repair_cost) - to_f64(&p.repair_cost)).abs() <= 1e-9
        });
        assert!(twins.map(|q| q.lambda).all(|l| l >= p.lambda));
    }
}
