//! Browser bindings for the `dss` tools. Each operation takes the JSON system
//! file text and returns a JSON string; the `wasm_bindgen` exports only
//! convert errors into JS exceptions.

use dss_tradeoff::bound::{q_bound, scenario_term};
use dss_tradeoff::cost;
use dss_tradeoff::enumeration::{NodeSequence, RepairScenario};
use dss_tradeoff::flowgraph::{FlowGraph, StepZeroStorage, SINK, SOURCE};
use dss_tradeoff::model::{Assignment, DssSpec};
use dss_tradeoff::number::{format_rational, to_f64, Capacity, Rational};
use dss_tradeoff::optimizer::{self, log_grid, Mode, ProblemConfig};
use dss_tradeoff::specfile::load_str;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

pub const EXAMPLES: [(&str, &str); 4] = [
    ("fig2", include_str!("../../core/examples/fig2.json")),
    (
        "fig5_hetero",
        include_str!("../../core/examples/fig5_hetero.json"),
    ),
    (
        "fig5_hetero_kmax2",
        include_str!("../../core/examples/fig5_hetero_kmax2.json"),
    ),
    ("fig5_homog", include_str!("../../core/examples/fig5_homog.json")),
];

fn exact(v: &Rational) -> Value {
    json!({ "exact": format_rational(v), "value": to_f64(v) })
}

fn load(text: &str) -> Result<(DssSpec, Option<Assignment>), String> {
    let loaded = load_str(text).map_err(|e| e.to_string())?;
    Ok((loaded.spec, loaded.assignment))
}

fn load_with_assignment(text: &str) -> Result<(DssSpec, Assignment), String> {
    match load(text)? {
        (spec, Some(asg)) => Ok((spec, asg)),
        _ => Err("this operation needs `alphas` and `betas` in the file".into()),
    }
}

fn scenario_json(s: &RepairScenario) -> Value {
    json!({
        "set": s.sequence.set_index,
        "nodes": s.sequence.nodes,
        "choices": s.choices,
    })
}

/// Costs, bound and verdict for the assignment in `text`.
pub fn evaluate(text: &str) -> Result<String, String> {
    let (spec, asg) = load_with_assignment(text)?;
    let costs = cost::evaluate(&spec, &asg).map_err(|e| e.to_string())?;
    let bound = q_bound(&spec, &asg).map_err(|e| e.to_string())?;
    let margin = &bound.q - spec.file_size();
    let out = json!({
        "storage_cost": exact(&costs.storage),
        "repair_cost": exact(&costs.repair),
        "node_repair_cost": costs.node_repair.iter().map(exact).collect::<Vec<_>>(),
        "q": exact(&bound.q),
        "file_size": exact(spec.file_size()),
        "margin": exact(&margin),
        "feasible": spec.file_size() <= &bound.q,
        "per_set": bound.per_set.iter().map(exact).collect::<Vec<_>>(),
        "reconstruction_sets": spec.reconstruction_sets().iter().map(|s| s.as_slice().to_vec()).collect::<Vec<_>>(),
        "argmin": scenario_json(&bound.argmin),
    });
    Ok(out.to_string())
}

fn parse_mode(mode: &str, k: usize, d: usize) -> Result<Mode, String> {
    Ok(match mode {
        "general" => Mode::General,
        "uniform-reconstruction" => Mode::UniformReconstruction { k },
        "uniform-repair-degree" => Mode::UniformRepairDegree { d },
        "uniform-beta" => Mode::UniformBeta,
        "homogeneous" => Mode::Homogeneous { k, d },
        other => return Err(format!("unknown mode `{other}`")),
    })
}

/// Weighted-sum sweep over `count` log-spaced weights in `[lo, hi]`.
pub fn pareto(
    text: &str,
    mode: &str,
    k: usize,
    d: usize,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<String, String> {
    let (spec, _) = load(text)?;
    if !(lo > 0.0 && hi >= lo && count > 0) {
        return Err("weights need 0 < lo <= hi and at least one point".into());
    }
    let config = ProblemConfig {
        mode: parse_mode(mode, k, d)?,
        weights: log_grid(lo, hi, count),
        ..ProblemConfig::default()
    };
    let sweep = optimizer::sweep(&spec, &config).map_err(|e| e.to_string())?;
    let points: Vec<_> = sweep.points().collect();
    let costs: Vec<(f64, f64)> = points.iter().map(|p| p.costs()).collect();
    let front = optimizer::pareto_front(&costs);
    let rows: Vec<Value> = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            json!({
                "lambda": p.lambda,
                "storage_cost": to_f64(&p.storage_cost),
                "repair_cost": to_f64(&p.repair_cost),
                "q": to_f64(&p.q),
                "feasible": p.feasible,
                "pareto": front.contains(&i),
                "alpha": p.assignment.alpha().iter().map(to_f64).collect::<Vec<_>>(),
            })
        })
        .collect();
    let failures: Vec<Value> = sweep
        .failures()
        .map(|(lambda, status)| json!({ "lambda": lambda, "status": status.to_string() }))
        .collect();
    Ok(json!({ "points": rows, "failures": failures }).to_string())
}

fn parse_list(field: &str, text: &str) -> Result<Vec<usize>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("{field}: `{s}` is not an index")))
        .collect()
}

fn capacity(c: &Capacity) -> Value {
    match c {
        Capacity::Finite(v) => Value::String(format_rational(v)),
        Capacity::Infinite => Value::String("inf".into()),
    }
}

/// Layer of a vertex for a left-to-right drawing: `s`, the step-0 pairs,
/// one pair of columns per repaired node, then `D`.
fn layer(label: &str, k: usize) -> usize {
    if label == "s" {
        0
    } else if label == "D" {
        3 + 2 * k
    } else if label.starts_with("In_") {
        1
    } else if label.starts_with("Out_") {
        2
    } else {
        let p: usize = label.rsplit('_').next().and_then(|x| x.parse().ok()).unwrap_or(1);
        if label.starts_with("Inp_") {
            1 + 2 * p
        } else {
            2 + 2 * p
        }
    }
}

/// One information flow graph with its max-flow, a minimum cut and a layout
/// hint per vertex. Empty `sequence` means the set's own order; empty
/// `choices` means the first surviving set at every step.
pub fn flowgraph(
    text: &str,
    set: usize,
    sequence: &str,
    choices: &str,
    unbounded: bool,
) -> Result<String, String> {
    let (spec, asg) = load_with_assignment(text)?;
    let members = spec
        .reconstruction_sets()
        .get(set)
        .ok_or_else(|| format!("no reconstruction set {set}"))?
        .as_slice()
        .to_vec();
    let nodes = match parse_list("sequence", sequence)? {
        v if v.is_empty() => members.clone(),
        v => v,
    };
    let choices = match parse_list("choices", choices)? {
        v if v.is_empty() => vec![0; nodes.len()],
        v => v,
    };
    let scenario = RepairScenario {
        sequence: NodeSequence {
            set_index: set,
            nodes,
        },
        choices,
    };
    let mode = if unbounded {
        StepZeroStorage::Unbounded
    } else {
        StepZeroStorage::Capped
    };
    let graph = FlowGraph::build_with(&spec, &asg, &scenario, mode).map_err(|_| {
        "the order must be a permutation of the set and each choice a valid surviving set".to_string()
    })?;
    let net = graph.network();
    let flow = net.max_flow(SOURCE, SINK);
    let cut = graph.min_cut();
    let k = scenario.len();
    let mut rows = vec![0usize; 4 + 2 * k];
    let vertices: Vec<Value> = (0..net.vertex_count())
        .map(|v| {
            let label = graph.vertex_label(v);
            let l = layer(&label, k);
            let row = rows[l];
            rows[l] += 1;
            json!({ "id": v, "label": label, "layer": l, "row": row })
        })
        .collect();
    let edges: Vec<Value> = net
        .edges()
        .iter()
        .enumerate()
        .map(|(e, edge)| {
            json!({
                "from": edge.from,
                "to": edge.to,
                "capacity": capacity(&edge.capacity),
                "flow": format_rational(&flow.edge_flow[e]),
                "cut": cut.edges.contains(&e),
            })
        })
        .collect();
    let out = json!({
        "scenario": scenario_json(&scenario),
        "max_flow": capacity(&flow.value),
        "term": format_rational(&scenario_term(&spec, &asg, &scenario)),
        "cut_capacity": capacity(&cut.capacity),
        "vertices": vertices,
        "edges": edges,
        "dot": graph.to_dot(),
    });
    Ok(out.to_string())
}

#[wasm_bindgen(js_name = exampleSpec)]
pub fn example_spec(name: &str) -> Result<String, JsValue> {
    EXAMPLES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| text.to_string())
        .ok_or_else(|| JsValue::from_str(&format!("no example named {name}")))
}

#[wasm_bindgen(js_name = evaluateSpec)]
pub fn evaluate_spec(text: &str) -> Result<String, JsValue> {
    evaluate(text).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = paretoSweep)]
pub fn pareto_sweep(
    text: &str,
    mode: &str,
    k: usize,
    d: usize,
    lo: f64,
    hi: f64,
    count: usize,
) -> Result<String, JsValue> {
    pareto(text, mode, k, d, lo, hi, count).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = flowGraph)]
pub fn flow_graph(
    text: &str,
    set: usize,
    sequence: &str,
    choices: &str,
    unbounded: bool,
) -> Result<String, JsValue> {
    flowgraph(text, set, sequence, choices, unbounded).map_err(|e| JsValue::from_str(&e))
}
