//! The `dss` command line.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when `evaluate`
//! finds the file size above the bound.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bound::{self, DEFAULT_MAX_SCENARIOS};
use crate::cost;
use crate::enumeration::{node_sequences, repair_scenarios, NodeSequence, RepairScenario};
use crate::flowgraph::{FlowGraph, StepZeroStorage};
use crate::model::{Assignment, DssSpec};
use crate::number::{format_rational, to_f64, Rational};
use crate::optimizer::{self, Linearization, Mode, ProblemConfig, Sweep};
use crate::specfile::{load_path, LoadedSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "dss",
    version,
    about = "Storage and repair cost tradeoffs for heterogeneous distributed storage"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Costs, bound and file-size verdict for the assignment in a file.
    Evaluate(EvaluateArgs),
    /// Min-cut bound and its minimizing repair scenario.
    Bound(BoundArgs),
    /// Weighted-sum sweep of the cost tradeoff, as CSV.
    Pareto(ParetoArgs),
    /// Graphviz rendering of one information flow graph.
    Flowgraph(FlowgraphArgs),
}

#[derive(Debug, Args)]
pub struct Ceiling {
    /// Refuse to enumerate more repair scenarios than this.
    #[arg(long, env = "DSS_MAX_SCENARIOS", default_value_t = DEFAULT_MAX_SCENARIOS)]
    pub max_scenarios: u128,
}

#[derive(Debug, Args)]
pub struct Selector {
    /// Reconstruction set index (0-based, in file order).
    #[arg(long = "reconstruction-set")]
    pub reconstruction_set: Option<usize>,
    /// Comma-separated node order; a permutation of the reconstruction set.
    #[arg(long, value_delimiter = ',')]
    pub sequence: Option<Vec<usize>>,
    /// Comma-separated surviving-set index per position.
    #[arg(long, value_delimiter = ',')]
    pub choices: Option<Vec<usize>>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    pub path: PathBuf,
    /// Print a JSON object instead of text.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub ceiling: Ceiling,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    pub path: PathBuf,
    /// Also compute max-flow on every flow graph and compare.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub selector: Selector,
    #[command(flatten)]
    pub ceiling: Ceiling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    General,
    UniformReconstruction,
    UniformRepairDegree,
    UniformBeta,
    Homogeneous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LinearizationArg {
    PerPosition,
    FullProduct,
}

#[derive(Debug, Args)]
pub struct ParetoArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value = "general")]
    pub mode: ModeArg,
    /// Reconstruction degree for uniform-reconstruction and homogeneous modes.
    #[arg(long)]
    pub k: Option<usize>,
    /// Repair degree for uniform-repair-degree and homogeneous modes.
    #[arg(long)]
    pub d: Option<usize>,
    /// Comma-separated weights on the storage cost.
    #[arg(long, value_delimiter = ',', conflicts_with = "grid")]
    pub weights: Option<Vec<f64>>,
    /// Log-spaced weights as `lo:hi:count`.
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long, value_enum, default_value = "per-position")]
    pub linearization: LinearizationArg,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub ceiling: Ceiling,
}

#[derive(Debug, Args)]
pub struct FlowgraphArgs {
    pub path: PathBuf,
    #[command(flatten)]
    pub selector: Selector,
    /// Write the DOT text here instead of stdout.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Give step-0 storage edges infinite capacity.
    #[arg(long)]
    pub unbounded_step_zero: bool,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_INPUT
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Evaluate(a) => evaluate(a, out, err),
        Command::Bound(a) => bound_cmd(a, out, err),
        Command::Pareto(a) => pareto(a, out, err),
        Command::Flowgraph(a) => flowgraph(a, out, err),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn load(path: &Path, err: &mut dyn Write) -> Result<LoadedSpec, Failure> {
    let loaded = load_path(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    for w in &loaded.warnings {
        writeln!(err, "{}: {w}", path.display())?;
    }
    Ok(loaded)
}

fn require_assignment(loaded: &LoadedSpec) -> Result<&Assignment, Failure> {
    loaded
        .assignment
        .as_ref()
        .ok_or_else(|| Failure("this command needs `alphas` and `betas` in the file".into()))
}

fn show(value: &Rational) -> String {
    if value.is_integer() {
        format_rational(value)
    } else {
        format!("{} (≈{:.6})", format_rational(value), to_f64(value))
    }
}

fn describe(scenario: &RepairScenario) -> String {
    let steps: Vec<String> = scenario
        .steps()
        .map(|(node, choice)| format!("{node}/S{choice}"))
        .collect();
    format!("set {} order [{}]", scenario.sequence.set_index, steps.join(", "))
}

fn evaluate(a: &EvaluateArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let loaded = load(&a.path, err)?;
    let asg = require_assignment(&loaded)?;
    let spec = &loaded.spec;
    let costs = cost::evaluate(spec, asg)?;
    let report = bound::q_bound_with_limit(spec, asg, a.ceiling.max_scenarios)?;
    let feasible = spec.file_size() <= &report.q;
    let margin = &report.q - spec.file_size();
    if a.json {
        let text = |v: &Rational| serde_json::Value::String(format_rational(v));
        let doc = serde_json::json!({
            "storage_cost": text(&costs.storage),
            "node_repair_cost": costs.node_repair.iter().map(text).collect::<Vec<_>>(),
            "repair_cost": text(&costs.repair),
            "q": text(&report.q),
            "file_size": text(spec.file_size()),
            "margin": text(&margin),
            "feasible": feasible,
        });
        writeln!(out, "{doc}")?;
    } else {
        writeln!(out, "C_s = {}", show(&costs.storage))?;
        for (i, r) in costs.node_repair.iter().enumerate() {
            writeln!(out, "r(beta_{i}) = {}", show(r))?;
        }
        writeln!(out, "C_r = {}", show(&costs.repair))?;
        writeln!(out, "Q = {}", show(&report.q))?;
        writeln!(out, "B = {}", show(spec.file_size()))?;
        let verdict = if feasible {
            "feasible (B <= Q)"
        } else {
            "infeasible (B > Q)"
        };
        writeln!(out, "verdict: {verdict}, margin Q - B = {}", show(&margin))?;
    }
    Ok(if feasible { EXIT_OK } else { EXIT_INFEASIBLE })
}

/// What the selector flags pin down.
enum Selection {
    All,
    Set(usize),
    Scenario(RepairScenario),
}

fn select(spec: &DssSpec, s: &Selector) -> Result<Selection, Failure> {
    let Some(t) = s.reconstruction_set else {
        if s.sequence.is_some() || s.choices.is_some() {
            return Err(Failure(
                "--sequence and --choices need --reconstruction-set".into(),
            ));
        }
        return Ok(Selection::All);
    };
    let sets = spec.reconstruction_sets();
    let set = sets.get(t).ok_or_else(|| {
        Failure(format!(
            "--reconstruction-set {t} is out of range (there are {})",
            sets.len()
        ))
    })?;
    match (&s.sequence, &s.choices) {
        (None, None) => Ok(Selection::Set(t)),
        (Some(nodes), Some(choices)) => {
            let scenario = RepairScenario {
                sequence: NodeSequence {
                    set_index: t,
                    nodes: nodes.clone(),
                },
                choices: choices.clone(),
            };
            if !scenario.is_consistent_with(spec) {
                return Err(Failure(format!(
                    "--sequence must order the nodes {set} and --choices must give a valid surviving set per position"
                )));
            }
            Ok(Selection::Scenario(scenario))
        }
        _ => Err(Failure("--sequence and --choices go together".into())),
    }
}

fn scenarios_of(spec: &DssSpec, t: usize) -> impl Iterator<Item = RepairScenario> + '_ {
    node_sequences(spec, t).flat_map(move |seq| repair_scenarios(spec, &seq).collect::<Vec<_>>())
}

fn oracle_line(
    spec: &DssSpec,
    asg: &Assignment,
    scenarios: impl Iterator<Item = RepairScenario>,
    closed_form: &Rational,
) -> Result<String, Failure> {
    let mut capped: Option<Rational> = None;
    let mut unbounded: Option<Rational> = None;
    let mut graphs = 0usize;
    for scenario in scenarios {
        graphs += 1;
        let c = FlowGraph::build(spec, asg, &scenario)?.max_flow();
        let u = FlowGraph::build_with(spec, asg, &scenario, StepZeroStorage::Unbounded)?.max_flow();
        capped = Some(capped.map_or(c.clone(), |m| m.min(c)));
        unbounded = Some(unbounded.map_or(u.clone(), |m| m.min(u)));
    }
    let capped = capped.expect("at least one scenario");
    let unbounded = unbounded.expect("at least one scenario");
    let mut line = format!(
        "oracle: {graphs} flow graphs; min max-flow = {}; with unbounded step-0 storage = {}; ",
        format_rational(&capped),
        format_rational(&unbounded)
    );
    if &capped == closed_form {
        line.push_str("agreement with the closed form");
    } else {
        let _ = write!(
            line,
            "DISAGREES with the closed form {} (step-0 helpers cannot send more than they store)",
            format_rational(closed_form)
        );
    }
    Ok(line)
}

fn bound_cmd(a: &BoundArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let loaded = load(&a.path, err)?;
    let asg = require_assignment(&loaded)?;
    let spec = &loaded.spec;
    match select(spec, &a.selector)? {
        Selection::All => {
            let report = bound::q_bound_with_limit(spec, asg, a.ceiling.max_scenarios)?;
            writeln!(out, "Q = {}", show(&report.q))?;
            writeln!(out, "argmin: {}", describe(&report.argmin))?;
            for (t, v) in report.per_set.iter().enumerate() {
                writeln!(out, "set {t} {}: {}", spec.reconstruction_sets()[t], show(v))?;
            }
            if a.oracle {
                let line = oracle_line(spec, asg, crate::enumeration::all_scenarios(spec), &report.q)?;
                writeln!(out, "{line}")?;
            }
        }
        Selection::Set(t) => {
            let count = crate::enumeration::scenario_count(spec, t)?;
            if count > a.ceiling.max_scenarios {
                return Err(Failure(format!(
                    "{count} scenarios exceed the ceiling of {}; raise --max-scenarios",
                    a.ceiling.max_scenarios
                )));
            }
            let (term, argmin) = scenarios_of(spec, t)
                .map(|s| (bound::scenario_term(spec, asg, &s), s))
                .min_by(|x, y| x.0.cmp(&y.0))
                .expect("every set has a scenario");
            writeln!(out, "Q restricted to set {t} = {}", show(&term))?;
            writeln!(out, "argmin: {}", describe(&argmin))?;
            if a.oracle {
                writeln!(out, "{}", oracle_line(spec, asg, scenarios_of(spec, t), &term)?)?;
            }
        }
        Selection::Scenario(s) => {
            let term = bound::scenario_term(spec, asg, &s);
            writeln!(out, "term = {}", show(&term))?;
            writeln!(out, "scenario: {}", describe(&s))?;
            if a.oracle {
                writeln!(out, "{}", oracle_line(spec, asg, std::iter::once(s), &term)?)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    let bad = || Failure(format!("--grid expects lo:hi:count, got `{text}`"));
    let parts: Vec<&str> = text.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    let count: usize = count.trim().parse().map_err(|_| bad())?;
    if count == 0 || lo <= 0.0 || hi < lo || (count > 1 && hi == lo) {
        return Err(bad());
    }
    Ok(optimizer::log_grid(lo, hi, count))
}

fn mode_from(a: &ParetoArgs) -> Result<Mode, Failure> {
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure(format!("--mode {:?} needs --{flag}", a.mode).to_lowercase()))
    };
    Ok(match a.mode {
        ModeArg::General => Mode::General,
        ModeArg::UniformBeta => Mode::UniformBeta,
        ModeArg::UniformReconstruction => Mode::UniformReconstruction { k: need(a.k, "k")? },
        ModeArg::UniformRepairDegree => Mode::UniformRepairDegree { d: need(a.d, "d")? },
        ModeArg::Homogeneous => Mode::Homogeneous {
            k: need(a.k, "k")?,
            d: need(a.d, "d")?,
        },
    })
}

/// The sweep as CSV, one row per weight.
pub fn sweep_csv(sweep: &Sweep) -> String {
    let spec = &sweep.spec;
    let n = spec.node_count();
    let mut header: Vec<String> = ["lambda", "C_s", "C_r", "Q"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((0..n).map(|i| format!("alpha_{i}")));
    header.extend(spec.beta_triples().map(|(i, l, j)| format!("beta_{i}_{l}_{j}")));
    header.push("pareto".into());
    let value_columns = header.len() - 2;

    let points: Vec<_> = sweep.points().cloned().collect();
    let front: Vec<f64> = optimizer::pareto_filter(&points)
        .iter()
        .map(|p| p.lambda)
        .collect();

    let mut csv = header.join(",");
    csv.push('\n');
    for entry in &sweep.entries {
        let mut row = vec![entry.lambda.to_string()];
        match &entry.outcome {
            Ok(p) => {
                row.push(to_f64(&p.storage_cost).to_string());
                row.push(to_f64(&p.repair_cost).to_string());
                row.push(to_f64(&p.q).to_string());
                row.extend(p.assignment.alpha().iter().map(|a| to_f64(a).to_string()));
                row.extend(
                    p.assignment
                        .triples(spec)
                        .map(|(_, _, _, b)| to_f64(b).to_string()),
                );
                row.push(if front.contains(&p.lambda) { "1" } else { "0" }.into());
            }
            Err(status) => {
                row.extend(std::iter::repeat_n(status.to_string(), value_columns));
                row.push("0".into());
            }
        }
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    csv
}

fn pareto(a: &ParetoArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let loaded = load(&a.path, err)?;
    if loaded.assignment.is_some() {
        writeln!(
            err,
            "note: `alphas` and `betas` are ignored; they are the variables here"
        )?;
    }
    let weights = match (&a.weights, &a.grid) {
        (Some(w), _) => w.clone(),
        (None, Some(g)) => parse_grid(g)?,
        (None, None) => optimizer::default_grid(),
    };
    let config = ProblemConfig {
        mode: mode_from(a)?,
        weights,
        linearization: match a.linearization {
            LinearizationArg::PerPosition => Linearization::PerPosition,
            LinearizationArg::FullProduct => Linearization::FullProduct,
        },
        max_scenarios: a.ceiling.max_scenarios,
        ..Default::default()
    };
    let result = optimizer::sweep(&loaded.spec, &config)?;
    for (lambda, status) in result.failures() {
        writeln!(err, "lambda {lambda}: solver reported {status}")?;
    }
    for p in result.points().filter(|p| !p.feasible) {
        writeln!(err, "lambda {}: Q = {} is below B", p.lambda, to_f64(&p.q))?;
    }
    if config.mode != Mode::General {
        compare_with_general(&loaded.spec, &config, &result, err)?;
    }
    let csv = sweep_csv(&result);
    match &a.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => out.write_all(csv.as_bytes())?,
    }
    Ok(if result.points().next().is_some() {
        EXIT_OK
    } else {
        EXIT_INPUT
    })
}

/// Prints, per weight, the general-mode optimum next to the restricted one.
fn compare_with_general(
    spec: &DssSpec,
    config: &ProblemConfig,
    restricted: &Sweep,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let general = optimizer::sweep(
        spec,
        &ProblemConfig {
            mode: Mode::General,
            ..config.clone()
        },
    )?;
    writeln!(
        err,
        "lambda,general_objective,restricted_objective,general_not_worse"
    )?;
    for (g, r) in general.entries.iter().zip(&restricted.entries) {
        match (&g.outcome, &r.outcome) {
            (Ok(g), Ok(r)) => {
                let (gv, rv) = (g.weighted_cost(), r.weighted_cost());
                let ok = gv <= rv + crate::number::TOLERANCE;
                writeln!(err, "{},{gv},{rv},{}", g.lambda, if ok { "yes" } else { "no" })?;
            }
            _ => writeln!(err, "{},n/a,n/a,n/a", g.lambda)?,
        }
    }
    Ok(())
}

fn flowgraph(a: &FlowgraphArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let loaded = load(&a.path, err)?;
    let asg = require_assignment(&loaded)?;
    let spec = &loaded.spec;
    let scenario = match select(spec, &a.selector)? {
        Selection::Scenario(s) => s,
        Selection::Set(t) => RepairScenario {
            sequence: NodeSequence {
                set_index: t,
                nodes: spec.reconstruction_sets()[t].as_slice().to_vec(),
            },
            choices: vec![0; spec.reconstruction_sets()[t].len()],
        },
        Selection::All => {
            return Err(Failure("flowgraph needs --reconstruction-set".into()));
        }
    };
    let storage = if a.unbounded_step_zero {
        StepZeroStorage::Unbounded
    } else {
        StepZeroStorage::Capped
    };
    let graph = FlowGraph::build_with(spec, asg, &scenario, storage)?;
    writeln!(
        err,
        "{}: {} vertices, {} edges, max-flow {}, closed-form term {}",
        describe(&scenario),
        graph.network().vertex_count(),
        graph.network().edges().len(),
        format_rational(&graph.max_flow()),
        format_rational(&bound::scenario_term(spec, asg, &scenario)),
    )?;
    let dot = graph.to_dot();
    match &a.dot {
        Some(path) => std::fs::write(path, dot).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => out.write_all(dot.as_bytes())?,
    }
    Ok(EXIT_OK)
}
