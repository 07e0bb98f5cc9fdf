//! Batch front end: load problems, evaluate expectations, verify against
//! the statevector oracle, scan landscapes, refine angles.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 input/schema errors,
//! 3 enumeration/simulation cap violations.

mod fmt;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use qaoa_exact::error::Error;
use qaoa_exact::gm::{EnumerationCaps, GmEngine};
use qaoa_exact::hypergraph::WeightedHypergraph;
use qaoa_exact::optimize::{grid_scan, refine, AxisSpec, DEFAULT_GRID_CAP};
use qaoa_exact::oracle::{run_gm, run_pm, OracleOptions};
use qaoa_exact::pm::{variant_axes, PmEngine};
use qaoa_exact::random::{random_gm_instance, random_pm_instance, SplitMix64};
use qaoa_exact::schema::{
    parse_gm_params, parse_pm_params, parse_problem, problem_to_gm, problem_to_pm, AxesSpec,
    ParseError,
};
use qaoa_exact::{GmParams64, IsingWeights64, MixerAxes64, PmParams64, ProductState64};

use report::{RunReport, TermReport, VerifyReport};

#[derive(Parser)]
#[command(name = "qaoa-exact", version, about = "Exact QAOA cost expectations")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate analytic cost expectations for a problem.
    Expect(ExpectArgs),
    /// Compare the analytic expectations against the statevector oracle.
    Verify(VerifyArgs),
    /// Export a dense landscape of the total expectation over 1-3 axes.
    Scan(ScanArgs),
    /// Pattern-search refinement of shared angles.
    Refine(RefineArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Pm,
    Gm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StateKind {
    /// Uniform superposition |s>.
    S,
    /// Product state |Omega> from the params file.
    Omega,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct CommonArgs {
    /// Mixer family to evaluate.
    #[arg(long, value_enum, default_value = "pm")]
    mode: Mode,
    /// Initial state for gm mode.
    #[arg(long, value_enum, default_value = "s")]
    state: StateKind,
    /// Number of ansatz layers (gm mode).
    #[arg(long, default_value_t = 1)]
    layers: usize,
    /// Qubit cap for oracle simulations.
    #[arg(long, default_value_t = 16)]
    oracle_cap: usize,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Include wall-clock timing in the report (breaks byte stability).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ExpectArgs {
    /// Problem JSON file.
    problem: PathBuf,
    /// Params JSON file.
    params: PathBuf,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerifyArgs {
    /// Problem JSON file (omit when using --seed).
    problem: Option<PathBuf>,
    /// Params JSON file (omit when using --seed).
    params: Option<PathBuf>,
    #[command(flatten)]
    common: CommonArgs,
    /// Generate a random instance from this seed instead of reading files.
    #[arg(long)]
    seed: Option<u64>,
    /// Mismatch threshold on the max absolute error.
    #[arg(long, default_value_t = 1e-9)]
    threshold: f64,
    /// Deliberately corrupt the analytic weights by this relative amount
    /// (negative control; forces a mismatch).
    #[arg(long)]
    perturb: Option<f64>,
}

#[derive(Args)]
struct ScanArgs {
    /// Problem JSON file.
    problem: PathBuf,
    /// Params JSON file with base values (optional; zero angles otherwise).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Scan axis, `name=start:stop:count`; repeat for up to 3 axes.
    #[arg(long = "axis", required = true)]
    axes: Vec<String>,
    /// Output file path.
    #[arg(long)]
    out: PathBuf,
    /// Cap on the total number of grid points.
    #[arg(long, default_value_t = DEFAULT_GRID_CAP)]
    point_cap: usize,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct RefineArgs {
    /// Problem JSON file.
    problem: PathBuf,
    /// Params JSON file with base values (optional; zero angles otherwise).
    #[arg(long)]
    params: Option<PathBuf>,
    /// Variable to refine, `name=start`; repeatable.
    #[arg(long = "var", required = true)]
    vars: Vec<String>,
    /// Initial pattern-search step.
    #[arg(long, default_value_t = 0.25)]
    step: f64,
    /// Halt when the step drops below this tolerance.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[command(flatten)]
    common: CommonArgs,
}

/// An error carrying its process exit code.
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn caps(message: impl Into<String>) -> Self {
        CliError {
            code: 3,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::FamilyTooLarge { .. }
            | Error::TooManyQubits { .. }
            | Error::TooManyPoints { .. } => CliError::caps(e.to_string()),
            _ => CliError::usage(e.to_string()),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        match e {
            ParseError::Semantic(inner) => CliError::from(inner),
            other => CliError::usage(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Expect(args) => cmd_expect(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Scan(args) => cmd_scan(args),
        Cmd::Refine(args) => cmd_refine(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

fn digest_of(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("sha256:{}", hex::encode(hasher.finalize()))
}

/// A fully prepared analytic evaluation context.
enum Prepared {
    Pm {
        graph: WeightedHypergraph<f64>,
        weights: IsingWeights64,
        params: PmParams64,
        axes: MixerAxes64,
        axes_spec: AxesSpec,
    },
    Gm {
        hyper: WeightedHypergraph<f64>,
        params: GmParams64,
        state: Option<ProductState64>,
    },
}

impl Prepared {
    fn from_files(
        problem_text: &str,
        params_text: Option<&str>,
        common: &CommonArgs,
    ) -> Result<Self, CliError> {
        let input = parse_problem(problem_text)?;
        match common.mode {
            Mode::Pm => {
                let (graph, weights) = problem_to_pm(&input)?;
                let (params, axes, axes_spec) = match params_text {
                    Some(text) => parse_pm_params(text, graph.n(), graph.m())?,
                    None => (
                        PmParams64::uniform(graph.n(), graph.m(), 0.0, 0.0),
                        variant_axes(qaoa_exact::pm::MixerVariant::Vanilla, graph.n(), &[])?,
                        AxesSpec::Variant(
                            qaoa_exact::pm::MixerVariant::Vanilla,
                            vec![0.0; graph.n()],
                        ),
                    ),
                };
                Ok(Prepared::Pm {
                    graph,
                    weights,
                    params,
                    axes,
                    axes_spec,
                })
            }
            Mode::Gm => {
                let hyper = problem_to_gm(&input)?;
                let (params, state) = match params_text {
                    Some(text) => parse_gm_params(text, hyper.n(), hyper.m(), common.layers)?,
                    None => (
                        GmParams64::uniform(common.layers, hyper.m(), 0.0, 0.0),
                        None,
                    ),
                };
                let state = match common.state {
                    StateKind::S => None,
                    StateKind::Omega => Some(state.ok_or_else(|| {
                        CliError::usage(
                            "--state omega requires a \"state\" entry in the params file",
                        )
                    })?),
                };
                Ok(Prepared::Gm {
                    hyper,
                    params,
                    state,
                })
            }
        }
    }

    /// Report terms plus their total (the total is the exact sum of terms).
    fn evaluate_terms(&self, caps: EnumerationCaps) -> Result<(Vec<TermReport>, f64), CliError> {
        match self {
            Prepared::Pm {
                graph,
                weights,
                params,
                axes,
                ..
            } => {
                let engine = PmEngine::new(graph, weights, params, axes)?;
                let mut terms = vec![TermReport {
                    kind: "const",
                    vertices: vec![],
                    factor: None,
                    value: weights.a,
                }];
                for u in 0..graph.n() {
                    let f = engine.f_vertex(u);
                    terms.push(TermReport {
                        kind: "vertex",
                        vertices: vec![u],
                        factor: Some(f),
                        value: weights.h[u] * f,
                    });
                }
                for (k, we) in graph.edges().iter().enumerate() {
                    let vs = we.edge.vertices();
                    let f = engine.f_edge(vs[0], vs[1])?;
                    terms.push(TermReport {
                        kind: "edge",
                        vertices: vs.to_vec(),
                        factor: Some(f),
                        value: weights.j[k] * f,
                    });
                }
                let total: f64 = terms.iter().map(|t| t.value).sum();
                let cross = engine.cost_expectation()?;
                debug_assert!((total - cross).abs() < 1e-10);
                Ok((terms, total))
            }
            Prepared::Gm {
                hyper,
                params,
                state,
            } => {
                let mut engine = GmEngine::new(hyper, params, state.as_ref(), caps)?;
                let mut terms = Vec::new();
                for we in hyper.edges() {
                    let z = engine.z_edge(&we.edge)?;
                    terms.push(TermReport {
                        kind: if we.edge.is_empty() { "const" } else { "edge" },
                        vertices: we.edge.vertices().to_vec(),
                        factor: Some(z),
                        value: we.cost * z,
                    });
                }
                let total: f64 = terms.iter().map(|t| t.value).sum();
                let cross = engine.cost_expectation()?;
                debug_assert!((total - cross).abs() < 1e-9);
                Ok((terms, total))
            }
        }
    }

    /// Total expectation with named scalar overrides applied (scan/refine).
    fn eval_with_overrides(
        &self,
        names: &[String],
        point: &[f64],
        caps: EnumerationCaps,
    ) -> Result<f64, CliError> {
        match self {
            Prepared::Pm {
                graph,
                weights,
                params,
                axes,
                axes_spec,
            } => {
                let mut p = params.clone();
                let mut ax = axes.clone();
                for (name, &x) in names.iter().zip(point) {
                    match name.as_str() {
                        "beta" => p.beta = vec![x; graph.n()],
                        "gamma" => {
                            p.gamma_vertex = vec![x; graph.n()];
                            p.gamma_edge = vec![x; graph.m()];
                            p.gamma_const = x;
                        }
                        "gamma_vertex" => p.gamma_vertex = vec![x; graph.n()],
                        "gamma_edge" => p.gamma_edge = vec![x; graph.m()],
                        "theta" => match axes_spec {
                            AxesSpec::Variant(variant, _) => {
                                ax = variant_axes(*variant, graph.n(), &vec![x; graph.n()])?;
                            }
                            AxesSpec::Explicit => {
                                return Err(CliError::usage(
                                    "theta axis requires variant-specified mixer axes",
                                ))
                            }
                        },
                        other => {
                            return Err(CliError::usage(format!(
                                "unknown pm parameter {other:?} (expected beta, gamma, gamma_vertex, gamma_edge, theta)"
                            )))
                        }
                    }
                }
                let engine = PmEngine::new(graph, weights, &p, &ax)?;
                Ok(engine.cost_expectation()?)
            }
            Prepared::Gm {
                hyper,
                params,
                state,
            } => {
                let mut p = params.clone();
                let mut st = state.clone();
                for (name, &x) in names.iter().zip(point) {
                    match name.as_str() {
                        "beta" => p.beta = vec![x; p.beta.len()],
                        "gamma" => {
                            let layers = p.gamma.len();
                            p.gamma = vec![vec![x; hyper.m()]; layers];
                        }
                        "omega" => match &st {
                            Some(s) => {
                                st = Some(ProductState64::new(
                                    s.lambda().to_vec(),
                                    vec![x; hyper.n()],
                                )?)
                            }
                            None => {
                                return Err(CliError::usage("omega axis requires --state omega"))
                            }
                        },
                        other => {
                            return Err(CliError::usage(format!(
                                "unknown gm parameter {other:?} (expected beta, gamma, omega)"
                            )))
                        }
                    }
                }
                let mut engine = GmEngine::new(hyper, &p, st.as_ref(), caps)?;
                Ok(engine.cost_expectation()?)
            }
        }
    }

    fn mode_name(&self) -> &'static str {
        match self {
            Prepared::Pm { .. } => "pm",
            Prepared::Gm { .. } => "gm",
        }
    }

    /// Multiplies the first nonzero analytic cost weight by `1 + rel`.
    fn perturb(&mut self, rel: f64) {
        match self {
            Prepared::Pm { weights, .. } => {
                if let Some(j) = weights.j.iter_mut().find(|j| **j != 0.0) {
                    *j *= 1.0 + rel;
                } else if let Some(h) = weights.h.iter_mut().find(|h| **h != 0.0) {
                    *h *= 1.0 + rel;
                } else {
                    weights.a += rel;
                }
            }
            Prepared::Gm { hyper, .. } => {
                let triples: Vec<_> = hyper
                    .edges()
                    .iter()
                    .map(|we| (we.edge.clone(), we.cost, we.phase))
                    .collect();
                let mut perturbed = false;
                let triples: Vec<_> = triples
                    .into_iter()
                    .map(|(e, c, p)| {
                        if !perturbed && c != 0.0 && !e.is_empty() {
                            perturbed = true;
                            (e, c * (1.0 + rel), p)
                        } else {
                            (e, c, p)
                        }
                    })
                    .collect();
                *hyper = WeightedHypergraph::new(hyper.n(), triples).expect("same shape");
            }
        }
    }
}

fn cmd_expect(args: ExpectArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let problem_text = read_file(&args.problem)?;
    let params_text = read_file(&args.params)?;
    let prepared = Prepared::from_files(&problem_text, Some(&params_text), &args.common)?;
    let (terms, total) = prepared.evaluate_terms(EnumerationCaps::default())?;
    let report = RunReport {
        input_digest: digest_of(problem_text.as_bytes()),
        mode: prepared.mode_name(),
        terms,
        total,
        timing_s: args.common.timing.then(|| started.elapsed().as_secs_f64()),
    };
    match args.common.format {
        Format::Json => print!("{}", report.to_json()),
        Format::Csv => print!("{}", report.to_csv()),
    }
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, CliError> {
    let started = Instant::now();
    let opts = OracleOptions {
        qubit_cap: args.common.oracle_cap,
        ..Default::default()
    };
    let caps = EnumerationCaps::default();

    // assemble the instance: files, or a seeded random one
    let (mut prepared, digest) = match (&args.problem, &args.params, args.seed) {
        (Some(problem), params, None) => {
            let problem_text = read_file(problem)?;
            let params_text = params.as_ref().map(read_file).transpose()?;
            (
                Prepared::from_files(&problem_text, params_text.as_deref(), &args.common)?,
                digest_of(problem_text.as_bytes()),
            )
        }
        (None, None, Some(seed)) => {
            let mut rng = SplitMix64::new(seed);
            let prepared = match args.common.mode {
                Mode::Pm => {
                    let n = rng.uniform_usize(2, 8);
                    let (graph, weights, params, axes) = random_pm_instance(&mut rng, n);
                    Prepared::Pm {
                        graph,
                        weights,
                        params,
                        axes,
                        axes_spec: AxesSpec::Explicit,
                    }
                }
                Mode::Gm => {
                    let n = rng.uniform_usize(2, 6);
                    let m = rng.uniform_usize(1, 8);
                    let (hyper, params, state) =
                        random_gm_instance(&mut rng, n, m, 3, args.common.layers);
                    let state = match args.common.state {
                        StateKind::S => None,
                        StateKind::Omega => Some(state),
                    };
                    Prepared::Gm {
                        hyper,
                        params,
                        state,
                    }
                }
            };
            (prepared, digest_of(&seed.to_le_bytes()))
        }
        _ => {
            return Err(CliError::usage(
                "verify needs either a problem and params file, or --seed",
            ))
        }
    };

    // the oracle always runs on the uncorrupted instance
    let (oracle_terms, oracle_total) = match &prepared {
        Prepared::Pm {
            graph,
            weights,
            params,
            axes,
            ..
        } => {
            let run = run_pm(graph, weights, params, axes, &opts)?;
            let mut terms = vec![weights.a];
            terms.extend(run.f_vertex.iter().zip(&weights.h).map(|(f, h)| f * h));
            terms.extend(run.f_edge.iter().zip(&weights.j).map(|(f, j)| f * j));
            (terms, run.total)
        }
        Prepared::Gm {
            hyper,
            params,
            state,
        } => {
            let run = run_gm(hyper, params, state.as_ref(), &opts)?;
            (run.cost_edge.clone(), run.total)
        }
    };

    if let Some(rel) = args.perturb {
        prepared.perturb(rel);
    }
    let (terms, total) = prepared.evaluate_terms(caps)?;
    let mut max_abs_error = (total - oracle_total).abs();
    for (t, o) in terms.iter().zip(&oracle_terms) {
        max_abs_error = max_abs_error.max((t.value - o).abs());
    }
    let ok = max_abs_error < args.threshold;

    let report = VerifyReport {
        input_digest: digest,
        mode: prepared.mode_name(),
        total_analytic: total,
        total_oracle: oracle_total,
        max_abs_error,
        threshold: args.threshold,
        ok,
        timing_s: args.common.timing.then(|| started.elapsed().as_secs_f64()),
    };
    print!("{}", report.to_json());
    Ok(if ok { 0 } else { 1 })
}

fn parse_axis(text: &str) -> Result<AxisSpec<f64>, CliError> {
    let (name, range) = text
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("axis {text:?}: expected name=start:stop:count")))?;
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "axis {text:?}: expected name=start:stop:count"
        )));
    }
    let parse_num = |s: &str| {
        s.parse::<f64>()
            .map_err(|_| CliError::usage(format!("axis {text:?}: bad number {s:?}")))
    };
    let count: usize = parts[2]
        .parse()
        .map_err(|_| CliError::usage(format!("axis {text:?}: bad count {:?}", parts[2])))?;
    Ok(AxisSpec {
        name: name.to_string(),
        start: parse_num(parts[0])?,
        stop: parse_num(parts[1])?,
        count,
    })
}

fn cmd_scan(args: ScanArgs) -> Result<u8, CliError> {
    let problem_text = read_file(&args.problem)?;
    let params_text = args.params.as_ref().map(read_file).transpose()?;
    let prepared = Prepared::from_files(&problem_text, params_text.as_deref(), &args.common)?;
    let axes = args
        .axes
        .iter()
        .map(|a| parse_axis(a))
        .collect::<Result<Vec<_>, _>>()?;
    let names: Vec<String> = axes.iter().map(|a| a.name.clone()).collect();
    let caps = EnumerationCaps::default();
    let mut failure: Option<CliError> = None;
    let landscape = grid_scan(axes, args.point_cap, |point| {
        prepared
            .eval_with_overrides(&names, point, caps)
            .map_err(|e| {
                let code = e.code;
                failure = Some(e);
                if code == 3 {
                    Error::FamilyTooLarge {
                        dimension: 0,
                        cap: 0,
                    }
                } else {
                    Error::DegenerateAxis
                }
            })
    });
    let landscape = match landscape {
        Ok(ls) => ls,
        Err(e) => return Err(failure.take().unwrap_or_else(|| CliError::from(e))),
    };
    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() && !dir.is_dir() {
            return Err(CliError::usage(format!(
                "output directory {} does not exist",
                dir.display()
            )));
        }
    }
    let body = match args.common.format {
        Format::Csv => report::landscape_csv(&landscape),
        Format::Json => report::landscape_json(&landscape),
    };
    std::fs::write(&args.out, body)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", args.out.display())))?;
    let (_, point, value) = landscape.argmax();
    let assignments: Vec<String> = names
        .iter()
        .zip(&point)
        .map(|(n, v)| format!("\"{n}\": {}", fmt::g17(*v)))
        .collect();
    println!(
        "{{\"max\": {}, \"argmax\": {{{}}}, \"cells\": {}}}",
        fmt::g17(value),
        assignments.join(", "),
        landscape.values.len()
    );
    Ok(0)
}

fn cmd_refine(args: RefineArgs) -> Result<u8, CliError> {
    let problem_text = read_file(&args.problem)?;
    let params_text = args.params.as_ref().map(read_file).transpose()?;
    let prepared = Prepared::from_files(&problem_text, params_text.as_deref(), &args.common)?;
    let mut names = Vec::new();
    let mut start = Vec::new();
    for v in &args.vars {
        let (name, value) = v
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("var {v:?}: expected name=start")))?;
        names.push(name.to_string());
        start.push(
            value
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("var {v:?}: bad number {value:?}")))?,
        );
    }
    let caps = EnumerationCaps::default();
    let mut failure: Option<CliError> = None;
    let refined = refine(&start, args.step, args.tol, |point| {
        prepared
            .eval_with_overrides(&names, point, caps)
            .map_err(|e| {
                failure = Some(e);
                Error::DegenerateAxis
            })
    });
    let refined = match refined {
        Ok(r) => r,
        Err(e) => return Err(failure.take().unwrap_or_else(|| CliError::from(e))),
    };
    let assignments: Vec<String> = names
        .iter()
        .zip(&refined.point)
        .map(|(n, v)| format!("\"{n}\": {}", fmt::g17(*v)))
        .collect();
    println!(
        "{{\"point\": {{{}}}, \"value\": {}, \"evaluations\": {}}}",
        assignments.join(", "),
        fmt::g17(refined.value),
        refined.evaluations
    );
    Ok(0)
}
