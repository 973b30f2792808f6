//! Command-line front end.
//!
//! Exit codes: 0 success, 1 failed trial or invariant violation, 2 usage
//! error, 3 model-check instance too large.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::engine::{self, RunMode, RunOptions, RunRecord, ScalingRow};
use crate::error::ModelCheckError;
use crate::graph::{generate, Digraph, GraphKind};
use crate::modelcheck::{self, DEFAULT_CAP};
use crate::protocol::{Output, Protocol};
use crate::protocols::{Cig, CiwN, CiwNk};
use crate::scheduler::{Schedule, ScheduleKind};
use crate::stats;
use crate::transform::{f_transform, mirrored_run};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_TOO_LARGE: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum ProtocolChoice {
    CiwN,
    CiwNk,
    Cig,
}

#[derive(Parser, Debug)]
#[command(
    name = "cliqueid",
    version,
    about = "Population protocols that decide whether the interaction graph is complete"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run trials and write one JSON record per trial.
    Simulate(SimulateArgs),
    /// Measure stabilization on complete graphs over a list of sizes.
    Sweep(SweepArgs),
    /// Explore every reachable configuration of a small instance.
    Modelcheck(ModelcheckArgs),
    /// Write the doubled graph of a graph file.
    Transform(TransformArgs),
    /// Run a protocol on a graph and its doubled graph in lockstep.
    MirrorDemo(MirrorArgs),
}

#[derive(Args, Debug, Clone)]
pub struct ProtocolArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolChoice,
    /// Population size (also the protocol parameter for ciw_n and ciw_nk).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of groups; required for ciw_nk only.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    #[arg(long, value_enum, default_value = "complete", conflicts_with = "graph_file")]
    pub graph: GraphKind,
    /// Line-oriented graph file; overrides --graph and implies --n.
    #[arg(long)]
    pub graph_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, value_enum, default_value = "uniform_random")]
    pub schedule: ScheduleKind,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub trials: u64,
    #[arg(long)]
    pub max_steps: Option<u64>,
    #[arg(long, value_enum, default_value = "positive")]
    pub mode: RunMode,
    /// JSON output path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Check protocol invariants after every interaction.
    #[arg(long)]
    pub checks: bool,
    #[arg(long)]
    pub census: bool,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub protocol: ProtocolChoice,
    /// Comma-separated population sizes.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub sizes: Vec<usize>,
    /// Comma-separated group counts (ciw_nk).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub ks: Vec<usize>,
    /// Fixed size when only --ks varies.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum, default_value = "uniform_random")]
    pub schedule: ScheduleKind,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 30)]
    pub trials: u64,
    /// CSV output path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the rows as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ModelcheckArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Expected output; defaults to yes exactly on complete graphs.
    #[arg(long, value_enum)]
    pub expected: Option<OutputArg>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum OutputArg {
    Yes,
    No,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct MirrorArgs {
    #[command(flatten)]
    pub protocol: ProtocolArgs,
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 10_000)]
    pub steps: u64,
    #[arg(long, value_enum, default_value = "uniform_random")]
    pub schedule: ScheduleKind,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// A failure mapped to an exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn failed(message: impl Into<String>) -> Self {
        Self { code: EXIT_FAILED, message: message.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::failed(format!("i/o error: {e}"))
    }
}

type CliResult = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command) -> CliResult {
    match cmd {
        Command::Simulate(a) => simulate(a),
        Command::Sweep(a) => sweep(a),
        Command::Modelcheck(a) => model_check(a),
        Command::Transform(a) => transform(a),
        Command::MirrorDemo(a) => mirror_demo(a),
    }
}

/// Builds the concrete protocol and evaluates `$body` with it bound to `$p`.
macro_rules! with_protocol {
    ($choice:expr, $n:expr, $k:expr, |$p:ident| $body:expr) => {{
        match $choice {
            ProtocolChoice::CiwN => {
                let $p = CiwN::new($n).map_err(|e| Failure::usage(e.to_string()))?;
                $body
            }
            ProtocolChoice::CiwNk => {
                let k = $k.ok_or_else(|| Failure::usage("--k is required for ciw_nk"))?;
                let $p = CiwNk::new($n, k).map_err(|e| Failure::usage(e.to_string()))?;
                $body
            }
            ProtocolChoice::Cig => {
                let $p = Cig::new();
                $body
            }
        }
    }};
}

fn load_graph(g: &GraphArgs, n: Option<usize>, seed: u64) -> Result<(Digraph, String), Failure> {
    if let Some(path) = &g.graph_file {
        let graph = Digraph::load(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        if let Some(n) = n {
            if n != graph.n() {
                return Err(Failure::usage(format!("--n {n} disagrees with the graph file ({} nodes)", graph.n())));
            }
        }
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        return Ok((graph, name));
    }
    let n = n.ok_or_else(|| Failure::usage("--n is required unless --graph-file is given"))?;
    let graph = generate(g.graph, n, seed).map_err(|e| Failure::usage(e.to_string()))?;
    Ok((graph, g.graph.name().to_string()))
}

fn check_k(p: &ProtocolArgs) -> CliResult {
    if p.protocol != ProtocolChoice::CiwNk && p.k.is_some() {
        return Err(Failure::usage("--k only applies to ciw_nk"));
    }
    Ok(())
}

fn with_jobs<R: Send>(jobs: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    match jobs {
        None => Ok(f()),
        Some(0) => Err(Failure::usage("--jobs must be positive")),
        Some(j) => {
            let pool =
                rayon::ThreadPoolBuilder::new().num_threads(j).build().map_err(|e| Failure::failed(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> CliResult {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    bytes
}

fn run_records<P: Protocol>(p: &P, g: &Digraph, name: &str, a: &SimulateArgs) -> Result<Vec<RunRecord>, Failure> {
    let mut opts = match a.mode {
        RunMode::Positive => RunOptions::positive(g.n()),
        RunMode::Negative => RunOptions::negative(g.n()),
    };
    if let Some(m) = a.max_steps {
        opts = opts.with_max_steps(m);
    }
    opts.invariant_checks = a.checks;
    opts.census = a.census;
    let (kind, seed) = (a.schedule, a.seed);
    with_jobs(a.jobs, || {
        use rayon::prelude::*;
        (0..a.trials)
            .into_par_iter()
            .map(|trial| {
                let mut s = Schedule::with_stream(g, kind, seed, trial).with_seeded_order();
                let label = engine::RunLabel { graph: name.to_string(), seed, trial };
                engine::run(p, g, &mut s, opts, &label)
            })
            .collect()
    })
}

fn simulate(a: SimulateArgs) -> CliResult {
    check_k(&a.protocol)?;
    if a.trials == 0 {
        return Err(Failure::usage("--trials must be positive"));
    }
    let (g, name) = load_graph(&a.graph, a.protocol.n, a.seed)?;
    let n = a.protocol.n.unwrap_or(g.n());
    let records = with_protocol!(a.protocol.protocol, n, a.protocol.k, |p| run_records(&p, &g, &name, &a)?);
    write_output(a.out.as_deref(), &to_json(&records))?;

    let failed: Vec<&RunRecord> = records.iter().filter(|r| !r.accepted()).collect();
    if failed.is_empty() {
        return Ok(());
    }
    let trace = match &a.out {
        Some(p) => p.with_extension("trace.json"),
        None => PathBuf::from(format!("cliqueid-trace-{}-n{}-seed{}.json", records[0].protocol, g.n(), a.seed)),
    };
    fs::write(&trace, to_json(&failed))?;
    let violations = failed.iter().filter(|r| !r.invariant_violations.is_empty()).count();
    Err(Failure::failed(format!(
        "{} of {} trials failed ({violations} with invariant violations); trace written to {}",
        failed.len(),
        records.len(),
        trace.display()
    )))
}

fn sweep(a: SweepArgs) -> CliResult {
    if a.trials == 0 {
        return Err(Failure::usage("--trials must be positive"));
    }
    let sizes: Vec<usize> = if a.sizes.is_empty() { a.n.into_iter().collect() } else { a.sizes.clone() };
    if sizes.is_empty() {
        return Err(Failure::usage("empty size list: pass --sizes or --n"));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n < 2) {
        return Err(Failure::usage(format!("size {n} is below 2")));
    }
    let ks: Vec<usize> = match a.protocol {
        ProtocolChoice::CiwNk if !a.ks.is_empty() => a.ks.clone(),
        ProtocolChoice::CiwNk => a.k.into_iter().collect(),
        _ if !a.ks.is_empty() || a.k.is_some() => return Err(Failure::usage("--k/--ks only apply to ciw_nk")),
        _ => Vec::new(),
    };
    if a.protocol == ProtocolChoice::CiwNk {
        if ks.is_empty() {
            return Err(Failure::usage("--k or --ks is required for ciw_nk"));
        }
        for &k in &ks {
            for &n in &sizes {
                CiwNk::new(n, k).map_err(|e| Failure::usage(e.to_string()))?;
            }
        }
    }
    let (seed, trials, kind) = (a.seed, a.trials, a.schedule);
    let rows: Vec<ScalingRow> = with_jobs(a.jobs, || match a.protocol {
        ProtocolChoice::CiwN => {
            engine::measure_scaling(|n| CiwN::new(n).expect("validated"), &sizes, trials, seed, kind)
        }
        ProtocolChoice::Cig => engine::measure_scaling(|_| Cig::new(), &sizes, trials, seed, kind),
        ProtocolChoice::CiwNk => ks
            .iter()
            .flat_map(|&k| {
                engine::measure_scaling(|n| CiwNk::new(n, k).expect("validated"), &sizes, trials, seed, kind)
            })
            .collect(),
    })?;

    let mut csv_bytes = Vec::new();
    engine::write_scaling_csv(&rows, &mut csv_bytes).map_err(|e| Failure::failed(e.to_string()))?;
    write_output(a.out.as_deref(), &csv_bytes)?;
    if let Some(path) = &a.json {
        fs::write(path, to_json(&rows))?;
    }
    if sizes.len() >= 3 && ks.len() <= 1 {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.mean_steps)).collect();
        if let Ok(slope) = stats::loglog_slope(&pts) {
            eprintln!("log-log slope of mean steps: {slope:.3}");
        }
    }
    let flagged: Vec<String> = rows
        .iter()
        .filter(|r| r.flagged())
        .map(|r| format!("n={} k={:?}: {} trials", r.n, r.k, r.unstabilized))
        .collect();
    if flagged.is_empty() {
        Ok(())
    } else {
        Err(Failure::failed(format!("trials hit max_steps without stabilizing: {}", flagged.join("; "))))
    }
}

fn model_check(a: ModelcheckArgs) -> CliResult {
    check_k(&a.protocol)?;
    let (g, name) = load_graph(&a.graph, a.protocol.n, 0)?;
    let n = a.protocol.n.unwrap_or(g.n());
    let expected = match a.expected {
        Some(OutputArg::Yes) => Output::Yes,
        Some(OutputArg::No) => Output::No,
        None if g.is_complete() => Output::Yes,
        None => Output::No,
    };
    let verdict = with_protocol!(a.protocol.protocol, n, a.protocol.k, |p| {
        let cg = modelcheck::explore(&p, &g, a.cap).map_err(|e| match e {
            ModelCheckError::TooLarge { .. } => Failure { code: EXIT_TOO_LARGE, message: e.to_string() },
            other => Failure::failed(other.to_string()),
        })?;
        modelcheck::check_global_fairness(&cg, expected).labeled(name.clone())
    });
    write_output(a.out.as_deref(), &to_json(&verdict))?;
    if verdict.solves {
        Ok(())
    } else {
        Err(Failure::failed(format!("{:?} witness found", verdict.witness_kind)))
    }
}

fn transform(a: TransformArgs) -> CliResult {
    let g = Digraph::load(&a.input).map_err(|e| Failure::usage(format!("{}: {e}", a.input.display())))?;
    let f = f_transform(&g);
    f.save(&a.out)?;
    let summary = serde_json::json!({
        "n": f.n(),
        "arcs": f.arc_count(),
        "is_complete": f.is_complete(),
    });
    write_output(None, &to_json(&summary))
}

fn mirror_demo(a: MirrorArgs) -> CliResult {
    check_k(&a.protocol)?;
    let (g, _) = load_graph(&a.graph, a.protocol.n, a.seed)?;
    let n = a.protocol.n.unwrap_or(g.n());
    let schedule = Schedule::new(&g, a.schedule, a.seed).with_seeded_order();
    let report = with_protocol!(a.protocol.protocol, n, a.protocol.k, |p| {
        mirrored_run(&p, &g, schedule, a.steps).map_err(|e| Failure::usage(e.to_string()))?
    });
    write_output(None, &to_json(&report))?;
    if report.held {
        Ok(())
    } else {
        Err(Failure::failed(format!("mirror invariant broke after base step {:?}", report.first_divergence)))
    }
}
