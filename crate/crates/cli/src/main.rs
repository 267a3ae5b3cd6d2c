//! `graphon-ldp`: command-line front end.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on domain errors, 3 when
//! the solver reports non-convergence (the result is still written).

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use graphon_ldp::rate::{DEFAULT_GRID_SIZE, DEFAULT_PHASE_TOL};
use graphon_ldp::sampler::default_proposal;
use graphon_ldp::{
    candidate_clique, candidate_constant, conditional_structure_experiment, cut_distance,
    delta_cut, exact_tail, ip_graphon, ip_scalar, minorant_curve, phase_diagram, phase_t_grid,
    solve_phi, tilted_tail_estimate, ConditionalOptions, DeltaCutOptions, MethodChoice,
    SolveOptions, StepGraphon,
};

use output::{fmt9, to_json, Csv};

#[derive(Parser, Debug)]
#[command(
    name = "graphon-ldp",
    version,
    about = "Large deviations of dense random graphs"
)]
struct Cli {
    /// Seed for every random choice in the run.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads, 0 for one per core.
    #[arg(long, global = true, env = "GRAPHON_LDP_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rate I_p of a value u or of a graphon file.
    Rate(RateArgs),
    /// h_p and its convex minorant on the hull grid.
    Minorant(MinorantArgs),
    /// Replica-symmetric / broken classification over a t grid.
    Phase(PhaseArgs),
    /// Solve the triangle upper-tail variational problem.
    Solve(SolveArgs),
    /// Cut distance between two graphon files.
    Cutdist(CutdistArgs),
    /// Importance-sampling estimate of the triangle upper tail.
    Simulate(SimulateArgs),
    /// Exact enumeration against importance sampling at tiny n.
    Validate(ValidateArgs),
    /// Distances of conditioned samples to reference graphons.
    Conditional(ConditionalArgs),
}

#[derive(Args, Debug)]
struct RateArgs {
    #[arg(long)]
    p: f64,
    /// Scalar value in [0, 1].
    #[arg(long, conflicts_with = "graphon", required_unless_present = "graphon")]
    u: Option<f64>,
    /// JSON graphon file.
    #[arg(long)]
    graphon: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MinorantArgs {
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    grid_size: usize,
}

#[derive(Args, Debug)]
struct PhaseArgs {
    /// One or more edge probabilities, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<f64>,
    /// Number of t points per p.
    #[arg(long, default_value_t = 200)]
    t_grid: usize,
    #[arg(long, default_value_t = DEFAULT_PHASE_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_GRID_SIZE)]
    grid_size: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    All,
    FixedPoint,
    ProjectedGradient,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    p: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 16)]
    blocks: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::All)]
    method: MethodArg,
    #[arg(long, default_value_t = graphon_ldp::solver::DEFAULT_RANDOM_STARTS)]
    random_starts: usize,
}

#[derive(Args, Debug)]
struct CutdistArgs {
    /// JSON graphon file.
    #[arg(long)]
    f: PathBuf,
    /// JSON graphon file.
    #[arg(long)]
    g: PathBuf,
    /// Also minimise over block relabelings at this resolution.
    #[arg(long)]
    delta_blocks: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TiltKind {
    /// `≡ p`: plain Monte Carlo.
    Identity,
    /// `≡ (6t)^{1/3}`.
    Constant,
    /// Solver optimiser at the finite-size target.
    Solver,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, value_enum, default_value_t = TiltKind::Constant, conflicts_with = "tilt_file")]
    tilt: TiltKind,
    /// JSON graphon file used as the tilt.
    #[arg(long)]
    tilt_file: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    blocks: usize,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    min_triangles: u64,
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    /// Number of independent estimator runs.
    #[arg(long, default_value_t = 10)]
    runs: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RefKind {
    Constant,
    Clique,
    Optimizer,
}

#[derive(Args, Debug)]
struct ConditionalArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long)]
    t: f64,
    /// Quotient resolution of the distance.
    #[arg(long, default_value_t = 4)]
    blocks: usize,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "constant,clique"
    )]
    refs: Vec<RefKind>,
}

enum Failure {
    Domain(String),
    NotConverged(String),
}

impl From<graphon_ldp::Error> for Failure {
    fn from(e: graphon_ldp::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

struct Artifact {
    text: String,
    converged: bool,
}

impl Artifact {
    fn ok(text: String) -> Self {
        Self {
            text,
            converged: true,
        }
    }
}

fn read_graphon(path: &Path) -> Result<StepGraphon, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))
}

fn choose(format: Option<Format>, default: Format) -> Format {
    format.unwrap_or(default)
}

fn rate(args: &RateArgs, format: Option<Format>) -> Result<Artifact, Failure> {
    let value = match (&args.u, &args.graphon) {
        (Some(u), _) => ip_scalar(*u, args.p)?,
        (None, Some(path)) => ip_graphon(&read_graphon(path)?, args.p)?,
        (None, None) => unreachable!("clap requires one of --u / --graphon"),
    };
    let text = match format {
        None => format!("{}\n", fmt9(value)),
        Some(Format::Json) => {
            #[derive(Serialize)]
            struct Out {
                p: f64,
                u: Option<f64>,
                rate: f64,
            }
            to_json(&Out {
                p: args.p,
                u: args.u,
                rate: value,
            })
        }
        Some(Format::Csv) => {
            let mut csv = Csv::new("rate", &["p", "u", "rate"]);
            csv.row(&[
                fmt9(args.p),
                args.u.map(fmt9).unwrap_or_default(),
                fmt9(value),
            ]);
            csv.finish()
        }
    };
    Ok(Artifact::ok(text))
}

fn minorant(args: &MinorantArgs, format: Option<Format>) -> Result<Artifact, Failure> {
    let curve = minorant_curve(args.p, args.grid_size)?;
    let text = match choose(format, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new("minorant", &["t", "h", "h_hat"]);
            for (t, h, hh) in &curve {
                csv.row(&[fmt9(*t), fmt9(*h), fmt9(*hh)]);
            }
            csv.finish()
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Point {
                t: f64,
                h: f64,
                h_hat: f64,
            }
            let pts: Vec<Point> = curve
                .iter()
                .map(|&(t, h, h_hat)| Point { t, h, h_hat })
                .collect();
            to_json(&pts)
        }
    };
    Ok(Artifact::ok(text))
}

fn phase(args: &PhaseArgs, format: Option<Format>) -> Result<Artifact, Failure> {
    let mut rows = Vec::new();
    for &p in &args.p {
        let ts = phase_t_grid(p, args.t_grid)?;
        rows.extend(phase_diagram(&[p], &ts, args.tol, args.grid_size)?.rows);
    }
    let text = match choose(format, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new("phase", &["p", "t", "h", "h_hat", "beta", "phase"]);
            for row in &rows {
                for q in &row.points {
                    csv.row(&[
                        fmt9(q.p),
                        fmt9(q.t),
                        fmt9(q.h),
                        fmt9(q.h_hat),
                        q.beta.map(fmt9).unwrap_or_default(),
                        q.phase.label().to_string(),
                    ]);
                }
            }
            for row in &rows {
                csv.comment(&format!(
                    "double_transition p={} {}",
                    fmt9(row.p),
                    row.double_transition
                ));
            }
            csv.finish()
        }
        Format::Json => to_json(&rows),
    };
    Ok(Artifact::ok(text))
}

fn solve(args: &SolveArgs, seed: u64, format: Option<Format>) -> Result<Artifact, Failure> {
    let opts = SolveOptions {
        blocks: args.blocks,
        seed,
        method: match args.method {
            MethodArg::All => MethodChoice::All,
            MethodArg::FixedPoint => MethodChoice::FixedPoint,
            MethodArg::ProjectedGradient => MethodChoice::ProjectedGradient,
        },
        random_starts: args.random_starts,
        ..SolveOptions::default()
    };
    let r = solve_phi(args.p, args.t, &opts)?;
    let text = match choose(format, Format::Json) {
        Format::Json => to_json(&r),
        Format::Csv => {
            let mut csv = Csv::new(
                "solve",
                &[
                    "label",
                    "method",
                    "objective",
                    "achieved_t",
                    "converged",
                    "iterations",
                ],
            );
            for s in &r.multistart_log {
                csv.row(&[
                    s.label.clone(),
                    format!("{:?}", s.method),
                    fmt9(s.objective),
                    fmt9(s.achieved_t),
                    s.converged.to_string(),
                    s.iterations.to_string(),
                ]);
            }
            csv.comment(&format!(
                "best {} objective={} converged={}",
                r.start_label,
                fmt9(r.objective),
                r.converged
            ));
            csv.finish()
        }
    };
    Ok(Artifact {
        text,
        converged: r.converged,
    })
}

fn cutdist(args: &CutdistArgs, seed: u64, format: Option<Format>) -> Result<Artifact, Failure> {
    let f = read_graphon(&args.f)?;
    let g = read_graphon(&args.g)?;
    let cut = cut_distance(&f, &g)?;
    let delta = match args.delta_blocks {
        Some(k) => Some(delta_cut(
            &f,
            &g,
            DeltaCutOptions {
                blocks: Some(k),
                seed,
                ..DeltaCutOptions::default()
            },
        )?),
        None => None,
    };
    #[derive(Serialize)]
    struct Out {
        cut_distance: f64,
        exact: bool,
        delta_cut: Option<f64>,
        permutation: Option<Vec<usize>>,
    }
    let out = Out {
        cut_distance: cut.value,
        exact: cut.exact,
        delta_cut: delta.as_ref().map(|d| d.value),
        permutation: delta.map(|d| d.permutation),
    };
    let text = match choose(format, Format::Json) {
        Format::Json => to_json(&out),
        Format::Csv => {
            let mut csv = Csv::new("cutdist", &["cut_distance", "exact", "delta_cut"]);
            csv.row(&[
                fmt9(out.cut_distance),
                out.exact.to_string(),
                out.delta_cut.map(fmt9).unwrap_or_default(),
            ]);
            csv.finish()
        }
    };
    Ok(Artifact::ok(text))
}

fn simulate(args: &SimulateArgs, seed: u64, format: Option<Format>) -> Result<Artifact, Failure> {
    let tilt = match &args.tilt_file {
        Some(path) => read_graphon(path)?,
        None => match args.tilt {
            TiltKind::Identity => StepGraphon::constant(args.p)?,
            TiltKind::Constant => {
                candidate_constant(args.t)?.map_values(|v| v.clamp(1e-9, 1.0 - 1e-9))
            }
            TiltKind::Solver => default_proposal(args.n, args.p, args.t, args.blocks, seed)?,
        },
    };
    let est = tilted_tail_estimate(args.n, args.p, args.t, &tilt, args.samples, seed)?;
    if let Some(w) = &est.warning {
        eprintln!("warning: {w}");
    }
    let text = match choose(format, Format::Json) {
        Format::Json => to_json(&est),
        Format::Csv => {
            let mut csv = Csv::new(
                "simulate",
                &[
                    "n",
                    "p",
                    "t",
                    "log_prob_per_n2",
                    "std_error",
                    "prob",
                    "samples",
                    "accepted",
                ],
            );
            csv.row(&[
                est.n.to_string(),
                fmt9(est.p),
                fmt9(est.t),
                fmt9(est.log_prob_per_n2),
                fmt9(est.std_error),
                fmt9(est.prob),
                est.samples.to_string(),
                est.accepted.to_string(),
            ]);
            csv.finish()
        }
    };
    Ok(Artifact::ok(text))
}

fn validate(args: &ValidateArgs, seed: u64, format: Option<Format>) -> Result<Artifact, Failure> {
    let n3 = (args.n as f64).powi(3);
    let t = args.min_triangles as f64 / n3;
    let exact = exact_tail(args.n, args.p, t)?;
    let tilt = solve_phi(
        args.p,
        t.min(1.0 / 6.0 - 1e-6),
        &SolveOptions::with_blocks(4),
    )?
    .optimizer
    .map_values(|v| v.clamp(1e-9, 1.0 - 1e-9));
    #[derive(Serialize)]
    struct Row {
        run: u64,
        exact: f64,
        estimate: f64,
        std_error: f64,
        z: f64,
        accepted: usize,
    }
    let mut rows = Vec::new();
    for run in 0..args.runs {
        let est = tilted_tail_estimate(
            args.n,
            args.p,
            t,
            &tilt,
            args.samples,
            seed.wrapping_add(run),
        )?;
        let z = if est.prob_std_error > 0.0 {
            (est.prob - exact) / est.prob_std_error
        } else {
            0.0
        };
        rows.push(Row {
            run,
            exact,
            estimate: est.prob,
            std_error: est.prob_std_error,
            z,
            accepted: est.accepted,
        });
    }
    let text = match choose(format, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(
                "validate",
                &["run", "exact", "estimate", "std_error", "z", "accepted"],
            );
            for r in &rows {
                csv.row(&[
                    r.run.to_string(),
                    fmt9(r.exact),
                    fmt9(r.estimate),
                    fmt9(r.std_error),
                    fmt9(r.z),
                    r.accepted.to_string(),
                ]);
            }
            csv.finish()
        }
        Format::Json => to_json(&rows),
    };
    Ok(Artifact::ok(text))
}

fn conditional(
    args: &ConditionalArgs,
    seed: u64,
    format: Option<Format>,
) -> Result<Artifact, Failure> {
    let mut refs = Vec::new();
    for kind in &args.refs {
        let entry = match kind {
            RefKind::Constant => ("c_t".to_string(), candidate_constant(args.t)?),
            RefKind::Clique => ("chi_t".to_string(), candidate_clique(args.t)?),
            RefKind::Optimizer => (
                "optimizer".to_string(),
                solve_phi(
                    args.p,
                    args.t,
                    &SolveOptions {
                        seed,
                        ..SolveOptions::with_blocks(8)
                    },
                )?
                .optimizer,
            ),
        };
        refs.push(entry);
    }
    let opts = ConditionalOptions {
        blocks: args.blocks,
        samples: args.samples,
        seed,
        ..ConditionalOptions::default()
    };
    let table = conditional_structure_experiment(args.n, args.p, args.t, &refs, &opts)?;
    if let Some(w) = &table.warning {
        eprintln!("warning: {w}");
    }
    let text = match choose(format, Format::Csv) {
        Format::Csv => {
            let mut csv = Csv::new(
                "conditional",
                &[
                    "ref_label",
                    "mean_distance",
                    "std_error",
                    "accepted_samples",
                ],
            );
            for r in &table.rows {
                csv.row(&[
                    r.ref_label.clone(),
                    fmt9(r.mean_distance),
                    fmt9(r.std_error),
                    r.accepted_samples.to_string(),
                ]);
            }
            csv.finish()
        }
        Format::Json => to_json(&table),
    };
    Ok(Artifact::ok(text))
}

fn run(cli: &Cli) -> Result<Artifact, Failure> {
    let (seed, format) = (cli.seed, cli.format);
    match &cli.command {
        Command::Rate(a) => rate(a, format),
        Command::Minorant(a) => minorant(a, format),
        Command::Phase(a) => phase(a, format),
        Command::Solve(a) => solve(a, seed, format),
        Command::Cutdist(a) => cutdist(a, seed, format),
        Command::Simulate(a) => simulate(a, seed, format),
        Command::Validate(a) => validate(a, seed, format),
        Command::Conditional(a) => conditional(a, seed, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads)
        .build_global()
    {
        eprintln!("error: cannot start thread pool: {e}");
        return ExitCode::from(2);
    }
    let result = run(&cli).and_then(|artifact| {
        match &cli.output {
            Some(path) => fs::write(path, &artifact.text)
                .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))?,
            None => print!("{}", artifact.text),
        }
        if artifact.converged {
            Ok(())
        } else {
            Err(Failure::NotConverged(
                "solver did not converge; best feasible point written".into(),
            ))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::NotConverged(msg)) => {
            eprintln!("warning: {msg}");
            ExitCode::from(3)
        }
    }
}
