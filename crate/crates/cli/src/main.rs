use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use simquery::approx::{
    check_cut_approximation, check_cut_approximation_sampled, check_spectral_approximation, ApproxReport,
    SampledCutVerdict, EXHAUSTIVE_CUT_LIMIT,
};
use simquery::bounds::{
    appendix_c_beta, appendix_c_cmin_lower, appendix_c_cut_budget, appendix_c_observable_budget,
    theorem1_budget, theorem2_lower_budget, theorem4_cluster_budget, Budget, ClusterBudgetInputs, CutBudgetInputs,
    SpectralBudgetInputs,
};
use simquery::clus2k::{Clus2kConfig, Clus2kSampler};
use simquery::data::{
    circle_centers, gaussian_blobs, load_points_csv, planted_clusterable, rbf_similarity, rbf_similarity_median,
    two_half_circles, CrossModel, LabeledPoints, PlantedGraphSpec,
};
use simquery::experiment::{run_on_graph, ExperimentConfig};
use simquery::graph::{connected_components, num_pairs, Graph};
use simquery::sampling::{
    ComponentJoin, MixedAdaptiveSampler, QueryOracle, SampledGraph, Trajectory, UniformSampler,
    WithReplacementSampler,
};
use simquery::spectral::LaplacianMode;

#[derive(Parser)]
#[command(name = "simquery", version, about = "Approximate similarity graphs under an edge-query budget")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Budget sweeps comparing sampling schemes.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Closed-form query budgets.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Check whether one graph approximates another (exit 3 when it does not).
    Check {
        kind: CheckKind,
        #[command(flatten)]
        args: CheckArgs,
    },
    /// Sample a hidden graph stored as a graph CSV.
    Sample {
        scheme: SampleScheme,
        #[command(flatten)]
        args: SampleArgs,
    },
    /// Write synthetic datasets and graphs.
    #[command(subcommand)]
    Generate(GenerateCommand),
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Run the sweep described by a TOML config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` from the config.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print a config with every key at its default.
    DefaultConfig,
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// Edges sufficient for an ε-spectral approximation.
    Theorem1 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        min_degree: f64,
        #[arg(long)]
        lambda2: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Edges below which a binary graph with minimum cut c is unlikely to be
    /// cut-approximated.
    Theorem2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Edges sufficient to separate clusters when c_in > 4 c_out.
    Theorem4 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c_in: f64,
        #[arg(long)]
        c_out: f64,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        delta: f64,
    },
    /// Cut-approximation budgets and the observed minimum-cut lower bound.
    #[command(subcommand)]
    Appendixc(AppendixCCommand),
}

#[derive(Subcommand)]
enum AppendixCCommand {
    /// Budget given the true minimum cut c.
    Budget {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        c: f64,
    },
    /// Lower bound on the hidden minimum cut from an observed one.
    Cmin {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        c_tilde: f64,
        #[arg(long)]
        delta: f64,
    },
    /// Budget from observed quantities only.
    Observable {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        c_tilde: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckKind {
    Cut,
    Spectral,
}

#[derive(Args)]
struct CheckArgs {
    /// Reference graph CSV.
    #[arg(long)]
    g: PathBuf,
    /// Approximating graph CSV.
    #[arg(long)]
    gtilde: PathBuf,
    #[arg(long)]
    eps: f64,
    /// Random cuts to test instead of exhaustive enumeration (cut check only).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleScheme {
    Uniform,
    Clus2k,
    Cjoin,
    Replacement,
}

#[derive(Args)]
struct SampleArgs {
    /// Hidden graph CSV (weights in [0, 1]).
    #[arg(long)]
    graph: PathBuf,
    /// Number of queries.
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled graph CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-query trajectory CSV.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Target cluster count for CLUS2K.
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    recluster_period: usize,
    #[arg(long, default_value_t = 1)]
    batch_size: usize,
    #[arg(long, default_value = "unnormalized")]
    mode: String,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Two interleaved half circles.
    HalfCircles {
        #[arg(long, default_value_t = 100)]
        n_per_class: usize,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gaussian blobs centered on a circle.
    Gaussians {
        #[arg(long, default_value_t = 50)]
        n_per_class: usize,
        #[arg(long, default_value_t = 4)]
        centers: usize,
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        std: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// RBF similarity graph of a points CSV.
    Similarity {
        #[arg(long)]
        points: PathBuf,
        #[arg(long, conflicts_with = "sigma_scale")]
        sigma: Option<f64>,
        /// Bandwidth as a multiple of the median pairwise distance.
        #[arg(long, default_value_t = 0.1)]
        sigma_scale: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Planted clusterable graph; prints its measured structure.
    Planted {
        /// Comma-separated cluster sizes.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 1.0)]
        prob: f64,
        #[arg(long, value_enum, default_value = "none")]
        cross: CrossKind,
        #[arg(long, default_value_t = 0)]
        cross_edges: usize,
        #[arg(long, default_value_t = 1.0)]
        cross_weight: f64,
        #[arg(long)]
        min_c_in: Option<f64>,
        #[arg(long)]
        max_c_out: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CrossKind {
    None,
    PerPair,
    Uniform,
}

enum Failure {
    /// Bad configuration or arguments (exit 2).
    Config(String),
    /// Any other error (exit 1).
    Runtime(String),
}

impl From<simquery::Error> for Failure {
    fn from(e: simquery::Error) -> Self {
        match e {
            simquery::Error::Config(_) | simquery::Error::InvalidArgument(_) => Failure::Config(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.command {
        Command::Experiment(cmd) => experiment(cmd),
        Command::Bounds(cmd) => {
            print_json(&bounds(cmd)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { kind, args } => check(kind, &args),
        Command::Sample { scheme, args } => sample(scheme, &args),
        Command::Generate(cmd) => generate(cmd),
    }
}

fn print_json(v: &serde_json::Value) {
    let _ = writeln!(io::stdout(), "{}", serde_json::to_string_pretty(v).expect("json"));
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

/// Writes through `f` to the path, or to stdout.
fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> simquery::Result<()>) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)?;
        }
    }
    Ok(())
}

fn read_graph(path: &Path) -> CliResult<Graph> {
    let file = File::open(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
    Graph::read_csv(BufReader::new(file)).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))
}

fn experiment(cmd: ExperimentCommand) -> CliResult<ExitCode> {
    match cmd {
        ExperimentCommand::DefaultConfig => {
            print!("{}", ExperimentConfig::default().to_toml_string());
        }
        ExperimentCommand::Run { config, output } => {
            let mut cfg = ExperimentConfig::load(&config).map_err(|e| Failure::Config(e.to_string()))?;
            if output.is_some() {
                cfg.output = output;
            }
            cfg.validate().map_err(|e| Failure::Config(e.to_string()))?;
            let points = cfg.load_dataset().map_err(|e| Failure::Config(e.to_string()))?;
            let hidden = cfg.similarity(&points).map_err(|e| Failure::Config(e.to_string()))?;
            cfg.resolve_budgets(hidden.n()).map_err(|e| Failure::Config(e.to_string()))?;
            let results = run_on_graph(&hidden, &points.labels, &cfg)?;
            emit(cfg.output.as_deref(), |w| results.write_rows(w))?;
            if let Some(summary) = cfg.summary_path() {
                emit(Some(&summary), |w| results.write_summary(w))?;
            } else {
                emit(None, |w| results.write_summary(w))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn budget_json(name: &str, b: &Budget, n: usize) -> serde_json::Value {
    json!({
        "bound": name,
        "value": b.value,
        "edges": b.edges,
        "totalPairs": num_pairs(n),
        "exceedsAllPairs": b.exceeds_all_pairs(n),
    })
}

fn bounds(cmd: BoundsCommand) -> CliResult<serde_json::Value> {
    Ok(match cmd {
        BoundsCommand::Theorem1 {
            n,
            min_degree,
            lambda2,
            eps,
            delta,
        } => {
            let b = theorem1_budget(&SpectralBudgetInputs {
                n,
                min_degree,
                lambda2,
                epsilon: eps,
                delta,
            })?;
            budget_json("theorem1", &b, n)
        }
        BoundsCommand::Theorem2 { n, c, delta } => {
            json!({ "bound": "theorem2", "value": theorem2_lower_budget(n, c, delta)? })
        }
        BoundsCommand::Theorem4 {
            n,
            c_in,
            c_out,
            ell,
            delta,
        } => {
            let b = theorem4_cluster_budget(&ClusterBudgetInputs {
                n,
                c_in,
                c_out,
                clusters: ell,
                delta,
            })
            .map_err(|e| match e {
                simquery::Error::AssumptionViolated(msg) => Failure::Config(msg),
                other => other.into(),
            })?;
            budget_json("theorem4", &b, n)
        }
        BoundsCommand::Appendixc(AppendixCCommand::Budget { n, eps, delta, c }) => {
            let b = appendix_c_cut_budget(&CutBudgetInputs {
                n,
                epsilon: eps,
                delta,
                c,
            })?;
            budget_json("appendixc-budget", &b, n)
        }
        BoundsCommand::Appendixc(AppendixCCommand::Cmin { p, c_tilde, delta }) => json!({
            "bound": "appendixc-cmin",
            "value": appendix_c_cmin_lower(p, c_tilde, delta)?,
            "beta": appendix_c_beta(p, c_tilde, delta)?,
        }),
        BoundsCommand::Appendixc(AppendixCCommand::Observable {
            n,
            eps,
            delta,
            p,
            c_tilde,
        }) => {
            let b = appendix_c_observable_budget(n, eps, delta, p, c_tilde)?;
            budget_json("appendixc-observable", &b, n)
        }
    })
}

fn check(kind: CheckKind, args: &CheckArgs) -> CliResult<ExitCode> {
    let g = read_graph(&args.g)?;
    let gt = read_graph(&args.gtilde)?;
    let holds = match kind {
        CheckKind::Spectral => report(check_spectral_approximation(&g, &gt, args.eps)?),
        CheckKind::Cut => match args.samples {
            None if g.n() > EXHAUSTIVE_CUT_LIMIT => {
                return Err(Failure::Config(format!(
                    "{} vertices exceed the exhaustive limit of {EXHAUSTIVE_CUT_LIMIT}; pass --samples",
                    g.n()
                )))
            }
            None => report(check_cut_approximation(&g, &gt, args.eps)?),
            Some(samples) => {
                let verdict = check_cut_approximation_sampled(&g, &gt, args.eps, samples, args.seed)?;
                print_json(&serde_json::to_value(&verdict).expect("json"));
                !matches!(verdict, SampledCutVerdict::Violated(_))
            }
        },
    };
    Ok(if holds { ExitCode::SUCCESS } else { ExitCode::from(3) })
}

fn report(r: ApproxReport) -> bool {
    print_json(&serde_json::to_value(&r).expect("json"));
    r.holds
}

fn sample(scheme: SampleScheme, args: &SampleArgs) -> CliResult<ExitCode> {
    let hidden = read_graph(&args.graph)?;
    let n = hidden.n();
    if !matches!(scheme, SampleScheme::Replacement) && args.m > num_pairs(n) {
        return Err(Failure::Config(format!("m = {} exceeds the {} vertex pairs", args.m, num_pairs(n))));
    }
    let mut oracle = QueryOracle::new(hidden)?;
    let (sampled, trajectory, name): (SampledGraph, Trajectory, &str) = match scheme {
        SampleScheme::Uniform => {
            let mut s = UniformSampler::new(n, args.seed);
            for _ in 0..args.m {
                s.step(&mut oracle)?;
            }
            (s.snapshot(), s.trajectory().clone(), "uniform")
        }
        SampleScheme::Clus2k => {
            let mode: LaplacianMode = args.mode.parse()?;
            let mut cfg = Clus2kConfig::new(args.k, args.seed);
            cfg.recluster_period = args.recluster_period;
            cfg.batch_size = args.batch_size;
            cfg.mode = mode;
            let mut s = Clus2kSampler::new(n, cfg)?;
            for _ in 0..args.m {
                s.step(&mut oracle)?;
            }
            let run = s.finish();
            (run.sample, run.trajectory, "clus2k")
        }
        SampleScheme::Cjoin => {
            let mut s = MixedAdaptiveSampler::new(n, ComponentJoin, args.seed);
            for _ in 0..args.m {
                s.step(&mut oracle)?;
            }
            let (state, trajectory) = s.into_parts();
            (state, trajectory, "cjoin")
        }
        SampleScheme::Replacement => {
            let mut s = WithReplacementSampler::new(n, ComponentJoin, args.seed);
            for _ in 0..args.m {
                s.step(&mut oracle)?;
            }
            (s.snapshot(), s.trajectory().clone(), "replacement")
        }
    };
    let with_epoch = matches!(scheme, SampleScheme::Clus2k);
    if let Some(path) = &args.trajectory {
        emit(Some(path), |w| trajectory.write_csv(w, with_epoch))?;
    }
    emit(args.out.as_deref(), |w| sampled.graph().write_csv(w))?;
    if args.out.is_some() {
        print_json(&json!({
            "scheme": name,
            "queries": oracle.queries_used(),
            "observedPairs": sampled.num_observed(),
            "components": connected_components(sampled.graph()).count(),
        }));
    }
    Ok(ExitCode::SUCCESS)
}

fn write_points(points: &LabeledPoints, out: Option<&Path>) -> CliResult<()> {
    emit(out, |w| points.write_csv(w))
}

fn generate(cmd: GenerateCommand) -> CliResult<ExitCode> {
    match cmd {
        GenerateCommand::HalfCircles {
            n_per_class,
            noise,
            seed,
            out,
        } => write_points(&two_half_circles(n_per_class, noise, seed)?, out.as_deref())?,
        GenerateCommand::Gaussians {
            n_per_class,
            centers,
            radius,
            std,
            seed,
            out,
        } => {
            let pts = gaussian_blobs(n_per_class, &circle_centers(centers, radius), std, seed)?;
            write_points(&pts, out.as_deref())?;
        }
        GenerateCommand::Similarity {
            points,
            sigma,
            sigma_scale,
            out,
        } => {
            let pts = load_points_csv(&points).map_err(|e| Failure::Runtime(format!("{}: {e}", points.display())))?;
            let g = match sigma {
                Some(s) => rbf_similarity(&pts.points, s)?,
                None => rbf_similarity_median(&pts.points, sigma_scale)?,
            };
            emit(out.as_deref(), |w| g.write_csv(w))?;
        }
        GenerateCommand::Planted {
            sizes,
            prob,
            cross,
            cross_edges,
            cross_weight,
            min_c_in,
            max_c_out,
            seed,
            out,
        } => {
            let cross = match cross {
                CrossKind::None => CrossModel::None,
                CrossKind::PerPair => CrossModel::PerPair {
                    edges: cross_edges,
                    weight: cross_weight,
                },
                CrossKind::Uniform => CrossModel::Uniform {
                    edges: cross_edges,
                    weight: cross_weight,
                },
            };
            let mut spec = PlantedGraphSpec::new(sizes, prob, cross, seed);
            spec.min_c_in = min_c_in;
            spec.max_c_out = max_c_out;
            let planted = planted_clusterable(&spec)?;
            emit(out.as_deref(), |w| planted.graph.write_csv(w))?;
            if out.is_some() {
                let s = &planted.structure;
                print_json(&json!({
                    "n": planted.graph.n(),
                    "cIn": s.c_in,
                    "cOut": s.c_out,
                    "lambdaIn": s.lambda_in,
                    "minDegreeIn": s.min_degree_in,
                    "separated": s.satisfies_separation(),
                    "attempts": planted.attempts,
                }));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
