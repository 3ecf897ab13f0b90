use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringcore::bicriteria::{bicriteria_approx, cluster_partition, BicriteriaConfig};
use ringcore::composer::{
    build_barycenter_coreset, build_coreset, build_fair_coreset, CoresetMode, CoresetResult,
    PipelineConfig,
};
use ringcore::dataset::{ClusteringParams, WeightedPointSet};
use ringcore::error::Error;
use ringcore::io;
use ringcore::metric::{EuclideanSpace, MetricBackend, PointId};
use ringcore::oracle::{eval_harness, HarnessConfig};
use ringcore::rings::{count_bounds, decompose, reduction_params};
use ringcore::sampling::{BudgetForm, SamplingConfig};
use ringcore::synth;
use serde::Serialize;

/// Ring-decomposition coresets for constrained (k,z)-clustering.
#[derive(Parser)]
#[command(name = "ringcore", version, about)]
struct Cli {
    /// Worker thread cap (also via RINGCORE_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a coreset and write it as JSON (optionally a CSV mirror).
    Build(BuildArgs),
    /// Evaluate a coreset against its dataset over random center sets.
    Eval(EvalArgs),
    /// Time builds and evaluations on synthetic instance families.
    Bench(BenchArgs),
    /// Dump the per-cluster ring decomposition as JSON.
    Inspect(InspectArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendKind {
    Euclidean,
    Graph,
    Wasserstein,
    Frechet,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Vanilla,
    AssignmentPreserving,
    Fair,
    Barycenter,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BudgetFormArg {
    Eps5,
    Eps3WithDim,
}

#[derive(Args)]
struct InputArgs {
    /// CSV points (euclidean), tuples JSON (wasserstein) or curves JSON
    /// (frechet).
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "euclidean")]
    backend: BackendKind,
    /// Graph backend: edge list file (`u v w` lines).
    #[arg(long)]
    graph_edges: Option<PathBuf>,
    /// Graph backend: data vertex list file.
    #[arg(long)]
    graph_points: Option<PathBuf>,
    /// Wasserstein tuple length.
    #[arg(long)]
    l: Option<usize>,
    /// Wasserstein power.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Fréchet polyline complexity cap.
    #[arg(long)]
    m_cap: Option<usize>,
    /// Shortest-path cache capacity (graph backend).
    #[arg(long, default_value_t = 64)]
    graph_cache: usize,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1.0)]
    z: f64,
    #[arg(long, default_value_t = 0.2)]
    eps: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Leading constant of the assignment-preserving budget.
    #[arg(long, default_value_t = 8.0)]
    c0: f64,
    /// Leading constant of the unconstrained budget.
    #[arg(long, default_value_t = 8.0)]
    c1: f64,
    #[arg(long, value_enum, default_value = "eps5")]
    budget_form: BudgetFormArg,
    /// Override the configured bicriteria cost budget alpha.
    #[arg(long)]
    alpha_budget: Option<f64>,
    /// Shattering-dimension bound for graph backends.
    #[arg(long, default_value_t = 8.0)]
    sdim_graph: f64,
    /// Scale on the Fréchet shattering-dimension bound.
    #[arg(long, default_value_t = 1.0)]
    sdim_frechet_scale: f64,
}

impl ParamArgs {
    fn clustering(&self) -> Result<ClusteringParams, Error> {
        ClusteringParams::new(self.k, self.z, self.eps, self.delta, self.seed)
    }

    fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            sampling: SamplingConfig {
                c0: self.c0,
                c1: self.c1,
                budget_form: match self.budget_form {
                    BudgetFormArg::Eps5 => BudgetForm::Eps5,
                    BudgetFormArg::Eps3WithDim => BudgetForm::Eps3WithDim,
                },
                sdim_graph: self.sdim_graph,
                sdim_frechet_scale: self.sdim_frechet_scale,
            },
            bicriteria: BicriteriaConfig {
                alpha_override: self.alpha_budget,
                ..BicriteriaConfig::default()
            },
        }
    }
}

#[derive(Args)]
struct BuildArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, value_enum, default_value = "vanilla")]
    mode: ModeArg,
    #[arg(long)]
    out: PathBuf,
    /// Optional CSV mirror of the coreset.
    #[arg(long)]
    csv_mirror: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Coreset JSON produced by `build`.
    #[arg(long)]
    coreset: PathBuf,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Max relative error tolerated before exit code 1.
    #[arg(long, default_value_t = 0.5)]
    threshold: f64,
    /// Evaluate constrained costs through the transport solver.
    #[arg(long)]
    constrained: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance sizes.
    #[arg(long, value_delimiter = ',', default_values_t = vec![1000usize, 2000, 5000, 10000, 20000])]
    sizes: Vec<usize>,
    /// Instance family: gaussian | rings | tuples.
    #[arg(long, default_value = "gaussian")]
    profile: String,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InspectArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("RINGCORE_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    let code = match cli.command {
        Command::Build(args) => cmd_build(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Inspect(args) => cmd_inspect(args),
    };
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 2 = parse error, 3 = infeasible configuration, 1 = threshold failure.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } | Error::Io(_) => 2,
        _ => 3,
    }
}

fn load_dataset(input: &InputArgs) -> Result<WeightedPointSet, Error> {
    match input.backend {
        BackendKind::Euclidean => {
            let path = input
                .input
                .as_ref()
                .ok_or_else(|| Error::Config("--input is required".into()))?;
            let (space, weights, labels) = io::load_points_csv(path)?;
            let n = space.len();
            let backend = Arc::new(MetricBackend::Euclidean(space));
            let ds = WeightedPointSet::new(backend, (0..n).map(PointId).collect(), weights)?;
            match labels {
                Some(l) => ds.with_labels(l),
                None => Ok(ds),
            }
        }
        BackendKind::Graph => {
            let edges = input
                .graph_edges
                .as_ref()
                .ok_or_else(|| Error::Config("--graph-edges is required".into()))?;
            let points = input
                .graph_points
                .as_ref()
                .ok_or_else(|| Error::Config("--graph-points is required".into()))?;
            let (graph, ids, weights) = io::load_graph(edges, points, input.graph_cache)?;
            WeightedPointSet::new(Arc::new(MetricBackend::Graph(graph)), ids, weights)
        }
        BackendKind::Wasserstein => {
            let path = input
                .input
                .as_ref()
                .ok_or_else(|| Error::Config("--input is required".into()))?;
            let space = io::load_tuples_json(path, input.l, input.p)?;
            WeightedPointSet::unit(Arc::new(MetricBackend::Wasserstein(space)))
        }
        BackendKind::Frechet => {
            let path = input
                .input
                .as_ref()
                .ok_or_else(|| Error::Config("--input is required".into()))?;
            let space = io::load_curves_json(path, input.m_cap)?;
            WeightedPointSet::unit(Arc::new(MetricBackend::Frechet(space)))
        }
    }
}

fn cmd_build(args: BuildArgs) -> Result<ExitCode, Error> {
    let data = load_dataset(&args.input)?;
    let params = args.params.clustering()?;
    let cfg = args.params.pipeline();
    let coreset = match args.mode {
        ModeArg::Vanilla => build_coreset(&data, &params, CoresetMode::Vanilla, &cfg)?,
        ModeArg::AssignmentPreserving => {
            build_coreset(&data, &params, CoresetMode::AssignmentPreserving, &cfg)?
        }
        ModeArg::Fair => build_fair_coreset(&data, &params, &cfg)?,
        ModeArg::Barycenter => build_barycenter_coreset(&data, &params, &cfg)?,
    };
    io::write_json(&args.out, &coreset)?;
    if let Some(csv) = &args.csv_mirror {
        io::write_coreset_csv(csv, &coreset, data.backend())?;
    }
    let acc = &coreset.accounting;
    println!(
        "coreset size {} / {} input points (bound {}): {} clusters, {} marked rings (budget {} per ring, {} capped), {} groups, {} center-mass",
        coreset.size,
        data.len(),
        acc.bound,
        acc.clusters,
        acc.marked_rings,
        acc.ring_budget,
        acc.capped_rings,
        acc.groups,
        acc.center_mass_points,
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_eval(args: EvalArgs) -> Result<ExitCode, Error> {
    let data = load_dataset(&args.input)?;
    let coreset: CoresetResult = io::read_json(&args.coreset)?;
    for &id in &coreset.points {
        if id.0 >= data.backend().len() {
            return Err(Error::InvalidHandle {
                handle: id.0,
                len: data.backend().len(),
            });
        }
    }
    let s = coreset.to_point_set(data.backend().clone())?;
    let mut hcfg = HarnessConfig::new(args.trials, args.seed, args.threshold);
    hcfg.constrained =
        args.constrained || coreset.mode == CoresetMode::AssignmentPreserving;
    let report = eval_harness(&data, &s, &coreset.params, &hcfg)?;
    if let Some(out) = &args.out {
        io::write_json(out, &report)?;
    }
    println!(
        "eval: {} trials, max rel err {:.6}, mean {:.6}, p90 {:.6}, {} over threshold {}",
        report.trials.len(),
        report.max_rel_err,
        report.mean_rel_err,
        report.p90_rel_err,
        report.failures,
        report.threshold,
    );
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

#[derive(Serialize)]
struct BenchRow {
    n: usize,
    build_ms: f64,
    eval_ms: f64,
    coreset_size: usize,
    ring_budget: usize,
    max_rel_err: f64,
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, Error> {
    let params = args.params.clustering()?;
    // Bench profile: desk-scale constants so the budget formula actually
    // bites instead of capping at every ring.
    let mut cfg = args.params.pipeline();
    if args.params.c0 == 8.0 && args.params.c1 == 8.0 && args.params.alpha_budget.is_none() {
        cfg.sampling.c0 = 0.005;
        cfg.sampling.c1 = 0.005;
        cfg.bicriteria.alpha_override = Some(1.0);
    }
    let mut rows = Vec::new();
    for &n in &args.sizes {
        let (data, mode) = match args.profile.as_str() {
            "gaussian" => {
                let pts = synth::gaussian_mixture(n, params.k.max(2), 2, 10.0, 1.0, params.seed);
                let space = EuclideanSpace::from_rows(2, &pts)?;
                (
                    WeightedPointSet::unit(Arc::new(MetricBackend::Euclidean(space)))?,
                    CoresetMode::Vanilla,
                )
            }
            "rings" => {
                let pts = synth::ring_stress(n, 2, params.seed);
                let space = EuclideanSpace::from_rows(2, &pts)?;
                (
                    WeightedPointSet::unit(Arc::new(MetricBackend::Euclidean(space)))?,
                    CoresetMode::Vanilla,
                )
            }
            "tuples" => {
                let tuples = synth::random_tuples(n, 3, 2, 8.0, params.seed);
                let space = ringcore::metric::TupleSpace::from_tuples(3, 2, 1.0, &tuples)?;
                (
                    WeightedPointSet::unit(Arc::new(MetricBackend::Wasserstein(space)))?,
                    CoresetMode::Vanilla,
                )
            }
            other => return Err(Error::Config(format!("unknown profile {other:?}"))),
        };
        let t0 = std::time::Instant::now();
        let coreset = if args.profile == "tuples" {
            let p1 = ClusteringParams::new(1, 1.0, params.eps, params.delta, params.seed)?;
            build_barycenter_coreset(&data, &p1, &cfg)?
        } else {
            build_coreset(&data, &params, mode, &cfg)?
        };
        let build_ms = t0.elapsed().as_secs_f64() * 1e3;
        let s = coreset.to_point_set(data.backend().clone())?;
        let t1 = std::time::Instant::now();
        let hcfg = HarnessConfig::new(args.trials, params.seed, 1.0);
        let report = eval_harness(&data, &s, &coreset.params, &hcfg)?;
        let eval_ms = t1.elapsed().as_secs_f64() * 1e3;
        rows.push(BenchRow {
            n,
            build_ms,
            eval_ms,
            coreset_size: coreset.size,
            ring_budget: coreset.accounting.ring_budget,
            max_rel_err: report.max_rel_err,
        });
    }
    println!(
        "{:>8} {:>12} {:>12} {:>12} {:>12} {:>12}",
        "n", "build_ms", "eval_ms", "size", "ring_budget", "max_rel_err"
    );
    for r in &rows {
        println!(
            "{:>8} {:>12.2} {:>12.2} {:>12} {:>12} {:>12.5}",
            r.n, r.build_ms, r.eval_ms, r.coreset_size, r.ring_budget, r.max_rel_err
        );
    }
    if let Some(out) = &args.out {
        io::write_json(out, &rows)?;
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct InspectDump {
    cluster: usize,
    center: usize,
    report: ringcore::rings::StructuralReport,
    decomposition: ringcore::rings::RingDecomposition,
}

fn cmd_inspect(args: InspectArgs) -> Result<ExitCode, Error> {
    let data = load_dataset(&args.input)?;
    let params = args.params.clustering()?;
    let cfg = args.params.pipeline();
    let alpha = cfg
        .bicriteria
        .alpha_override
        .unwrap_or_else(|| ringcore::bicriteria::default_alpha(params.z));
    let params_w = params.with_eps(params.eps / (alpha + 1.0));
    let bic = bicriteria_approx(&data, &params, &cfg.bicriteria)?;
    let clusters = cluster_partition(&data, &bic);
    let mut dumps = Vec::new();
    for (i, (cluster, center)) in clusters.iter().enumerate() {
        let rp = reduction_params(cluster, *center, &params_w)?;
        let dec = decompose(cluster, *center, &rp)?;
        dumps.push(InspectDump {
            cluster: i,
            center: center.0,
            report: count_bounds(&dec),
            decomposition: dec,
        });
    }
    io::write_json(&args.out, &dumps)?;
    println!("wrote {} cluster decompositions to {}", dumps.len(), args.out.display());
    Ok(ExitCode::SUCCESS)
}
