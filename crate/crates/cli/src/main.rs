//! `mds`: generate, label, split, solve and benchmark dominating set instances.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when the work itself fails.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use mds_core::bench::{
    format_summary, run_bench, solve_with, summarize, write_csv, BenchRecord, Method, SolveOptions,
    DEFAULT_RANDOM_SEEDS,
};
use mds_core::dataset::{
    generate_dataset, graph_files, label_graphs, load_instances, load_manifest, read_graph_file, save_manifest,
    split_dataset, DatasetParams, Density, Split, MANIFEST_FILE,
};
use mds_core::exact::DEFAULT_MAX_SOLUTIONS;
use mds_core::gcn::load_weights;
use mds_core::{Budget, IgConfig};
use serde_json::json;

#[derive(Parser)]
#[command(name = "mds", version, about = "Minimum dominating set toolkit")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate and label random Erdős–Rényi instances.
    Generate(GenerateArgs),
    /// Label existing graphs (edge lists or instance JSON) with exact optima.
    Label(LabelArgs),
    /// Assign a seeded train/test split to a manifest, in place.
    Split(SplitArgs),
    /// Solve one graph and print the result as a JSON line.
    Solve(SolveArgs),
    /// Run methods over a manifest, write per-run CSV and print a summary.
    Bench(BenchArgs),
}

/// `lo:hi` or a single value.
#[derive(Clone, Copy, Debug)]
struct Range<T>(T, T);

impl<T: FromStr + Copy + PartialOrd> FromStr for Range<T> {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| x.trim().parse::<T>().map_err(|_| format!("invalid value {x:?}"));
        let (lo, hi) = match s.split_once(':') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Range(lo, hi))
    }
}

#[derive(Args)]
struct BudgetArgs {
    /// Exact-solver wall-clock limit per instance.
    #[arg(long, value_name = "MS")]
    time_limit_ms: Option<u64>,
    /// Exact-solver search-node limit per instance.
    #[arg(long)]
    max_nodes: Option<u64>,
}

impl BudgetArgs {
    fn budget(&self, default_ms: Option<u64>) -> Budget {
        Budget {
            max_nodes: self.max_nodes,
            time_limit: self.time_limit_ms.or(default_ms).map(Duration::from_millis),
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    count: usize,
    /// Vertex count, `lo:hi` inclusive or a single value.
    #[arg(long, value_name = "LO:HI", default_value = "150:255")]
    n: Range<usize>,
    /// Edge probability, `lo:hi` or a single value.
    #[arg(long, value_name = "LO:HI", conflicts_with = "avg_degree")]
    p: Option<Range<f64>>,
    /// Expected average degree, `lo:hi` or a single value (default 3:8).
    #[arg(long, value_name = "LO:HI")]
    avg_degree: Option<Range<f64>>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_MAX_SOLUTIONS)]
    max_solutions: usize,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Candidate graphs tried per requested instance before giving up.
    #[arg(long, default_value_t = 4)]
    oversample: usize,
    out_dir: PathBuf,
}

#[derive(Args)]
struct LabelArgs {
    #[arg(long, default_value_t = DEFAULT_MAX_SOLUTIONS)]
    max_solutions: usize,
    #[command(flatten)]
    budget: BudgetArgs,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    input_dir: PathBuf,
    out_dir: PathBuf,
}

#[derive(Args)]
struct SplitArgs {
    /// Fraction of instances assigned to train.
    #[arg(long)]
    fraction: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    manifest: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Classic,
    Gcn,
}

#[derive(Args)]
struct IgArgs {
    #[arg(long, default_value_t = 0.2)]
    beta: f64,
    #[arg(long, default_value_t = 200)]
    delta_max: usize,
    /// Seed for iterated greedy and the random method.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// GCN weight file, required by gcn and ig-gcn.
    #[arg(long)]
    weights: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long, value_parser = parse_method)]
    method: Method,
    /// Reconstruction heuristic for iterated greedy (`gcn` is the same as `--method ig-gcn`).
    #[arg(long)]
    mode: Option<ModeArg>,
    #[command(flatten)]
    ig: IgArgs,
    /// Time limit for iterated greedy (default 10 s) or the exact solver (default none).
    #[arg(long, value_name = "MS")]
    time_limit_ms: Option<u64>,
    /// Search-node limit for the exact solver.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Graph file: `n m` edge list, headerless `.edges` dump, or instance `.json`.
    graph: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated subset of random, greedy, gcn, ig, ig-gcn, exact.
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "random,greedy,ig,exact")]
    methods: Vec<Method>,
    /// Per-run CSV; a `.meta.json` with the run configuration is written next to it.
    #[arg(long)]
    output: Option<PathBuf>,
    #[command(flatten)]
    ig: IgArgs,
    /// Iterated-greedy time limit per run; required when ig or ig-gcn is requested.
    #[arg(long, value_name = "MS")]
    time_limit_ms: Option<u64>,
    /// Exact-solver time limit per instance.
    #[arg(long, value_name = "MS")]
    exact_time_limit_ms: Option<u64>,
    /// Seeds for the random method.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_RANDOM_SEEDS)]
    random_seeds: Vec<u64>,
    /// Only instances from this split.
    #[arg(long)]
    split: Option<SplitArg>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    manifest: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Train,
    Test,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: mds_core::Error| e.to_string())
}

enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn usage<T>(message: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(message.into()))
}

/// A dataset directory stands for the manifest inside it.
fn manifest_path(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join(MANIFEST_FILE)
    } else {
        path.to_path_buf()
    }
}

fn pool(jobs: usize) -> anyhow::Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

fn weights_for(methods: &[Method], path: Option<&Path>) -> CliResult<Option<mds_core::GcnWeights>> {
    let needed = methods.iter().any(|m| m.needs_weights());
    match (needed, path) {
        (true, None) => usage("gcn and ig-gcn need --weights"),
        (_, Some(p)) => Ok(Some(load_weights(p).context("loading weights")?)),
        (false, None) => Ok(None),
    }
}

fn ig_config(args: &IgArgs, time_limit_ms: u64) -> CliResult<IgConfig> {
    let cfg = IgConfig {
        beta: args.beta,
        delta_max: args.delta_max,
        time_limit: Duration::from_millis(time_limit_ms),
        seed: args.seed,
        ..IgConfig::default()
    };
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn generate(args: GenerateArgs) -> CliResult {
    let density = match (args.p, args.avg_degree) {
        (Some(Range(a, b)), _) => Density::Probability(a, b),
        (None, Some(Range(a, b))) => Density::AverageDegree(a, b),
        (None, None) => Density::AverageDegree(3.0, 8.0),
    };
    let params = DatasetParams {
        count: args.count,
        n_range: (args.n.0, args.n.1),
        density,
        seed: args.seed,
        max_solutions: args.max_solutions,
        budget: args.budget.budget(Some(60_000)),
        jobs: args.jobs,
        oversample: args.oversample,
    };
    let manifest = match generate_dataset(&params, &args.out_dir) {
        Err(mds_core::Error::InvalidParameter(m)) => return usage(m),
        other => other.context("generating dataset")?,
    };
    let s = &manifest.summary;
    println!(
        "generated {} instances in {} (mean n {:.1}, mean gamma {:.2})",
        s.count,
        args.out_dir.display(),
        s.mean_n,
        s.mean_gamma.unwrap_or(0.0)
    );
    Ok(())
}

fn label(args: LabelArgs) -> CliResult {
    if args.max_solutions == 0 {
        return usage("--max-solutions must be at least 1");
    }
    let files = graph_files(&args.input_dir).with_context(|| format!("listing {}", args.input_dir.display()))?;
    if files.is_empty() {
        return Err(anyhow!("no graph files in {}", args.input_dir.display()).into());
    }
    let graphs = files
        .iter()
        .map(read_graph_file)
        .collect::<mds_core::Result<Vec<_>>>()
        .context("reading graphs")?;
    let total = graphs.len();
    let manifest = label_graphs(graphs, &args.out_dir, args.max_solutions, args.budget.budget(None), args.jobs)
        .context("labeling")?;
    println!(
        "labeled {}/{} graphs into {}",
        manifest.summary.count,
        total,
        args.out_dir.display()
    );
    Ok(())
}

fn split(args: SplitArgs) -> CliResult {
    if !(args.fraction > 0.0 && args.fraction < 1.0) {
        return usage(format!("--fraction {} must lie strictly between 0 and 1", args.fraction));
    }
    let path = manifest_path(&args.manifest);
    let manifest = load_manifest(&path).context("loading manifest")?;
    let split = split_dataset(&manifest, args.fraction, args.seed).context("splitting")?;
    save_manifest(&split, &path).context("writing manifest")?;
    println!("train {} test {}", split.summary.train, split.summary.test);
    Ok(())
}

fn solve(args: SolveArgs) -> CliResult {
    let method = match (args.method, args.mode) {
        (m, None) => m,
        (Method::Ig | Method::IgGcn, Some(ModeArg::Classic)) => Method::Ig,
        (Method::Ig | Method::IgGcn, Some(ModeArg::Gcn)) => Method::IgGcn,
        (m, Some(_)) => return usage(format!("--mode only applies to ig methods, not {m}")),
    };
    let weights = weights_for(&[method], args.ig.weights.as_deref())?;
    let inst = read_graph_file(&args.graph).context("reading graph")?;
    let opts = SolveOptions {
        ig: ig_config(&args.ig, args.time_limit_ms.unwrap_or(10_000))?,
        ig_seed: args.ig.seed,
        weights,
        exact_budget: Budget {
            max_nodes: args.max_nodes,
            time_limit: args.time_limit_ms.map(Duration::from_millis),
        },
        random_seeds: vec![args.ig.seed],
    };
    let seed = match method {
        Method::Random | Method::Ig | Method::IgGcn => Some(args.ig.seed),
        _ => None,
    };
    let start = Instant::now();
    let s = solve_with(&inst.graph, method, seed, &opts).context("solving")?;
    let record = BenchRecord::new(&inst.id, method, seed, s.len(), inst.gamma, start.elapsed());
    let mut line = serde_json::to_value(&record).context("serializing record")?;
    line["solution"] = json!(s.sorted());
    println!("{line}");
    Ok(())
}

fn bench(args: BenchArgs) -> CliResult {
    if args.methods.is_empty() {
        return usage("--methods must name at least one method");
    }
    let needs_limit = args.methods.iter().any(|m| m.is_ig());
    let ig_limit = match (needs_limit, args.time_limit_ms) {
        (true, None) => return usage("ig and ig-gcn need an explicit --time-limit-ms"),
        (_, limit) => limit.unwrap_or(10_000),
    };
    let weights = weights_for(&args.methods, args.ig.weights.as_deref())?;
    let opts = SolveOptions {
        ig: ig_config(&args.ig, ig_limit)?,
        ig_seed: args.ig.seed,
        weights,
        exact_budget: Budget {
            max_nodes: None,
            time_limit: args.exact_time_limit_ms.map(Duration::from_millis),
        },
        random_seeds: args.random_seeds.clone(),
    };
    let path = manifest_path(&args.manifest);
    let manifest = load_manifest(&path).context("loading manifest")?;
    let base = path.parent().unwrap_or(Path::new("."));
    let split = args.split.map(|s| match s {
        SplitArg::Train => Split::Train,
        SplitArg::Test => Split::Test,
    });
    let mut instances = load_instances(&manifest, base, split).context("loading instances")?;
    instances.sort_by(|a, b| a.id.cmp(&b.id));
    info!("benchmarking {} instances with {:?}", instances.len(), args.methods);

    let (records, failures) = pool(args.jobs)?.install(|| run_bench(&instances, &args.methods, &opts));
    for f in &failures {
        eprintln!("warning: {} on {}: {}", f.method, f.instance, f.error);
    }
    if let Some(csv_path) = &args.output {
        let file = File::create(csv_path).with_context(|| format!("creating {}", csv_path.display()))?;
        let mut out = BufWriter::new(file);
        write_csv(&records, &mut out).context("writing CSV")?;
        out.flush().context("writing CSV")?;
        let meta = json!({
            "manifest": path.display().to_string(),
            "instances": instances.len(),
            "methods": args.methods.iter().map(|m| m.as_str()).collect::<Vec<_>>(),
            "ig": {
                "beta": opts.ig.beta,
                "delta_max": opts.ig.delta_max,
                "time_limit_ms": args.time_limit_ms,
                "seed": opts.ig_seed,
            },
            "exact_time_limit_ms": args.exact_time_limit_ms,
            "random_seeds": opts.random_seeds,
            "weights": args.ig.weights.as_ref().map(|p| p.display().to_string()),
            "failures": failures.len(),
        });
        let meta_path = csv_path.with_extension("meta.json");
        std::fs::write(&meta_path, format!("{meta:#}\n"))
            .with_context(|| format!("writing {}", meta_path.display()))?;
    }
    print!("{}", format_summary(&summarize(&records)));
    if records.is_empty() && !failures.is_empty() {
        return Err(anyhow!("every run failed").into());
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Generate(a) => generate(a),
        Command::Label(a) => label(a),
        Command::Split(a) => split(a),
        Command::Solve(a) => solve(a),
        Command::Bench(a) => bench(a),
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
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
