use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use decos::report::{self, BenchSpec};
use decos::{BackendKind, BackendSelection, Error, ModelSpec, SamplerConfig};

/// Metropolis sampling over decomposable graphs.
#[derive(Parser)]
#[command(name = "decos", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one chain, writing trace.csv and report.json.
    Sample(SampleArgs),
    /// Run one chain and write DOT files for all four representations of
    /// the final state.
    Export(SampleArgs),
    /// Time every (n, backend) cell and write bench.csv.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Uniform,
    MaxClique,
    EdgePenalty,
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Graph,
    Junction,
    Almond,
    Ibarra,
    All,
}

impl BackendArg {
    fn selection(self) -> BackendSelection {
        match self {
            BackendArg::Graph => BackendSelection::Graph,
            BackendArg::Junction => BackendSelection::Junction,
            BackendArg::Almond => BackendSelection::Almond,
            BackendArg::Ibarra => BackendSelection::Ibarra,
            BackendArg::All => BackendSelection::All,
        }
    }
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum, default_value = "uniform")]
    model: ModelArg,
    /// Largest clique size allowed by the max-clique model.
    #[arg(long)]
    k: Option<usize>,
    /// Per-edge penalty for the edge-penalty model.
    #[arg(long)]
    alpha: Option<f64>,
}

impl ModelArgs {
    fn spec(&self) -> Result<ModelSpec, String> {
        match (self.model, self.k, self.alpha) {
            (ModelArg::Uniform, None, None) => Ok(ModelSpec::Uniform),
            (ModelArg::MaxClique, Some(k), None) => Ok(ModelSpec::MaxClique { k }),
            (ModelArg::MaxClique, None, _) => Err("--model max-clique needs --k".into()),
            (ModelArg::EdgePenalty, None, Some(alpha)) => Ok(ModelSpec::EdgePenalty { alpha }),
            (ModelArg::EdgePenalty, _, None) => Err("--model edge-penalty needs --alpha".into()),
            (_, Some(_), _) => Err("--k only applies to --model max-clique".into()),
            (_, _, Some(_)) => Err("--alpha only applies to --model edge-penalty".into()),
        }
    }
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    iters: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, value_enum, default_value = "graph")]
    backend: BackendArg,
    /// Record every k-th iteration in the trace.
    #[arg(long, default_value_t = 1)]
    thin: u64,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Search for separating paths only through vertices adjacent to all of S_xy.
    #[arg(long)]
    restricted_search: bool,
}

impl SampleArgs {
    fn config(&self) -> Result<SamplerConfig, String> {
        let mut cfg = SamplerConfig::new(self.n, self.iters, self.seed)
            .with_model(self.model.spec()?)
            .with_backend(self.backend.selection())
            .with_thin(self.thin);
        cfg.restricted_search = self.restricted_search;
        cfg.validate().map_err(|e| e.to_string())?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Comma-separated vertex counts.
    #[arg(long, value_delimiter = ',', default_value = "100,500")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    iters: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[command(flatten)]
    model: ModelArgs,
    /// Comma-separated backends; `all` expands to every backend.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    backend: Vec<BackendArg>,
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    #[arg(long)]
    restricted_search: bool,
    /// Run cells concurrently on separate threads.
    #[arg(long)]
    parallel_cells: bool,
}

impl BenchArgs {
    fn spec(&self) -> Result<BenchSpec, String> {
        let mut backends: Vec<BackendKind> = Vec::new();
        for b in &self.backend {
            for kind in b.selection().kinds() {
                if !backends.contains(&kind) {
                    backends.push(kind);
                }
            }
        }
        let spec = BenchSpec {
            sizes: self.n.clone(),
            backends,
            iterations: self.iters,
            seed: self.seed,
            model: self.model.spec()?,
            restricted_search: self.restricted_search,
            parallel: self.parallel_cells,
        };
        if spec.sizes.is_empty() {
            return Err("--n needs at least one size".into());
        }
        Ok(spec)
    }
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(msg) => Failure::Usage(msg),
            other => Failure::Run(other),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Sample(args) => {
            let cfg = args.config().map_err(Failure::Usage)?;
            let (report, _) = report::sample_to_dir(&cfg, &args.out_dir)?;
            println!(
                "{} iterations in {:.3}s ({:.0}/s), {} edges, acceptance {:.4}",
                cfg.iterations,
                report.wall_seconds,
                report.iterations_per_sec,
                report.final_edges,
                report.mean_acceptance
            );
        }
        Command::Export(args) => {
            let cfg = args.config().map_err(Failure::Usage)?;
            let mut sampler = decos::Sampler::new(cfg)?;
            sampler.run_with(|_| Ok(()))?;
            for path in report::write_dot_views(&sampler, &args.out_dir)? {
                println!("{}", path.display());
            }
        }
        Command::Bench(args) => {
            let spec = args.spec().map_err(Failure::Usage)?;
            let rows = spec.run()?;
            std::fs::create_dir_all(&args.out_dir).map_err(Error::from)?;
            let path = args.out_dir.join("bench.csv");
            report::write_bench(&rows, &path)?;
            for r in &rows {
                println!(
                    "{:<9} n={:<6} {:>10} iters {:>9.3}s  edges {:<7} acceptance {:.4}",
                    r.backend, r.n, r.iterations, r.seconds, r.final_edges, r.acceptance
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

impl Failure {
    /// 1 for usage and I/O problems, 2 when backends disagreed.
    fn code(&self) -> u8 {
        match self {
            Failure::Run(Error::Verification { .. }) => 2,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(msg) => format!("error: {msg}"),
            Failure::Run(e @ Error::Verification { .. }) => format!("verification failed: {e}"),
            Failure::Run(e) => format!("error: {e}"),
        }
    }
}
