use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dqssa::centrality::{enc, glr, h_index, pagerank, CentralityMethod, PageRankParams};
use dqssa::community::{build_candidate_pool, louvain};
use dqssa::{load_edge_list, optimize, Algorithm, Graph};
use dqssa_bench::{
    emit_tables, run_experiment, write_manifest, DatasetSpec, ExperimentConfig, Selector,
};
use log::info;

#[derive(Parser)]
#[command(
    name = "dqssa-bench",
    version,
    about = "Influence maximization benchmark harness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment grid and write result tables.
    Run(RunArgs),
    /// Rewrite an edge list in canonical `u v` form.
    Canonicalize {
        #[command(flatten)]
        input: InputArgs,
        output: PathBuf,
    },
    /// Dump the Louvain partition as `node community` lines.
    Partition {
        #[command(flatten)]
        input: InputArgs,
        output: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        resolution: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Write a centrality score vector as CSV.
    Scores {
        #[command(flatten)]
        input: InputArgs,
        output: PathBuf,
        #[arg(long, default_value = "PR")]
        method: CentralityMethod,
    },
    /// Run one optimizer and write its convergence trace as CSV.
    Trace {
        #[command(flatten)]
        input: InputArgs,
        output: PathBuf,
        #[arg(long, default_value = "DQSSA")]
        algorithm: Algorithm,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, default_value_t = 5.0)]
        pool_factor: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Edge-list file.
    #[arg(long)]
    dataset: PathBuf,
    /// Smallest node ID in the file (0 or 1).
    #[arg(long, default_value_t = 0)]
    id_base: u8,
}

impl InputArgs {
    fn load(&self) -> Result<Graph> {
        let spec = DatasetSpec {
            id_base: self.id_base,
            ..DatasetSpec::new(&self.dataset)
        };
        let descriptor = spec.descriptor(Path::new("."))?;
        Ok(load_edge_list(&descriptor)?)
    }
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset file (repeatable); replaces the configured datasets.
    #[arg(long)]
    dataset: Vec<PathBuf>,
    /// ID base applied to datasets given with --dataset.
    #[arg(long, default_value_t = 0)]
    id_base: u8,
    /// Algorithm label (repeatable); replaces the configured list.
    #[arg(long)]
    algorithm: Vec<Selector>,
    #[arg(long, value_delimiter = ',')]
    fractions: Vec<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    reps: Option<usize>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    simulations: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
}

fn run(args: RunArgs) -> Result<()> {
    let (mut config, base_dir) = match &args.config {
        Some(path) => {
            let config = ExperimentConfig::load(path)?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (config, base)
        }
        None => (ExperimentConfig::default(), PathBuf::new()),
    };
    if !args.dataset.is_empty() {
        let cwd = std::env::current_dir()?;
        config.datasets = args
            .dataset
            .iter()
            .map(|p| DatasetSpec {
                id_base: args.id_base,
                ..DatasetSpec::new(cwd.join(p))
            })
            .collect();
    }
    if !args.algorithm.is_empty() {
        config.algorithms = args.algorithm;
    }
    if !args.fractions.is_empty() {
        config.spreader_fractions = args.fractions;
    }
    if let Some(v) = args.seed {
        config.seed = v;
    }
    if let Some(v) = args.out {
        config.out = v;
    }
    if let Some(v) = args.reps {
        config.repetitions = v;
    }
    if let Some(v) = args.workers {
        config.workers = v;
    }
    if let Some(v) = args.simulations {
        config.diffusion.simulations = v;
    }
    if let Some(v) = args.p {
        config.p = v;
    }
    config.normalize()?;

    let rows = run_experiment(&config, &base_dir)?;
    let order: Vec<String> = config.algorithms.iter().map(ToString::to_string).collect();
    let tables = emit_tables(&rows, &order, &config.out)?;
    let manifest = write_manifest(&config, &rows, &config.out)?;
    let failed = rows.iter().filter(|r| r.is_error()).count();
    info!(
        "{} rows ({failed} failed); wrote {} and {}",
        rows.len(),
        tables.time_table.display(),
        manifest.display()
    );
    if failed == rows.len() {
        bail!("every cell failed; see {}", tables.results.display());
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Run(args) => run(args),
        Command::Canonicalize { input, output } => {
            let g = input.load()?;
            g.save_canonical(&output)
                .with_context(|| format!("writing {}", output.display()))?;
            Ok(())
        }
        Command::Partition {
            input,
            output,
            resolution,
            seed,
        } => {
            let g = input.load()?;
            let partition = louvain(&g, resolution, seed)?;
            info!(
                "{} communities, modularity {:.6}",
                partition.num_communities(),
                partition.modularity()
            );
            let mut file = std::fs::File::create(&output)
                .with_context(|| format!("creating {}", output.display()))?;
            partition.write_dump(&g, &mut file)?;
            Ok(())
        }
        Command::Scores {
            input,
            output,
            method,
        } => {
            let g = input.load()?;
            let scores = match method {
                CentralityMethod::HIndex => h_index(&g),
                CentralityMethod::PageRank => pagerank(&g, PageRankParams::default())?,
                CentralityMethod::ExtendedCoreness => enc(&g),
                CentralityMethod::GatewayLocalRank => {
                    let partition = louvain(&g, 1.0, 42)?;
                    glr(&g, &partition, dqssa::centrality::DEFAULT_GATEWAY_WEIGHT)?
                }
            };
            let mut file = std::fs::File::create(&output)
                .with_context(|| format!("creating {}", output.display()))?;
            scores.write_csv(&g, &mut file)?;
            Ok(())
        }
        Command::Trace {
            input,
            output,
            algorithm,
            k,
            p,
            pool_factor,
            seed,
        } => {
            let g = input.load()?;
            let partition = louvain(&g, 1.0, seed)?;
            let pool = build_candidate_pool(&g, &partition, k, pool_factor)?;
            let mut config = dqssa::SwarmConfig::new(algorithm, k);
            config.p = dqssa::InfectionProbability::new(p)?;
            config.rng_seed = seed;
            let result = optimize(&g, &pool, &config)?;
            info!("best LIE {:.6}", result.fitness);
            let mut file = std::fs::File::create(&output)
                .with_context(|| format!("creating {}", output.display()))?;
            result.trace.write_csv(&mut file)?;
            Ok(())
        }
    }
}
