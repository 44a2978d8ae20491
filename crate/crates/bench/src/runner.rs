//! Runs every (dataset, algorithm, fraction, repetition) cell and streams the
//! rows to `results.csv` in cell order.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use dqssa::centrality::{
    enc, glr, h_index, pagerank, top_k_seeds, CentralityMethod, PageRankParams,
};
use dqssa::community::{build_candidate_pool, louvain, Partition};
use dqssa::diffusion::{fis, DiffusionConfig};
use dqssa::{lie, load_edge_list, optimize, Graph, InfectionProbability, SeedSet};
use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{seed_count, ExperimentConfig, Selector};
use crate::BenchError;

pub const RESULTS_FILE: &str = "results.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub algorithm: String,
    pub fraction: f64,
    pub k: usize,
    pub lie_value: Option<f64>,
    pub fis_mean: Option<f64>,
    pub fis_variance: Option<f64>,
    pub wall_clock_seconds: Option<f64>,
    pub repetition: usize,
    pub seed: u64,
    pub error: Option<String>,
}

impl ResultRow {
    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }

    /// Same row with the timing column cleared, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        Self {
            wall_clock_seconds: None,
            ..self.clone()
        }
    }
}

/// Loaded dataset shared read-only by all of its cells.
pub struct PreparedDataset {
    pub name: String,
    pub graph: Graph,
    pub partition: Partition,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one cell, derived from the master seed and the cell coordinates.
pub fn cell_seed(
    master: u64,
    dataset: usize,
    algorithm: &str,
    fraction: usize,
    repetition: usize,
) -> u64 {
    let mut h = mix(master);
    for b in algorithm.bytes() {
        h = mix(h ^ b as u64);
    }
    for part in [dataset, fraction, repetition] {
        h = mix(h ^ part as u64);
    }
    h
}

struct Cell {
    index: usize,
    dataset: usize,
    selector: Selector,
    fraction_index: usize,
    repetition: usize,
}

/// Writes rows in cell order as soon as every earlier cell has finished.
struct OrderedSink {
    next: usize,
    pending: BTreeMap<usize, ResultRow>,
    writer: Option<csv::Writer<File>>,
    rows: Vec<ResultRow>,
    failure: Option<BenchError>,
}

impl OrderedSink {
    fn push(&mut self, index: usize, row: ResultRow) {
        self.pending.insert(index, row);
        while let Some(row) = self.pending.remove(&self.next) {
            if let Some(w) = self.writer.as_mut() {
                let written = w
                    .serialize(&row)
                    .and_then(|_| w.flush().map_err(csv::Error::from));
                if let Err(e) = written {
                    self.failure.get_or_insert(BenchError::Csv(e));
                    self.writer = None;
                }
            }
            self.rows.push(row);
            self.next += 1;
        }
    }
}

/// Loads each dataset once and detects its communities.
pub fn prepare_datasets(
    config: &ExperimentConfig,
    base_dir: &Path,
) -> Vec<Result<PreparedDataset, String>> {
    config
        .datasets
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let descriptor = spec.descriptor(base_dir).map_err(|e| e.to_string())?;
            let graph = load_edge_list(&descriptor).map_err(|e| e.to_string())?;
            let partition = louvain(
                &graph,
                config.community.resolution,
                mix(config.seed ^ i as u64),
            )
            .map_err(|e| e.to_string())?;
            info!(
                "{}: n={} m={} communities={} modularity={:.4}",
                descriptor.name,
                graph.n(),
                graph.m(),
                partition.num_communities(),
                partition.modularity()
            );
            Ok(PreparedDataset {
                name: descriptor.name,
                graph,
                partition,
            })
        })
        .collect()
}

fn dataset_label(config: &ExperimentConfig, index: usize, base_dir: &Path) -> String {
    config.datasets[index]
        .descriptor(base_dir)
        .map(|d| d.name)
        .unwrap_or_else(|_| config.datasets[index].path.display().to_string())
}

/// Seed selection only; this is the timed phase.
pub fn select_seeds(
    config: &ExperimentConfig,
    data: &PreparedDataset,
    selector: Selector,
    k: usize,
    seed: u64,
) -> Result<SeedSet, dqssa::Error> {
    let g = &data.graph;
    match selector {
        Selector::Swarm(algorithm) => {
            let pool = build_candidate_pool(g, &data.partition, k, config.community.pool_factor)?;
            let swarm = config.swarm_config(algorithm, k, seed);
            Ok(optimize(g, &pool, &swarm)?.seeds)
        }
        Selector::Centrality(method) => {
            let scores = match method {
                CentralityMethod::HIndex => h_index(g),
                CentralityMethod::GatewayLocalRank => {
                    glr(g, &data.partition, config.community.gateway_weight)?
                }
                CentralityMethod::PageRank => pagerank(g, PageRankParams::default())?,
                CentralityMethod::ExtendedCoreness => enc(g),
            };
            top_k_seeds(g, &scores, k)
        }
    }
}

fn run_cell(
    config: &ExperimentConfig,
    data: &PreparedDataset,
    selector: Selector,
    k: usize,
    seed: u64,
) -> Result<(f64, f64, f64, f64), dqssa::Error> {
    let started = Instant::now();
    let seeds = select_seeds(config, data, selector, k, seed)?;
    let seconds = started.elapsed().as_secs_f64();
    let p = InfectionProbability::new(config.p)?;
    let value = lie(&data.graph, &seeds, p)?;
    let diffusion = DiffusionConfig {
        p: config.p,
        num_simulations: config.diffusion.simulations,
        rng_seed: mix(seed),
    };
    let spread = fis(&data.graph, &seeds, &diffusion)?;
    Ok((value, spread.fis_mean, spread.fis_variance, seconds))
}

/// Runs the full grid. Rows are written to `<out>/results.csv` as they
/// complete and returned in cell order. Relative dataset paths resolve
/// against `base_dir`.
pub fn run_experiment(
    config: &ExperimentConfig,
    base_dir: &Path,
) -> Result<Vec<ResultRow>, BenchError> {
    let mut config = config.clone();
    config.normalize()?;
    std::fs::create_dir_all(&config.out).map_err(|e| BenchError::Io {
        path: config.out.clone(),
        source: e,
    })?;
    let results_path = config.out.join(RESULTS_FILE);
    let file = File::create(&results_path).map_err(|e| BenchError::Io {
        path: results_path.clone(),
        source: e,
    })?;

    let datasets = prepare_datasets(&config, base_dir);
    let mut cells = Vec::new();
    for d in 0..config.datasets.len() {
        for &selector in &config.algorithms {
            for f in 0..config.spreader_fractions.len() {
                for r in 0..config.repetitions {
                    cells.push(Cell {
                        index: cells.len(),
                        dataset: d,
                        selector,
                        fraction_index: f,
                        repetition: r,
                    });
                }
            }
        }
    }
    info!("running {} cells", cells.len());

    let sink = Mutex::new(OrderedSink {
        next: 0,
        pending: BTreeMap::new(),
        writer: Some(csv::Writer::from_writer(file)),
        rows: Vec::with_capacity(cells.len()),
        failure: None,
    });

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| BenchError::Config(e.to_string()))?;
    pool.install(|| {
        cells.par_iter().for_each(|cell| {
            let fraction = config.spreader_fractions[cell.fraction_index];
            let label = cell.selector.to_string();
            let seed = cell_seed(
                config.seed,
                cell.dataset,
                &label,
                cell.fraction_index,
                cell.repetition,
            );
            let mut row = ResultRow {
                dataset: dataset_label(&config, cell.dataset, base_dir),
                algorithm: label,
                fraction,
                k: 0,
                lie_value: None,
                fis_mean: None,
                fis_variance: None,
                wall_clock_seconds: None,
                repetition: cell.repetition,
                seed,
                error: None,
            };
            match &datasets[cell.dataset] {
                Err(e) => row.error = Some(e.clone()),
                Ok(data) => {
                    row.dataset = data.name.clone();
                    row.k = seed_count(fraction, data.graph.n());
                    match run_cell(&config, data, cell.selector, row.k, seed) {
                        Ok((value, mean, variance, seconds)) => {
                            row.lie_value = Some(value);
                            row.fis_mean = Some(mean);
                            row.fis_variance = Some(variance);
                            row.wall_clock_seconds = Some(seconds);
                        }
                        Err(e) => row.error = Some(e.to_string()),
                    }
                }
            }
            if let Some(e) = &row.error {
                warn!(
                    "{} {} f={} rep={}: {e}",
                    row.dataset, row.algorithm, fraction, cell.repetition
                );
            }
            sink.lock().expect("sink poisoned").push(cell.index, row);
        });
    });

    let sink = sink.into_inner().expect("sink poisoned");
    if let Some(e) = sink.failure {
        return Err(e);
    }
    Ok(sink.rows)
}

/// Reads `results.csv`, ignoring a trailing partially written line.
pub fn read_results(path: &Path) -> Result<Vec<ResultRow>, BenchError> {
    let io_err = |e| BenchError::Io {
        path: path.to_path_buf(),
        source: e,
    };
    let mut text = String::new();
    File::open(path)
        .map_err(io_err)?
        .read_to_string(&mut text)
        .map_err(io_err)?;
    let complete = match text.rfind('\n') {
        Some(end) => &text[..=end],
        None => "",
    };
    let mut reader = csv::Reader::from_reader(complete.as_bytes());
    reader
        .deserialize()
        .collect::<Result<Vec<ResultRow>, _>>()
        .map_err(BenchError::Csv)
}

/// Resolves a dataset file by trying each candidate name in `dir`.
pub fn find_dataset(dir: &Path, candidates: &[&str]) -> Option<PathBuf> {
    candidates.iter().map(|c| dir.join(c)).find(|p| p.is_file())
}
