//! Plot-ready summaries of the result rows.
//!
//! * `results.csv`: every row.
//! * `time_table.csv`: datasets × algorithms, mean selection seconds at each
//!   dataset's largest fraction.
//! * `<dataset>_fis_curve.csv`, `<dataset>_lie_curve.csv`: fraction × algorithm
//!   means.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::runner::{ResultRow, RESULTS_FILE};
use crate::BenchError;

pub const TIME_TABLE_FILE: &str = "time_table.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

/// Files written by [`emit_tables`].
#[derive(Debug, Clone, Default)]
pub struct EmittedTables {
    pub results: PathBuf,
    pub time_table: PathBuf,
    pub fis_curves: Vec<PathBuf>,
    pub lie_curves: Vec<PathBuf>,
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> BenchError + '_ {
    move |source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

fn ordered_unique<'a>(items: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in items {
        if !out.iter().any(|o| o == s) {
            out.push(s.to_owned());
        }
    }
    out
}

fn file_stem_for(dataset: &str) -> String {
    dataset
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn write_matrix(
    path: &Path,
    corner: &str,
    columns: &[String],
    rows: &[(String, Vec<Option<f64>>)],
) -> Result<(), BenchError> {
    let file = File::create(path).map_err(io_error(path))?;
    let mut w = csv::Writer::from_writer(file);
    let mut header = vec![corner.to_owned()];
    header.extend(columns.iter().cloned());
    w.write_record(&header)?;
    for (label, values) in rows {
        let mut record = vec![label.clone()];
        record.extend(
            values
                .iter()
                .map(|v| v.map(|x| x.to_string()).unwrap_or_default()),
        );
        w.write_record(&record)?;
    }
    w.flush().map_err(io_error(path))?;
    Ok(())
}

/// Writes the result table and its summaries into `out_dir`. Algorithm
/// columns follow `algorithm_order`; algorithms missing from it are appended
/// in order of first appearance. Error rows are kept in `results.csv` but
/// excluded from the summaries.
pub fn emit_tables(
    rows: &[ResultRow],
    algorithm_order: &[String],
    out_dir: &Path,
) -> Result<EmittedTables, BenchError> {
    if rows.is_empty() {
        return Err(BenchError::Config("no result rows to tabulate".into()));
    }
    fs::create_dir_all(out_dir).map_err(io_error(out_dir))?;

    let results = out_dir.join(RESULTS_FILE);
    {
        let file = File::create(&results).map_err(io_error(&results))?;
        let mut w = csv::Writer::from_writer(file);
        for row in rows {
            w.serialize(row)?;
        }
        w.flush().map_err(io_error(&results))?;
    }

    let ok: Vec<&ResultRow> = rows.iter().filter(|r| !r.is_error()).collect();
    let datasets = ordered_unique(rows.iter().map(|r| r.dataset.as_str()));
    let mut algorithms: Vec<String> = algorithm_order.to_vec();
    for a in ordered_unique(rows.iter().map(|r| r.algorithm.as_str())) {
        if !algorithms.contains(&a) {
            algorithms.push(a);
        }
    }

    let mut emitted = EmittedTables {
        results,
        time_table: out_dir.join(TIME_TABLE_FILE),
        ..Default::default()
    };

    let mut time_rows = Vec::new();
    for d in &datasets {
        let largest = ok
            .iter()
            .filter(|r| &r.dataset == d)
            .map(|r| r.fraction)
            .fold(f64::NEG_INFINITY, f64::max);
        let values = algorithms
            .iter()
            .map(|a| {
                let secs: Vec<f64> = ok
                    .iter()
                    .filter(|r| &r.dataset == d && &r.algorithm == a && r.fraction == largest)
                    .filter_map(|r| r.wall_clock_seconds)
                    .collect();
                (!secs.is_empty()).then(|| mean(&secs))
            })
            .collect();
        time_rows.push((d.clone(), values));
    }
    write_matrix(&emitted.time_table, "dataset", &algorithms, &time_rows)?;

    for d in &datasets {
        let mut by_fraction: BTreeMap<u64, f64> = BTreeMap::new();
        for r in ok.iter().filter(|r| &r.dataset == d) {
            by_fraction.insert(r.fraction.to_bits(), r.fraction);
        }
        let mut fractions: Vec<f64> = by_fraction.into_values().collect();
        fractions.sort_by(f64::total_cmp);

        let curve = |metric: fn(&ResultRow) -> Option<f64>| -> Vec<(String, Vec<Option<f64>>)> {
            fractions
                .iter()
                .map(|&f| {
                    let values = algorithms
                        .iter()
                        .map(|a| {
                            let xs: Vec<f64> = ok
                                .iter()
                                .filter(|r| &r.dataset == d && &r.algorithm == a && r.fraction == f)
                                .filter_map(|r| metric(r))
                                .collect();
                            (!xs.is_empty()).then(|| mean(&xs))
                        })
                        .collect();
                    (f.to_string(), values)
                })
                .collect()
        };
        let stem = file_stem_for(d);
        let fis_path = out_dir.join(format!("{stem}_fis_curve.csv"));
        let lie_path = out_dir.join(format!("{stem}_lie_curve.csv"));
        write_matrix(&fis_path, "fraction", &algorithms, &curve(|r| r.fis_mean))?;
        write_matrix(&lie_path, "fraction", &algorithms, &curve(|r| r.lie_value))?;
        emitted.fis_curves.push(fis_path);
        emitted.lie_curves.push(lie_path);
    }
    Ok(emitted)
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    library_version: &'static str,
    master_seed: u64,
    rows: usize,
    error_rows: usize,
    cell_seeds: Vec<CellSeed<'a>>,
    config: &'a ExperimentConfig,
}

#[derive(Debug, Serialize)]
struct CellSeed<'a> {
    dataset: &'a str,
    algorithm: &'a str,
    fraction: f64,
    repetition: usize,
    seed: u64,
}

/// Records the configuration, every cell seed and the crate versions.
pub fn write_manifest(
    config: &ExperimentConfig,
    rows: &[ResultRow],
    out_dir: &Path,
) -> Result<PathBuf, BenchError> {
    let path = out_dir.join(MANIFEST_FILE);
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        library_version: dqssa_version(),
        master_seed: config.seed,
        rows: rows.len(),
        error_rows: rows.iter().filter(|r| r.is_error()).count(),
        cell_seeds: rows
            .iter()
            .map(|r| CellSeed {
                dataset: &r.dataset,
                algorithm: &r.algorithm,
                fraction: r.fraction,
                repetition: r.repetition,
                seed: r.seed,
            })
            .collect(),
        config,
    };
    let file = File::create(&path).map_err(io_error(&path))?;
    serde_json::to_writer_pretty(file, &manifest)
        .map_err(|e| BenchError::Config(format!("manifest: {e}")))?;
    Ok(path)
}

fn dqssa_version() -> &'static str {
    // both crates share the workspace version
    env!("CARGO_PKG_VERSION")
}
