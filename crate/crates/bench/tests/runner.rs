use std::fs;
use std::path::Path;

use dqssa_bench::runner::RESULTS_FILE;
use dqssa_bench::{
    emit_tables, read_results, run_experiment, seed_count, DatasetSpec, ExperimentConfig,
    ResultRow, Selector,
};

/// Two 5-cliques joined by a single edge, 1-based IDs.
fn write_barbell(dir: &Path) -> std::path::PathBuf {
    let mut text = String::from("% barbell\n");
    for base in [1, 6] {
        for u in base..base + 5 {
            for v in u + 1..base + 5 {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    text.push_str("5 6\n");
    let path = dir.join("barbell.txt");
    fs::write(&path, text).unwrap();
    path
}

fn small_config(dir: &Path) -> ExperimentConfig {
    let mut config = ExperimentConfig {
        datasets: vec![DatasetSpec {
            id_base: 1,
            ..DatasetSpec::new(write_barbell(dir))
        }],
        algorithms: vec![
            "DQSSA".parse().unwrap(),
            "DPSO".parse().unwrap(),
            "PR".parse().unwrap(),
        ],
        spreader_fractions: vec![0.1, 0.2],
        repetitions: 2,
        out: dir.join("out"),
        workers: 2,
        ..ExperimentConfig::default()
    };
    config.swarm.population = 6;
    config.swarm.iterations = 5;
    config.diffusion.simulations = 200;
    config
}

#[test]
fn one_row_per_cell_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let rows = run_experiment(&config, dir.path()).unwrap();
    assert_eq!(rows.len(), 3 * 2 * 2);
    assert!(rows.iter().all(|r| !r.is_error()));
    assert_eq!(rows[0].algorithm, "DQSSA");
    assert_eq!(rows[4].algorithm, "DPSO");
    assert_eq!(rows[11].algorithm, "PR");
    for r in &rows {
        assert_eq!(r.dataset, "barbell");
        assert_eq!(r.k, seed_count(r.fraction, 10));
        let fis = r.fis_mean.unwrap();
        assert!(fis >= r.k as f64 / 10.0 - 1e-12 && fis <= 1.0);
        assert!(r.lie_value.unwrap() >= r.k as f64);
    }
    let on_disk = read_results(&config.out.join(RESULTS_FILE)).unwrap();
    assert_eq!(on_disk, rows);
}

#[test]
fn seed_count_floor() {
    assert_eq!(seed_count(0.01, 10), 1);
    assert_eq!(seed_count(0.05, 198), 10);
    assert_eq!(seed_count(0.01, 198), 2);
}

#[test]
fn reruns_match_except_wall_clock() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let a = run_experiment(&config, dir.path()).unwrap();
    let mut single = config.clone();
    single.workers = 1;
    let b = run_experiment(&single, dir.path()).unwrap();
    let strip = |rows: &[ResultRow]| {
        rows.iter()
            .map(ResultRow::without_timing)
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn missing_dataset_yields_error_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_config(dir.path());
    config.datasets.push(DatasetSpec::new("does-not-exist.txt"));
    let rows = run_experiment(&config, dir.path()).unwrap();
    assert_eq!(rows.len(), 2 * 3 * 2 * 2);
    let (bad, good): (Vec<_>, Vec<_>) = rows.iter().partition(|r| r.is_error());
    assert_eq!(bad.len(), 12);
    assert_eq!(good.len(), 12);
    assert!(bad
        .iter()
        .all(|r| r.lie_value.is_none() && r.fis_mean.is_none()));
}

#[test]
fn truncated_results_file_reads_complete_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let rows = run_experiment(&config, dir.path()).unwrap();
    let path = config.out.join(RESULTS_FILE);
    let text = fs::read_to_string(&path).unwrap();
    // cut in the middle of the last line
    let cut = text.trim_end().rfind('\n').unwrap() + 5;
    fs::write(&path, &text[..cut]).unwrap();
    let back = read_results(&path).unwrap();
    assert_eq!(back, rows[..rows.len() - 1]);
}

fn row(
    dataset: &str,
    algorithm: &str,
    fraction: f64,
    rep: usize,
    secs: f64,
    fis: f64,
) -> ResultRow {
    ResultRow {
        dataset: dataset.into(),
        algorithm: algorithm.into(),
        fraction,
        k: 1,
        lie_value: Some(fis * 10.0),
        fis_mean: Some(fis),
        fis_variance: Some(0.0),
        wall_clock_seconds: Some(secs),
        repetition: rep,
        seed: 0,
        error: None,
    }
}

fn read_matrix(path: &Path) -> Vec<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)
        .unwrap();
    reader
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

#[test]
fn time_table_has_dataset_rows_and_algorithm_columns() {
    let dir = tempfile::tempdir().unwrap();
    let algorithms: Vec<String> = ["DQSSA", "DQBA", "DQPSO", "DBA", "DPSO"]
        .map(String::from)
        .to_vec();
    let datasets = ["Jazz", "wiki-Vote", "email-univ", "Hamsterster"];
    let mut rows = Vec::new();
    for d in datasets {
        for a in &algorithms {
            for f in [0.01, 0.05] {
                rows.push(row(d, a, f, 0, f * 100.0, 0.5));
            }
        }
    }
    let out = emit_tables(&rows, &algorithms, dir.path()).unwrap();
    let table = read_matrix(&out.time_table);
    assert_eq!(table.len(), 1 + 4);
    assert_eq!(table[0][0], "dataset");
    assert_eq!(&table[0][1..], &algorithms[..]);
    for (i, d) in datasets.iter().enumerate() {
        assert_eq!(table[i + 1].len(), 6);
        assert_eq!(table[i + 1][0], *d);
        // largest fraction only
        assert_eq!(table[i + 1][1].parse::<f64>().unwrap(), 5.0);
    }
    assert_eq!(out.fis_curves.len(), 4);
}

#[test]
fn single_row_gives_one_point_curves() {
    let dir = tempfile::tempdir().unwrap();
    let rows = vec![row("toy", "DQSSA", 0.02, 0, 0.1, 0.3)];
    let out = emit_tables(&rows, &["DQSSA".into()], dir.path()).unwrap();
    let fis = read_matrix(&out.fis_curves[0]);
    assert_eq!(fis, vec![vec!["fraction", "DQSSA"], vec!["0.02", "0.3"]]);
    let lie = read_matrix(&out.lie_curves[0]);
    assert_eq!(lie[1][1], "3");
}

#[test]
fn repetitions_are_averaged() {
    let dir = tempfile::tempdir().unwrap();
    let rows = vec![
        row("toy", "DQSSA", 0.02, 0, 1.0, 0.2),
        row("toy", "DQSSA", 0.02, 1, 3.0, 0.4),
    ];
    let out = emit_tables(&rows, &[], dir.path()).unwrap();
    let fis = read_matrix(&out.fis_curves[0]);
    assert!((fis[1][1].parse::<f64>().unwrap() - 0.3).abs() < 1e-12);
    let time = read_matrix(&out.time_table);
    assert_eq!(time[1][1].parse::<f64>().unwrap(), 2.0);
}

#[test]
fn selector_labels_round_trip() {
    for s in Selector::all() {
        assert_eq!(s.to_string().parse::<Selector>().unwrap(), s);
    }
    assert!("nope".parse::<Selector>().is_err());
}
