mod common;

use std::process::Command;

use edgecache_core::placement::SchemeId;
use edgecache_core::{Error, RequestMatrix};
use edgecache_harness::experiment::{
    evaluate_prepared, load_or_generate, prepare, read_results, write_comparison, write_results, ResultRow,
};
use edgecache_harness::{compare_static_dynamic, run_experiment, ExperimentConfig};

use common::*;

#[test]
fn empty_scheme_list_gives_empty_table() {
    let mut cfg = small_config();
    cfg.set("schemes", "").unwrap();
    assert!(run_experiment(&cfg).unwrap().is_empty());
}

#[test]
fn default_bs_sweep_has_a_row_per_point_and_scheme() {
    let mut cfg = ExperimentConfig::default();
    cfg.set("forecaster", "slot-mean").unwrap();
    cfg.set("num_seeds", "1").unwrap();
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 33);
    let points: Vec<usize> = rows.iter().step_by(3).map(|r| r.c_b).collect();
    assert_eq!(points, (4..=14).collect::<Vec<_>>());
    assert!(rows.iter().all(|r| r.c_d == 4 && r.seed == 1 && r.wall_time == 0.0));
}

#[test]
fn costs_stay_between_storage_and_cloud() {
    let mut cfg = small_config();
    cfg.set("schemes", "bs-first,user-first,overlapping,homogeneous,static-zipf")
        .unwrap();
    let c = cfg.costs();
    for mode in ["forecast", "oracle"] {
        cfg.set("preference_mode", mode).unwrap();
        for seed in cfg.seeds() {
            let prep = prepare(&cfg, seed).unwrap();
            // Users whose weight row is all zero contribute nothing.
            let active = prep.rho.rho.iter().filter(|r| r.iter().sum::<f64>() > 0.0).count();
            let floor = c.storage * active as f64 / prep.rho.users() as f64;
            for r in evaluate_prepared(&cfg, &prep).unwrap() {
                assert!(
                    r.cost >= floor - 1e-9 && r.cost <= c.phi_cloud() + 1e-9,
                    "{mode} {r:?} floor {floor}"
                );
            }
        }
    }
}

#[test]
fn static_cost_never_rises_with_bs_capacity() {
    let mut cfg = small_config();
    cfg.set("schemes", "static-zipf").unwrap();
    cfg.set("sweep_min", "0").unwrap();
    cfg.set("sweep_max", "12").unwrap();
    let rows = run_experiment(&cfg).unwrap();
    for pair in rows.windows(2).filter(|w| w[0].seed == w[1].seed) {
        assert!(pair[1].cost <= pair[0].cost + 1e-9, "{pair:?}");
    }
}

#[test]
fn same_seed_gives_identical_tables() {
    let cfg = small_config();
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_results(&a, &run_experiment(&cfg).unwrap()).unwrap();
    write_results(&b, &run_experiment(&cfg).unwrap()).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn results_csv_layout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let rows = vec![ResultRow {
        scheme: "overlapping".into(),
        c_b: 12,
        c_d: 4,
        cost: 4321.5,
        seed: 7,
        wall_time: 0.0,
    }];
    write_results(&path, &rows).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "scheme,c_b,c_d,cost,seed,wall_time\noverlapping,12,4,4321.5,7,0.0\n"
    );
    assert_eq!(read_results(&path).unwrap(), rows);
    write_results(&path, &[]).unwrap();
    assert_eq!(
        std::fs::read_to_string(&path).unwrap(),
        "scheme,c_b,c_d,cost,seed,wall_time\n"
    );
}

#[test]
fn dataset_round_trip_and_truncation() {
    let cfg = small_config();
    let data = load_or_generate(&cfg, 3).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.csv");
    write_dataset(&data, &path);
    let mut loaded = cfg.clone();
    loaded.dataset = Some(path.clone());
    assert_eq!(load_or_generate(&loaded, 99).unwrap(), data);

    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let cut = lines.len() / 2;
    let mut broken = lines[..cut].join("\n");
    broken.push_str("\n5,1\n");
    std::fs::write(&path, broken).unwrap();
    let err = load_or_generate(&loaded, 3).unwrap_err();
    let parse = err
        .chain()
        .find_map(|e| e.downcast_ref::<Error>())
        .expect("structured error");
    assert!(
        matches!(parse, Error::Parse { line, .. } if *line == cut as u64 + 1),
        "{parse}"
    );

    loaded.dataset = Some(dir.path().join("missing.csv"));
    assert!(load_or_generate(&loaded, 3).is_err());
}

#[test]
fn single_content_demand_ties_static_and_dynamic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    write_dataset(&single_content(6, 20, 36), &path);
    let mut cfg = small_config();
    cfg.dataset = Some(path);
    let cmp = compare_static_dynamic(&cfg).unwrap();
    let diff = cmp.difference().unwrap();
    assert!(diff.iter().all(|d| d.abs() < 1e-9), "{diff:?}");
}

#[test]
fn rotating_favourites_favour_dynamic_caching() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rot.csv");
    write_dataset(&rotating_preferences(3, 3, 5, 30, 50), &path);
    let mut cfg = rotating_config(&path);
    cfg.set("num_seeds", "1").unwrap();
    let cmp = compare_static_dynamic(&cfg).unwrap();
    let diff = cmp.difference().unwrap();
    assert!(diff.iter().all(|d| *d > 0.0), "{cmp:?}");
}

#[test]
fn single_scheme_comparison_has_one_column() {
    let mut cfg = small_config();
    cfg.set("schemes", "static-zipf").unwrap();
    cfg.set("num_seeds", "1").unwrap();
    let cmp = compare_static_dynamic(&cfg).unwrap();
    assert_eq!(cmp.columns.len(), 1);
    assert_eq!(cmp.columns[0].0, SchemeId::StaticZipf);
    assert!(cmp.difference().is_none());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    write_comparison(&path, &cmp).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next().unwrap(), "c_b,c_d,static-zipf");
    assert_eq!(text.lines().count(), 1 + cfg.sweep_points().len());
}

#[test]
fn oracle_mode_needs_future_slots() {
    let mut cfg = small_config();
    let data = load_or_generate(&cfg, 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("short.csv");
    write_dataset(&data.slice_slots(0, cfg.history_slots).unwrap(), &path);
    cfg.dataset = Some(path);
    cfg.set("preference_mode", "oracle").unwrap();
    assert!(run_experiment(&cfg).is_err());
    cfg.set("preference_mode", "forecast").unwrap();
    assert!(!run_experiment(&cfg).unwrap().is_empty());
}

fn edgecache(args: &[&str]) -> std::process::Output {
    let out = Command::new(env!("CARGO_BIN_EXE_edgecache"))
        .args(args)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "edgecache {args:?} failed:\n{}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn cli_stage_by_stage() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    let out = dir.path().join("out");
    std::fs::write(
        &conf,
        format!(
            "# tiny run\n{}output_dir = {}\nschemes = bs-first,homogeneous,static-zipf\nhidden_dim = 99\n",
            small_config()
                .to_text()
                .lines()
                .filter(|l| !l.starts_with("output_dir") && !l.starts_with("schemes") && !l.starts_with("hidden_dim"))
                .map(|l| format!("{l}\n"))
                .collect::<String>(),
            out.display()
        ),
    )
    .unwrap();
    let c = conf.to_str().unwrap();
    // The flag wins over the file's hidden_dim.
    edgecache(&["gen", "--config", c, "--hidden_dim", "4"]);
    let dataset = out.join("dataset.csv");
    let (data, meta) = RequestMatrix::read_csv(std::fs::File::open(&dataset).unwrap()).unwrap();
    assert_eq!((data.slots(), data.users(), data.contents()), (36, 6, 20));
    assert_eq!(meta.seed, 1);

    let ds = dataset.to_str().unwrap();
    edgecache(&["train", "--config", c, "--hidden_dim", "4", "--dataset", ds]);
    assert!(out.join("models/user_5.txt").exists());
    edgecache(&["forecast", "--config", c, "--hidden_dim", "4", "--dataset", ds]);
    let (fc, _) = RequestMatrix::read_csv(std::fs::File::open(out.join("forecast.csv")).unwrap()).unwrap();
    assert_eq!((fc.start_slot(), fc.slots()), (30, 6));

    edgecache(&["place", "--config", c, "--dataset", ds]);
    for s in ["bs-first", "homogeneous", "static-zipf"] {
        assert!(out.join(format!("schedule_{s}.csv")).exists());
    }
    let stdout = edgecache(&["evaluate", "--config", c, "--dataset", ds]).stdout;
    assert_eq!(String::from_utf8(stdout).unwrap().lines().count(), 3);
    assert_eq!(read_results(&out.join("evaluation.csv")).unwrap().len(), 3);
}

#[test]
fn cli_rejects_bad_values() {
    let out = Command::new(env!("CARGO_BIN_EXE_edgecache"))
        .args(["sweep", "--num_seeds", "lots"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("num_seeds"));
}
