mod common;

use std::fs;
use std::path::Path;

use grasp_core::dataset::{write_tudataset, DatasetBundle};
use grasp_core::graph::Graph;
use grasp_core::metrics::{MetricKind, MetricStat};
use grasp_core::pipeline::{
    exit_code, run_pipeline, DatasetSpec, MethodSpec, PipelineConfig,
};
use grasp_core::rewiring::{GtrConfig, LaserConfig, RewireConfig};
use grasp_core::Error;
use serde_json::Value;

fn toy_dir(root: &Path) -> std::path::PathBuf {
    let dir = root.join("toy");
    fs::create_dir_all(&dir).unwrap();
    let bundle = DatasetBundle::new(
        "TOY",
        vec![Graph::path(5), Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()],
        vec![0, 1],
    )
    .unwrap();
    write_tudataset(&bundle, &dir).unwrap();
    dir
}

fn config(data: &Path, name: &str, out: &Path, methods: Vec<MethodSpec>) -> PipelineConfig {
    PipelineConfig {
        datasets: vec![DatasetSpec {
            name: name.into(),
            directory: data.to_path_buf(),
        }],
        methods,
        similarity: true,
        laplacian_variant: Default::default(),
        p: 2.0,
        output_dir: out.to_path_buf(),
        seed: 7,
        workers: None,
    }
}

fn all_methods() -> Vec<MethodSpec> {
    ["sdrf", "fosr", "gtr", "borf", "laser", "digl"]
        .iter()
        .map(|m| MethodSpec::new(serde_json::from_str(&format!(r#"{{"method": "{m}"}}"#)).unwrap()))
        .collect()
}

fn read(path: impl AsRef<Path>) -> String {
    fs::read_to_string(path).unwrap()
}

#[test]
fn toy_run_writes_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let data = toy_dir(tmp.path());
    let out = tmp.path().join("out");
    let cfg = config(&data, "TOY", &out, all_methods());
    let report = run_pipeline(&cfg).unwrap();
    assert_eq!(report.datasets[0].original.graph_indices, vec![0, 1]);

    for f in ["metrics_TOY.csv", "pctchange_TOY.csv", "edges_TOY.csv", "similarity_TOY.csv", "table_TOY.csv",
              "report.json", "config_echo.json", "exceptions.csv", "degree_hist_TOY_gtr.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let json: Value = serde_json::from_str(&read(out.join("report.json"))).unwrap();
    let per_graph = &json["datasets"][0]["original"]["per_graph"];
    for kind in MetricKind::ALL {
        assert_eq!(per_graph[kind.name()].as_array().unwrap().len(), 2, "{kind}");
    }
    // config echo parses back to the same run
    let echo = PipelineConfig::from_json(&read(out.join("config_echo.json"))).unwrap();
    assert_eq!(echo, cfg);
    let metrics = read(out.join("metrics_TOY.csv"));
    assert!(metrics.starts_with("metric,method,mean,std,undefined_count\n"));
    assert_eq!(metrics.lines().count(), 1 + MetricKind::ALL.len() * 7);
}

#[test]
fn zero_budget_changes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let data = toy_dir(tmp.path());
    let out = tmp.path().join("out");
    let cfg = config(&data, "TOY", &out, vec![MethodSpec::new(RewireConfig::Gtr(GtrConfig { budget: 0 }))]);
    run_pipeline(&cfg).unwrap();
    for line in read(out.join("pctchange_TOY.csv")).lines().skip(1) {
        let cell = line.rsplit(',').next().unwrap();
        assert!(cell == "0.000" || cell == "N/A", "{line}");
    }
    let edges = read(out.join("edges_TOY.csv"));
    assert_eq!(edges.lines().nth(1).unwrap(), "gtr,8,0,0,0.000,0.000,0");
}

#[test]
fn csv_means_recompute_from_per_graph_values() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let data = common::dataset_dir("MUTAG").unwrap();
    let cfg = config(&data, "MUTAG", &out, vec![MethodSpec::new(RewireConfig::Gtr(GtrConfig { budget: 3 }))]);
    run_pipeline(&cfg).unwrap();
    let json: Value = serde_json::from_str(&read(out.join("report.json"))).unwrap();
    let ds = &json["datasets"][0];
    for block in [&ds["original"], &ds["methods"][0]["rewired"]] {
        for kind in MetricKind::ALL {
            let values: Vec<Option<f64>> = block["per_graph"][kind.name()]
                .as_array()
                .unwrap()
                .iter()
                .map(Value::as_f64)
                .collect();
            let stat = MetricStat::from_values(values);
            let stored = &block["summary"]["stats"][kind.name()];
            assert_eq!(stored["mean"].as_f64(), stat.mean, "{kind}");
            assert_eq!(stored["std"].as_f64(), stat.std, "{kind}");
            assert_eq!(stored["undefined"].as_u64(), Some(stat.undefined as u64));
        }
    }
}

fn strip_metadata(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).unwrap();
    v.as_object_mut().unwrap().remove("metadata");
    v
}

fn assert_same_outputs(a: &Path, b: &Path) {
    let mut names: Vec<_> = fs::read_dir(a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for name in names {
        let (x, y) = (read(a.join(&name)), read(b.join(&name)));
        if name == "report.json" {
            assert_eq!(strip_metadata(&x), strip_metadata(&y));
        } else {
            assert_eq!(x, y, "{name:?}");
        }
    }
}

#[test]
fn runs_are_reproducible_and_worker_independent() {
    let tmp = tempfile::tempdir().unwrap();
    let data = common::dataset_dir("MUTAG").unwrap();
    let out = tmp.path().join("out");
    let mut cfg = config(&data, "MUTAG", &out, all_methods());
    // same output path every time, since the echo records it
    let mut run = |workers: usize, keep: &str| {
        cfg.workers = Some(workers);
        run_pipeline(&cfg).unwrap();
        fs::rename(&out, tmp.path().join(keep)).unwrap();
    };
    run(1, "a");
    run(1, "b");
    run(4, "c");
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    assert_same_outputs(&a, &b);
    // with a different worker count only the echoed count may differ
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.retain(|n| n != "config_echo.json" && n != "report.json");
    for name in names {
        assert_eq!(read(a.join(&name)), read(c.join(&name)), "{name:?}");
    }
    let strip_workers = |p: &Path| {
        let mut v = strip_metadata(&read(p.join("report.json")));
        v["config"].as_object_mut().unwrap().remove("workers");
        v
    };
    assert_eq!(strip_workers(&a), strip_workers(&c));
}

#[test]
fn saturating_laser_adds_the_completion_count() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let data = common::dataset_dir("MUTAG").unwrap();
    let cfg = config(
        &data,
        "MUTAG",
        &out,
        vec![MethodSpec::labeled("laser_full", RewireConfig::Laser(LaserConfig::saturating()))],
    );
    let report = run_pipeline(&cfg).unwrap();
    let bundle = common::mutag();
    let m: usize = bundle.graphs.iter().map(Graph::edge_count).sum();
    let missing: usize = bundle
        .graphs
        .iter()
        .map(|g| g.node_count() * (g.node_count() - 1) / 2 - g.edge_count())
        .sum();
    let edges = &report.datasets[0].methods[0].edges;
    assert_eq!(edges.added, missing);
    assert_eq!(edges.added_pct, 100.0 * missing as f64 / m as f64);
    let row = read(out.join("edges_MUTAG.csv"));
    assert!(row.contains(&format!("{:.3}", 100.0 * missing as f64 / m as f64)));
}

#[test]
fn missing_dataset_is_an_ingest_error_with_no_output() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let data = toy_dir(tmp.path());
    let mut cfg = config(&data, "TOY", &out, all_methods());
    cfg.datasets.push(DatasetSpec {
        name: "GONE".into(),
        directory: tmp.path().join("nowhere"),
    });
    let err = run_pipeline(&cfg).unwrap_err();
    assert!(matches!(err, Error::Ingest { .. }));
    assert_eq!(exit_code(&err), 2);
    assert!(!out.exists());
}

#[test]
fn unwritable_output_is_an_output_error() {
    let tmp = tempfile::tempdir().unwrap();
    let data = toy_dir(tmp.path());
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let cfg = config(&data, "TOY", &blocker.join("out"), all_methods());
    let err = run_pipeline(&cfg).unwrap_err();
    assert_eq!(exit_code(&err), 3);
}

#[test]
fn failing_graphs_are_reported_not_fatal() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("split");
    fs::create_dir_all(&dir).unwrap();
    let bundle = DatasetBundle::new(
        "SPLIT",
        vec![Graph::path(4), Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap()],
        vec![0, 0],
    )
    .unwrap();
    write_tudataset(&bundle, &dir).unwrap();
    let out = tmp.path().join("out");
    let cfg = config(&dir, "SPLIT", &out, vec![MethodSpec::new(RewireConfig::Gtr(GtrConfig { budget: 1 }))]);
    let report = run_pipeline(&cfg).unwrap();
    let m = &report.datasets[0].methods[0];
    assert_eq!(m.exceptions.len(), 1);
    assert_eq!(m.exceptions[0].graph, 1);
    assert_eq!(m.rewired.graph_indices, vec![0]);
    let exceptions = read(out.join("exceptions.csv"));
    assert_eq!(exceptions.lines().count(), 2);
    assert!(exceptions.contains("SPLIT,gtr,1,rewire,"));
    let edges = read(out.join("edges_SPLIT.csv"));
    assert!(edges.lines().nth(1).unwrap().ends_with(",1"));
}
