//! Batch runs: load datasets, rewire every graph with every configured
//! method, measure before and after, and write the resulting tables.

mod config;
mod emit;

use std::collections::BTreeMap;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::Serialize;

pub use config::{DatasetSpec, MethodSpec, PipelineConfig, WORKERS_ENV};
pub use emit::{emit_tables, format_cell, format_pct};

use crate::dataset::{load_tudataset, DatasetBundle, DatasetStats};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{
    compute_all, defined, percentage_change, MetricKind, MetricStat, MetricSummary, StructuralMetrics,
};
use crate::rewiring::{edge_change_stats, graph_seed, rewire, EdgeChangeStats, Method, RewireResult};
use crate::similarity::{
    degree_distance, degree_distribution_distance, jaccard_edges, laplacian_spectrum_distance,
    shortest_path_distribution_distance, shortest_path_distribution_distance_concat,
    SimilarityReport,
};
use crate::spectral::adjacency_spectral_norm_diff;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Process exit code for an error escaping a run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Ingest { .. } | Error::Format { .. } => 2,
        Error::Output { .. } => 3,
        _ => 1,
    }
}

/// Per-graph metric values (`None` = undefined) and their summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricBlock {
    /// Dataset indices of the graphs included, aligned with `per_graph`.
    pub graph_indices: Vec<usize>,
    pub per_graph: BTreeMap<MetricKind, Vec<Option<f64>>>,
    pub summary: MetricSummary,
}

impl MetricBlock {
    fn new(rows: Vec<(usize, StructuralMetrics)>) -> Self {
        let per_graph = MetricKind::ALL
            .iter()
            .map(|&k| (k, rows.iter().map(|(_, m)| m.get(k)).collect()))
            .collect();
        let (graph_indices, metrics): (Vec<usize>, Vec<StructuralMetrics>) = rows.into_iter().unzip();
        Self {
            graph_indices,
            per_graph,
            summary: MetricSummary::from_metrics(&metrics),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphFailure {
    pub graph: usize,
    /// `"rewire"` or `"metrics"`.
    pub stage: String,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityAggregate {
    pub measure: String,
    /// `per_graph_mean`, `per_graph_std`, or `concatenated` (one distance
    /// between the pooled samples of all graphs).
    pub aggregation: String,
    pub value: Option<f64>,
    pub undefined: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimilarityBlock {
    pub per_graph: BTreeMap<String, Vec<Option<f64>>>,
    pub aggregates: Vec<SimilarityAggregate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeBin {
    pub degree: usize,
    pub count_original: usize,
    pub count_rewired: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeHistogram {
    pub bins: Vec<DegreeBin>,
    /// W1 between the pooled original and rewired degrees.
    pub w1: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodReport {
    pub label: String,
    pub method: Method,
    pub config: MethodSpec,
    pub rewired: MetricBlock,
    pub percentage_change: BTreeMap<MetricKind, Option<f64>>,
    pub edges: EdgeChangeStats,
    pub similarity: Option<SimilarityBlock>,
    pub degree_histogram: DegreeHistogram,
    pub exceptions: Vec<GraphFailure>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetReport {
    pub name: String,
    pub stats: DatasetStats,
    pub original: MetricBlock,
    pub exceptions: Vec<GraphFailure>,
    pub methods: Vec<MethodReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub dataset: String,
    pub method: String,
    pub millis: f64,
}

/// Everything that legitimately differs between two otherwise identical runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunMetadata {
    pub timestamp_unix: u64,
    pub workers: Option<usize>,
    pub total_millis: f64,
    pub timings: Vec<Timing>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub tool_version: String,
    pub config: PipelineConfig,
    pub datasets: Vec<DatasetReport>,
    pub metadata: RunMetadata,
}

/// Loads every configured dataset; nothing is computed unless all load.
pub fn load_datasets(cfg: &PipelineConfig) -> Result<Vec<DatasetBundle>> {
    cfg.datasets
        .iter()
        .map(|d| load_tudataset(&d.directory, &d.name))
        .collect()
}

fn measure(graphs: &[(usize, &Graph)]) -> (MetricBlock, Vec<GraphFailure>) {
    let results: Vec<(usize, Result<StructuralMetrics>)> =
        graphs.par_iter().map(|&(i, g)| (i, compute_all(g))).collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (i, r) in results {
        match r {
            Ok(m) => rows.push((i, m)),
            Err(e) => failures.push(GraphFailure {
                graph: i,
                stage: "metrics".into(),
                message: e.to_string(),
            }),
        }
    }
    (MetricBlock::new(rows), failures)
}

fn similarity_block(
    pairs: &[(usize, &Graph, &RewireResult)],
    cfg: &PipelineConfig,
    name: &str,
) -> SimilarityBlock {
    let per_pair: Vec<[Option<f64>; 5]> = pairs
        .par_iter()
        .map(|&(_, g, r)| {
            let h = &r.graph;
            [
                defined(jaccard_edges(g, h)).ok().flatten(),
                defined(laplacian_spectrum_distance(g, h, cfg.p, cfg.laplacian_variant)).ok().flatten(),
                defined(adjacency_spectral_norm_diff(g, h)).ok().flatten(),
                defined(degree_distance(g, h)).ok().flatten(),
                defined(shortest_path_distribution_distance(g, h)).ok().flatten(),
            ]
        })
        .collect();
    let mut per_graph = BTreeMap::new();
    let mut aggregates = Vec::new();
    for (f, measure) in SimilarityReport::FIELDS.iter().enumerate() {
        let values: Vec<Option<f64>> = per_pair.iter().map(|row| row[f]).collect();
        let stat = MetricStat::from_values(values.iter().copied());
        for (aggregation, value) in [("per_graph_mean", stat.mean), ("per_graph_std", stat.std)] {
            aggregates.push(SimilarityAggregate {
                measure: measure.to_string(),
                aggregation: aggregation.into(),
                value,
                undefined: stat.undefined,
            });
        }
        per_graph.insert(measure.to_string(), values);
    }

    let (orig, rew) = sub_bundles(pairs, name);
    for (measure, value) in [
        ("degree_w1", degree_distribution_distance(&orig, &rew)),
        ("sp_length_w1", shortest_path_distribution_distance_concat(&orig, &rew)),
    ] {
        let value = defined(value).ok().flatten();
        aggregates.push(SimilarityAggregate {
            measure: measure.into(),
            aggregation: "concatenated".into(),
            undefined: usize::from(value.is_none()),
            value,
        });
    }
    SimilarityBlock { per_graph, aggregates }
}

fn sub_bundles(pairs: &[(usize, &Graph, &RewireResult)], name: &str) -> (DatasetBundle, DatasetBundle) {
    let orig: Vec<Graph> = pairs.iter().map(|(_, g, _)| (*g).clone()).collect();
    let rew: Vec<Graph> = pairs.iter().map(|(_, _, r)| r.graph.clone()).collect();
    let labels = vec![0; pairs.len()];
    (
        DatasetBundle {
            name: name.to_string(),
            graphs: orig,
            labels: labels.clone(),
        },
        DatasetBundle {
            name: name.to_string(),
            graphs: rew,
            labels,
        },
    )
}

fn degree_histogram(pairs: &[(usize, &Graph, &RewireResult)], name: &str) -> DegreeHistogram {
    let mut counts: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    for (_, g, r) in pairs {
        for d in g.degrees() {
            counts.entry(d).or_default().0 += 1;
        }
        for d in r.graph.degrees() {
            counts.entry(d).or_default().1 += 1;
        }
    }
    let (orig, rew) = sub_bundles(pairs, name);
    DegreeHistogram {
        bins: counts
            .into_iter()
            .map(|(degree, (count_original, count_rewired))| DegreeBin {
                degree,
                count_original,
                count_rewired,
            })
            .collect(),
        w1: degree_distribution_distance(&orig, &rew).ok(),
    }
}

fn run_method(
    bundle: &DatasetBundle,
    original: &MetricBlock,
    spec: &MethodSpec,
    cfg: &PipelineConfig,
) -> MethodReport {
    let results: Vec<Result<RewireResult>> = bundle
        .graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| rewire(g, &spec.config, graph_seed(cfg.seed, i)))
        .collect();
    let mut exceptions = Vec::new();
    let mut rewired = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(r) => rewired.push((i, r)),
            Err(e) => exceptions.push(GraphFailure {
                graph: i,
                stage: "rewire".into(),
                message: e.to_string(),
            }),
        }
    }
    let graphs: Vec<(usize, &Graph)> = rewired.iter().map(|(i, r)| (*i, &r.graph)).collect();
    let (block, failures) = measure(&graphs);
    exceptions.extend(failures);
    exceptions.sort_by_key(|f| f.graph);

    // graphs that failed any stage drop out of the comparisons
    let kept: Vec<(usize, &Graph, &RewireResult)> = rewired
        .iter()
        .filter(|(i, _)| block.graph_indices.binary_search(i).is_ok())
        .map(|(i, r)| (*i, &bundle.graphs[*i], r))
        .collect();
    let edges = edge_change_stats(kept.iter().map(|&(_, g, r)| (g, r)));
    let similarity = cfg.similarity.then(|| similarity_block(&kept, cfg, &bundle.name));
    MethodReport {
        label: spec.name(),
        method: spec.config.method(),
        config: spec.clone(),
        percentage_change: percentage_change(&original.summary, &block.summary),
        rewired: block,
        edges,
        similarity,
        degree_histogram: degree_histogram(&kept, &bundle.name),
        exceptions,
    }
}

/// Runs every configured method on already loaded bundles.
pub fn run_loaded(cfg: &PipelineConfig, bundles: &[DatasetBundle]) -> Result<RunReport> {
    cfg.validate()?;
    let workers = cfg.effective_workers()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    let started = Instant::now();

    let (datasets, timings) = pool.install(|| {
        let mut timings = Vec::new();
        let mut datasets = Vec::new();
        for bundle in bundles {
            let t = Instant::now();
            let graphs: Vec<(usize, &Graph)> = bundle.graphs.iter().enumerate().collect();
            let (original, exceptions) = measure(&graphs);
            timings.push(Timing {
                dataset: bundle.name.clone(),
                method: "original".into(),
                millis: t.elapsed().as_secs_f64() * 1e3,
            });
            let methods: Vec<(MethodReport, f64)> = cfg
                .methods
                .par_iter()
                .map(|spec| {
                    let t = Instant::now();
                    let report = run_method(bundle, &original, spec, cfg);
                    (report, t.elapsed().as_secs_f64() * 1e3)
                })
                .collect();
            let mut reports = Vec::new();
            for (report, millis) in methods {
                timings.push(Timing {
                    dataset: bundle.name.clone(),
                    method: report.label.clone(),
                    millis,
                });
                reports.push(report);
            }
            datasets.push(DatasetReport {
                name: bundle.name.clone(),
                stats: bundle.stats(),
                original,
                exceptions,
                methods: reports,
            });
        }
        (datasets, timings)
    });

    Ok(RunReport {
        tool_version: VERSION.to_string(),
        config: cfg.clone(),
        datasets,
        metadata: RunMetadata {
            timestamp_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            workers,
            total_millis: started.elapsed().as_secs_f64() * 1e3,
            timings,
        },
    })
}

/// Validates, loads every dataset, computes, and writes all tables to the
/// configured output directory.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunReport> {
    cfg.validate()?;
    let bundles = load_datasets(cfg)?;
    let report = run_loaded(cfg, &bundles)?;
    emit_tables(&report, &cfg.output_dir)?;
    Ok(report)
}
