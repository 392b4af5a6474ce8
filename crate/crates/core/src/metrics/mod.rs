//! Per-graph structural metrics and their dataset-level aggregation.
//!
//! Every metric can be undefined on some graphs (edgeless graphs, regular
//! graphs for assortativity, disconnected graphs for resistance). Undefined
//! values are carried as `None` and counted, never replaced by zero.

mod betweenness;
mod modularity;

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use betweenness::betweenness;
pub use modularity::{greedy_modularity, modularity_of, Partition};

use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, Edge, Graph};
use crate::spectral;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Diameter,
    ResistanceTotal,
    ResistanceAvg,
    Modularity,
    Assortativity,
    Clustering,
    SpectralGap,
    FormanMean,
    BetweennessMean,
}

impl MetricKind {
    pub const ALL: [MetricKind; 9] = [
        MetricKind::Diameter,
        MetricKind::ResistanceTotal,
        MetricKind::ResistanceAvg,
        MetricKind::Modularity,
        MetricKind::Assortativity,
        MetricKind::Clustering,
        MetricKind::SpectralGap,
        MetricKind::FormanMean,
        MetricKind::BetweennessMean,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Diameter => "diameter",
            MetricKind::ResistanceTotal => "resistance_total",
            MetricKind::ResistanceAvg => "resistance_avg",
            MetricKind::Modularity => "modularity",
            MetricKind::Assortativity => "assortativity",
            MetricKind::Clustering => "clustering",
            MetricKind::SpectralGap => "spectral_gap",
            MetricKind::FormanMean => "forman_mean",
            MetricKind::BetweennessMean => "betweenness_mean",
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Longest finite hop distance; pairs in different components are skipped.
pub fn diameter(g: &Graph) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::MetricUndefined("diameter of an edgeless graph".into()));
    }
    let d = all_pairs_distances(g)
        .iter()
        .flat_map(|row| row.iter().flatten())
        .copied()
        .max()
        .unwrap_or(0);
    Ok(d as f64)
}

/// Degree Pearson correlation over both orientations of every edge.
/// `None` when the endpoint degrees have zero variance.
pub fn assortativity(g: &Graph) -> Result<Option<f64>> {
    if g.edge_count() == 0 {
        return Err(Error::MetricUndefined("assortativity of an edgeless graph".into()));
    }
    let deg = g.degrees();
    let (mut s, mut s2, mut sxy) = (0u128, 0u128, 0u128);
    for e in g.edges() {
        let (x, y) = (deg[e.u()] as u128, deg[e.v()] as u128);
        s += x + y;
        s2 += x * x + y * y;
        sxy += 2 * x * y;
    }
    let count = 2 * g.edge_count() as u128;
    let var = count * s2 - s * s;
    if var == 0 {
        return Ok(None);
    }
    let cov = count as f64 * sxy as f64 - (s * s) as f64;
    Ok(Some(cov / var as f64))
}

/// Triangles through each node.
pub fn triangle_counts(g: &Graph) -> Vec<usize> {
    (0..g.node_count())
        .map(|u| {
            let nu = g.neighbor_set(u);
            g.neighbors(u)
                .map(|v| g.neighbors(v).filter(|w| *w > v && nu.contains(w)).count())
                .sum()
        })
        .collect()
}

/// Average local clustering over all nodes; nodes of degree < 2 count as 0.
pub fn clustering_coefficient(g: &Graph) -> Result<f64> {
    let n = g.node_count();
    if n == 0 {
        return Err(Error::MetricUndefined("clustering of an empty graph".into()));
    }
    let tri = triangle_counts(g);
    let total: f64 = (0..n)
        .map(|u| {
            let d = g.degree(u);
            if d < 2 {
                0.0
            } else {
                2.0 * tri[u] as f64 / (d * (d - 1)) as f64
            }
        })
        .sum();
    Ok(total / n as f64)
}

/// One-dimensional Forman curvature of every edge, weighted form. Each sum
/// runs over the other edges incident to that endpoint. Unit weights reduce
/// this to `4 - deg(u) - deg(v)`.
pub fn forman_curvature(g: &Graph) -> Result<(BTreeMap<Edge, f64>, f64)> {
    if g.edge_count() == 0 {
        return Err(Error::MetricUndefined("Forman curvature of an edgeless graph".into()));
    }
    let mut per_edge = BTreeMap::new();
    let unit = g.is_unit_weighted();
    for e in g.edges() {
        let (a, b) = e.endpoints();
        let value = if unit {
            4.0 - g.degree(a) as f64 - g.degree(b) as f64
        } else {
            let we = g.edge_weight(e);
            let (wa, wb) = (g.node_weight(a), g.node_weight(b));
            let side = |x: usize, wx: f64| -> f64 {
                g.neighbors(x)
                    .filter(|&y| Edge::new(x, y).is_ok_and(|f| f != e))
                    .map(|y| {
                        let f = Edge::new(x, y).expect("neighbour is not x");
                        wx / (we * g.edge_weight(f)).sqrt()
                    })
                    .sum()
            };
            we * (wa / we + wb / we - side(a, wa) - side(b, wb))
        };
        per_edge.insert(e, value);
    }
    let mean = per_edge.values().sum::<f64>() / per_edge.len() as f64;
    Ok((per_edge, mean))
}

/// Structural metrics of one graph. `None` means undefined on this graph.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StructuralMetrics {
    pub diameter: Option<f64>,
    pub resistance_total: Option<f64>,
    pub resistance_avg: Option<f64>,
    pub modularity: Option<f64>,
    pub assortativity: Option<f64>,
    pub clustering: Option<f64>,
    pub spectral_gap: Option<f64>,
    pub forman_mean: Option<f64>,
    pub betweenness_mean: Option<f64>,
}

impl StructuralMetrics {
    pub fn get(&self, kind: MetricKind) -> Option<f64> {
        match kind {
            MetricKind::Diameter => self.diameter,
            MetricKind::ResistanceTotal => self.resistance_total,
            MetricKind::ResistanceAvg => self.resistance_avg,
            MetricKind::Modularity => self.modularity,
            MetricKind::Assortativity => self.assortativity,
            MetricKind::Clustering => self.clustering,
            MetricKind::SpectralGap => self.spectral_gap,
            MetricKind::FormanMean => self.forman_mean,
            MetricKind::BetweennessMean => self.betweenness_mean,
        }
    }
}

pub fn defined<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::MetricUndefined(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Resistance is reported only for connected graphs; a disconnected graph
/// has infinite total resistance.
pub fn compute_all(g: &Graph) -> Result<StructuralMetrics> {
    let resistance = defined(spectral::total_and_average_resistance(g))?.filter(|r| !r.disconnected);
    Ok(StructuralMetrics {
        diameter: defined(diameter(g))?,
        resistance_total: resistance.map(|r| r.total),
        resistance_avg: resistance.map(|r| r.average),
        modularity: defined(greedy_modularity(g))?.map(|(q, _)| q),
        assortativity: defined(assortativity(g))?.flatten(),
        clustering: defined(clustering_coefficient(g))?,
        spectral_gap: defined(spectral::spectral_gap(g))?,
        forman_mean: defined(forman_curvature(g))?.map(|(_, m)| m),
        betweenness_mean: defined(betweenness(g))?
            .map(|c| c.iter().sum::<f64>() / c.len() as f64),
    })
}

/// Computes [`compute_all`] for every graph, in input order.
pub fn compute_bundle(graphs: &[Graph]) -> Result<Vec<StructuralMetrics>> {
    graphs.par_iter().map(compute_all).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricStat {
    /// `None` when no graph had a defined value.
    pub mean: Option<f64>,
    /// Population standard deviation.
    pub std: Option<f64>,
    pub defined: usize,
    pub undefined: usize,
}

impl MetricStat {
    pub fn from_values<I: IntoIterator<Item = Option<f64>>>(values: I) -> Self {
        let mut vals = Vec::new();
        let mut undefined = 0;
        for v in values {
            match v {
                Some(x) => vals.push(x),
                None => undefined += 1,
            }
        }
        if vals.is_empty() {
            return Self {
                mean: None,
                std: None,
                defined: 0,
                undefined,
            };
        }
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        Self {
            mean: Some(mean),
            std: Some(var.sqrt()),
            defined: vals.len(),
            undefined,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub graphs: usize,
    pub stats: BTreeMap<MetricKind, MetricStat>,
}

impl MetricSummary {
    pub fn from_metrics(per_graph: &[StructuralMetrics]) -> Self {
        let stats = MetricKind::ALL
            .iter()
            .map(|&k| (k, MetricStat::from_values(per_graph.iter().map(|m| m.get(k)))))
            .collect();
        Self {
            graphs: per_graph.len(),
            stats,
        }
    }

    /// Builds a summary from already-aggregated `(metric, mean, std)` rows,
    /// e.g. values transcribed from a published table.
    pub fn from_means<I>(rows: I) -> Self
    where
        I: IntoIterator<Item = (MetricKind, f64, f64)>,
    {
        let stats = rows
            .into_iter()
            .map(|(k, mean, std)| {
                (
                    k,
                    MetricStat {
                        mean: Some(mean),
                        std: Some(std),
                        defined: 1,
                        undefined: 0,
                    },
                )
            })
            .collect();
        Self { graphs: 1, stats }
    }

    pub fn mean(&self, kind: MetricKind) -> Option<f64> {
        self.stats.get(&kind).and_then(|s| s.mean)
    }
}

pub fn summarize(graphs: &[Graph]) -> Result<MetricSummary> {
    if graphs.is_empty() {
        return Err(Error::Input("cannot summarize an empty bundle".into()));
    }
    Ok(MetricSummary::from_metrics(&compute_bundle(graphs)?))
}

/// Relative change of the mean, in percent. `None` where the original mean
/// is zero or either side is undefined.
pub fn percentage_change(
    orig: &MetricSummary,
    rewired: &MetricSummary,
) -> BTreeMap<MetricKind, Option<f64>> {
    orig.stats
        .iter()
        .map(|(&k, s)| {
            let pct = match (s.mean, rewired.mean(k)) {
                (Some(a), Some(b)) if a != 0.0 => Some(100.0 * (b - a) / a),
                _ => None,
            };
            (k, pct)
        })
        .collect()
}
