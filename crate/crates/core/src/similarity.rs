//! Distances between an original graph and its rewired counterpart.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::DatasetBundle;
use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, Graph};
use crate::spectral::{self, LaplacianVariant};

/// A finite multiset of reals, kept sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDistribution(Vec<f64>);

impl EmpiricalDistribution {
    pub fn new(mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::Input("samples must be finite".into()));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self(samples))
    }

    pub fn from_counts<I: IntoIterator<Item = usize>>(samples: I) -> Self {
        let mut v: Vec<f64> = samples.into_iter().map(|x| x as f64).collect();
        v.sort_by(f64::total_cmp);
        Self(v)
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Exact W1 between two empirical measures: the integral of the absolute
/// difference of their CDFs, evaluated piecewise over the merged sample
/// breakpoints. Sample counts may differ.
pub fn wasserstein1(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Input("W1 of an empty distribution".into()));
    }
    let (xa, xb) = (a.samples(), b.samples());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut total = 0.0;
    let mut prev = xa[0].min(xb[0]);
    while i < xa.len() || j < xb.len() {
        let next = match (xa.get(i), xb.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => unreachable!(),
        };
        let gap = (i as f64 / na - j as f64 / nb).abs();
        total += gap * (next - prev);
        while i < xa.len() && xa[i] == next {
            i += 1;
        }
        while j < xb.len() && xb[j] == next {
            j += 1;
        }
        prev = next;
    }
    Ok(total)
}

fn same_order(g: &Graph, g2: &Graph) -> Result<()> {
    if g.node_count() != g2.node_count() {
        return Err(Error::Shape(format!(
            "node counts differ: {} vs {}",
            g.node_count(),
            g2.node_count()
        )));
    }
    Ok(())
}

/// `|E ∩ E'| / |E ∪ E'|`; two edgeless graphs count as identical.
pub fn jaccard_edges(g: &Graph, g2: &Graph) -> Result<f64> {
    same_order(g, g2)?;
    let (a, b): (BTreeSet<_>, BTreeSet<_>) = (g.edge_set(), g2.edge_set());
    let inter = a.intersection(&b).count();
    let union = a.len() + b.len() - inter;
    if union == 0 {
        return Ok(1.0);
    }
    Ok(inter as f64 / union as f64)
}

/// p-norm between the ascending Laplacian spectra.
pub fn laplacian_spectrum_distance(
    g: &Graph,
    g2: &Graph,
    p: f64,
    variant: LaplacianVariant,
) -> Result<f64> {
    same_order(g, g2)?;
    if p.is_nan() || p < 1.0 {
        return Err(Error::Input(format!("p must be >= 1, got {p}")));
    }
    if g.node_count() == 0 {
        return Ok(0.0);
    }
    let a = spectral::laplacian_spectrum(g, variant)?.eigenvalues;
    let b = spectral::laplacian_spectrum(g2, variant)?.eigenvalues;
    let sum: f64 = a.iter().zip(&b).map(|(x, y)| (x - y).abs().powf(p)).sum();
    Ok(sum.powf(1.0 / p))
}

pub fn degree_distribution(g: &Graph) -> EmpiricalDistribution {
    EmpiricalDistribution::from_counts(g.degrees())
}

/// Hop lengths of all connected pairs `i < j`.
pub fn shortest_path_lengths(g: &Graph) -> Vec<usize> {
    let d = all_pairs_distances(g);
    let mut out = Vec::new();
    for (i, row) in d.iter().enumerate() {
        out.extend(row[i + 1..].iter().flatten().copied());
    }
    out
}

pub fn degree_distance(g: &Graph, g2: &Graph) -> Result<f64> {
    same_order(g, g2)?;
    if g.node_count() == 0 {
        return Ok(0.0);
    }
    wasserstein1(&degree_distribution(g), &degree_distribution(g2))
}

/// W1 between the finite shortest-path-length multisets of two graphs.
pub fn shortest_path_distribution_distance(g: &Graph, g2: &Graph) -> Result<f64> {
    same_order(g, g2)?;
    let a = shortest_path_lengths(g);
    let b = shortest_path_lengths(g2);
    if a.is_empty() || b.is_empty() {
        return Err(Error::MetricUndefined("a graph has no connected pair".into()));
    }
    wasserstein1(
        &EmpiricalDistribution::from_counts(a),
        &EmpiricalDistribution::from_counts(b),
    )
}

fn check_aligned(orig: &DatasetBundle, rew: &DatasetBundle) -> Result<()> {
    if orig.len() != rew.len() {
        return Err(Error::Shape(format!(
            "bundles hold {} and {} graphs",
            orig.len(),
            rew.len()
        )));
    }
    for (i, (a, b)) in orig.graphs.iter().zip(&rew.graphs).enumerate() {
        if a.node_count() != b.node_count() {
            return Err(Error::Shape(format!("graph {i} changed node count")));
        }
    }
    Ok(())
}

/// W1 between the degrees of all nodes of all graphs in each bundle.
pub fn degree_distribution_distance(orig: &DatasetBundle, rew: &DatasetBundle) -> Result<f64> {
    check_aligned(orig, rew)?;
    let all = |b: &DatasetBundle| {
        EmpiricalDistribution::from_counts(b.graphs.iter().flat_map(|g| g.degrees()))
    };
    let (a, b) = (all(orig), all(rew));
    if a.is_empty() {
        return Ok(0.0);
    }
    wasserstein1(&a, &b)
}

/// Per-graph-pair degree W1, in bundle order.
pub fn degree_distance_per_graph(orig: &DatasetBundle, rew: &DatasetBundle) -> Result<Vec<f64>> {
    check_aligned(orig, rew)?;
    orig.graphs
        .par_iter()
        .zip(&rew.graphs)
        .map(|(a, b)| degree_distance(a, b))
        .collect()
}

/// W1 between the shortest-path lengths of all graphs in each bundle.
pub fn shortest_path_distribution_distance_concat(
    orig: &DatasetBundle,
    rew: &DatasetBundle,
) -> Result<f64> {
    check_aligned(orig, rew)?;
    let all = |b: &DatasetBundle| {
        EmpiricalDistribution::from_counts(b.graphs.iter().flat_map(shortest_path_lengths))
    };
    let (a, b) = (all(orig), all(rew));
    if a.is_empty() || b.is_empty() {
        return Err(Error::MetricUndefined("no connected pair in bundle".into()));
    }
    wasserstein1(&a, &b)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityOptions {
    pub p: f64,
    pub variant: LaplacianVariant,
}

impl Default for SimilarityOptions {
    fn default() -> Self {
        Self {
            p: 2.0,
            variant: LaplacianVariant::Combinatorial,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityReport {
    pub jaccard: f64,
    pub laplacian_spectrum_dist: f64,
    pub adjacency_norm_dist: f64,
    pub degree_w1: f64,
    pub sp_length_w1: f64,
}

impl SimilarityReport {
    pub const FIELDS: [&'static str; 5] = [
        "jaccard",
        "laplacian_spectrum_dist",
        "adjacency_norm_dist",
        "degree_w1",
        "sp_length_w1",
    ];

    pub fn values(&self) -> [f64; 5] {
        [
            self.jaccard,
            self.laplacian_spectrum_dist,
            self.adjacency_norm_dist,
            self.degree_w1,
            self.sp_length_w1,
        ]
    }
}

pub fn similarity_report(g: &Graph, g2: &Graph, opts: SimilarityOptions) -> Result<SimilarityReport> {
    Ok(SimilarityReport {
        jaccard: jaccard_edges(g, g2)?,
        laplacian_spectrum_dist: laplacian_spectrum_distance(g, g2, opts.p, opts.variant)?,
        adjacency_norm_dist: spectral::adjacency_spectral_norm_diff(g, g2)?,
        degree_w1: degree_distance(g, g2)?,
        sp_length_w1: shortest_path_distribution_distance(g, g2)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn dist(v: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::new(v.to_vec()).unwrap()
    }

    #[test]
    fn wasserstein_examples() {
        assert_eq!(wasserstein1(&dist(&[3.0, 1.0, 2.0]), &dist(&[1.0, 2.0, 3.0])).unwrap(), 0.0);
        assert_eq!(wasserstein1(&dist(&[0.0]), &dist(&[1.0])).unwrap(), 1.0);
        assert_eq!(wasserstein1(&dist(&[0.0, 0.0]), &dist(&[0.0, 2.0])).unwrap(), 1.0);
        // unequal counts: {0} vs {0, 1}: half the mass moves 1
        assert_eq!(wasserstein1(&dist(&[0.0]), &dist(&[0.0, 1.0])).unwrap(), 0.5);
        assert!(wasserstein1(&dist(&[]), &dist(&[1.0])).is_err());
    }

    #[test]
    fn jaccard_examples() {
        let (p3, k3) = (Graph::path(3), Graph::complete(3));
        assert_eq!(jaccard_edges(&k3, &k3).unwrap(), 1.0);
        assert_abs_diff_eq!(jaccard_edges(&p3, &k3).unwrap(), 2.0 / 3.0);
        let a = Graph::from_edges(4, [(0, 1)]).unwrap();
        let b = Graph::from_edges(4, [(2, 3)]).unwrap();
        assert_eq!(jaccard_edges(&a, &b).unwrap(), 0.0);
        assert_eq!(jaccard_edges(&Graph::new(3), &Graph::new(3)).unwrap(), 1.0);
    }

    #[test]
    fn spectrum_distance_examples() {
        let comb = LaplacianVariant::Combinatorial;
        let k3 = Graph::complete(3);
        assert_abs_diff_eq!(laplacian_spectrum_distance(&k3, &k3, 2.0, comb).unwrap(), 0.0, epsilon = 1e-12);
        let d = laplacian_spectrum_distance(&Graph::new(2), &Graph::path(2), 2.0, comb).unwrap();
        assert_abs_diff_eq!(d, 2.0, epsilon = 1e-12);
        let d = laplacian_spectrum_distance(&Graph::path(3), &k3, 1.0, comb).unwrap();
        assert_abs_diff_eq!(d, 2.0, epsilon = 1e-12);
        assert!(matches!(
            laplacian_spectrum_distance(&Graph::path(2), &k3, 2.0, comb),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn shortest_path_examples() {
        let (p3, k3) = (Graph::path(3), Graph::complete(3));
        assert_eq!(shortest_path_distribution_distance(&p3, &p3).unwrap(), 0.0);
        assert_abs_diff_eq!(shortest_path_distribution_distance(&p3, &k3).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        let d = shortest_path_distribution_distance(&Graph::path(4), &Graph::complete(4)).unwrap();
        assert_abs_diff_eq!(d, 2.0 / 3.0, epsilon = 1e-15);
        assert!(matches!(
            shortest_path_distribution_distance(&Graph::new(3), &k3),
            Err(Error::MetricUndefined(_))
        ));
    }

    #[test]
    fn degree_bundle_distance() {
        let orig = DatasetBundle::new("t", vec![Graph::path(3)], vec![0]).unwrap();
        let rew = DatasetBundle::new("t", vec![Graph::complete(3)], vec![0]).unwrap();
        assert_abs_diff_eq!(degree_distribution_distance(&orig, &rew).unwrap(), 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(degree_distribution_distance(&orig, &orig).unwrap(), 0.0);
        let bad = DatasetBundle::new("t", vec![Graph::path(4)], vec![0]).unwrap();
        assert!(matches!(degree_distribution_distance(&orig, &bad), Err(Error::Shape(_))));
    }

    #[test]
    fn report_examples() {
        let k3 = Graph::complete(3);
        let same = similarity_report(&k3, &k3, SimilarityOptions::default()).unwrap();
        assert_eq!(same.jaccard, 1.0);
        for v in &same.values()[1..] {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-12);
        }
        let opts = SimilarityOptions {
            p: 1.0,
            ..Default::default()
        };
        let r = similarity_report(&Graph::path(3), &k3, opts).unwrap();
        assert_abs_diff_eq!(r.jaccard, 2.0 / 3.0);
        assert_abs_diff_eq!(r.laplacian_spectrum_dist, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.adjacency_norm_dist, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.degree_w1, 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.sp_length_w1, 1.0 / 3.0, epsilon = 1e-15);

        // two disjoint edges vs the same plus a bridge
        let a = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let b = Graph::from_edges(4, [(0, 1), (2, 3), (1, 2)]).unwrap();
        let r = similarity_report(&a, &b, SimilarityOptions::default()).unwrap();
        assert_abs_diff_eq!(r.jaccard, 2.0 / 3.0);
        assert!(r.laplacian_spectrum_dist > 0.0);
        assert!(r.adjacency_norm_dist > 0.0);
        assert!(r.degree_w1 > 0.0);
        assert!(r.sp_length_w1 > 0.0);
    }
}
