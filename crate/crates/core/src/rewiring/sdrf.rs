//! Stochastic discrete Ricci flow.
//!
//! Each step takes the edge with the lowest balanced Forman curvature,
//! scores every missing edge between the closed neighbourhoods of its
//! endpoints by how much adding it would raise that curvature, and samples
//! one with probabilities proportional to `exp(tau * improvement)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{balanced_forman, balanced_forman_field, candidate_pairs, positive, RewireResult, Session, TraceAction};
use crate::error::Result;
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SdrfConfig {
    /// Maximum number of flow steps (each adds at most one edge).
    pub max_iterations: usize,
    /// Softmax sharpness applied to the curvature improvements.
    pub tau: f64,
    /// Remove the most curved edge when its curvature exceeds this bound.
    /// `None` disables removal.
    pub removal_bound: Option<f64>,
}

impl Default for SdrfConfig {
    fn default() -> Self {
        Self {
            max_iterations: 10,
            tau: 20.0,
            removal_bound: None,
        }
    }
}

impl SdrfConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        positive("sdrf tau", self.tau)
    }
}

/// Samples an index with probability proportional to `exp(tau * x)`.
fn softmax_sample(scores: &[f64], tau: f64, rng: &mut impl Rng) -> usize {
    let top = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = scores.iter().map(|s| (tau * (s - top)).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

pub fn sdrf(g: &Graph, cfg: &SdrfConfig, seed: u64) -> Result<RewireResult> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Session::new(g);
    for step in 0..cfg.max_iterations {
        let field = balanced_forman_field(&s.graph);
        let Some((target, current)) = field.min_edge() else {
            s.note(step, TraceAction::Stop, None, "graph has no edges");
            break;
        };
        let (u, v) = target.endpoints();
        let mut left = s.graph.neighbor_set(u).clone();
        left.insert(u);
        let mut right = s.graph.neighbor_set(v).clone();
        right.insert(v);
        let candidates: Vec<_> = candidate_pairs(&s.graph, left, &right).into_iter().collect();
        if candidates.is_empty() {
            s.note(step, TraceAction::Stop, Some(target), "no candidate edge around the most negative edge");
            break;
        }
        let mut improvements = Vec::with_capacity(candidates.len());
        for &c in &candidates {
            s.graph.insert(c);
            improvements.push(balanced_forman(&s.graph, target)? - current);
            s.graph.remove(c);
        }
        if improvements.iter().all(|&x| x <= 1e-12) {
            s.note(step, TraceAction::Stop, Some(target), "no candidate raises the curvature");
            break;
        }
        let pick = softmax_sample(&improvements, cfg.tau, &mut rng);
        s.add(step, candidates[pick], Some(improvements[pick]));

        if let Some(bound) = cfg.removal_bound {
            let field = balanced_forman_field(&s.graph);
            if let Some((hot, c)) = field.max_edge() {
                if c > bound {
                    s.remove(step, hot, Some(c));
                }
            }
        }
    }
    Ok(s.finish())
}
