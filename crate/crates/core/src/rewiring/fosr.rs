//! First-order spectral rewiring.
//!
//! Tracks an approximation `x` of the second eigenvector of the
//! self-loop-augmented normalized adjacency `D~^{-1/2} (A + I) D~^{-1/2}`
//! (`D~ = D + I`) and greedily adds the missing edge minimizing
//! `x_u x_v / sqrt((1 + d_u)(1 + d_v))`, the first-order estimate of which
//! edge raises the spectral gap most. `x` is refreshed by a few deflated
//! power iterations after every addition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{RewireResult, Session, TraceAction};
use crate::error::Result;
use crate::graph::{Edge, Graph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FosrConfig {
    /// Edges to add.
    pub budget: usize,
    /// Power iterations run before the first addition.
    pub initial_iterations: usize,
    /// Power iterations run after each addition.
    pub power_iterations: usize,
}

impl Default for FosrConfig {
    fn default() -> Self {
        Self {
            budget: 50,
            initial_iterations: 100,
            power_iterations: 5,
        }
    }
}

/// One step of `x <- (M x + x) / 2`, deflated against the top eigenvector
/// `sqrt(d + 1)` and renormalized. The half-shift keeps the spectrum in
/// `[0, 1]`, so the iteration settles on the second largest eigenvalue.
fn power_step(g: &Graph, x: &mut Vec<f64>) {
    let n = g.node_count();
    let dt: Vec<f64> = (0..n).map(|v| g.degree(v) as f64 + 1.0).collect();
    let scaled: Vec<f64> = x.iter().zip(&dt).map(|(xi, d)| xi / d.sqrt()).collect();
    let mut y = vec![0.0; n];
    for v in 0..n {
        let mut acc = scaled[v];
        for w in g.neighbors(v) {
            acc += scaled[w];
        }
        y[v] = 0.5 * (acc / dt[v].sqrt() + x[v]);
    }
    let top: Vec<f64> = dt.iter().map(|d| d.sqrt()).collect();
    let top_norm2: f64 = top.iter().map(|t| t * t).sum();
    let proj = y.iter().zip(&top).map(|(a, b)| a * b).sum::<f64>() / top_norm2;
    for (yi, t) in y.iter_mut().zip(&top) {
        *yi -= proj * t;
    }
    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        y.iter_mut().for_each(|v| *v /= norm);
    }
    *x = y;
}

pub fn fosr(g: &Graph, cfg: &FosrConfig, seed: u64) -> Result<RewireResult> {
    let mut s = Session::new(g);
    let n = g.node_count();
    if cfg.budget == 0 || n < 2 {
        return Ok(s.finish());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    for _ in 0..cfg.initial_iterations {
        power_step(&s.graph, &mut x);
    }
    for step in 0..cfg.budget {
        let y: Vec<f64> = (0..n)
            .map(|v| x[v] / (s.graph.degree(v) as f64 + 1.0).sqrt())
            .collect();
        let mut best: Option<(f64, Edge)> = None;
        for e in s.graph.non_edges() {
            let score = y[e.u()] * y[e.v()];
            if best.is_none_or(|(b, _)| score < b) {
                best = Some((score, e));
            }
        }
        let Some((score, e)) = best else {
            s.note(step, TraceAction::Stop, None, "graph is complete");
            break;
        };
        s.add(step, e, Some(score));
        for _ in 0..cfg.power_iterations {
            power_step(&s.graph, &mut x);
        }
    }
    Ok(s.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_gap;

    #[test]
    fn zero_budget_is_identity() {
        let g = Graph::path(5);
        let cfg = FosrConfig {
            budget: 0,
            ..Default::default()
        };
        let r = fosr(&g, &cfg, 0).unwrap();
        assert_eq!(r.graph, g);
        assert!(r.trace.is_empty());
    }

    #[test]
    fn path4_joins_the_ends() {
        let g = Graph::path(4);
        let cfg = FosrConfig {
            budget: 1,
            ..Default::default()
        };
        for seed in 0..10 {
            let r = fosr(&g, &cfg, seed).unwrap();
            assert_eq!(r.added, vec![Edge::new(0, 3).unwrap()]);
            assert!(spectral_gap(&r.graph).unwrap() > spectral_gap(&g).unwrap());
        }
    }

    #[test]
    fn stops_on_complete_graph() {
        let g = Graph::complete(5);
        let r = fosr(&g, &FosrConfig::default(), 0).unwrap();
        assert!(r.added.is_empty());
        assert_eq!(r.trace[0].action, TraceAction::Stop);
    }

    #[test]
    fn only_adds() {
        let g = Graph::cycle(12);
        let r = fosr(&g, &FosrConfig { budget: 6, ..Default::default() }, 5).unwrap();
        assert_eq!(r.added.len(), 6);
        assert!(r.removed.is_empty());
    }
}
