//! Graph diffusion with personalized PageRank.
//!
//! Builds `Pi = alpha (I - (1 - alpha) A D^-1)^-1`, whose column `i` is the
//! PageRank vector teleporting back to `i`, and links every node to its
//! `top_k` highest-scoring partners. Existing edges are kept, so the method
//! only ever adds.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{RewireResult, Session};
use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiglConfig {
    /// Teleport probability.
    pub alpha: f64,
    /// Partners kept per node.
    pub top_k: usize,
}

impl Default for DiglConfig {
    fn default() -> Self {
        Self { alpha: 0.15, top_k: 8 }
    }
}

impl DiglConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("digl alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.top_k == 0 {
            return Err(Error::Config("digl top_k must be at least 1".into()));
        }
        Ok(())
    }
}

/// Personalized PageRank matrix. Isolated nodes contribute no walk
/// (`1/0` read as 0), so their columns are `alpha e_i`.
pub fn ppr_matrix(g: &Graph, alpha: f64) -> Result<DMatrix<f64>> {
    let n = g.node_count();
    let mut m = DMatrix::identity(n, n);
    for j in 0..n {
        let d = g.degree(j);
        if d == 0 {
            continue;
        }
        for i in g.neighbors(j) {
            m[(i, j)] -= (1.0 - alpha) / d as f64;
        }
    }
    let inv = m
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Numeric("diffusion system is singular".into()))?;
    Ok(inv * alpha)
}

pub fn digl_ppr(g: &Graph, cfg: &DiglConfig) -> Result<RewireResult> {
    cfg.validate()?;
    let mut s = Session::new(g);
    let n = g.node_count();
    let pi = ppr_matrix(g, cfg.alpha)?;
    let mut step = 0;
    for i in 0..n {
        let mut partners: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i && pi[(j, i)] > 0.0)
            .map(|j| (pi[(j, i)], j))
            .collect();
        partners.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(score, j) in partners.iter().take(cfg.top_k) {
            if !s.graph.has_edge(i, j) {
                s.add(step, Edge::new(i, j)?, Some(score));
                step += 1;
            }
        }
    }
    Ok(s.finish())
}
