//! Locality-aware sequential rewiring.
//!
//! Each snapshot looks at the pairs `r` hops apart for `r = 2..=rho`, scores
//! them by the number of `r`-walks joining them, `(A^r)_{uv}`, and connects
//! the most poorly connected fraction of them. Snapshots repeat on the
//! updated graph.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{RewireResult, Session, TraceAction};
use crate::error::{Error, Result};
use crate::graph::{all_pairs_distances, Edge, Graph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LaserConfig {
    /// Largest hop distance considered.
    pub rho: usize,
    pub snapshots: usize,
    /// Share of the eligible pairs at each distance connected per snapshot.
    pub fraction: f64,
    /// Cap on the total number of added edges.
    pub budget: Option<usize>,
}

impl Default for LaserConfig {
    fn default() -> Self {
        Self {
            rho: 3,
            snapshots: 3,
            fraction: 0.1,
            budget: None,
        }
    }
}

impl LaserConfig {
    /// Connects every eligible pair each snapshot; completes any connected
    /// graph with fewer than `2^64` nodes well within the snapshot count.
    pub fn saturating() -> Self {
        Self {
            rho: 3,
            snapshots: 64,
            fraction: 1.0,
            budget: None,
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.rho < 2 {
            return Err(Error::Config(format!("laser rho must be at least 2, got {}", self.rho)));
        }
        if self.snapshots == 0 {
            return Err(Error::Config("laser needs at least one snapshot".into()));
        }
        if !(self.fraction > 0.0 && self.fraction <= 1.0) {
            return Err(Error::Config(format!("laser fraction must lie in (0, 1], got {}", self.fraction)));
        }
        Ok(())
    }
}

pub fn laser(g: &Graph, cfg: &LaserConfig) -> Result<RewireResult> {
    cfg.validate()?;
    let mut s = Session::new(g);
    let n = g.node_count();
    let mut left = cfg.budget.unwrap_or(usize::MAX);
    'snapshots: for snap in 0..cfg.snapshots {
        let dist = all_pairs_distances(&s.graph);
        let mut eligible: Vec<Vec<Edge>> = vec![Vec::new(); cfg.rho + 1];
        for (i, row) in dist.iter().enumerate() {
            for (j, d) in row.iter().enumerate().skip(i + 1) {
                if let Some(d) = *d {
                    if (2..=cfg.rho).contains(&d) {
                        eligible[d].push(Edge::new(i, j)?);
                    }
                }
            }
        }
        if eligible.iter().all(Vec::is_empty) {
            s.note(snap, TraceAction::Stop, None, "no pairs within reach");
            break;
        }
        let a = DMatrix::from_fn(n, n, |i, j| if s.graph.has_edge(i, j) { 1.0 } else { 0.0 });
        let mut walks = a.clone();
        let mut chosen = Vec::new();
        for (r, pairs) in eligible.iter().enumerate().skip(1) {
            if r >= 2 {
                walks = &walks * &a;
            }
            if r < 2 || pairs.is_empty() {
                continue;
            }
            let mut scored: Vec<(f64, Edge)> = pairs.iter().map(|e| (walks[(e.u(), e.v())], *e)).collect();
            scored.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
            let take = (cfg.fraction * pairs.len() as f64).ceil() as usize;
            chosen.extend(scored.into_iter().take(take));
        }
        for (score, e) in chosen {
            if left == 0 {
                break 'snapshots;
            }
            s.add(snap, e, Some(score));
            left -= 1;
        }
    }
    Ok(s.finish())
}
