//! Greedy total-resistance minimization.
//!
//! Adding `{u, v}` with `b = e_u - e_v` lowers `tr(L+)` by
//! `|L+ b|^2 / (1 + b' L+ b)` (Sherman-Morrison), and `R_total = n tr(L+)`,
//! so every candidate is scored exactly from the current pseudoinverse,
//! which is then updated in place.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{RewireResult, Session, TraceAction};
use crate::error::{Error, Result};
use crate::graph::{is_connected, Edge, Graph};
use crate::spectral::laplacian_pseudoinverse;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GtrConfig {
    /// Edges to add.
    pub budget: usize,
}

impl Default for GtrConfig {
    fn default() -> Self {
        Self { budget: 50 }
    }
}

pub fn gtr(g: &Graph, cfg: &GtrConfig) -> Result<RewireResult> {
    let n = g.node_count();
    if n > 1 && !is_connected(g) {
        return Err(Error::Disconnected("total resistance is infinite".into()));
    }
    let mut s = Session::new(g);
    if cfg.budget == 0 || n < 2 {
        return Ok(s.finish());
    }
    let mut lp = laplacian_pseudoinverse(g)?;
    for step in 0..cfg.budget {
        let sq = &lp * &lp;
        let mut best: Option<(f64, Edge)> = None;
        for e in s.graph.non_edges() {
            let (u, v) = e.endpoints();
            let r_uv = lp[(u, u)] + lp[(v, v)] - 2.0 * lp[(u, v)];
            let norm2 = sq[(u, u)] + sq[(v, v)] - 2.0 * sq[(u, v)];
            let drop = n as f64 * norm2 / (1.0 + r_uv);
            // strict improvement beyond rounding keeps the lexicographic pick
            if best.is_none_or(|(b, _)| drop > b * (1.0 + 1e-12)) {
                best = Some((drop, e));
            }
        }
        let Some((drop, e)) = best else {
            s.note(step, TraceAction::Stop, None, "graph is complete");
            break;
        };
        let (u, v) = e.endpoints();
        let col: DVector<f64> = lp.column(u) - lp.column(v);
        let denom = 1.0 + col[u] - col[v];
        let update: DMatrix<f64> = &col * col.transpose() / denom;
        lp -= update;
        s.add(step, e, Some(drop));
    }
    Ok(s.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::total_and_average_resistance;
    use approx::assert_abs_diff_eq;

    #[test]
    fn path3_becomes_triangle() {
        let g = Graph::path(3);
        assert_abs_diff_eq!(total_and_average_resistance(&g).unwrap().total, 4.0, epsilon = 1e-9);
        let r = gtr(&g, &GtrConfig { budget: 1 }).unwrap();
        assert_eq!(r.added, vec![Edge::new(0, 2).unwrap()]);
        assert_abs_diff_eq!(total_and_average_resistance(&r.graph).unwrap().total, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(r.trace[0].score.unwrap(), 2.0, epsilon = 1e-9);
    }

    #[test]
    fn complete_graph_stops() {
        let r = gtr(&Graph::complete(4), &GtrConfig { budget: 3 }).unwrap();
        assert!(r.added.is_empty() && r.removed.is_empty());
        assert_eq!(r.trace[0].action, TraceAction::Stop);
    }

    #[test]
    fn disconnected_input_is_rejected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(gtr(&g, &GtrConfig { budget: 1 }), Err(Error::Disconnected(_))));
    }

    #[test]
    fn predicted_drop_matches_recomputation() {
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 5)]).unwrap();
        let r = gtr(&g, &GtrConfig { budget: 4 }).unwrap();
        let mut cur = g.clone();
        let mut prev = total_and_average_resistance(&cur).unwrap().total;
        for t in &r.trace {
            let e = t.edge.unwrap();
            cur = crate::graph::apply_edits(&cur, &[e], &[]).unwrap();
            let now = total_and_average_resistance(&cur).unwrap().total;
            assert_abs_diff_eq!(prev - now, t.score.unwrap(), epsilon = 1e-8);
            assert!(now < prev);
            prev = now;
        }
    }
}
