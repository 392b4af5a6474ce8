//! Batch Ollivier-Ricci flow.
//!
//! Each batch computes Ollivier-Ricci curvature on every edge, removes the
//! `remove_per_batch` most positively curved edges, and for each of the
//! `add_per_batch` most negatively curved edges `{u, v}` adds the pair
//! `(p, q)`, `p` in `N(u)`, `q` in `N(v)`, carrying the most mass in that
//! edge's optimal transport plan.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{ollivier_field, RewireResult, Session, TraceAction};
use crate::error::{Error, Result};
use crate::graph::{bfs_unchecked, Edge, Graph};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BorfConfig {
    pub batches: usize,
    /// Edges added per batch (`h`).
    pub add_per_batch: usize,
    /// Edges removed per batch (`k`).
    pub remove_per_batch: usize,
    /// When false, removals that would split a component are skipped.
    pub allow_disconnect: bool,
    /// Laziness of the neighbour measures.
    pub idleness: f64,
}

impl Default for BorfConfig {
    fn default() -> Self {
        Self {
            batches: 3,
            add_per_batch: 4,
            remove_per_batch: 2,
            allow_disconnect: false,
            idleness: 0.0,
        }
    }
}

impl BorfConfig {
    pub(crate) fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.idleness) {
            return Err(Error::Config(format!("borf idleness must lie in [0, 1), got {}", self.idleness)));
        }
        Ok(())
    }
}

fn is_bridge(g: &mut Graph, e: Edge) -> bool {
    g.remove(e);
    let split = bfs_unchecked(g, e.u())[e.v()].is_none();
    g.insert(e);
    split
}

pub fn borf(g: &Graph, cfg: &BorfConfig) -> Result<RewireResult> {
    cfg.validate()?;
    let mut s = Session::new(g);
    for batch in 0..cfg.batches {
        if s.graph.edge_count() == 0 {
            s.note(batch, TraceAction::Stop, None, "graph has no edges");
            break;
        }
        let (field, plans) = ollivier_field(&s.graph, cfg.idleness)?;
        let mut ranked: Vec<(Edge, f64)> = field.values.iter().map(|(&e, &k)| (e, k)).collect();
        // ascending curvature, ties by edge
        ranked.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

        let mut removed_now = BTreeSet::new();
        let mut hot: Vec<(Edge, f64)> = ranked.clone();
        hot.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        for &(e, kappa) in hot.iter().take(cfg.remove_per_batch) {
            if !cfg.allow_disconnect && is_bridge(&mut s.graph, e) {
                s.note(batch, TraceAction::Skip, Some(e), "removal would disconnect the graph");
                continue;
            }
            s.remove(batch, e, Some(kappa));
            removed_now.insert(e);
        }

        for &(e, kappa) in ranked.iter().take(cfg.add_per_batch) {
            let mut couplings: Vec<(usize, usize, f64)> = plans[&e].couplings().collect();
            couplings.sort_by(|a, b| match b.2.total_cmp(&a.2) {
                Ordering::Equal => (a.0, a.1).cmp(&(b.0, b.1)),
                o => o,
            });
            let pick = couplings.iter().find_map(|&(p, q, _)| {
                let c = Edge::new(p, q).ok()?;
                (!s.graph.has_edge(p, q) && !removed_now.contains(&c)).then_some(c)
            });
            match pick {
                Some(c) => s.add(batch, c, Some(kappa)),
                None => s.note(batch, TraceAction::Skip, Some(e), "transport plan offers no new pair"),
            }
        }
    }
    Ok(s.finish())
}
