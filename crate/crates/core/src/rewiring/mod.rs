//! Graph rewiring methods and the edge ledger they produce.
//!
//! Every method takes a graph, its method-specific configuration and a seed,
//! and returns the rewired graph together with the net edges added and
//! removed relative to the input and a per-step trace.

mod borf;
pub mod curvature;
mod digl;
mod fosr;
mod gtr;
mod laser;
mod sdrf;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use borf::{borf, BorfConfig};
pub use curvature::{
    balanced_forman, balanced_forman_field, ollivier_field, ollivier_ricci, CurvatureField,
    CurvatureKind, OllivierCurvature,
};
pub use digl::{digl_ppr, DiglConfig};
pub use fosr::{fosr, FosrConfig};
pub use gtr::{gtr, GtrConfig};
pub use laser::{laser, LaserConfig};
pub use sdrf::{sdrf, SdrfConfig};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sdrf,
    Fosr,
    Gtr,
    Borf,
    Laser,
    Digl,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Sdrf => "sdrf",
            Method::Fosr => "fosr",
            Method::Gtr => "gtr",
            Method::Borf => "borf",
            Method::Laser => "laser",
            Method::Digl => "digl",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Method choice plus its parameters. Serialized with a `"method"` tag, e.g.
/// `{"method": "gtr", "budget": 20}`; omitted parameters take defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum RewireConfig {
    Sdrf(SdrfConfig),
    Fosr(FosrConfig),
    Gtr(GtrConfig),
    Borf(BorfConfig),
    Laser(LaserConfig),
    Digl(DiglConfig),
}

impl RewireConfig {
    pub fn method(&self) -> Method {
        match self {
            RewireConfig::Sdrf(_) => Method::Sdrf,
            RewireConfig::Fosr(_) => Method::Fosr,
            RewireConfig::Gtr(_) => Method::Gtr,
            RewireConfig::Borf(_) => Method::Borf,
            RewireConfig::Laser(_) => Method::Laser,
            RewireConfig::Digl(_) => Method::Digl,
        }
    }

    pub fn default_for(method: Method) -> Self {
        match method {
            Method::Sdrf => RewireConfig::Sdrf(SdrfConfig::default()),
            Method::Fosr => RewireConfig::Fosr(FosrConfig::default()),
            Method::Gtr => RewireConfig::Gtr(GtrConfig::default()),
            Method::Borf => RewireConfig::Borf(BorfConfig::default()),
            Method::Laser => RewireConfig::Laser(LaserConfig::default()),
            Method::Digl => RewireConfig::Digl(DiglConfig::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            RewireConfig::Sdrf(c) => c.validate(),
            RewireConfig::Fosr(_) | RewireConfig::Gtr(_) => Ok(()),
            RewireConfig::Borf(c) => c.validate(),
            RewireConfig::Laser(c) => c.validate(),
            RewireConfig::Digl(c) => c.validate(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceAction {
    Add,
    Remove,
    Skip,
    Stop,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub step: usize,
    pub action: TraceAction,
    pub edge: Option<Edge>,
    pub score: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RewireResult {
    pub graph: Graph,
    /// Edges of `graph` absent from the input, sorted.
    pub added: Vec<Edge>,
    /// Edges of the input absent from `graph`, sorted.
    pub removed: Vec<Edge>,
    pub trace: Vec<TraceEntry>,
}

/// Working state shared by the methods: the evolving graph and its trace.
pub(crate) struct Session<'a> {
    original: &'a Graph,
    pub graph: Graph,
    pub trace: Vec<TraceEntry>,
}

impl<'a> Session<'a> {
    pub fn new(original: &'a Graph) -> Self {
        Self {
            original,
            graph: original.clone(),
            trace: Vec::new(),
        }
    }

    pub fn add(&mut self, step: usize, e: Edge, score: Option<f64>) {
        let fresh = self.graph.insert(e);
        debug_assert!(fresh, "added an existing edge {e}");
        self.trace.push(TraceEntry {
            step,
            action: TraceAction::Add,
            edge: Some(e),
            score,
            note: None,
        });
    }

    pub fn remove(&mut self, step: usize, e: Edge, score: Option<f64>) {
        let present = self.graph.remove(e);
        debug_assert!(present, "removed a missing edge {e}");
        self.trace.push(TraceEntry {
            step,
            action: TraceAction::Remove,
            edge: Some(e),
            score,
            note: None,
        });
    }

    pub fn note(&mut self, step: usize, action: TraceAction, edge: Option<Edge>, note: impl Into<String>) {
        self.trace.push(TraceEntry {
            step,
            action,
            edge,
            score: None,
            note: Some(note.into()),
        });
    }

    pub fn finish(self) -> RewireResult {
        let before = self.original.edge_set();
        let after = self.graph.edge_set();
        RewireResult {
            added: after.difference(&before).copied().collect(),
            removed: before.difference(&after).copied().collect(),
            graph: self.graph,
            trace: self.trace,
        }
    }
}

/// Runs the configured method on one graph.
pub fn rewire(g: &Graph, cfg: &RewireConfig, seed: u64) -> Result<RewireResult> {
    cfg.validate()?;
    match cfg {
        RewireConfig::Sdrf(c) => sdrf(g, c, seed),
        RewireConfig::Fosr(c) => fosr(g, c, seed),
        RewireConfig::Gtr(c) => gtr(g, c),
        RewireConfig::Borf(c) => borf(g, c),
        RewireConfig::Laser(c) => laser(g, c),
        RewireConfig::Digl(c) => digl_ppr(g, c),
    }
}

/// Per-graph seed derived from the run seed and the graph's position, so
/// results do not depend on which worker handles which graph.
pub fn graph_seed(global: u64, index: usize) -> u64 {
    // splitmix64 finalizer over the combined input
    let mut z = global ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeChangeStats {
    pub original_edges: usize,
    pub added: usize,
    pub removed: usize,
    pub added_pct: f64,
    pub removed_pct: f64,
}

/// Dataset-level edge accounting: totals added and removed as a percentage
/// of the total original edge count.
pub fn edge_change_stats<'a, I>(pairs: I) -> EdgeChangeStats
where
    I: IntoIterator<Item = (&'a Graph, &'a RewireResult)>,
{
    let (mut m, mut added, mut removed) = (0usize, 0usize, 0usize);
    for (g, r) in pairs {
        m += g.edge_count();
        added += r.added.len();
        removed += r.removed.len();
    }
    let pct = |k: usize| if m == 0 { 0.0 } else { 100.0 * k as f64 / m as f64 };
    EdgeChangeStats {
        original_edges: m,
        added,
        removed,
        added_pct: pct(added),
        removed_pct: pct(removed),
    }
}

/// Lexicographically ordered candidate pairs `(a, b)`, `a` from `left`, `b`
/// from `right`, that are not edges of `g`.
pub(crate) fn candidate_pairs(
    g: &Graph,
    left: impl IntoIterator<Item = usize>,
    right: &BTreeSet<usize>,
) -> BTreeSet<Edge> {
    let mut out = BTreeSet::new();
    for a in left {
        for &b in right {
            if a != b && !g.has_edge(a, b) {
                out.insert(Edge::new(a, b).expect("a != b"));
            }
        }
    }
    out
}

pub(crate) fn positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Config(format!("{name} must be positive, got {x}")));
    }
    Ok(())
}
