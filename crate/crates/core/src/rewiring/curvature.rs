//! Edge curvatures used to steer rewiring: balanced Forman (SDRF) and
//! Ollivier-Ricci (BORF).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bfs_unchecked, Edge, Graph};
use crate::transport::{self, TransportPlan};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurvatureKind {
    BalancedForman,
    Ollivier,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureField {
    pub kind: CurvatureKind,
    pub values: BTreeMap<Edge, f64>,
}

impl CurvatureField {
    /// Lowest-curvature edge; ties go to the smallest edge.
    pub fn min_edge(&self) -> Option<(Edge, f64)> {
        self.values
            .iter()
            .fold(None, |best: Option<(Edge, f64)>, (&e, &c)| match best {
                Some((_, b)) if b <= c => best,
                _ => Some((e, c)),
            })
    }

    pub fn max_edge(&self) -> Option<(Edge, f64)> {
        self.values
            .iter()
            .fold(None, |best: Option<(Edge, f64)>, (&e, &c)| match best {
                Some((_, b)) if b >= c => best,
                _ => Some((e, c)),
            })
    }
}

fn require_edge(g: &Graph, e: Edge) -> Result<()> {
    if e.v() >= g.node_count() || !g.has_edge(e.u(), e.v()) {
        return Err(Error::Input(format!("{e} is not an edge")));
    }
    Ok(())
}

/// 4-cycles `i - k - w - j` based at `i` without diagonals: returns the
/// number of such `k` and the largest number of `w` sharing one `k`.
fn squares_at(g: &Graph, i: usize, j: usize) -> (usize, usize) {
    let (ni, nj) = (g.neighbor_set(i), g.neighbor_set(j));
    let mut count = 0;
    let mut gamma = 0;
    for &k in ni {
        if k == j || nj.contains(&k) {
            continue;
        }
        let through = g
            .neighbors(k)
            .filter(|&w| w != i && nj.contains(&w) && !ni.contains(&w))
            .count();
        if through > 0 {
            count += 1;
            gamma = gamma.max(through);
        }
    }
    (count, gamma)
}

/// Balanced Forman curvature
/// `2/d_i + 2/d_j - 2 + 2T/max + T/min + (S_i + S_j) / (gamma_max * max)`,
/// with `T` the triangles on the edge and `S` the diagonal-free 4-cycles at
/// each endpoint; the square term vanishes when there are no squares.
pub fn balanced_forman(g: &Graph, e: Edge) -> Result<f64> {
    require_edge(g, e)?;
    let (i, j) = e.endpoints();
    let (di, dj) = (g.degree(i) as f64, g.degree(j) as f64);
    let (dmax, dmin) = (di.max(dj), di.min(dj));
    let tri = g
        .neighbor_set(i)
        .intersection(g.neighbor_set(j))
        .count() as f64;
    let (si, gi) = squares_at(g, i, j);
    let (sj, gj) = squares_at(g, j, i);
    let gamma = gi.max(gj);
    let mut c = 2.0 / di + 2.0 / dj - 2.0 + 2.0 * tri / dmax + tri / dmin;
    if gamma > 0 {
        c += (si + sj) as f64 / (gamma as f64 * dmax);
    }
    Ok(c)
}

pub fn balanced_forman_field(g: &Graph) -> CurvatureField {
    CurvatureField {
        kind: CurvatureKind::BalancedForman,
        values: g
            .edges()
            .map(|e| (e, balanced_forman(g, e).expect("edge of g")))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OllivierCurvature {
    pub kappa: f64,
    /// Support of the measure at `u` (sources of the plan).
    pub source_support: Vec<usize>,
    /// Support of the measure at `v` (sinks of the plan).
    pub target_support: Vec<usize>,
    pub plan: TransportPlan,
}

impl OllivierCurvature {
    /// Plan entries as `(node at u side, node at v side, mass)`.
    pub fn couplings(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.plan
            .flows
            .iter()
            .map(|&(i, j, m)| (self.source_support[i], self.target_support[j], m))
    }
}

fn neighbor_measure(g: &Graph, x: usize, idleness: f64) -> (Vec<usize>, Vec<f64>) {
    let d = g.degree(x) as f64;
    let mut nodes = Vec::with_capacity(g.degree(x) + 1);
    let mut mass = Vec::with_capacity(g.degree(x) + 1);
    if idleness > 0.0 {
        nodes.push(x);
        mass.push(idleness);
    }
    for y in g.neighbors(x) {
        nodes.push(y);
        mass.push((1.0 - idleness) / d);
    }
    (nodes, mass)
}

/// Ollivier-Ricci curvature `1 - W1(m_u, m_v)` with
/// `m_x = idleness * delta_x + (1 - idleness) * uniform(N(x))` and hop
/// distance as ground cost. The optimal plan is returned with the value.
pub fn ollivier_ricci(g: &Graph, e: Edge, idleness: f64) -> Result<OllivierCurvature> {
    require_edge(g, e)?;
    if !(0.0..1.0).contains(&idleness) {
        return Err(Error::Input(format!("idleness must lie in [0, 1), got {idleness}")));
    }
    let (u, v) = e.endpoints();
    let (src, supply) = neighbor_measure(g, u, idleness);
    let (dst, demand) = neighbor_measure(g, v, idleness);
    let mut cost = Vec::with_capacity(src.len());
    for &a in &src {
        let d = bfs_unchecked(g, a);
        let row = dst
            .iter()
            .map(|&b| d[b].map(|h| h as f64))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::Numeric("neighbourhoods in different components".into()))?;
        cost.push(row);
    }
    let plan = transport::solve(&supply, &demand, &cost)?;
    Ok(OllivierCurvature {
        kappa: 1.0 - plan.cost,
        source_support: src,
        target_support: dst,
        plan,
    })
}

pub fn ollivier_field(g: &Graph, idleness: f64) -> Result<(CurvatureField, BTreeMap<Edge, OllivierCurvature>)> {
    let mut values = BTreeMap::new();
    let mut details = BTreeMap::new();
    for e in g.edges() {
        let oc = ollivier_ricci(g, e, idleness)?;
        values.insert(e, oc.kappa);
        details.insert(e, oc);
    }
    Ok((
        CurvatureField {
            kind: CurvatureKind::Ollivier,
            values,
        },
        details,
    ))
}
