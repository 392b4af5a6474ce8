//! Dense symmetric linear algebra on graph matrices: Laplacians, spectra,
//! the Laplacian pseudoinverse and effective resistance.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{component_labels, connected_components, Graph};

/// Eigenvalues at or below this are treated as zero when looking for the gap.
pub const ZERO_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianVariant {
    /// `D - A`
    #[default]
    Combinatorial,
    /// `I - D^{-1/2} A D^{-1/2}`, all-zero rows for isolated nodes.
    SymNormalized,
}

/// Dense matrix whose symmetry is enforced at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix(DMatrix<f64>);

impl SymMatrix {
    /// Takes the upper triangle of `m` as authoritative.
    pub fn from_upper(mut m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Shape(format!("{}x{} is not square", m.nrows(), m.ncols())));
        }
        let n = m.nrows();
        for i in 0..n {
            for j in 0..i {
                m[(i, j)] = m[(j, i)];
            }
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

pub fn adjacency(g: &Graph) -> SymMatrix {
    let n = g.node_count();
    let mut m = DMatrix::zeros(n, n);
    for e in g.edges() {
        m[(e.u(), e.v())] = 1.0;
        m[(e.v(), e.u())] = 1.0;
    }
    SymMatrix(m)
}

pub fn laplacian(g: &Graph, variant: LaplacianVariant) -> SymMatrix {
    let n = g.node_count();
    let deg = g.degrees();
    let mut m = DMatrix::zeros(n, n);
    match variant {
        LaplacianVariant::Combinatorial => {
            for (i, &d) in deg.iter().enumerate() {
                m[(i, i)] = d as f64;
            }
            for e in g.edges() {
                m[(e.u(), e.v())] = -1.0;
                m[(e.v(), e.u())] = -1.0;
            }
        }
        LaplacianVariant::SymNormalized => {
            for (i, &d) in deg.iter().enumerate() {
                if d > 0 {
                    m[(i, i)] = 1.0;
                }
            }
            for e in g.edges() {
                let w = -1.0 / ((deg[e.u()] * deg[e.v()]) as f64).sqrt();
                m[(e.u(), e.v())] = w;
                m[(e.v(), e.u())] = w;
            }
        }
    }
    SymMatrix(m)
}

/// All eigenvalues in ascending order.
pub fn eigenvalues_sym(m: &SymMatrix) -> Result<Vec<f64>> {
    if m.dim() == 0 {
        return Err(Error::Input("eigenvalues of a 0x0 matrix".into()));
    }
    if m.0.iter().any(|x| !x.is_finite()) {
        return Err(Error::Numeric("matrix has non-finite entries".into()));
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(m.0.clone()).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub variant: LaplacianVariant,
}

pub fn laplacian_spectrum(g: &Graph, variant: LaplacianVariant) -> Result<Spectrum> {
    Ok(Spectrum {
        eigenvalues: eigenvalues_sym(&laplacian(g, variant))?,
        variant,
    })
}

/// Smallest normalized-Laplacian eigenvalue above [`ZERO_TOL`]; zero when
/// there is none.
pub fn spectral_gap(g: &Graph) -> Result<f64> {
    if g.edge_count() == 0 {
        return Err(Error::MetricUndefined("spectral gap of an edgeless graph".into()));
    }
    let ev = eigenvalues_sym(&laplacian(g, LaplacianVariant::SymNormalized))?;
    Ok(ev.into_iter().find(|&x| x > ZERO_TOL).unwrap_or(0.0))
}

/// Moore-Penrose pseudoinverse of the combinatorial Laplacian, assembled
/// block by block over connected components. Each block is
/// `(L_c + J/k)^{-1} - J/k` for a component of size `k`.
pub fn laplacian_pseudoinverse(g: &Graph) -> Result<DMatrix<f64>> {
    let n = g.node_count();
    let mut pinv = DMatrix::zeros(n, n);
    for block in connected_components(g) {
        let k = block.len();
        let shift = 1.0 / k as f64;
        let mut sub = DMatrix::from_element(k, k, shift);
        for (a, &u) in block.iter().enumerate() {
            sub[(a, a)] += g.degree(u) as f64;
            for (b, &v) in block.iter().enumerate() {
                if g.has_edge(u, v) {
                    sub[(a, b)] -= 1.0;
                }
            }
        }
        let inv = sub
            .cholesky()
            .ok_or_else(|| Error::Numeric("shifted Laplacian block is not positive definite".into()))?
            .inverse();
        for (a, &u) in block.iter().enumerate() {
            for (b, &v) in block.iter().enumerate() {
                pinv[(u, v)] = inv[(a, b)] - shift;
            }
        }
    }
    Ok(pinv)
}

/// Pairwise effective resistances; pairs in different components are
/// reported as `None`.
#[derive(Clone, Debug)]
pub struct ResistanceField {
    values: DMatrix<f64>,
    component: Vec<usize>,
}

impl ResistanceField {
    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        (self.component[i] == self.component[j]).then(|| self.values[(i, j)])
    }

    pub fn node_count(&self) -> usize {
        self.component.len()
    }
}

pub fn resistance_field(g: &Graph) -> Result<ResistanceField> {
    let pinv = laplacian_pseudoinverse(g)?;
    let component = component_labels(g);
    let n = g.node_count();
    let mut values = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            if component[i] == component[j] {
                let r = (pinv[(i, i)] + pinv[(j, j)] - 2.0 * pinv[(i, j)]).max(0.0);
                values[(i, j)] = r;
                values[(j, i)] = r;
            }
        }
    }
    Ok(ResistanceField { values, component })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResistanceTotals {
    /// Sum over same-component pairs `i < j`.
    pub total: f64,
    /// `total` divided by the number of same-component pairs.
    pub average: f64,
    /// Some pair of nodes has infinite resistance.
    pub disconnected: bool,
}

pub fn total_and_average_resistance(g: &Graph) -> Result<ResistanceTotals> {
    let n = g.node_count();
    if n < 2 {
        return Err(Error::MetricUndefined("resistance needs at least two nodes".into()));
    }
    let field = resistance_field(g)?;
    let mut total = 0.0;
    let mut pairs = 0usize;
    let mut disconnected = false;
    for i in 0..n {
        for j in i + 1..n {
            match field.get(i, j) {
                Some(r) => {
                    total += r;
                    pairs += 1;
                }
                None => disconnected = true,
            }
        }
    }
    if pairs == 0 {
        return Err(Error::MetricUndefined("no pair of nodes is connected".into()));
    }
    Ok(ResistanceTotals {
        total,
        average: total / pairs as f64,
        disconnected,
    })
}

/// `||A - A'||_2`, the largest eigenvalue magnitude of the adjacency difference.
pub fn adjacency_spectral_norm_diff(g: &Graph, g2: &Graph) -> Result<f64> {
    if g.node_count() != g2.node_count() {
        return Err(Error::Shape(format!(
            "node counts differ: {} vs {}",
            g.node_count(),
            g2.node_count()
        )));
    }
    if g.node_count() == 0 {
        return Ok(0.0);
    }
    if g.edge_set() == g2.edge_set() {
        return Ok(0.0);
    }
    let diff = SymMatrix(adjacency(g).0 - adjacency(g2).0);
    let ev = eigenvalues_sym(&diff)?;
    Ok(ev.iter().fold(0.0f64, |m, x| m.max(x.abs())))
}
