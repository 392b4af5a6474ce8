//! Test-only oracles and fixtures, written independently of the library code
//! they check.

#![allow(dead_code, clippy::needless_range_loop)]

use std::path::PathBuf;

use grasp_core::dataset::{load_tudataset, DatasetBundle};
use grasp_core::graph::{connected_components, Graph};
use rand::Rng;

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Graph::from_edges(n, pairs).unwrap()
}

/// Random tree plus independent extra edges with probability `p`.
pub fn random_connected(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut pairs = Vec::new();
    for v in 1..n {
        pairs.push((rng.gen_range(0..v), v));
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                pairs.push((i, j));
            }
        }
    }
    Graph::from_edges(n, pairs).unwrap()
}

pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.node_count();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for e in g.edges() {
        d[e.u()][e.v()] = 1;
        d[e.v()][e.u()] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d.into_iter()
        .map(|row| row.into_iter().map(|x| (x < inf).then_some(x)).collect())
        .collect()
}

/// Dense Gaussian elimination with partial pivoting; `a` must be nonsingular.
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        assert!(a[col][col].abs() > 1e-12, "singular system");
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Minimizes `c'x` subject to `A x = b`, `x >= 0` with the two-phase tableau
/// simplex and Bland's rule. Panics when infeasible or unbounded.
pub fn lp_min(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> f64 {
    const TOL: f64 = 1e-11;
    let (m, n) = (a.len(), c.len());
    // tableau columns: n originals, m artificials, rhs
    let width = n + m + 1;
    let mut t: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            let mut row = vec![0.0; width];
            for j in 0..n {
                row[j] = sign * a[i][j];
            }
            row[n + i] = 1.0;
            row[width - 1] = sign * b[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();

    let pivot = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, r: usize, col: usize| {
        let p = t[r][col];
        for x in t[r].iter_mut() {
            *x /= p;
        }
        for i in 0..t.len() {
            if i != r && t[i][col] != 0.0 {
                let f = t[i][col];
                for j in 0..width {
                    t[i][j] -= f * t[r][j];
                }
            }
        }
        basis[r] = col;
    };

    let optimize = |t: &mut Vec<Vec<f64>>, basis: &mut Vec<usize>, cost: &[f64], allowed: usize| {
        loop {
            // reduced cost of column j: cost_j - sum_i cost_{basis_i} t[i][j]
            let entering = (0..allowed).find(|&j| {
                let z: f64 = (0..t.len()).map(|i| cost[basis[i]] * t[i][j]).sum();
                cost[j] - z < -TOL
            });
            let Some(col) = entering else { return };
            let mut leave: Option<(f64, usize, usize)> = None;
            for i in 0..t.len() {
                if t[i][col] > TOL {
                    let ratio = t[i][width - 1] / t[i][col];
                    let better = match leave {
                        None => true,
                        Some((best, _, bidx)) => ratio < best - TOL || (ratio <= best + TOL && basis[i] < bidx),
                    };
                    if better {
                        leave = Some((ratio, i, basis[i]));
                    }
                }
            }
            let (_, r, _) = leave.expect("unbounded LP");
            pivot(t, basis, r, col);
        }
    };

    let mut phase1 = vec![0.0; n + m];
    for x in phase1.iter_mut().skip(n) {
        *x = 1.0;
    }
    optimize(&mut t, &mut basis, &phase1, n + m);
    let infeas: f64 = (0..m).filter(|&i| basis[i] >= n).map(|i| t[i][width - 1]).sum();
    assert!(infeas < 1e-9, "infeasible LP ({infeas})");

    // drive zero-level artificials out of the basis, dropping redundant rows
    let mut keep = vec![true; m];
    for r in 0..m {
        if basis[r] >= n {
            match (0..n).find(|&j| t[r][j].abs() > 1e-9) {
                Some(col) => pivot(&mut t, &mut basis, r, col),
                None => keep[r] = false,
            }
        }
    }
    let mut t: Vec<Vec<f64>> = t.into_iter().zip(&keep).filter(|(_, k)| **k).map(|(r, _)| r).collect();
    let mut basis: Vec<usize> = basis.into_iter().zip(&keep).filter(|(_, k)| **k).map(|(b, _)| b).collect();

    let mut phase2 = c.to_vec();
    phase2.extend(std::iter::repeat_n(0.0, m));
    optimize(&mut t, &mut basis, &phase2, n);
    (0..t.len()).map(|i| phase2[basis[i]] * t[i][width - 1]).sum()
}

/// Optimal transport cost as a plain LP over the `|supply| x |demand|` plan.
pub fn transport_lp(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> f64 {
    let (s, d) = (supply.len(), demand.len());
    let mut c = Vec::with_capacity(s * d);
    for row in cost {
        c.extend_from_slice(row);
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for i in 0..s {
        let mut row = vec![0.0; s * d];
        for j in 0..d {
            row[i * d + j] = 1.0;
        }
        a.push(row);
        b.push(supply[i]);
    }
    for j in 0..d {
        let mut row = vec![0.0; s * d];
        for i in 0..s {
            row[i * d + j] = 1.0;
        }
        a.push(row);
        b.push(demand[j]);
    }
    lp_min(&c, &a, &b)
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Locates `<name>` under `GRASP_DATA_DIR` or the repository's `data/`.
pub fn dataset_dir(name: &str) -> Option<PathBuf> {
    let mut roots = Vec::new();
    if let Ok(d) = std::env::var("GRASP_DATA_DIR") {
        roots.push(PathBuf::from(d));
    }
    roots.push(workspace_root().join("data"));
    roots.into_iter().find_map(|root| {
        let dir = root.join(name);
        dir.join(format!("{name}_A.txt")).exists().then_some(dir)
    })
}

pub fn load(name: &str) -> Option<DatasetBundle> {
    dataset_dir(name).map(|d| load_tudataset(d, name).expect("dataset present but unreadable"))
}

pub fn mutag() -> DatasetBundle {
    load("MUTAG").expect("MUTAG is vendored under data/MUTAG")
}

/// `R_ij` by grounding `j` and solving `L x = e_i` on the component of `i`.
pub fn resistance_by_solve(g: &Graph, i: usize, j: usize) -> Option<f64> {
    let comp = connected_components(g).into_iter().find(|c| c.contains(&i))?;
    if !comp.contains(&j) {
        return None;
    }
    if i == j {
        return Some(0.0);
    }
    let rest: Vec<usize> = comp.iter().copied().filter(|&v| v != j).collect();
    let pos = |v: usize| rest.iter().position(|&w| w == v);
    let k = rest.len();
    let mut a = vec![vec![0.0; k]; k];
    for (r, &v) in rest.iter().enumerate() {
        a[r][r] = g.degree(v) as f64;
        for w in g.neighbors(v) {
            if let Some(c) = pos(w) {
                a[r][c] -= 1.0;
            }
        }
    }
    let mut b = vec![0.0; k];
    b[pos(i).unwrap()] = 1.0;
    let x = solve_dense(a, b);
    Some(x[pos(i).unwrap()])
}

fn all_shortest_paths(g: &Graph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(g: &Graph, t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if last == t {
            out.push(path.clone());
            return;
        }
        for w in g.neighbors(last) {
            if !path.contains(&w) {
                path.push(w);
                walk(g, t, path, out);
                path.pop();
            }
        }
    }
    let mut all = Vec::new();
    walk(g, t, &mut vec![s], &mut all);
    let best = all.iter().map(Vec::len).min().unwrap();
    all.retain(|p| p.len() == best);
    all
}

/// Betweenness from explicit enumeration of every simple path.
pub fn betweenness_by_enumeration(g: &Graph) -> Vec<f64> {
    let n = g.node_count();
    let mut c = vec![0.0; n];
    for s in 0..n {
        for t in 0..n {
            if s == t {
                continue;
            }
            let paths = all_shortest_paths(g, s, t);
            let total = paths.len() as f64;
            for (v, cv) in c.iter_mut().enumerate() {
                if v == s || v == t {
                    continue;
                }
                let through = paths.iter().filter(|p| p.contains(&v)).count() as f64;
                *cv += through / total;
            }
        }
    }
    let norm = ((n - 1) * (n - 2)) as f64;
    c.into_iter().map(|x| x / norm).collect()
}

pub fn w1_by_lp(a: &[f64], b: &[f64]) -> f64 {
    let supply = vec![1.0 / a.len() as f64; a.len()];
    let demand = vec![1.0 / b.len() as f64; b.len()];
    let cost: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).abs()).collect()).collect();
    transport_lp(&supply, &demand, &cost)
}

pub fn orc_by_lp(g: &Graph, u: usize, v: usize, idleness: f64) -> f64 {
    let d = floyd_warshall(g);
    let measure = |x: usize| -> (Vec<usize>, Vec<f64>) {
        let deg = g.degree(x) as f64;
        let mut nodes = vec![x];
        let mut mass = vec![idleness];
        for y in g.neighbors(x) {
            nodes.push(y);
            mass.push((1.0 - idleness) / deg);
        }
        (nodes, mass)
    };
    let (a, ma) = measure(u);
    let (b, mb) = measure(v);
    let cost: Vec<Vec<f64>> = a
        .iter()
        .map(|&x| b.iter().map(|&y| d[x][y].unwrap() as f64).collect())
        .collect();
    1.0 - transport_lp(&ma, &mb, &cost)
}
