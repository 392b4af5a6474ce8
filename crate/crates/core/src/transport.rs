//! Exact discrete optimal transport between two small weighted supports,
//! solved as a min-cost flow by successive shortest augmenting paths.

use crate::error::{Error, Result};

const EPS: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct TransportPlan {
    pub cost: f64,
    /// `(source index, sink index, mass)` for every positive flow.
    pub flows: Vec<(usize, usize, f64)>,
}

/// Minimum-cost coupling of `supply` and `demand` (equal totals) under the
/// row-major `cost` matrix, `cost[i][j] >= 0`.
pub fn solve(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<TransportPlan> {
    let (ns, nt) = (supply.len(), demand.len());
    if ns == 0 || nt == 0 {
        return Err(Error::Input("transport between empty supports".into()));
    }
    if cost.len() != ns || cost.iter().any(|r| r.len() != nt) {
        return Err(Error::Shape("cost matrix does not match supports".into()));
    }
    if cost.iter().flatten().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(Error::Input("costs must be finite and nonnegative".into()));
    }
    let total_s: f64 = supply.iter().sum();
    let total_t: f64 = demand.iter().sum();
    if (total_s - total_t).abs() > 1e-9 * total_s.max(1.0) {
        return Err(Error::Input(format!("mass mismatch: {total_s} vs {total_t}")));
    }

    let mut left = supply.to_vec();
    let mut need = demand.to_vec();
    let mut flow = vec![vec![0.0; nt]; ns];
    // node ids: 0 = super source, 1..=ns sources, ns+1..=ns+nt sinks, ns+nt+1 = super sink
    let (src, sink) = (0, ns + nt + 1);
    let nodes = ns + nt + 2;

    for _ in 0..(4 * (ns + nt) * (ns + nt) + 16) {
        if left.iter().all(|&x| x <= EPS) || need.iter().all(|&x| x <= EPS) {
            break;
        }
        // Bellman-Ford over the residual network
        let mut dist = vec![f64::INFINITY; nodes];
        let mut prev = vec![usize::MAX; nodes];
        dist[src] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            for i in 0..ns {
                if left[i] > EPS && dist[src] < dist[1 + i] {
                    dist[1 + i] = dist[src];
                    prev[1 + i] = src;
                    changed = true;
                }
            }
            for i in 0..ns {
                let di = dist[1 + i];
                for j in 0..nt {
                    let tj = 1 + ns + j;
                    if di.is_finite() && di + cost[i][j] < dist[tj] - 1e-15 {
                        dist[tj] = di + cost[i][j];
                        prev[tj] = 1 + i;
                        changed = true;
                    }
                    if flow[i][j] > EPS && dist[tj].is_finite() && dist[tj] - cost[i][j] < di - 1e-15 {
                        dist[1 + i] = dist[tj] - cost[i][j];
                        prev[1 + i] = tj;
                        changed = true;
                    }
                }
            }
            for (j, &nj) in need.iter().enumerate() {
                let tj = 1 + ns + j;
                if nj > EPS && dist[tj] < dist[sink] {
                    dist[sink] = dist[tj];
                    prev[sink] = tj;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if !dist[sink].is_finite() {
            return Err(Error::Numeric("no augmenting path in transport problem".into()));
        }

        // walk back to find the bottleneck
        let mut path = vec![sink];
        let mut v = sink;
        while v != src {
            v = prev[v];
            path.push(v);
            if path.len() > nodes + 1 {
                return Err(Error::Numeric("cycle in augmenting path".into()));
            }
        }
        path.reverse();
        let mut push = f64::INFINITY;
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            let cap = if a == src {
                left[b - 1]
            } else if b == sink {
                need[a - 1 - ns]
            } else if a <= ns {
                f64::INFINITY
            } else {
                flow[b - 1][a - 1 - ns]
            };
            push = push.min(cap);
        }
        for w in path.windows(2) {
            let (a, b) = (w[0], w[1]);
            if a == src {
                left[b - 1] -= push;
            } else if b == sink {
                need[a - 1 - ns] -= push;
            } else if a <= ns {
                flow[a - 1][b - 1 - ns] += push;
            } else {
                flow[b - 1][a - 1 - ns] -= push;
            }
        }
    }

    let mut cost_total = 0.0;
    let mut flows = Vec::new();
    for i in 0..ns {
        for j in 0..nt {
            if flow[i][j] > EPS {
                cost_total += flow[i][j] * cost[i][j];
                flows.push((i, j, flow[i][j]));
            }
        }
    }
    Ok(TransportPlan {
        cost: cost_total,
        flows,
    })
}
