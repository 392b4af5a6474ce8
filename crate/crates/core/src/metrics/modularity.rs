//! Greedy agglomerative modularity maximization (Clauset-Newman-Moore).
//!
//! Every merge gain is compared through the integer numerator
//! `2m * l_ij - k_i * k_j`, which orders merges exactly like
//! `dQ = 2 (e_ij - a_i a_j)`. Ties go to the lexicographically smallest
//! community pair, so the partition is a pure function of the edge set.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    /// Community index per node, numbered by smallest member.
    pub membership: Vec<usize>,
    pub communities: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_membership(raw: &[usize]) -> Self {
        let mut relabel: BTreeMap<usize, usize> = BTreeMap::new();
        let mut membership = Vec::with_capacity(raw.len());
        for &c in raw {
            let next = relabel.len();
            membership.push(*relabel.entry(c).or_insert(next));
        }
        let mut communities = vec![Vec::new(); relabel.len()];
        for (v, &c) in membership.iter().enumerate() {
            communities[c].push(v);
        }
        Self {
            membership,
            communities,
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_membership(&(0..n).collect::<Vec<_>>())
    }

    pub fn single_block(n: usize) -> Self {
        Self::from_membership(&vec![0; n])
    }
}

/// Modularity of a given partition with resolution `gamma`.
pub fn modularity_of(g: &Graph, partition: &Partition, gamma: f64) -> Result<f64> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::MetricUndefined("modularity of an edgeless graph".into()));
    }
    if partition.membership.len() != g.node_count() {
        return Err(Error::Shape("partition does not cover the graph".into()));
    }
    let c = partition.communities.len();
    let mut internal = vec![0usize; c];
    let mut degree_sum = vec![0usize; c];
    for v in 0..g.node_count() {
        degree_sum[partition.membership[v]] += g.degree(v);
    }
    for e in g.edges() {
        let (cu, cv) = (partition.membership[e.u()], partition.membership[e.v()]);
        if cu == cv {
            internal[cu] += 1;
        }
    }
    let m = m as f64;
    Ok(internal
        .iter()
        .zip(&degree_sum)
        .map(|(&l, &k)| l as f64 / m - gamma * (k as f64 / (2.0 * m)).powi(2))
        .sum())
}

struct Community {
    degree: i64,
    links: BTreeMap<usize, i64>,
}

/// Runs the greedy merge and returns `(Q, partition)`.
pub fn greedy_modularity(g: &Graph) -> Result<(f64, Partition)> {
    let m = g.edge_count();
    if m == 0 {
        return Err(Error::MetricUndefined("modularity of an edgeless graph".into()));
    }
    let n = g.node_count();
    let two_m = 2 * m as i64;
    let mut comms: Vec<Option<Community>> = (0..n)
        .map(|v| {
            Some(Community {
                degree: g.degree(v) as i64,
                links: g.neighbors(v).map(|w| (w, 1)).collect(),
            })
        })
        .collect();
    let mut membership: Vec<usize> = (0..n).collect();

    loop {
        let mut best: Option<(i64, usize, usize)> = None;
        for (i, ci) in comms.iter().enumerate() {
            let Some(ci) = ci else { continue };
            for (&j, &l) in ci.links.range(i + 1..) {
                let kj = comms[j].as_ref().map_or(0, |c| c.degree);
                let gain = two_m * l - ci.degree * kj;
                if best.is_none_or(|(b, _, _)| gain > b) {
                    best = Some((gain, i, j));
                }
            }
        }
        let Some((gain, keep, gone)) = best else { break };
        if gain < 0 {
            break;
        }
        let absorbed = comms[gone].take().expect("live community");
        for (&other, &l) in &absorbed.links {
            if other == keep {
                continue;
            }
            let oc = comms[other].as_mut().expect("live neighbour");
            oc.links.remove(&gone);
            *oc.links.entry(keep).or_insert(0) += l;
        }
        let kc = comms[keep].as_mut().expect("live community");
        kc.links.remove(&gone);
        kc.degree += absorbed.degree;
        for (other, l) in absorbed.links {
            if other != keep {
                *kc.links.entry(other).or_insert(0) += l;
            }
        }
        for c in membership.iter_mut() {
            if *c == gone {
                *c = keep;
            }
        }
    }

    let partition = Partition::from_membership(&membership);
    let q = modularity_of(g, &partition, 1.0)?;
    // one block always scores exactly 0
    if q < 0.0 {
        return Ok((0.0, Partition::single_block(n)));
    }
    Ok((q, partition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn complete_graph_is_one_community() {
        let (q, p) = greedy_modularity(&Graph::complete(4)).unwrap();
        assert_abs_diff_eq!(q, 0.0, epsilon = 1e-12);
        assert_eq!(p.communities.len(), 1);
    }

    #[test]
    fn two_triangles_split() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let natural = Partition::from_membership(&[0, 0, 0, 1, 1, 1]);
        assert_abs_diff_eq!(modularity_of(&g, &natural, 1.0).unwrap(), 0.5, epsilon = 1e-12);
        let (q, p) = greedy_modularity(&g).unwrap();
        assert_abs_diff_eq!(q, 0.5, epsilon = 1e-12);
        assert_eq!(p, natural);
    }

    #[test]
    fn barbell_splits_at_bridge() {
        let g = Graph::from_edges(
            6,
            [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)],
        )
        .unwrap();
        let (q, p) = greedy_modularity(&g).unwrap();
        assert_eq!(p.membership, vec![0, 0, 0, 1, 1, 1]);
        // 2 * (3/7 - (7/14)^2)
        assert_abs_diff_eq!(q, 2.0 * (3.0 / 7.0 - 0.25), epsilon = 1e-12);
    }

    #[test]
    fn edgeless_is_undefined() {
        assert!(greedy_modularity(&Graph::new(3)).is_err());
    }
}
