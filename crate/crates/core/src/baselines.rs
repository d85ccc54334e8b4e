//! Classical cluster-head election schemes: Lowest-ID, Highest-Degree,
//! KCONID and WCA.
//!
//! All four are computed centrally with the same sequential rule: take the
//! undecided node with the best priority, make it a head, and let it claim
//! every undecided node within reach. Ties always go to the lowest id.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::clustering::Clustering;
use crate::error::{Error, Result};
use crate::geomgraph::{NodeId, Topology};

/// Weights and per-node inputs for the weighted clustering algorithm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WcaParams {
    /// Degree-difference weight.
    pub w1: f64,
    /// Neighbor distance-sum weight.
    pub w2: f64,
    /// Mobility weight.
    pub w3: f64,
    /// Head-tenure weight.
    pub w4: f64,
    pub ideal_degree: f64,
    /// Average speed per node; absent nodes count as stationary.
    pub mobility: Option<BTreeMap<NodeId, f64>>,
    /// Cumulative time served as head per node; absent nodes count as zero.
    pub head_tenure: Option<BTreeMap<NodeId, f64>>,
}

impl Default for WcaParams {
    fn default() -> Self {
        Self {
            w1: 0.7,
            w2: 0.2,
            w3: 0.05,
            w4: 0.05,
            ideal_degree: 10.0,
            mobility: None,
            head_tenure: None,
        }
    }
}

impl WcaParams {
    pub fn with_weights(w1: f64, w2: f64, w3: f64, w4: f64, ideal_degree: f64) -> Self {
        Self {
            w1,
            w2,
            w3,
            w4,
            ideal_degree,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let weights = [
            ("w1", self.w1),
            ("w2", self.w2),
            ("w3", self.w3),
            ("w4", self.w4),
        ];
        for (field, w) in weights {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::config(
                    field,
                    format!("must be finite and non-negative, got {w}"),
                ));
            }
        }
        let sum: f64 = weights.iter().map(|(_, w)| w).sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::config(
                "w1",
                format!("w1 + w2 + w3 + w4 must equal 1, got {sum}"),
            ));
        }
        if !(self.ideal_degree.is_finite() && self.ideal_degree >= 0.0) {
            return Err(Error::config(
                "ideal_degree",
                "must be finite and non-negative",
            ));
        }
        Ok(())
    }
}

/// Sequential election. `order` lists every node from best to worst
/// priority; `reach(h)` yields the nodes a new head `h` may claim.
fn elect<R>(t: &Topology, order: &[NodeId], max_hops: usize, mut reach: R) -> Clustering
where
    R: FnMut(NodeId) -> Vec<NodeId>,
{
    let mut decided = vec![false; t.len()];
    let mut heads = Vec::new();
    let mut assignment = BTreeMap::new();
    for &v in order {
        if decided[v] {
            continue;
        }
        decided[v] = true;
        heads.push(v);
        for u in reach(v) {
            if !decided[u] {
                decided[u] = true;
                assignment.insert(u, v);
            }
        }
    }
    Clustering::from_parts(t, heads, assignment, max_hops)
}

/// Each undecided node that is the smallest id in its undecided closed
/// neighborhood becomes a head. Processing ids in ascending order reaches
/// the same fixed point.
pub fn lowest_id(t: &Topology) -> Clustering {
    let order: Vec<_> = t.nodes().collect();
    elect(t, &order, 1, |h| t.adj(h).to_vec())
}

pub fn highest_degree(t: &Topology) -> Clustering {
    let mut order: Vec<_> = t.nodes().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(t.adj(v).len()), v));
    elect(t, &order, 1, |h| t.adj(h).to_vec())
}

/// Priority is (k-hop connectivity desc, id asc); heads claim every
/// undecided node within `k` hops.
pub fn kconid(t: &Topology, k: usize) -> Result<Clustering> {
    if k == 0 {
        return Err(Error::config("k", "hop count must be at least 1"));
    }
    let reach: Vec<Vec<NodeId>> = t
        .nodes()
        .map(|v| t.k_hop_neighborhood(v, k))
        .collect::<Result<_>>()?;
    let mut order: Vec<_> = t.nodes().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(reach[v].len()), v));
    Ok(elect(t, &order, k, |h| reach[h].clone()))
}

/// `w1·|deg − δ| + w2·Σdist(neighbors) + w3·M + w4·P`.
pub fn wca_node_weight(t: &Topology, v: NodeId, p: &WcaParams) -> Result<f64> {
    p.validate()?;
    Ok(wca_weight_unchecked(t, v, p))
}

fn wca_weight_unchecked(t: &Topology, v: NodeId, p: &WcaParams) -> f64 {
    let pos = t.positions();
    let degree_diff = (t.adj(v).len() as f64 - p.ideal_degree).abs();
    let distance_sum: f64 = t.adj(v).iter().map(|&u| pos[v].distance(&pos[u])).sum();
    let lookup = |m: &Option<BTreeMap<NodeId, f64>>| {
        m.as_ref().and_then(|m| m.get(&v).copied()).unwrap_or(0.0)
    };
    p.w1 * degree_diff
        + p.w2 * distance_sum
        + p.w3 * lookup(&p.mobility)
        + p.w4 * lookup(&p.head_tenure)
}

pub fn wca(t: &Topology, p: &WcaParams) -> Result<Clustering> {
    p.validate()?;
    let weights: Vec<f64> = t.nodes().map(|v| wca_weight_unchecked(t, v, p)).collect();
    let mut order: Vec<_> = t.nodes().collect();
    order.sort_by(|&a, &b| match weights[a].total_cmp(&weights[b]) {
        Ordering::Equal => a.cmp(&b),
        other => other,
    });
    Ok(elect(t, &order, 1, |h| t.adj(h).to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clustering::{is_dominating, is_independent_set, is_k_dominating};
    use crate::geomgraph::fixtures::*;
    use crate::geomgraph::{Point, TopologyConfig};
    use proptest::prelude::*;

    #[test]
    fn lowest_id_examples() {
        let c = lowest_id(&path(3));
        assert_eq!(c.heads, vec![0, 2]);
        assert_eq!(c.assignment, BTreeMap::from([(1, 0)]));
        let c = lowest_id(&star(5));
        assert_eq!(c.heads, vec![0]);
        assert_eq!(c.assignment.len(), 5);
        assert_eq!(lowest_id(&edgeless(4)).heads, vec![0, 1, 2, 3]);
    }

    #[test]
    fn highest_degree_examples() {
        // center 3 so the answer does not coincide with the lowest id
        let t = Topology::from_edges(5, &[(3, 0), (3, 1), (3, 2), (3, 4)]).unwrap();
        assert_eq!(highest_degree(&t).heads, vec![3]);
        let two_edges = Topology::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(highest_degree(&two_edges).heads, vec![0, 2]);
        assert_eq!(highest_degree(&edgeless(3)).heads, vec![0, 1, 2]);
    }

    #[test]
    fn kconid_examples() {
        let p = path(5);
        let c = kconid(&p, 2).unwrap();
        assert_eq!(c.heads, vec![2]);
        assert_eq!(c.max_hops, 2);
        assert_eq!(c.assignment.len(), 4);
        assert!(is_k_dominating(&p, &c.heads, 2).unwrap());

        // every node has connectivity 1, so the lower id of each pair wins
        let t = Topology::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(kconid(&t, 1).unwrap().heads, vec![0, 2]);
        assert!(kconid(&p, 0).is_err());
    }

    #[test]
    fn wca_weight_examples() {
        let s = star(4);
        let degree_only = WcaParams::with_weights(1.0, 0.0, 0.0, 0.0, 4.0);
        assert_eq!(wca_node_weight(&s, 0, &degree_only).unwrap(), 0.0);

        let t = Topology::from_positions(
            100.0,
            10.0,
            vec![
                Point::new(0.0, 0.0),
                Point::new(3.0, 0.0),
                Point::new(0.0, 4.0),
            ],
        )
        .unwrap();
        let distance_only = WcaParams::with_weights(0.0, 1.0, 0.0, 0.0, 0.0);
        assert!((wca_node_weight(&t, 0, &distance_only).unwrap() - 7.0).abs() < 1e-12);

        let p = WcaParams {
            mobility: Some(BTreeMap::from([(1, 2.0)])),
            head_tenure: Some(BTreeMap::from([(1, 4.0)])),
            ..WcaParams::with_weights(0.0, 0.0, 0.5, 0.5, 0.0)
        };
        assert!((wca_node_weight(&t, 1, &p).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(wca_node_weight(&t, 2, &p).unwrap(), 0.0);
    }

    #[test]
    fn wca_examples() {
        let p = WcaParams::default();
        assert_eq!(wca(&edgeless(4), &p).unwrap().heads, vec![0, 1, 2, 3]);
        let s = star(6);
        let p = WcaParams::with_weights(1.0, 0.0, 0.0, 0.0, 6.0);
        assert_eq!(wca(&s, &p).unwrap().heads, vec![0]);
    }

    #[test]
    fn wca_rejects_bad_weights() {
        let p = WcaParams::with_weights(0.5, 0.2, 0.2, 0.2, 3.0);
        assert!(matches!(wca(&path(3), &p), Err(Error::Config { .. })));
        let p = WcaParams::with_weights(1.2, -0.2, 0.0, 0.0, 3.0);
        assert!(wca_node_weight(&path(3), 0, &p).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn baselines_produce_independent_dominating_sets(n in 1usize..120, seed: u64, range in 80.0f64..400.0) {
            let t = Topology::generate(&TopologyConfig::new(n, 1000.0, range, seed)).unwrap();
            let wca_params = WcaParams::default();
            for c in [lowest_id(&t), highest_degree(&t), wca(&t, &wca_params).unwrap()] {
                prop_assert!(is_dominating(&t, &c.heads).unwrap());
                prop_assert!(is_independent_set(&t, &c.heads).unwrap());
                for (&m, &h) in &c.assignment {
                    prop_assert!(t.are_adjacent(m, h).unwrap());
                }
            }
            for (&m, &h) in &lowest_id(&t).assignment {
                prop_assert!(h < m);
            }
            prop_assert_eq!(kconid(&t, 1).unwrap().heads, highest_degree(&t).heads);
            let k2 = kconid(&t, 2).unwrap();
            prop_assert!(is_k_dominating(&t, &k2.heads, 2).unwrap());
            prop_assert_eq!(lowest_id(&t), lowest_id(&t));
            prop_assert_eq!(wca(&t, &wca_params).unwrap(), wca(&t, &wca_params).unwrap());
        }
    }
}
