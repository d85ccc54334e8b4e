//! Reference solvers: exhaustive minimum dominating set and the classical
//! max-coverage greedy.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::clustering::domination_number_lower_bound;
use crate::error::{Error, Result};
use crate::geomgraph::{NodeId, Topology};

pub const DEFAULT_NODE_LIMIT: usize = 14;

/// Closed neighborhoods are packed into `u64` masks.
const HARD_NODE_LIMIT: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimum_size: usize,
    /// Lexicographically smallest minimum dominating set.
    pub witness: Vec<NodeId>,
    pub node_limit_respected: bool,
}

/// Tries subsets in increasing size, each size in lexicographic order, so
/// the first dominating subset is an optimum. Sizes below
/// [`domination_number_lower_bound`] are skipped.
pub fn exact_min_dominating_set(t: &Topology, node_limit: usize) -> Result<OracleResult> {
    if node_limit > HARD_NODE_LIMIT {
        return Err(Error::config(
            "node_limit",
            format!("exhaustive search supports at most {HARD_NODE_LIMIT} nodes"),
        ));
    }
    let n = t.len();
    if n > node_limit {
        return Err(Error::NodeLimit {
            n,
            limit: node_limit,
        });
    }
    if node_limit > DEFAULT_NODE_LIMIT && n > DEFAULT_NODE_LIMIT {
        log::warn!("exhaustive search on {n} nodes may take a long time");
    }
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let masks: Vec<u64> = t
        .nodes()
        .map(|v| t.adj(v).iter().fold(1u64 << v, |m, &u| m | (1u64 << u)))
        .collect();

    for size in domination_number_lower_bound(t)..=n {
        for subset in (0..n).combinations(size) {
            let mask = subset.iter().fold(0u64, |m, &v| m | masks[v]);
            if mask == full {
                return Ok(OracleResult {
                    optimum_size: size,
                    witness: subset,
                    node_limit_respected: true,
                });
            }
        }
    }
    unreachable!("the full node set always dominates")
}

/// Repeatedly adds the node covering the most uncovered nodes, lowest id on ties.
pub fn greedy_min_dominating_set(t: &Topology) -> Vec<NodeId> {
    let n = t.len();
    let mut covered = vec![false; n];
    let mut gain: Vec<usize> = t.nodes().map(|v| t.adj(v).len() + 1).collect();
    let mut uncovered = n;
    let mut heads = Vec::new();
    while uncovered > 0 {
        let mut best = 0;
        for v in 1..n {
            if gain[v] > gain[best] {
                best = v;
            }
        }
        heads.push(best);
        for u in std::iter::once(best).chain(t.adj(best).iter().copied()) {
            if !covered[u] {
                covered[u] = true;
                uncovered -= 1;
                gain[u] -= 1;
                for &w in t.adj(u) {
                    gain[w] -= 1;
                }
            }
        }
    }
    heads.sort_unstable();
    heads
}
