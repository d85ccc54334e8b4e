//! Clustering solutions: head sets, member assignment and node roles.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geomgraph::{NodeId, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Head,
    Gateway,
    Ordinary,
}

/// A head set together with the member-to-head assignment and role labels.
///
/// `max_hops` is 1 for every solver except KCONID with k > 1, whose members
/// may sit up to k hops from their head.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Clustering {
    pub heads: Vec<NodeId>,
    pub assignment: BTreeMap<NodeId, NodeId>,
    pub roles: BTreeMap<NodeId, Role>,
    #[serde(default = "one_hop", skip_serializing_if = "is_one_hop")]
    pub max_hops: usize,
}

fn one_hop() -> usize {
    1
}

fn is_one_hop(hops: &usize) -> bool {
    *hops == 1
}

impl Clustering {
    /// Assembles a clustering from an explicit assignment and computes roles.
    pub(crate) fn from_parts(
        t: &Topology,
        mut heads: Vec<NodeId>,
        assignment: BTreeMap<NodeId, NodeId>,
        max_hops: usize,
    ) -> Self {
        heads.sort_unstable();
        let roles = compute_roles(t, &heads);
        Self {
            heads,
            assignment,
            roles,
            max_hops,
        }
    }

    pub fn head_count(&self) -> usize {
        self.heads.len()
    }

    pub fn count_role(&self, role: Role) -> usize {
        self.roles.values().filter(|&&r| r == role).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("clustering serialization cannot fail")
    }

    pub fn from_json(text: &str, context: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            context: context.to_string(),
            reason: e.to_string(),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json() + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text, &path.display().to_string())
    }
}

fn compute_roles(t: &Topology, heads: &[NodeId]) -> BTreeMap<NodeId, Role> {
    let mut is_head = vec![false; t.len()];
    for &h in heads {
        is_head[h] = true;
    }
    t.nodes()
        .map(|v| {
            let role = if is_head[v] {
                Role::Head
            } else if t.adj(v).iter().filter(|&&u| is_head[u]).count() >= 2 {
                Role::Gateway
            } else {
                Role::Ordinary
            };
            (v, role)
        })
        .collect()
}

fn check_all(t: &Topology, heads: &[NodeId]) -> Result<()> {
    heads.iter().try_for_each(|&h| t.check(h))
}

/// Per-node coverage flags for a head set (one hop).
pub(crate) fn covered_mask(t: &Topology, heads: &[NodeId]) -> Vec<bool> {
    let mut covered = vec![false; t.len()];
    for &h in heads {
        covered[h] = true;
        for &u in t.adj(h) {
            covered[u] = true;
        }
    }
    covered
}

/// Nodes that are neither heads nor adjacent to a head.
pub fn uncovered_nodes(t: &Topology, heads: &[NodeId]) -> Result<Vec<NodeId>> {
    check_all(t, heads)?;
    let covered = covered_mask(t, heads);
    Ok(t.nodes().filter(|&v| !covered[v]).collect())
}

pub fn is_dominating(t: &Topology, heads: &[NodeId]) -> Result<bool> {
    uncovered_nodes(t, heads).map(|u| u.is_empty())
}

/// Every node is within `k` hops of some head.
pub fn is_k_dominating(t: &Topology, heads: &[NodeId], k: usize) -> Result<bool> {
    if k <= 1 {
        return is_dominating(t, heads);
    }
    check_all(t, heads)?;
    let mut covered = vec![false; t.len()];
    for &h in heads {
        covered[h] = true;
        for u in t.k_hop_neighborhood(h, k)? {
            covered[u] = true;
        }
    }
    Ok(covered.into_iter().all(|c| c))
}

pub fn is_independent_set(t: &Topology, heads: &[NodeId]) -> Result<bool> {
    check_all(t, heads)?;
    let mut is_head = vec![false; t.len()];
    for &h in heads {
        is_head[h] = true;
    }
    Ok(heads.iter().all(|&h| t.adj(h).iter().all(|&u| !is_head[u])))
}

/// Affiliates every non-head with its adjacent head of lowest id.
pub fn assign_members(t: &Topology, heads: &[NodeId]) -> Result<Clustering> {
    let uncovered = uncovered_nodes(t, heads)?;
    if !uncovered.is_empty() {
        return Err(Error::NotDominating { uncovered });
    }
    let mut heads = heads.to_vec();
    heads.sort_unstable();
    heads.dedup();
    let mut is_head = vec![false; t.len()];
    for &h in &heads {
        is_head[h] = true;
    }
    let assignment = t
        .nodes()
        .filter(|&v| !is_head[v])
        .map(|v| {
            // adjacency lists are sorted, so the first head found is the lowest id
            let head = *t
                .adj(v)
                .iter()
                .find(|&&u| is_head[u])
                .expect("dominated node");
            (v, head)
        })
        .collect();
    Ok(Clustering::from_parts(t, heads, assignment, 1))
}

/// Lower bound on the domination number, the larger of two certificates:
///
/// * counting: isolated nodes must be heads themselves and any other head
///   dominates at most `1 + Δ` nodes, so `γ ≥ isolated + ⌈(n − isolated) / (1 + Δ)⌉`;
/// * packing: nodes with pairwise disjoint closed neighborhoods each need a
///   distinct dominator. The packing is built greedily, lowest degree first.
pub fn domination_number_lower_bound(t: &Topology) -> usize {
    let isolated = t.nodes().filter(|&v| t.adj(v).is_empty()).count();
    let rest = t.len() - isolated;
    let counting = isolated + rest.div_ceil(1 + t.max_degree());
    counting.max(closed_neighborhood_packing(t).len())
}

/// Greedy set of nodes whose closed neighborhoods are pairwise disjoint.
pub fn closed_neighborhood_packing(t: &Topology) -> Vec<NodeId> {
    let mut order: Vec<_> = t.nodes().collect();
    order.sort_by_key(|&v| (t.adj(v).len(), v));
    let mut claimed = vec![false; t.len()];
    let mut packing = Vec::new();
    for v in order {
        let ball = || std::iter::once(v).chain(t.adj(v).iter().copied());
        if ball().all(|u| !claimed[u]) {
            ball().for_each(|u| claimed[u] = true);
            packing.push(v);
        }
    }
    packing.sort_unstable();
    packing
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    UnknownNode(NodeId),
    Uncovered(Vec<NodeId>),
    NotAHead {
        member: NodeId,
        head: NodeId,
    },
    TooFar {
        member: NodeId,
        head: NodeId,
        max_hops: usize,
    },
    Unassigned(NodeId),
    HeadAssigned(NodeId),
    WrongRole {
        node: NodeId,
        expected: Role,
        found: Option<Role>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownNode(v) => write!(f, "node {v} does not exist in the topology"),
            Violation::Uncovered(nodes) => write!(f, "uncovered nodes: {nodes:?}"),
            Violation::NotAHead { member, head } => {
                write!(
                    f,
                    "node {member} is assigned to {head}, which is not a head"
                )
            }
            Violation::TooFar {
                member,
                head,
                max_hops,
            } => write!(
                f,
                "node {member} is assigned to head {head} more than {max_hops} hop(s) away"
            ),
            Violation::Unassigned(v) => write!(f, "node {v} is neither a head nor assigned"),
            Violation::HeadAssigned(v) => write!(f, "head {v} also appears as a member"),
            Violation::WrongRole {
                node,
                expected,
                found,
            } => write!(f, "node {node} has role {found:?}, expected {expected:?}"),
        }
    }
}

/// Checks a clustering read from outside against a topology.
pub fn validate(t: &Topology, c: &Clustering) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = t.len();
    let mut unknown: Vec<NodeId> = c
        .heads
        .iter()
        .chain(c.assignment.keys())
        .chain(c.assignment.values())
        .chain(c.roles.keys())
        .copied()
        .filter(|&v| v >= n)
        .collect();
    unknown.sort_unstable();
    unknown.dedup();
    if !unknown.is_empty() {
        out.extend(unknown.into_iter().map(Violation::UnknownNode));
        return out;
    }

    let hops = c.max_hops.max(1);
    let dominated = if hops == 1 {
        uncovered_nodes(t, &c.heads).expect("ids checked")
    } else {
        let mut reach = vec![false; n];
        for &h in &c.heads {
            reach[h] = true;
            for u in t.k_hop_neighborhood(h, hops).expect("ids checked") {
                reach[u] = true;
            }
        }
        (0..n).filter(|&v| !reach[v]).collect()
    };
    if !dominated.is_empty() {
        out.push(Violation::Uncovered(dominated));
    }

    let mut is_head = vec![false; n];
    for &h in &c.heads {
        is_head[h] = true;
    }
    for (&member, &head) in &c.assignment {
        if is_head[member] {
            out.push(Violation::HeadAssigned(member));
        }
        if !is_head[head] {
            out.push(Violation::NotAHead { member, head });
            continue;
        }
        let close = if hops == 1 {
            t.adj(member).binary_search(&head).is_ok()
        } else {
            t.k_hop_neighborhood(head, hops)
                .expect("ids checked")
                .binary_search(&member)
                .is_ok()
        };
        if !close {
            out.push(Violation::TooFar {
                member,
                head,
                max_hops: hops,
            });
        }
    }
    for (v, &head) in is_head.iter().enumerate() {
        if !head && !c.assignment.contains_key(&v) {
            out.push(Violation::Unassigned(v));
        }
    }

    let expected = compute_roles(t, &c.heads);
    for (node, role) in expected {
        let found = c.roles.get(&node).copied();
        if found != Some(role) {
            out.push(Violation::WrongRole {
                node,
                expected: role,
                found,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomgraph::fixtures::*;

    #[test]
    fn dominating_examples() {
        assert!(is_dominating(&star(5), &[0]).unwrap());
        assert!(!is_dominating(&path(4), &[1]).unwrap());
        assert_eq!(uncovered_nodes(&path(4), &[1]).unwrap(), vec![3]);
        let p = path(6);
        let all: Vec<_> = p.nodes().collect();
        assert!(is_dominating(&p, &all).unwrap());
        assert!(matches!(
            is_dominating(&p, &[6]),
            Err(Error::NotFound { id: 6, .. })
        ));
    }

    #[test]
    fn assign_on_path() {
        let c = assign_members(&path(3), &[1]).unwrap();
        assert_eq!(c.heads, vec![1]);
        assert_eq!(c.assignment, BTreeMap::from([(0, 1), (2, 1)]));
        assert_eq!(c.roles[&1], Role::Head);
        assert_eq!(c.roles[&0], Role::Ordinary);
        assert_eq!(c.roles[&2], Role::Ordinary);
    }

    #[test]
    fn gateway_goes_to_lowest_head() {
        // node 0 adjacent to heads 2 and 5
        let t = Topology::from_edges(6, &[(0, 2), (0, 5), (1, 2), (3, 5), (4, 5)]).unwrap();
        let c = assign_members(&t, &[5, 2]).unwrap();
        assert_eq!(c.heads, vec![2, 5]);
        assert_eq!(c.assignment[&0], 2);
        assert_eq!(c.roles[&0], Role::Gateway);
        assert_eq!(c.roles[&1], Role::Ordinary);
        assert_eq!(c.count_role(Role::Gateway), 1);
    }

    #[test]
    fn all_heads() {
        let t = path(4);
        let c = assign_members(&t, &[0, 1, 2, 3]).unwrap();
        assert!(c.assignment.is_empty());
        assert!(c.roles.values().all(|&r| r == Role::Head));
    }

    #[test]
    fn assign_rejects_non_dominating() {
        match assign_members(&path(4), &[1]) {
            Err(Error::NotDominating { uncovered }) => assert_eq!(uncovered, vec![3]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn single_head_has_no_gateways() {
        let c = assign_members(&complete(6), &[3]).unwrap();
        assert_eq!(c.count_role(Role::Gateway), 0);
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(domination_number_lower_bound(&complete(10)), 1);
        assert_eq!(domination_number_lower_bound(&edgeless(10)), 10);
        assert_eq!(domination_number_lower_bound(&path(4)), 2);
        // counting gives ⌈7/3⌉ = 3, packing {0, 3, 6} also 3
        assert_eq!(domination_number_lower_bound(&path(7)), 3);
    }

    #[test]
    fn packing_beats_counting_on_spider() {
        // hub 0 with three legs of length 2: counting gives ⌈7/4⌉ = 2, the
        // three leg tips have disjoint closed neighborhoods
        let t = Topology::from_edges(7, &[(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        assert_eq!(closed_neighborhood_packing(&t), vec![2, 4, 6]);
        assert_eq!(domination_number_lower_bound(&t), 3);
    }

    #[test]
    fn k_domination() {
        let p = path(5);
        assert!(!is_dominating(&p, &[2]).unwrap());
        assert!(is_k_dominating(&p, &[2], 2).unwrap());
        assert!(!is_k_dominating(&p, &[0], 2).unwrap());
    }

    #[test]
    fn independence() {
        assert!(is_independent_set(&path(4), &[0, 2]).unwrap());
        assert!(!is_independent_set(&path(4), &[1, 2]).unwrap());
    }

    #[test]
    fn json_round_trip_and_schema() {
        let c = assign_members(&path(3), &[1]).unwrap();
        let text = c.to_json();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["heads"], serde_json::json!([1]));
        assert_eq!(v["assignment"]["0"], 1);
        assert_eq!(v["roles"]["1"], "head");
        assert_eq!(v["roles"]["0"], "ordinary");
        assert!(v.get("max_hops").is_none());
        assert_eq!(Clustering::from_json(&text, "mem").unwrap(), c);
    }

    #[test]
    fn validate_reports_violations() {
        let t = path(4);
        let good = assign_members(&t, &[1, 2]).unwrap();
        assert!(validate(&t, &good).is_empty());

        let mut far = good.clone();
        far.assignment.insert(3, 1);
        assert!(validate(&t, &far).contains(&Violation::TooFar {
            member: 3,
            head: 1,
            max_hops: 1
        }));

        let bad = Clustering {
            heads: vec![1],
            assignment: BTreeMap::from([(0, 1), (2, 1)]),
            roles: compute_roles(&t, &[1]),
            max_hops: 1,
        };
        let v = validate(&t, &bad);
        assert!(v.contains(&Violation::Uncovered(vec![3])));
        assert!(v.contains(&Violation::Unassigned(3)));

        let unknown = Clustering {
            heads: vec![9],
            ..bad
        };
        assert_eq!(validate(&t, &unknown), vec![Violation::UnknownNode(9)]);
    }
}
