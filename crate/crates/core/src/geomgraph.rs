//! Unit-disk topology graphs.
//!
//! Nodes are points in the plane. Two distinct nodes are adjacent iff their
//! Euclidean distance is strictly less than the transmission range. The
//! adjacency is derived from the positions and never stored on disk.

use std::collections::VecDeque;
use std::fs;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense node identifier, `0..n`.
pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Parameters for random node placement in an `area_side` x `area_side` square.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyConfig {
    pub n: usize,
    pub area_side: f64,
    pub range: f64,
    pub seed: u64,
}

impl TopologyConfig {
    pub fn new(n: usize, area_side: f64, range: f64, seed: u64) -> Self {
        Self {
            n,
            area_side,
            range,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("n", "node count must be at least 1"));
        }
        validate_area(self.area_side)?;
        validate_range(self.range)
    }
}

fn validate_area(area_side: f64) -> Result<()> {
    if !(area_side.is_finite() && area_side > 0.0) {
        return Err(Error::config(
            "area_side",
            format!("must be finite and positive, got {area_side}"),
        ));
    }
    Ok(())
}

fn validate_range(range: f64) -> Result<()> {
    if !(range.is_finite() && range > 0.0) {
        return Err(Error::config(
            "range",
            format!("must be finite and positive, got {range}"),
        ));
    }
    Ok(())
}

/// An immutable geometric graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Topology {
    area_side: f64,
    range: f64,
    positions: Vec<Point>,
    adjacency: Vec<Vec<NodeId>>,
}

impl Topology {
    /// Places `config.n` nodes uniformly at random in the square and derives
    /// the adjacency. Equal configs yield equal topologies.
    pub fn generate(config: &TopologyConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let positions = (0..config.n)
            .map(|_| {
                let x = rng.gen::<f64>() * config.area_side;
                let y = rng.gen::<f64>() * config.area_side;
                Point::new(x, y)
            })
            .collect();
        Self::from_positions(config.area_side, config.range, positions)
    }

    /// Builds a topology from explicit positions. Node `i` gets id `i`.
    /// Positions are not required to lie inside the area.
    pub fn from_positions(area_side: f64, range: f64, positions: Vec<Point>) -> Result<Self> {
        validate_area(area_side)?;
        validate_range(range)?;
        if positions.is_empty() {
            return Err(Error::config("nodes", "topology needs at least one node"));
        }
        if let Some(i) = positions
            .iter()
            .position(|p| !(p.x.is_finite() && p.y.is_finite()))
        {
            return Err(Error::config(
                "nodes",
                format!("node {i} has a non-finite coordinate"),
            ));
        }
        let n = positions.len();
        let mut adjacency = vec![Vec::new(); n];
        for u in 0..n {
            for v in (u + 1)..n {
                if positions[u].distance(&positions[v]) < range {
                    adjacency[u].push(v);
                    adjacency[v].push(u);
                }
            }
        }
        // Pushes happen in increasing order of the partner id for both
        // endpoints, so every list is already sorted.
        Ok(Self {
            area_side,
            range,
            positions,
            adjacency,
        })
    }

    /// Builds a topology directly from an edge list. Positions are all set to
    /// the origin; useful for hand-built graphs in tests and examples.
    pub fn from_edges(n: usize, edges: &[(NodeId, NodeId)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("n", "node count must be at least 1"));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(Error::NotFound { id: u, n });
            }
            if v >= n {
                return Err(Error::NotFound { id: v, n });
            }
            if u == v {
                return Err(Error::config("edges", format!("self-loop on node {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self {
            area_side: 1.0,
            range: 1.0,
            positions: vec![Point::new(0.0, 0.0); n],
            adjacency,
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn area_side(&self) -> f64 {
        self.area_side
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn nodes(&self) -> std::ops::Range<NodeId> {
        0..self.len()
    }

    pub fn check(&self, v: NodeId) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::NotFound {
                id: v,
                n: self.len(),
            })
        }
    }

    pub fn position(&self, v: NodeId) -> Result<Point> {
        self.check(v)?;
        Ok(self.positions[v])
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: NodeId) -> Result<&[NodeId]> {
        self.check(v)?;
        Ok(&self.adjacency[v])
    }

    /// Unchecked neighbor access for internal hot loops.
    pub(crate) fn adj(&self, v: NodeId) -> &[NodeId] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        self.neighbors(v).map(<[NodeId]>::len)
    }

    pub fn are_adjacent(&self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check(v)?;
        Ok(self.neighbors(u)?.binary_search(&v).is_ok())
    }

    /// `neighbors(v) ∪ {v}`, sorted.
    pub fn closed_neighborhood(&self, v: NodeId) -> Result<Vec<NodeId>> {
        let mut out = self.neighbors(v)?.to_vec();
        let at = out.partition_point(|&u| u < v);
        out.insert(at, v);
        Ok(out)
    }

    /// All nodes within `k` hops of `v`, excluding `v`, sorted.
    pub fn k_hop_neighborhood(&self, v: NodeId, k: usize) -> Result<Vec<NodeId>> {
        self.check(v)?;
        if k == 0 {
            return Err(Error::config("k", "hop count must be at least 1"));
        }
        let mut dist = vec![usize::MAX; self.len()];
        let mut queue = VecDeque::from([v]);
        dist[v] = 0;
        let mut out = Vec::new();
        while let Some(u) = queue.pop_front() {
            if dist[u] == k {
                continue;
            }
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    out.push(w);
                    queue.push_back(w);
                }
            }
        }
        out.sort_unstable();
        Ok(out)
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.edge_count() as f64 / self.len() as f64
    }

    pub fn to_json(&self) -> String {
        let file = GraphFile {
            area_side: Some(self.area_side),
            range: Some(self.range),
            nodes: self
                .positions
                .iter()
                .enumerate()
                .map(|(id, p)| NodeRecord { id, x: p.x, y: p.y })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serialization cannot fail")
    }

    pub fn from_json(text: &str, context: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            context: context.to_string(),
            reason: e.to_string(),
        })?;
        let area_side = file
            .area_side
            .ok_or_else(|| Error::config("area_side", "missing from graph file"))?;
        let range = file
            .range
            .ok_or_else(|| Error::config("range", "missing from graph file"))?;

        let n = file.nodes.len();
        let mut positions: Vec<Option<Point>> = vec![None; n];
        for (index, node) in file.nodes.iter().enumerate() {
            let parse_err = |reason: String| Error::Parse {
                context: format!("{context}: nodes[{index}]"),
                reason,
            };
            if node.id >= n {
                return Err(parse_err(format!(
                    "id {} out of range; ids must be dense 0..{n}",
                    node.id
                )));
            }
            if positions[node.id].is_some() {
                return Err(parse_err(format!("duplicate node id {}", node.id)));
            }
            if !(0.0..=area_side).contains(&node.x) || !(0.0..=area_side).contains(&node.y) {
                log::warn!(
                    "{context}: node {} at ({}, {}) lies outside the {area_side}x{area_side} area",
                    node.id,
                    node.x,
                    node.y
                );
            }
            positions[node.id] = Some(Point::new(node.x, node.y));
        }
        // n records with distinct ids in 0..n means every slot is filled.
        let positions = positions.into_iter().map(Option::unwrap).collect();
        Self::from_positions(area_side, range, positions)
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

#[derive(Serialize, Deserialize)]
struct GraphFile {
    area_side: Option<f64>,
    range: Option<f64>,
    nodes: Vec<NodeRecord>,
}

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: NodeId,
    x: f64,
    y: f64,
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn path(n: usize) -> Topology {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Topology::from_edges(n, &edges).unwrap()
    }

    /// Star with center 0 and `leaves` leaves.
    pub fn star(leaves: usize) -> Topology {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Topology::from_edges(leaves + 1, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Topology {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                edges.push((u, v));
            }
        }
        Topology::from_edges(n, &edges).unwrap()
    }

    pub fn edgeless(n: usize) -> Topology {
        Topology::from_edges(n, &[]).unwrap()
    }
}
