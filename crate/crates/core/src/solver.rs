//! Uniform dispatch over every implemented solver.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aco::{self, AcoParams};
use crate::baselines::{self, WcaParams};
use crate::clustering::{assign_members, is_k_dominating, Clustering};
use crate::error::{Error, Result};
use crate::geomgraph::Topology;
use crate::oracle::{self, DEFAULT_NODE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Aco,
    Lic,
    Hd,
    Kconid,
    Wca,
    Greedy,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 7] = [
        Algorithm::Aco,
        Algorithm::Lic,
        Algorithm::Hd,
        Algorithm::Kconid,
        Algorithm::Wca,
        Algorithm::Greedy,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Aco => "aco",
            Algorithm::Lic => "lic",
            Algorithm::Hd => "hd",
            Algorithm::Kconid => "kconid",
            Algorithm::Wca => "wca",
            Algorithm::Greedy => "greedy",
            Algorithm::Exact => "exact",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                format!("unknown algorithm '{s}' (expected one of aco, lic, hd, kconid, wca, greedy, exact)")
            })
    }
}

/// Parameters for every solver, so one value can drive any of them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub aco: AcoParams,
    pub wca: WcaParams,
    pub kconid_k: usize,
    pub node_limit: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            aco: AcoParams::default(),
            wca: WcaParams::default(),
            kconid_k: 1,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solved {
    pub clustering: Clustering,
    /// ACO iterations run; 0 for the one-shot solvers.
    pub iterations: usize,
}

/// Runs `algorithm` and checks the result covers the topology before
/// returning it.
pub fn solve(t: &Topology, algorithm: Algorithm, config: &SolverConfig) -> Result<Solved> {
    let (clustering, iterations) = match algorithm {
        Algorithm::Aco => {
            let sol = aco::solve(t, &config.aco)?;
            (assign_members(t, &sol.heads)?, sol.head_count_history.len())
        }
        Algorithm::Lic => (baselines::lowest_id(t), 0),
        Algorithm::Hd => (baselines::highest_degree(t), 0),
        Algorithm::Kconid => (baselines::kconid(t, config.kconid_k)?, 0),
        Algorithm::Wca => (baselines::wca(t, &config.wca)?, 0),
        Algorithm::Greedy => (assign_members(t, &oracle::greedy_min_dominating_set(t))?, 0),
        Algorithm::Exact => {
            let r = oracle::exact_min_dominating_set(t, config.node_limit)?;
            (assign_members(t, &r.witness)?, 0)
        }
    };
    if !is_k_dominating(t, &clustering.heads, clustering.max_hops)? {
        return Err(Error::NotDominating {
            uncovered: crate::clustering::uncovered_nodes(t, &clustering.heads)?,
        });
    }
    Ok(Solved {
        clustering,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geomgraph::fixtures::star;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("nope".parse::<Algorithm>().is_err());
    }

    #[test]
    fn every_algorithm_finds_the_star_center() {
        let t = star(6);
        for a in Algorithm::ALL {
            let solved = solve(&t, a, &SolverConfig::default()).unwrap();
            assert_eq!(solved.clustering.heads, vec![0], "{a}");
        }
    }
}
