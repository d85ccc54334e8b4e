//! Command-line interface. Human summaries go to the supplied writer;
//! machine-readable artifacts are written only to `--out` paths.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::aco::{AcoParams, CandidateRule, FinalSelection};
use crate::baselines::WcaParams;
use crate::clustering::{validate, Clustering};
use crate::error::{Error, Result};
use crate::experiments::{self, ExperimentSpec, ExportFormat};
use crate::geomgraph::{Topology, TopologyConfig};
use crate::oracle::DEFAULT_NODE_LIMIT;
use crate::solver::{self, Algorithm, SolverConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_REFUSED: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "clusterhead",
    version,
    about = "Cluster-head selection for ad hoc network topologies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Place nodes uniformly at random and write the graph JSON.
    Generate {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        nodes: u64,
        #[arg(long, default_value_t = 1000.0)]
        area: f64,
        #[arg(long)]
        range: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one solver on a graph and write the clustering JSON.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        algorithm: Algorithm,
        #[command(flatten)]
        params: SolverArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that a clustering dominates a graph and respects adjacency.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        clustering: PathBuf,
    },
    /// Print head counts of several solvers on one graph.
    Compare {
        #[arg(long)]
        graph: PathBuf,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "aco,lic,hd,kconid,wca,greedy,exact"
        )]
        algorithms: Vec<Algorithm>,
        #[command(flatten)]
        params: SolverArgs,
    },
    /// Run a sweep described by a JSON spec and write CSV/JSON results.
    Experiment {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Weight multiplier in the selection score.
    #[arg(long, default_value_t = 9.0)]
    pub alpha: f64,
    /// Pheromone multiplier in the selection score.
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 20)]
    pub ants: usize,
    #[arg(long, default_value_t = 0.1)]
    pub evaporation: f64,
    #[arg(long, default_value_t = 1.0)]
    pub deposit: f64,
    /// Take the highest-probability candidate instead of sampling.
    #[arg(long)]
    pub greedy: bool,
    /// Score candidates by how many uncovered nodes they would cover.
    #[arg(long)]
    pub dynamic_visibility: bool,
    /// Prefer neighbors of the latest head as candidates.
    #[arg(long)]
    pub neighbor_candidates: bool,
    /// Finish with one greedy construction under the final pheromone.
    #[arg(long)]
    pub final_greedy: bool,
    /// ACO iterations (default: one per node).
    #[arg(long)]
    pub iterations: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.7)]
    pub w1: f64,
    #[arg(long, default_value_t = 0.2)]
    pub w2: f64,
    #[arg(long, default_value_t = 0.05)]
    pub w3: f64,
    #[arg(long, default_value_t = 0.05)]
    pub w4: f64,
    #[arg(long, default_value_t = 10.0)]
    pub ideal_degree: f64,
    /// KCONID hop radius.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Largest graph the exact solver will accept.
    #[arg(long, default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: usize,
}

impl SolverArgs {
    pub fn to_config(&self) -> SolverConfig {
        SolverConfig {
            aco: AcoParams {
                alpha: self.alpha,
                beta: self.beta,
                ants: self.ants,
                evaporation_rate: self.evaporation,
                deposit_quantum: self.deposit,
                greedy: self.greedy,
                dynamic_visibility: self.dynamic_visibility,
                candidates: if self.neighbor_candidates {
                    CandidateRule::Neighbors
                } else {
                    CandidateRule::Coverage
                },
                final_selection: if self.final_greedy {
                    FinalSelection::GreedyFinal
                } else {
                    FinalSelection::BestFound
                },
                iterations: self.iterations,
                seed: self.seed,
            },
            wca: WcaParams::with_weights(self.w1, self.w2, self.w3, self.w4, self.ideal_degree),
            kconid_k: self.k,
            node_limit: self.node_limit,
        }
    }
}

pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::NodeLimit { .. } => EXIT_REFUSED,
        _ => EXIT_USAGE,
    }
}

/// Runs one command. `Err` carries errors that map through [`exit_code`].
pub fn run(cli: Cli, out: &mut impl Write) -> Result<u8> {
    let stdout_err = |e: std::io::Error| Error::io("<stdout>", e);
    match cli.command {
        Command::Generate {
            nodes,
            area,
            range,
            seed,
            out: path,
        } => {
            let t = Topology::generate(&TopologyConfig::new(nodes as usize, area, range, seed))?;
            t.save(&path)?;
            writeln!(
                out,
                "nodes: {}\nedges: {}\nmean degree: {:.3}",
                t.len(),
                t.edge_count(),
                t.mean_degree()
            )
            .map_err(stdout_err)?;
            Ok(EXIT_OK)
        }
        Command::Solve {
            graph,
            algorithm,
            params,
            out: path,
        } => {
            let t = Topology::load(&graph)?;
            let start = Instant::now();
            let solved = solver::solve(&t, algorithm, &params.to_config())?;
            let elapsed = start.elapsed();
            if let Some(path) = path {
                solved.clustering.save(path)?;
            }
            writeln!(
                out,
                "algorithm: {algorithm}\nheads: {}\nwall time: {:.3} ms",
                solved.clustering.head_count(),
                elapsed.as_secs_f64() * 1e3
            )
            .map_err(stdout_err)?;
            Ok(EXIT_OK)
        }
        Command::Verify { graph, clustering } => {
            let t = Topology::load(&graph)?;
            let c = Clustering::load(&clustering)?;
            let violations = validate(&t, &c);
            if violations.is_empty() {
                writeln!(
                    out,
                    "ok: {} heads dominate {} nodes",
                    c.head_count(),
                    t.len()
                )
                .map_err(stdout_err)?;
                Ok(EXIT_OK)
            } else {
                for v in &violations {
                    writeln!(out, "violation: {v}").map_err(stdout_err)?;
                }
                Ok(EXIT_VERIFY_FAILED)
            }
        }
        Command::Compare {
            graph,
            algorithms,
            params,
        } => {
            let t = Topology::load(&graph)?;
            let config = params.to_config();
            writeln!(out, "{:<8} {:>6} {:>12}", "algo", "heads", "time_ms").map_err(stdout_err)?;
            for algorithm in algorithms {
                let start = Instant::now();
                let line = match solver::solve(&t, algorithm, &config) {
                    Ok(s) => format!(
                        "{:<8} {:>6} {:>12.3}",
                        algorithm.name(),
                        s.clustering.head_count(),
                        start.elapsed().as_secs_f64() * 1e3
                    ),
                    Err(e) => format!("{:<8} {:>6} {e}", algorithm.name(), "-"),
                };
                writeln!(out, "{line}").map_err(stdout_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Experiment { spec, out: dir } => {
            let spec = ExperimentSpec::load(&spec)?;
            let result = experiments::run(&spec)?;
            experiments::export(&result, ExportFormat::Csv, &dir)?;
            experiments::export(&result, ExportFormat::Json, &dir)?;
            writeln!(
                out,
                "{:<8} {:>5} {:>7} {:>7} {:>4} {:>4}",
                "algo", "n", "range", "mean", "min", "max"
            )
            .map_err(stdout_err)?;
            for a in &result.aggregates {
                writeln!(
                    out,
                    "{:<8} {:>5} {:>7} {:>7.2} {:>4} {:>4}",
                    a.algorithm.name(),
                    a.n,
                    a.range,
                    a.mean,
                    a.min,
                    a.max
                )
                .map_err(stdout_err)?;
            }
            let failed = result.failures().count();
            if failed > 0 {
                writeln!(
                    out,
                    "{failed} row(s) failed; see {}",
                    dir.join(experiments::ROWS_CSV).display()
                )
                .map_err(stdout_err)?;
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<u8>, String) {
        let cli = Cli::try_parse_from(std::iter::once("clusterhead").chain(args.iter().copied()))
            .unwrap();
        let mut buf = Vec::new();
        let code = run(cli, &mut buf);
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn zero_nodes_is_usage_error() {
        let err = Cli::try_parse_from([
            "clusterhead",
            "generate",
            "--nodes",
            "0",
            "--range",
            "5",
            "--out",
            "x",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_algorithm_is_usage_error() {
        let err = Cli::try_parse_from([
            "clusterhead",
            "compare",
            "--graph",
            "g",
            "--algorithms",
            "aco,bogus",
        ])
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn generate_then_solve_then_verify() {
        let dir = tempfile::tempdir().unwrap();
        let graph = dir.path().join("g.json");
        let g = graph.to_str().unwrap();
        let (code, text) = run_args(&[
            "generate", "--nodes", "30", "--range", "300", "--seed", "4", "--out", g,
        ]);
        assert_eq!(code.unwrap(), EXIT_OK);
        assert!(text.contains("nodes: 30"));

        let c = dir.path().join("c.json");
        let cs = c.to_str().unwrap();
        let (code, text) = run_args(&["solve", "--graph", g, "--algorithm", "hd", "--out", cs]);
        assert_eq!(code.unwrap(), EXIT_OK);
        assert!(text.contains("heads:"));

        let (code, text) = run_args(&["verify", "--graph", g, "--clustering", cs]);
        assert_eq!(code.unwrap(), EXIT_OK, "{text}");
    }

    #[test]
    fn exact_over_limit_maps_to_refusal() {
        let dir = tempfile::tempdir().unwrap();
        let graph = dir.path().join("g.json");
        let g = graph.to_str().unwrap();
        run_args(&["generate", "--nodes", "20", "--range", "300", "--out", g])
            .0
            .unwrap();
        let (res, _) = run_args(&["solve", "--graph", g, "--algorithm", "exact"]);
        assert_eq!(exit_code(&res.unwrap_err()), EXIT_REFUSED);
    }
}
