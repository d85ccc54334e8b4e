//! Benchmark sweeps over (node count, range, seed, algorithm).

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aco::AcoParams;
use crate::baselines::WcaParams;
use crate::error::{Error, Result};
use crate::geomgraph::{Topology, TopologyConfig};
use crate::oracle::DEFAULT_NODE_LIMIT;
use crate::solver::{self, Algorithm, SolverConfig};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentSpec {
    pub node_counts: Vec<usize>,
    pub ranges: Vec<f64>,
    pub area_side: f64,
    pub seeds: Vec<u64>,
    pub algorithms: Vec<Algorithm>,
    pub aco: AcoParams,
    pub wca: WcaParams,
    pub kconid_k: usize,
    pub node_limit: usize,
}

impl Default for ExperimentSpec {
    /// Table grid with no seeds; callers must supply at least one.
    fn default() -> Self {
        Self {
            node_counts: vec![50, 100, 200, 300, 400],
            ranges: vec![200.0, 300.0, 400.0],
            area_side: 1000.0,
            seeds: Vec::new(),
            algorithms: vec![Algorithm::Aco],
            aco: AcoParams::default(),
            wca: WcaParams::default(),
            kconid_k: 1,
            node_limit: DEFAULT_NODE_LIMIT,
        }
    }
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_counts.is_empty() {
            return Err(Error::config("node_counts", "must not be empty"));
        }
        if self.ranges.is_empty() {
            return Err(Error::config("ranges", "must not be empty"));
        }
        if self.seeds.is_empty() {
            return Err(Error::config("seeds", "need at least one seed"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "must not be empty"));
        }
        for &n in &self.node_counts {
            for &range in &self.ranges {
                TopologyConfig::new(n, self.area_side, range, 0).validate()?;
            }
        }
        if self.algorithms.contains(&Algorithm::Aco) {
            self.aco.validate()?;
        }
        if self.algorithms.contains(&Algorithm::Wca) {
            self.wca.validate()?;
        }
        if self.kconid_k == 0 {
            return Err(Error::config("kconid_k", "hop count must be at least 1"));
        }
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse {
            context: path.display().to_string(),
            reason: e.to_string(),
        })
    }

    fn solver_config(&self, seed: u64) -> SolverConfig {
        SolverConfig {
            aco: AcoParams {
                seed,
                ..self.aco.clone()
            },
            wca: self.wca.clone(),
            kconid_k: self.kconid_k,
            node_limit: self.node_limit,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub algorithm: Algorithm,
    pub n: usize,
    pub range: f64,
    pub seed: u64,
    /// `None` when the solver failed; see `error`.
    pub head_count: Option<usize>,
    pub iterations_used: usize,
    pub wall_time_ms: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub algorithm: Algorithm,
    pub n: usize,
    pub range: f64,
    pub mean: f64,
    pub min: usize,
    pub max: usize,
    pub runs: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
    pub aggregates: Vec<Aggregate>,
}

impl ExperimentResult {
    pub fn from_rows(mut rows: Vec<ResultRow>) -> Self {
        rows.sort_by(|a, b| {
            a.algorithm
                .cmp(&b.algorithm)
                .then(a.n.cmp(&b.n))
                .then(a.range.total_cmp(&b.range))
                .then(a.seed.cmp(&b.seed))
        });
        let aggregates = aggregate(&rows);
        Self { rows, aggregates }
    }

    pub fn aggregate_for(&self, algorithm: Algorithm, n: usize, range: f64) -> Option<&Aggregate> {
        self.aggregates
            .iter()
            .find(|a| a.algorithm == algorithm && a.n == n && a.range == range)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(|r| r.error.is_some())
    }
}

/// Mean/min/max head count per (algorithm, n, range) over successful rows.
/// Expects rows sorted by that key.
fn aggregate(rows: &[ResultRow]) -> Vec<Aggregate> {
    let mut out: Vec<Aggregate> = Vec::new();
    for row in rows {
        let Some(count) = row.head_count else {
            continue;
        };
        match out.last_mut() {
            Some(agg)
                if agg.algorithm == row.algorithm && agg.n == row.n && agg.range == row.range =>
            {
                agg.mean += count as f64;
                agg.min = agg.min.min(count);
                agg.max = agg.max.max(count);
                agg.runs += 1;
            }
            _ => out.push(Aggregate {
                algorithm: row.algorithm,
                n: row.n,
                range: row.range,
                mean: count as f64,
                min: count,
                max: count,
                runs: 1,
            }),
        }
    }
    for agg in &mut out {
        agg.mean /= agg.runs as f64;
    }
    out
}

/// Runs every (n, range, seed) topology through every algorithm. Jobs run in
/// parallel; the result is sorted so it does not depend on scheduling.
pub fn run(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let mut jobs = Vec::new();
    for &n in &spec.node_counts {
        for &range in &spec.ranges {
            for &seed in &spec.seeds {
                jobs.push((n, range, seed));
            }
        }
    }
    let rows: Vec<ResultRow> = jobs
        .into_par_iter()
        .flat_map_iter(|(n, range, seed)| run_job(spec, n, range, seed))
        .collect();
    Ok(ExperimentResult::from_rows(rows))
}

fn run_job(spec: &ExperimentSpec, n: usize, range: f64, seed: u64) -> Vec<ResultRow> {
    let topology = Topology::generate(&TopologyConfig::new(n, spec.area_side, range, seed));
    let config = spec.solver_config(seed);
    spec.algorithms
        .iter()
        .map(|&algorithm| {
            let start = Instant::now();
            let outcome = topology
                .as_ref()
                .map_err(|e| e.to_string())
                .and_then(|t| solver::solve(t, algorithm, &config).map_err(|e| e.to_string()));
            let wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            let (head_count, iterations_used, error) = match outcome {
                Ok(solved) => (
                    Some(solved.clustering.head_count()),
                    solved.iterations,
                    None,
                ),
                Err(reason) => (None, 0, Some(reason)),
            };
            ResultRow {
                algorithm,
                n,
                range,
                seed,
                head_count,
                iterations_used,
                wall_time_ms,
                error,
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

pub const ROWS_CSV: &str = "rows.csv";
pub const AGGREGATES_CSV: &str = "aggregates.csv";
pub const RESULTS_JSON: &str = "results.json";

/// Writes `rows.csv` + `aggregates.csv`, or `results.json`, into `dir`.
pub fn export(
    result: &ExperimentResult,
    format: ExportFormat,
    dir: impl AsRef<Path>,
) -> Result<Vec<PathBuf>> {
    if result.rows.is_empty() {
        return Err(Error::Contract("cannot export an empty result"));
    }
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    match format {
        ExportFormat::Csv => {
            let rows = dir.join(ROWS_CSV);
            fs::write(&rows, rows_csv(result)).map_err(|e| Error::io(&rows, e))?;
            let aggregates = dir.join(AGGREGATES_CSV);
            fs::write(&aggregates, aggregates_csv(result))
                .map_err(|e| Error::io(&aggregates, e))?;
            Ok(vec![rows, aggregates])
        }
        ExportFormat::Json => {
            let path = dir.join(RESULTS_JSON);
            let text =
                serde_json::to_string_pretty(result).expect("result serialization cannot fail");
            fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
            Ok(vec![path])
        }
    }
}

pub fn load_json(path: impl AsRef<Path>) -> Result<ExperimentResult> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        context: path.display().to_string(),
        reason: e.to_string(),
    })
}

fn csv_string(write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w).expect("writing csv to memory cannot fail");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// `algorithm,n,range,seed,head_count,wall_time_ms,iterations_used,error`.
/// Failed rows leave `head_count` empty.
pub fn rows_csv(result: &ExperimentResult) -> String {
    csv_string(|w| {
        w.write_record([
            "algorithm",
            "n",
            "range",
            "seed",
            "head_count",
            "wall_time_ms",
            "iterations_used",
            "error",
        ])?;
        for r in &result.rows {
            w.write_record([
                r.algorithm.name().to_string(),
                r.n.to_string(),
                r.range.to_string(),
                r.seed.to_string(),
                r.head_count.map(|c| c.to_string()).unwrap_or_default(),
                format!("{:.3}", r.wall_time_ms),
                r.iterations_used.to_string(),
                r.error.clone().unwrap_or_default(),
            ])?;
        }
        Ok(())
    })
}

/// `algorithm,n,range,mean,min,max`.
pub fn aggregates_csv(result: &ExperimentResult) -> String {
    csv_string(|w| {
        w.write_record(["algorithm", "n", "range", "mean", "min", "max"])?;
        for a in &result.aggregates {
            w.write_record([
                a.algorithm.name().to_string(),
                a.n.to_string(),
                a.range.to_string(),
                a.mean.to_string(),
                a.min.to_string(),
                a.max.to_string(),
            ])?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(head_count: usize, seed: u64) -> ResultRow {
        ResultRow {
            algorithm: Algorithm::Aco,
            n: 50,
            range: 200.0,
            seed,
            head_count: Some(head_count),
            iterations_used: 50,
            wall_time_ms: 1.5,
            error: None,
        }
    }

    #[test]
    fn aggregate_arithmetic() {
        let result = ExperimentResult::from_rows(vec![row(9, 3), row(7, 1), row(8, 2)]);
        assert_eq!(result.aggregates.len(), 1);
        let a = &result.aggregates[0];
        assert_eq!((a.mean, a.min, a.max, a.runs), (8.0, 7, 9, 3));
        assert_eq!(
            result.rows.iter().map(|r| r.seed).collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
    }

    #[test]
    fn failed_rows_are_excluded_from_aggregates() {
        let mut failed = row(0, 4);
        failed.head_count = None;
        failed.error = Some("boom".into());
        let result = ExperimentResult::from_rows(vec![row(5, 1), failed]);
        assert_eq!(result.aggregates[0].runs, 1);
        assert_eq!(result.failures().count(), 1);
        assert!(rows_csv(&result).contains(",,"));
    }

    #[test]
    fn one_row_csv() {
        let result = ExperimentResult::from_rows(vec![row(7, 1)]);
        let text = rows_csv(&result);
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("algorithm,n,range,seed,head_count,wall_time_ms"));
        assert_eq!(lines[1], "aco,50,200,1,7,1.500,50,");
        assert_eq!(
            aggregates_csv(&result),
            "algorithm,n,range,mean,min,max\naco,50,200,7,7,7\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let result = ExperimentResult::from_rows(vec![row(7, 1), row(9, 2)]);
        let paths = export(&result, ExportFormat::Json, dir.path()).unwrap();
        assert_eq!(load_json(&paths[0]).unwrap(), result);
    }

    #[test]
    fn export_rejects_empty_and_unwritable() {
        let dir = tempfile::tempdir().unwrap();
        assert!(export(&ExperimentResult::default(), ExportFormat::Csv, dir.path()).is_err());
        let file = dir.path().join("plain");
        fs::write(&file, "x").unwrap();
        let result = ExperimentResult::from_rows(vec![row(7, 1)]);
        assert!(matches!(
            export(&result, ExportFormat::Csv, file.join("sub")),
            Err(Error::Io { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            ExperimentSpec::default().validate(),
            Err(Error::Config { field: "seeds", .. })
        ));
        let spec = ExperimentSpec {
            seeds: vec![1],
            node_counts: vec![],
            ..ExperimentSpec::default()
        };
        assert!(matches!(
            spec.validate(),
            Err(Error::Config {
                field: "node_counts",
                ..
            })
        ));
        let spec: ExperimentSpec = serde_json::from_str(r#"{"seeds": [1, 2]}"#).unwrap();
        assert!(spec.validate().is_ok());
        assert_eq!(spec.node_counts, vec![50, 100, 200, 300, 400]);
        assert!(serde_json::from_str::<ExperimentSpec>(r#"{"sedes": [1]}"#).is_err());
    }

    #[test]
    fn small_run_is_deterministic_and_dominating() {
        let spec = ExperimentSpec {
            node_counts: vec![20, 30],
            ranges: vec![250.0, 400.0],
            seeds: vec![1, 2],
            algorithms: Algorithm::ALL.to_vec(),
            aco: AcoParams {
                ants: 3,
                ..AcoParams::default()
            },
            ..ExperimentSpec::default()
        };
        let a = run(&spec).unwrap();
        let b = run(&spec).unwrap();
        let counts = |r: &ExperimentResult| r.rows.iter().map(|r| r.head_count).collect::<Vec<_>>();
        assert_eq!(counts(&a), counts(&b));
        assert_eq!(aggregates_csv(&a), aggregates_csv(&b));
        // exact refuses n > 14, every other row succeeds
        assert_eq!(a.failures().count(), 8);
        assert!(a.failures().all(|r| r.algorithm == Algorithm::Exact));
        assert_eq!(a.rows.len(), 2 * 2 * 2 * 7);
    }
}
