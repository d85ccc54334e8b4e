//! Ant colony cluster-head selection.
//!
//! Each ant builds a dominating set head by head. A candidate `v` is scored
//! `Wt(v)·α + ph(v)·β`, where `Wt(v) = degree(v) + 1` and `ph(v)` is the
//! node's pheromone, and is drawn with probability proportional to that
//! score (or taken by argmax in greedy mode). Iteration `i` starts every ant
//! from node `i`; after all ants of an iteration finish, the smallest head
//! set of the iteration reinforces its nodes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geomgraph::{NodeId, Topology};

/// Which nodes may be picked as the next head.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateRule {
    /// Every non-head node that would cover at least one uncovered node.
    #[default]
    Coverage,
    /// Neighbors of the most recent head that would cover something new,
    /// falling back to [`CandidateRule::Coverage`] when there are none.
    Neighbors,
}

/// How the returned head set is chosen once all iterations have run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FinalSelection {
    /// Smallest head set seen by any ant, earliest on ties.
    #[default]
    BestFound,
    /// One extra greedy construction from the highest scoring node under the
    /// final pheromone.
    GreedyFinal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AcoParams {
    pub alpha: f64,
    pub beta: f64,
    pub ants: usize,
    pub evaporation_rate: f64,
    pub deposit_quantum: f64,
    pub greedy: bool,
    /// Score candidates by coverage gain instead of the static degree weight.
    pub dynamic_visibility: bool,
    pub candidates: CandidateRule,
    pub final_selection: FinalSelection,
    /// Number of iterations; `None` means one per node.
    pub iterations: Option<usize>,
    pub seed: u64,
}

impl Default for AcoParams {
    fn default() -> Self {
        Self {
            alpha: 9.0,
            beta: 1.0,
            ants: 20,
            evaporation_rate: 0.1,
            deposit_quantum: 1.0,
            greedy: false,
            dynamic_visibility: false,
            candidates: CandidateRule::Coverage,
            final_selection: FinalSelection::BestFound,
            iterations: None,
            seed: 0,
        }
    }
}

impl AcoParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::config("alpha", "must be finite and non-negative"));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::config("beta", "must be finite and non-negative"));
        }
        if self.alpha + self.beta <= 0.0 {
            return Err(Error::config("alpha", "alpha + beta must be positive"));
        }
        if self.ants == 0 {
            return Err(Error::config("ants", "need at least one ant"));
        }
        if !(0.0..1.0).contains(&self.evaporation_rate) {
            return Err(Error::config("evaporation_rate", "must lie in [0, 1)"));
        }
        if !(self.deposit_quantum.is_finite() && self.deposit_quantum > 0.0) {
            return Err(Error::config(
                "deposit_quantum",
                "must be finite and positive",
            ));
        }
        if self.iterations == Some(0) {
            return Err(Error::config("iterations", "need at least one iteration"));
        }
        Ok(())
    }

    fn score(&self, weight: f64, pheromone: f64) -> f64 {
        weight * self.alpha + pheromone * self.beta
    }
}

/// Per-node pheromone concentrations, all starting at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct PheromoneState {
    ph: Vec<f64>,
}

impl PheromoneState {
    pub fn new(n: usize) -> Self {
        Self { ph: vec![0.0; n] }
    }

    pub fn from_values(ph: Vec<f64>) -> Result<Self> {
        if ph.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::config(
                "pheromone",
                "values must be finite and non-negative",
            ));
        }
        Ok(Self { ph })
    }

    pub fn get(&self, v: NodeId) -> f64 {
        self.ph[v]
    }

    pub fn values(&self) -> &[f64] {
        &self.ph
    }

    pub fn len(&self) -> usize {
        self.ph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ph.is_empty()
    }

    /// Evaporates every node by `(1 − ρ)`, then deposits `Q·n / |heads|` on
    /// each node of `best_heads`.
    pub fn update(&mut self, best_heads: &[NodeId], params: &AcoParams) -> Result<()> {
        if best_heads.is_empty() {
            return Err(Error::Contract("pheromone deposit set must be non-empty"));
        }
        if let Some(&bad) = best_heads.iter().find(|&&h| h >= self.ph.len()) {
            return Err(Error::NotFound {
                id: bad,
                n: self.ph.len(),
            });
        }
        let keep = 1.0 - params.evaporation_rate;
        for p in &mut self.ph {
            *p *= keep;
        }
        let deposit = params.deposit_quantum * self.ph.len() as f64 / best_heads.len() as f64;
        for &h in best_heads {
            self.ph[h] += deposit;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcoSolution {
    pub heads: Vec<NodeId>,
    pub iteration_found: usize,
    /// Size of the smallest head set built in each iteration.
    pub head_count_history: Vec<usize>,
}

/// Static node weight: degree + 1.
pub fn node_weight(t: &Topology, v: NodeId) -> Result<f64> {
    Ok((t.degree(v)? + 1) as f64)
}

/// Normalized selection probabilities over `candidates`, in the given order.
pub fn selection_probability(
    t: &Topology,
    ph: &PheromoneState,
    params: &AcoParams,
    candidates: &[NodeId],
) -> Result<Vec<(NodeId, f64)>> {
    if candidates.is_empty() {
        return Err(Error::Contract("candidate set must be non-empty"));
    }
    let scores = candidates
        .iter()
        .map(|&v| Ok((v, params.score(node_weight(t, v)?, ph.get(v)))))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = scores.iter().map(|(_, s)| s).sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("all candidate scores are zero"));
    }
    Ok(scores.into_iter().map(|(v, s)| (v, s / total)).collect())
}

/// Number of still-uncovered nodes in `v`'s closed neighborhood.
pub fn coverage_gain(t: &Topology, covered: &[bool], v: NodeId) -> Result<usize> {
    t.check(v)?;
    if covered.len() != t.len() {
        return Err(Error::Contract(
            "coverage mask length must equal node count",
        ));
    }
    Ok(std::iter::once(v)
        .chain(t.adj(v).iter().copied())
        .filter(|&u| !covered[u])
        .count())
}

/// Incrementally maintained coverage state of one construction.
struct Construction<'a> {
    t: &'a Topology,
    covered: Vec<bool>,
    is_head: Vec<bool>,
    gain: Vec<usize>,
    uncovered: usize,
    heads: Vec<NodeId>,
}

impl<'a> Construction<'a> {
    fn new(t: &'a Topology) -> Self {
        Self {
            t,
            covered: vec![false; t.len()],
            is_head: vec![false; t.len()],
            gain: t.nodes().map(|v| t.adj(v).len() + 1).collect(),
            uncovered: t.len(),
            heads: Vec::new(),
        }
    }

    fn add_head(&mut self, h: NodeId) {
        self.is_head[h] = true;
        self.heads.push(h);
        let t = self.t;
        for u in std::iter::once(h).chain(t.adj(h).iter().copied()) {
            if !self.covered[u] {
                self.covered[u] = true;
                self.uncovered -= 1;
                self.gain[u] -= 1;
                for &w in t.adj(u) {
                    self.gain[w] -= 1;
                }
            }
        }
    }

    fn is_candidate(&self, v: NodeId) -> bool {
        !self.is_head[v] && self.gain[v] > 0
    }
}

fn pick(candidates: &[NodeId], scores: &[f64], greedy: bool, rng: &mut ChaCha8Rng) -> NodeId {
    let total: f64 = scores.iter().sum();
    if greedy {
        let mut best = 0;
        for i in 1..candidates.len() {
            // strict comparison keeps the lowest id on ties (candidates are ascending)
            if scores[i] > scores[best] {
                best = i;
            }
        }
        return candidates[best];
    }
    if total <= 0.0 {
        return candidates[rng.gen_range(0..candidates.len())];
    }
    let target = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, s) in scores.iter().enumerate() {
        acc += s;
        if acc > target {
            return candidates[i];
        }
    }
    // rounding can leave `acc` a hair below `target`; take the last positive score
    let last = scores
        .iter()
        .rposition(|&s| s > 0.0)
        .unwrap_or(candidates.len() - 1);
    candidates[last]
}

/// Builds one dominating set starting from `start`.
pub fn construct_solution(
    t: &Topology,
    ph: &PheromoneState,
    params: &AcoParams,
    start: NodeId,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<NodeId>> {
    t.check(start)?;
    if ph.len() != t.len() {
        return Err(Error::Contract(
            "pheromone state size must equal node count",
        ));
    }
    Ok(construct_unchecked(t, ph, params, start, rng))
}

fn construct_unchecked(
    t: &Topology,
    ph: &PheromoneState,
    params: &AcoParams,
    start: NodeId,
    rng: &mut ChaCha8Rng,
) -> Vec<NodeId> {
    let mut state = Construction::new(t);
    state.add_head(start);
    let mut candidates = Vec::with_capacity(t.len());
    let mut scores = Vec::with_capacity(t.len());
    while state.uncovered > 0 {
        candidates.clear();
        if params.candidates == CandidateRule::Neighbors {
            let last = *state.heads.last().expect("start head present");
            candidates.extend(
                t.adj(last)
                    .iter()
                    .copied()
                    .filter(|&v| state.is_candidate(v)),
            );
        }
        if candidates.is_empty() {
            candidates.extend(t.nodes().filter(|&v| state.is_candidate(v)));
        }
        scores.clear();
        scores.extend(candidates.iter().map(|&v| {
            let weight = if params.dynamic_visibility {
                state.gain[v]
            } else {
                t.adj(v).len() + 1
            };
            params.score(weight as f64, ph.get(v))
        }));
        let next = pick(&candidates, &scores, params.greedy, rng);
        state.add_head(next);
    }
    let mut heads = state.heads;
    heads.sort_unstable();
    heads
}

/// Random stream for one ant, derived from `(seed, iteration, ant)` only.
pub fn ant_rng(seed: u64, iteration: usize, ant: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((iteration as u64) << 32) ^ ant as u64);
    rng
}

pub fn solve(t: &Topology, params: &AcoParams) -> Result<AcoSolution> {
    params.validate()?;
    let n = t.len();
    if n == 0 {
        return Err(Error::Contract("topology must be non-empty"));
    }
    let iterations = params.iterations.unwrap_or(n);
    // argmax construction is deterministic, so extra ants would only repeat it
    let ants = if params.greedy { 1 } else { params.ants };

    let mut pheromone = PheromoneState::new(n);
    let mut best: Option<(Vec<NodeId>, usize)> = None;
    let mut history = Vec::with_capacity(iterations);

    for iteration in 0..iterations {
        let start = iteration % n;
        let mut iteration_best: Option<Vec<NodeId>> = None;
        for ant in 0..ants {
            let mut rng = ant_rng(params.seed, iteration, ant);
            let heads = construct_unchecked(t, &pheromone, params, start, &mut rng);
            if iteration_best
                .as_ref()
                .is_none_or(|b| heads.len() < b.len())
            {
                iteration_best = Some(heads);
            }
        }
        let iteration_best = iteration_best.expect("at least one ant");
        history.push(iteration_best.len());
        pheromone.update(&iteration_best, params)?;
        if best
            .as_ref()
            .is_none_or(|(b, _)| iteration_best.len() < b.len())
        {
            best = Some((iteration_best, iteration));
        }
    }

    let (heads, iteration_found) = match params.final_selection {
        FinalSelection::BestFound => best.expect("at least one iteration"),
        FinalSelection::GreedyFinal => {
            let start = t
                .nodes()
                .map(|v| {
                    (
                        v,
                        params.score((t.adj(v).len() + 1) as f64, pheromone.get(v)),
                    )
                })
                .fold(
                    (0, f64::NEG_INFINITY),
                    |acc, (v, s)| if s > acc.1 { (v, s) } else { acc },
                )
                .0;
            let final_params = AcoParams {
                greedy: true,
                ..params.clone()
            };
            let mut rng = ant_rng(params.seed, iterations, 0);
            let heads = construct_unchecked(t, &pheromone, &final_params, start, &mut rng);
            (heads, iterations)
        }
    };
    Ok(AcoSolution {
        heads,
        iteration_found,
        head_count_history: history,
    })
}
