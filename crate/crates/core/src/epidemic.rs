//! Discrete-time SIR and higher-order SIR (HSIR) simulation.
//!
//! Updates are synchronous. Within a step, susceptible nodes are visited in
//! index order and draw one uniform each if they have any infection pressure;
//! then every node infected at the start of the step draws once for recovery.
//! Run `r` uses ChaCha8 stream `r` of the seed, so runs can execute in any
//! order and still reproduce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphStats, NodeId};
use crate::rank::RankResult;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpidemicParams {
    /// Per-edge infection probability.
    pub beta: f64,
    /// Per-triangle infection probability (HSIR only).
    pub beta2: f64,
    /// Recovery probability per step.
    pub gamma: f64,
    pub seed_fraction: f64,
    pub runs: usize,
    pub rng_seed: u64,
}

impl Default for EpidemicParams {
    fn default() -> Self {
        Self {
            beta: 0.1,
            beta2: 0.0,
            gamma: 1.0,
            seed_fraction: 0.1,
            runs: 100,
            rng_seed: 42,
        }
    }
}

impl EpidemicParams {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("beta", self.beta), ("beta2", self.beta2), ("gamma", self.gamma)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::OutOfRange { name, range: "[0,1]" });
            }
        }
        // with gamma = 0 nobody recovers and a run never absorbs
        if self.gamma == 0.0 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                message: "must be positive".into(),
            });
        }
        if !(self.seed_fraction > 0.0 && self.seed_fraction < 1.0) {
            return Err(Error::OutOfRange {
                name: "seed_fraction",
                range: "(0,1)",
            });
        }
        if self.runs == 0 {
            return Err(Error::InvalidParameter {
                name: "runs",
                message: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub s: usize,
    pub i: usize,
    pub r: usize,
}

/// One run. `counts[0]` is the seeded state and the last entry has `i == 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpidemicTrace {
    pub counts: Vec<Counts>,
    /// Fraction of nodes ever infected.
    pub final_r: f64,
    pub steps: usize,
}

impl EpidemicTrace {
    /// Infection rate `(I + R) / n` at every step.
    pub fn infection_rate(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|c| (c.i + c.r) as f64 / (c.s + c.i + c.r) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpidemicSummary {
    pub n: usize,
    pub seeds: usize,
    pub runs: usize,
    /// Mean infection rate per step; shorter runs are held at their final value.
    pub mean_r: Vec<f64>,
    pub final_r_mean: f64,
    /// Sample standard deviation over runs.
    pub final_r_std: f64,
    pub final_r_stderr: f64,
    pub mean_steps: f64,
    pub max_steps: usize,
    #[serde(skip)]
    pub traces: Vec<EpidemicTrace>,
}

impl EpidemicSummary {
    pub fn from_traces(n: usize, seeds: usize, traces: Vec<EpidemicTrace>) -> Self {
        let runs = traces.len();
        let horizon = traces.iter().map(|t| t.counts.len()).max().unwrap_or(0);
        let mut mean_r = vec![0.0; horizon];
        for t in &traces {
            let rate = t.infection_rate();
            let last = *rate.last().unwrap_or(&0.0);
            for (step, m) in mean_r.iter_mut().enumerate() {
                *m += rate.get(step).copied().unwrap_or(last);
            }
        }
        mean_r.iter_mut().for_each(|m| *m /= runs as f64);
        let finals: Vec<f64> = traces.iter().map(|t| t.final_r).collect();
        let (final_r_mean, final_r_std) = mean_std(&finals);
        Self {
            n,
            seeds,
            runs,
            mean_r,
            final_r_mean,
            final_r_std,
            final_r_stderr: final_r_std / (runs as f64).sqrt(),
            mean_steps: traces.iter().map(|t| t.steps as f64).sum::<f64>() / runs as f64,
            max_steps: traces.iter().map(|t| t.steps).max().unwrap_or(0),
            traces,
        }
    }
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Epidemic threshold `<k> / (<k^2> - <k>)`.
pub fn spreading_threshold(stats: &GraphStats) -> Result<f64> {
    let k = stats.mean_degree;
    let k2 = stats.mean_sq_degree;
    if k2 - k <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "degree moments",
            message: format!("<k^2> = {k2} must exceed <k> = {k}"),
        });
    }
    Ok(k / (k2 - k))
}

/// `ceil(fraction * n)`, at least one.
pub fn seed_count(n: usize, fraction: f64) -> usize {
    // the slack keeps products such as 0.1 * 110 from rounding up to 12
    ((fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n.max(1))
}

/// The top `ceil(fraction * n)` nodes of a ranking.
pub fn select_seeds(rank: &RankResult, fraction: f64) -> Result<Vec<NodeId>> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::OutOfRange {
            name: "seed_fraction",
            range: "(0,1)",
        });
    }
    Ok(rank.top(seed_count(rank.len(), fraction)).to_vec())
}

/// Infection channels beyond plain edges.
struct Contagion {
    /// For each node, the other two members of every triangle containing it.
    triangles: Option<Vec<Vec<(NodeId, NodeId)>>>,
}

impl Contagion {
    fn new(n: usize, triangles: Option<&[[NodeId; 3]]>) -> Result<Self> {
        let Some(list) = triangles else {
            return Ok(Self { triangles: None });
        };
        let mut by_node = vec![Vec::new(); n];
        for &[a, b, c] in list {
            if a >= n || b >= n || c >= n || a == b || b == c || a == c {
                return Err(Error::InvalidParameter {
                    name: "triangles",
                    message: format!("bad triangle ({a}, {b}, {c})"),
                });
            }
            by_node[a].push((b, c));
            by_node[b].push((a, c));
            by_node[c].push((a, b));
        }
        Ok(Self {
            triangles: Some(by_node),
        })
    }
}

const SUSCEPTIBLE: u8 = 0;
const INFECTED: u8 = 1;
const RECOVERED: u8 = 2;

fn check_seeds(n: usize, seeds: &[NodeId]) -> Result<()> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter {
            name: "seeds",
            message: "no seed nodes".into(),
        });
    }
    let mut seen = vec![false; n];
    for &v in seeds {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::InvalidParameter {
                name: "seeds",
                message: format!("seed {v} is out of range or repeated"),
            });
        }
    }
    Ok(())
}

fn run_once(g: &Graph, contagion: &Contagion, seeds: &[NodeId], params: &EpidemicParams, run: u64) -> EpidemicTrace {
    let n = g.node_count();
    let mut rng = ChaCha8Rng::seed_from_u64(params.rng_seed);
    rng.set_stream(run);

    let mut state = vec![SUSCEPTIBLE; n];
    let mut infected: Vec<NodeId> = seeds.to_vec();
    infected.sort_unstable();
    for &v in &infected {
        state[v] = INFECTED;
    }
    let mut recovered = 0;
    let mut counts = vec![Counts {
        s: n - infected.len(),
        i: infected.len(),
        r: 0,
    }];
    let mut pressure = vec![0u32; n];
    let mut exposed: Vec<NodeId> = Vec::new();
    let edge_keep = 1.0 - params.beta;
    let triangle_keep = 1.0 - params.beta2;

    while !infected.is_empty() {
        exposed.clear();
        for &v in &infected {
            for &w in g.neighbors(v) {
                if state[w] == SUSCEPTIBLE {
                    if pressure[w] == 0 {
                        exposed.push(w);
                    }
                    pressure[w] += 1;
                }
            }
        }
        exposed.sort_unstable();
        let mut newly = Vec::new();
        for &w in &exposed {
            let n1 = pressure[w];
            pressure[w] = 0;
            let n2 = match &contagion.triangles {
                Some(t) if n1 >= 2 => t[w]
                    .iter()
                    .filter(|&&(a, b)| state[a] == INFECTED && state[b] == INFECTED)
                    .count() as i32,
                _ => 0,
            };
            let p = 1.0 - edge_keep.powi(n1 as i32) * triangle_keep.powi(n2);
            if rng.random::<f64>() < p {
                newly.push(w);
            }
        }
        let mut still = Vec::with_capacity(infected.len() + newly.len());
        for &v in &infected {
            if rng.random::<f64>() < params.gamma {
                state[v] = RECOVERED;
                recovered += 1;
            } else {
                still.push(v);
            }
        }
        for &w in &newly {
            state[w] = INFECTED;
        }
        still.extend(newly);
        still.sort_unstable();
        infected = still;
        counts.push(Counts {
            s: n - infected.len() - recovered,
            i: infected.len(),
            r: recovered,
        });
    }
    EpidemicTrace {
        steps: counts.len() - 1,
        final_r: recovered as f64 / n as f64,
        counts,
    }
}

fn simulate(
    g: &Graph,
    triangles: Option<&[[NodeId; 3]]>,
    seeds: &[NodeId],
    params: &EpidemicParams,
) -> Result<EpidemicSummary> {
    params.validate()?;
    let n = g.node_count();
    check_seeds(n, seeds)?;
    let contagion = Contagion::new(n, triangles)?;
    let traces: Vec<EpidemicTrace> = (0..params.runs as u64)
        .into_par_iter()
        .map(|run| run_once(g, &contagion, seeds, params, run))
        .collect();
    Ok(EpidemicSummary::from_traces(n, seeds.len(), traces))
}

/// Plain SIR; `params.beta2` is ignored.
pub fn simulate_sir(g: &Graph, seeds: &[NodeId], params: &EpidemicParams) -> Result<EpidemicSummary> {
    simulate(g, None, seeds, params)
}

/// SIR with an extra channel: a susceptible node in a triangle whose other
/// two members are infected catches it with probability `beta2`.
pub fn simulate_hsir(
    g: &Graph,
    triangles: &[[NodeId; 3]],
    seeds: &[NodeId],
    params: &EpidemicParams,
) -> Result<EpidemicSummary> {
    simulate(g, Some(triangles), seeds, params)
}
