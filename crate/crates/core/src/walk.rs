//! Sampled walks and the Monte Carlo occupation estimate.
//!
//! Walk `k` of a run with master seed `s` draws from the ChaCha8 stream
//! `(s, k)`, so estimates do not depend on how walks are spread over workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::GraphInstance;
use crate::occupation::OccupationVector;
use crate::weights::WeightAssignment;

pub const DEFAULT_STEP_CAP: u64 = 10_000_000;

/// A finite walk together with its visit counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkTrace {
    pub vertices: Vec<usize>,
    pub trace: Vec<u32>,
}

impl WalkTrace {
    pub fn from_vertices(n: usize, vertices: Vec<usize>) -> Self {
        let mut trace = vec![0u32; n];
        for &v in &vertices {
            trace[v] += 1;
        }
        Self { vertices, trace }
    }

    /// Number of steps.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Consecutive vertices adjacent, trace consistent with the sequence.
    pub fn is_walk(&self, g: &GraphInstance) -> bool {
        self.vertices.windows(2).all(|p| g.adjacent(p[0], p[1]))
            && self.trace.len() == g.n()
            && *self == WalkTrace::from_vertices(g.n(), self.vertices.clone())
    }

    /// Starts at `v_in`, ends at `v_out` and visits `v_out` only there.
    pub fn is_proper(&self, g: &GraphInstance) -> bool {
        self.is_walk(g)
            && self.vertices.first() == Some(&g.v_in())
            && self.vertices.last() == Some(&g.v_out())
            && self.trace[g.v_out()] == 1
    }
}

/// Precomputed neighbour tables for sampling steps.
#[derive(Debug, Clone)]
pub struct WalkSampler<'g> {
    g: &'g GraphInstance,
    cumulative: Vec<Vec<f64>>,
    step_cap: u64,
}

impl<'g> WalkSampler<'g> {
    pub fn new(g: &'g GraphInstance, w: &WeightAssignment) -> Self {
        let rho = w.rho();
        let cumulative = (0..g.n())
            .map(|x| {
                let mut acc = 0.0;
                g.neighbors(x)
                    .iter()
                    .map(|&y| {
                        acc += rho[y];
                        acc
                    })
                    .collect()
            })
            .collect();
        Self {
            g,
            cumulative,
            step_cap: DEFAULT_STEP_CAP,
        }
    }

    pub fn with_step_cap(mut self, cap: u64) -> Self {
        self.step_cap = cap;
        self
    }

    fn step<R: Rng>(&self, x: usize, rng: &mut R) -> usize {
        let cum = &self.cumulative[x];
        let u = rng.random::<f64>() * cum[cum.len() - 1];
        let k = cum.partition_point(|&c| c <= u).min(cum.len() - 1);
        self.g.neighbors(x)[k]
    }

    /// Runs one walk from `v_in` until it reaches `v_out`, calling `visit`
    /// on each vertex including both ends.
    pub fn run<R: Rng, F: FnMut(usize)>(&self, rng: &mut R, mut visit: F) -> Result<u64> {
        let out = self.g.v_out();
        let mut x = self.g.v_in();
        visit(x);
        let mut steps = 0u64;
        while x != out {
            if steps >= self.step_cap {
                return Err(Error::StepLimitExceeded(self.step_cap));
            }
            x = self.step(x, rng);
            visit(x);
            steps += 1;
        }
        Ok(steps)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Result<WalkTrace> {
        let mut vertices = Vec::new();
        self.run(rng, |v| vertices.push(v))?;
        Ok(WalkTrace::from_vertices(self.g.n(), vertices))
    }
}

/// Samples one proper walk.
pub fn simulate_walk<R: Rng>(g: &GraphInstance, w: &WeightAssignment, rng: &mut R) -> Result<WalkTrace> {
    WalkSampler::new(g, w).sample(rng)
}

/// Random stream for walk `index` under `seed`.
pub fn walk_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, Copy)]
pub struct MonteCarloConfig {
    pub walks: u64,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    pub step_cap: u64,
}

impl MonteCarloConfig {
    pub fn new(walks: u64, seed: u64) -> Self {
        Self {
            walks,
            seed,
            workers: None,
            step_cap: DEFAULT_STEP_CAP,
        }
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

/// Empirical mean occupation with per-vertex standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalOccupation {
    pub mean: OccupationVector,
    pub std_err: Vec<f64>,
    pub walks: u64,
}

#[derive(Clone)]
struct Tally {
    sum: Vec<u64>,
    sum_sq: Vec<u128>,
}

impl Tally {
    fn new(n: usize) -> Self {
        Self {
            sum: vec![0; n],
            sum_sq: vec![0; n],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (a, b) in self.sum.iter_mut().zip(other.sum) {
            *a += b;
        }
        for (a, b) in self.sum_sq.iter_mut().zip(other.sum_sq) {
            *a += b;
        }
        self
    }
}

/// Averages the trace vectors of `cfg.walks` independent walks.
///
/// Counts are accumulated as integers, so the result is bit-identical for
/// any number of workers.
pub fn empirical_occupation(g: &GraphInstance, w: &WeightAssignment, cfg: &MonteCarloConfig) -> Result<EmpiricalOccupation> {
    if cfg.walks == 0 {
        return Err(Error::Format("number of walks must be at least 1".into()));
    }
    let n = g.n();
    let sampler = WalkSampler::new(g, w).with_step_cap(cfg.step_cap);
    let run = || -> Result<Tally> {
        (0..cfg.walks)
            .into_par_iter()
            .try_fold(
                || (Tally::new(n), vec![0u64; n]),
                |(mut tally, mut counts), k| {
                    counts.iter_mut().for_each(|c| *c = 0);
                    let mut rng = walk_rng(cfg.seed, k);
                    sampler.run(&mut rng, |v| counts[v] += 1)?;
                    for (v, &c) in counts.iter().enumerate() {
                        tally.sum[v] += c;
                        tally.sum_sq[v] += (c as u128) * (c as u128);
                    }
                    Ok::<_, Error>((tally, counts))
                },
            )
            .map(|r| r.map(|(t, _)| t))
            .try_reduce(|| Tally::new(n), |a, b| Ok(a.merge(b)))
    };
    let tally = with_workers(cfg.workers, run)??;

    let nw = cfg.walks as f64;
    let mean: Vec<f64> = tally.sum.iter().map(|&s| s as f64 / nw).collect();
    let std_err = (0..n)
        .map(|v| {
            if cfg.walks < 2 {
                return 0.0;
            }
            let s = tally.sum[v] as f64;
            let var = ((tally.sum_sq[v] as f64) - s * s / nw).max(0.0) / (nw - 1.0);
            (var / nw).sqrt()
        })
        .collect();
    Ok(EmpiricalOccupation {
        mean: OccupationVector::empirical(mean),
        std_err,
        walks: cfg.walks,
    })
}

/// Samples walks `0..walks` under `seed`, in walk order.
pub fn sample_walks(
    g: &GraphInstance,
    w: &WeightAssignment,
    seed: u64,
    walks: u64,
    workers: Option<usize>,
) -> Result<Vec<WalkTrace>> {
    let sampler = WalkSampler::new(g, w);
    with_workers(workers, || {
        (0..walks)
            .into_par_iter()
            .map(|k| sampler.sample(&mut walk_rng(seed, k)))
            .collect()
    })?
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
fn with_workers<T: Send, F: FnOnce() -> T + Send>(workers: Option<usize>, f: F) -> Result<T> {
    match workers {
        Some(k) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Format(format!("thread pool: {e}")))?
            .install(f)),
        None => Ok(f()),
    }
}
