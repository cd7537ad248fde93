//! Seeded simulation of the dice process.
//!
//! # Generator
//!
//! All randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`). For a job
//! the generator is built with `seed_from_u64(seed)` and then moved to stream
//! `(replica << 32) | slot` via `set_stream`, where `slot` is `1 + source
//! index` for kernel estimation and `0` for a long chain run. A uniform draw
//! is `(next_u64() >> 11) * 2^-53`; a Bernoulli(p) trial succeeds when the
//! uniform is below `p`. Binomials are sums of Bernoulli trials and the
//! rethrow trinomial is `p1 ~ Bin(M, beta1)`, `p2 ~ Bin(M - p1, beta2 / (1 - beta1))`.
//!
//! Each job owns its stream and results are merged by integer addition in
//! job order, so outputs do not depend on the worker count.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chain::{build_state_space, ChainParams, StateSpace};
use crate::error::{Error, Result};

pub const GENERATOR: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64 + set_stream((replica << 32) | slot)";

/// Fraction of each chain run discarded before counting occupancy.
pub const BURN_IN_FRACTION: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimConfig {
    pub seed: u64,
    pub replicas: u32,
    pub steps_per_replica: u64,
    pub params: ChainParams<f64>,
    /// Worker threads; `0` uses the global default. Never changes results.
    pub workers: usize,
}

impl SimConfig {
    pub fn new(seed: u64, replicas: u32, steps_per_replica: u64, params: ChainParams<f64>) -> Result<Self> {
        if replicas == 0 {
            return Err(Error::InvalidParameter { name: "replicas", reason: "must be positive".into() });
        }
        if steps_per_replica == 0 {
            return Err(Error::InvalidParameter { name: "steps_per_replica", reason: "must be positive".into() });
        }
        Ok(SimConfig { seed, replicas, steps_per_replica, params, workers: 0 })
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

/// Seeded stream for one `(replica, slot)` job.
pub fn stream(seed: u64, replica: u32, slot: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((replica as u64) << 32) | slot as u64);
    rng
}

pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn sample_binomial(rng: &mut impl RngCore, m: u32, p: f64) -> u32 {
    (0..m).filter(|_| uniform(rng) < p).count() as u32
}

/// `(p1, p2)` from a trinomial with `m` trials by sequential conditioning.
pub fn sample_trinomial(rng: &mut impl RngCore, m: u32, b1: f64, b2: f64) -> (u32, u32) {
    let p1 = sample_binomial(rng, m, b1);
    let p2 = sample_binomial(rng, m - p1, b2 / (1.0 - b1));
    (p1, p2)
}

/// One transition from `state`.
pub fn step_once(state: (u32, u32), params: &ChainParams<f64>, rng: &mut impl RngCore) -> (u32, u32) {
    let k1 = sample_binomial(rng, state.0, params.alpha1);
    let k2 = sample_binomial(rng, state.1, params.alpha2);
    let (p1, p2) = sample_trinomial(rng, params.n - k1 - k2, params.beta1, params.beta2);
    (k1 + p1, k2 + p2)
}

/// Runs `jobs` on `workers` threads (or sequentially) and returns results in
/// job order.
fn run_jobs<T: Send>(workers: usize, jobs: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let go = || (0..jobs).into_par_iter().map(&f).collect::<Vec<T>>();
        if workers == 0 {
            return go();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(go),
            Err(_) => go(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        (0..jobs).map(f).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmpiricalKernel {
    pub space: StateSpace,
    /// `counts[dest][src]`.
    pub counts: Vec<Vec<u64>>,
    /// Trials per source.
    pub totals: Vec<u64>,
}

impl EmpiricalKernel {
    pub fn estimates(&self) -> Vec<Vec<f64>> {
        self.counts
            .iter()
            .map(|row| row.iter().zip(&self.totals).map(|(&c, &t)| c as f64 / t as f64).collect())
            .collect()
    }

    pub fn column(&self, src: usize) -> Vec<f64> {
        self.counts.iter().map(|row| row[src] as f64 / self.totals[src] as f64).collect()
    }
}

/// `replicas * steps_per_replica` independent single steps from every state.
pub fn estimate_kernel(config: &SimConfig) -> EmpiricalKernel {
    let space = build_state_space(config.params.n);
    let n = space.len();
    let jobs = config.replicas as usize * n;
    let per_job = run_jobs(config.workers, jobs, |job| {
        let replica = (job / n) as u32;
        let src = job % n;
        let mut rng = stream(config.seed, replica, src as u32 + 1);
        let mut counts = vec![0u64; n];
        for _ in 0..config.steps_per_replica {
            let dest = step_once(space.states[src], &config.params, &mut rng);
            counts[space.index_of(dest).expect("step stays in the triangle")] += 1;
        }
        (src, counts)
    });
    let mut counts = vec![vec![0u64; n]; n];
    let mut totals = vec![0u64; n];
    for (src, col) in per_job {
        totals[src] += config.steps_per_replica;
        for (dest, c) in col.into_iter().enumerate() {
            counts[dest][src] += c;
        }
    }
    EmpiricalKernel { space, counts, totals }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRun {
    pub space: StateSpace,
    pub start: (u32, u32),
    /// Steps discarded per replica.
    pub burn_in: u64,
    /// Visits after burn-in, summed over replicas.
    pub occupancy_counts: Vec<u64>,
    pub occupancy: Vec<f64>,
    /// Lag-1 autocorrelation of `i1 + i2` over the kept trace, pooled over
    /// replicas.
    pub lag1_autocorrelation: f64,
}

/// Long chains from `start`, one per replica.
pub fn run_chain(config: &SimConfig, start: (u32, u32)) -> Result<ChainRun> {
    let space = build_state_space(config.params.n);
    if space.index_of(start).is_none() {
        return Err(Error::OutOfRange(format!("start state {start:?} is outside the triangle")));
    }
    let n = space.len();
    let burn_in = (config.steps_per_replica as f64 * BURN_IN_FRACTION).floor() as u64;
    // Per replica: occupancy counts and moment sums (s, s^2, s_t s_{t+1}, first, last, kept).
    let per_job = run_jobs(config.workers, config.replicas as usize, |replica| {
        let mut rng = stream(config.seed, replica as u32, 0);
        let mut counts = vec![0u64; n];
        let mut state = start;
        let mut sums = [0f64; 3];
        let mut prev: Option<f64> = None;
        let mut first = 0f64;
        for step in 0..config.steps_per_replica {
            state = step_once(state, &config.params, &mut rng);
            if step < burn_in {
                continue;
            }
            counts[space.index_of(state).expect("step stays in the triangle")] += 1;
            let s = (state.0 + state.1) as f64;
            sums[0] += s;
            sums[1] += s * s;
            match prev {
                Some(p) => sums[2] += p * s,
                None => first = s,
            }
            prev = Some(s);
        }
        (counts, sums, first, prev.unwrap_or(0.0))
    });
    let mut occupancy_counts = vec![0u64; n];
    let (mut num, mut den) = (0f64, 0f64);
    for (counts, sums, first, last) in &per_job {
        for (acc, c) in occupancy_counts.iter_mut().zip(counts) {
            *acc += c;
        }
        let kept: u64 = counts.iter().sum();
        if kept < 2 {
            continue;
        }
        let k = kept as f64;
        let mean = sums[0] / k;
        // sum_t (s_t - mean)(s_{t+1} - mean) over kept-1 pairs
        num += sums[2] - mean * (2.0 * sums[0] - first - last) + (k - 1.0) * mean * mean;
        den += sums[1] - k * mean * mean;
    }
    let total: u64 = occupancy_counts.iter().sum();
    let occupancy = occupancy_counts.iter().map(|&c| c as f64 / total.max(1) as f64).collect();
    let lag1_autocorrelation = if den > 0.0 { num / den } else { 0.0 };
    Ok(ChainRun { space, start, burn_in, occupancy_counts, occupancy, lag1_autocorrelation })
}

/// `(1/2) sum |p - q|`.
pub fn tv_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch { left: p.len(), right: q.len() });
    }
    Ok(0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tv_examples() {
        assert_eq!(tv_distance(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        assert_eq!(tv_distance(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert_eq!(tv_distance(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), 0.5);
        assert!(matches!(tv_distance(&[1.0], &[0.5, 0.5]), Err(Error::LengthMismatch { left: 1, right: 2 })));
    }

    #[test]
    fn uniform_range() {
        let mut rng = stream(7, 0, 0);
        for _ in 0..10_000 {
            let u = uniform(&mut rng);
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn streams_differ() {
        let a = stream(1, 0, 1).next_u64();
        let b = stream(1, 0, 2).next_u64();
        let c = stream(1, 1, 1).next_u64();
        assert!(a != b && a != c && b != c);
        assert_eq!(a, stream(1, 0, 1).next_u64());
    }

    #[test]
    fn rejects_bad_config() {
        let p = ChainParams::new(1, 0.5, 0.5, 0.2, 0.2).unwrap();
        assert!(SimConfig::new(0, 0, 10, p.clone()).is_err());
        assert!(SimConfig::new(0, 1, 0, p.clone()).is_err());
        let c = SimConfig::new(0, 1, 10, p).unwrap();
        assert!(run_chain(&c, (2, 0)).is_err());
    }
}
