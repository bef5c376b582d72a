//! Monte-Carlo estimation of `T(G) = E[2^{|P|}]` over uniform Eulerian
//! partitions, and the residual entropy derived from it.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::estimates::pauling;
use crate::graph::Graph;
use crate::numeric::CompensatedSum;

/// Largest trail count summed without a common scale factor.
const UNSCALED_TRAIL_LIMIT: usize = 900;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MCConfig {
    pub trials_per_batch: u64,
    pub batches: usize,
    pub seed: u64,
    /// Worker threads; 0 lets the runtime decide. Results do not depend on it.
    pub workers: usize,
}

impl Default for MCConfig {
    fn default() -> Self {
        MCConfig {
            trials_per_batch: 1_000_000,
            batches: 1000,
            seed: 1,
            workers: 0,
        }
    }
}

impl MCConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials_per_batch == 0 {
            return Err(Error::invalid("trials_per_batch must be at least 1"));
        }
        if self.batches < 2 {
            return Err(Error::invalid("at least 2 batches are required"));
        }
        Ok(())
    }
}

/// Samples uniform Eulerian partitions of a fixed graph.
///
/// Edge-ends are numbered `2·id` (first endpoint of instance `id`) and
/// `2·id + 1`. Each trial draws a uniform perfect matching of the ends at
/// every vertex and counts the closed trails of the resulting partition.
#[derive(Debug, Clone)]
pub struct PartitionSampler {
    offsets: Vec<usize>,
    ends: Vec<u32>,
    initial: Vec<u32>,
    partner: Vec<u32>,
    seen: Vec<u32>,
    epoch: u32,
}

impl PartitionSampler {
    pub fn new(g: &Graph) -> Result<Self> {
        g.require_even_degrees()?;
        let mut offsets = Vec::with_capacity(g.n() + 1);
        let mut ends = Vec::with_capacity(2 * g.edge_count());
        offsets.push(0);
        for v in 0..g.n() {
            for &id in g.incident(v) {
                let (a, _) = g.instances()[id as usize];
                ends.push(if a as usize == v { 2 * id } else { 2 * id + 1 });
            }
            offsets.push(ends.len());
        }
        Ok(PartitionSampler {
            offsets,
            partner: vec![0; ends.len()],
            seen: vec![0; ends.len() / 2],
            initial: ends.clone(),
            ends,
            epoch: 0,
        })
    }

    /// Restores the canonical end order so the next trials depend only on
    /// the RNG.
    pub fn reset(&mut self) {
        self.ends.copy_from_slice(&self.initial);
    }

    pub fn edge_count(&self) -> usize {
        self.seen.len()
    }

    /// Trail count `|P|` of one uniformly random Eulerian partition.
    pub fn sample<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        for v in 0..self.offsets.len() - 1 {
            let slice = &mut self.ends[self.offsets[v]..self.offsets[v + 1]];
            let len = slice.len();
            let mut i = 0;
            while i < len {
                // partner of the end at i is uniform over the remaining ends
                if len - i > 2 {
                    let j = rng.gen_range(i + 1..len);
                    slice.swap(i + 1, j);
                }
                let (a, b) = (slice[i], slice[i + 1]);
                self.partner[a as usize] = b;
                self.partner[b as usize] = a;
                i += 2;
            }
        }

        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.seen.iter_mut().for_each(|s| *s = 0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        let mut trails = 0;
        for e in 0..self.seen.len() {
            if self.seen[e] == epoch {
                continue;
            }
            trails += 1;
            let start = 2 * e as u32;
            let mut end = start;
            loop {
                self.seen[(end / 2) as usize] = epoch;
                end = self.partner[(end ^ 1) as usize];
                if end == start {
                    break;
                }
            }
        }
        trails
    }
}

/// `|P|` for one random partition drawn with `rng`.
pub fn sample_trail_count<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<usize> {
    Ok(PartitionSampler::new(g)?.sample(rng))
}

/// Histogram of trail counts observed in one batch.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BatchTally {
    /// `histogram[k]` is the number of trials with `|P| = k`.
    pub histogram: Vec<u64>,
}

impl BatchTally {
    pub fn trials(&self) -> u64 {
        self.histogram.iter().sum()
    }

    fn max_trails(&self) -> usize {
        self.histogram.iter().rposition(|&c| c > 0).unwrap_or(0)
    }

    /// Mean of `2^{|P| − scale}` over the batch.
    pub fn scaled_mean(&self, scale: usize) -> f64 {
        let mut sum = CompensatedSum::default();
        for (k, &c) in self.histogram.iter().enumerate() {
            if c > 0 {
                sum.add(c as f64 * libm::exp2(k as f64 - scale as f64));
            }
        }
        sum.value() / self.trials() as f64
    }
}

/// RNG for batch `index`: the seed picks the key, the batch its stream.
pub fn batch_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs batch `index` of a configuration.
pub fn run_batch(sampler: &mut PartitionSampler, seed: u64, index: u64, trials: u64) -> BatchTally {
    let mut rng = batch_rng(seed, index);
    sampler.reset();
    let mut histogram = vec![0u64; sampler.edge_count() + 1];
    for _ in 0..trials {
        histogram[sampler.sample(&mut rng)] += 1;
    }
    BatchTally { histogram }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MCEstimate {
    /// Estimate of `T(G)`, in units of `2^{scale_log2}`.
    pub t_mean: f64,
    pub batch_means: Vec<f64>,
    pub ci_low: f64,
    pub ci_high: f64,
    pub rho: f64,
    pub rho_ci: (f64, f64),
    pub trials_total: u64,
    pub ns_per_trial: f64,
    /// Common power of two divided out of `t_mean`, the batch means and the
    /// interval; zero unless trail counts exceed the unscaled range.
    pub scale_log2: usize,
    /// Pooled histogram of `|P|` over all trials.
    pub trail_histogram: Vec<u64>,
}

/// Combines batch tallies into an estimate.
pub fn summarize(g: &Graph, tallies: &[BatchTally], ns_per_trial: f64) -> Result<MCEstimate> {
    if tallies.len() < 2 {
        return Err(Error::invalid("at least 2 batches are required"));
    }
    if tallies.iter().any(|t| t.trials() == 0) {
        return Err(Error::invalid("every batch needs at least one trial"));
    }
    let top = tallies.iter().map(BatchTally::max_trails).max().unwrap_or(0);
    let scale = top.saturating_sub(UNSCALED_TRAIL_LIMIT);
    let batch_means: Vec<f64> = tallies.iter().map(|t| t.scaled_mean(scale)).collect();
    let b = batch_means.len() as f64;
    let mut sum = CompensatedSum::default();
    batch_means.iter().for_each(|&m| sum.add(m));
    let t_mean = sum.value() / b;
    let mut sq = CompensatedSum::default();
    batch_means.iter().for_each(|&m| sq.add((m - t_mean) * (m - t_mean)));
    let sd = libm::sqrt(sq.value() / (b - 1.0));
    let half = 2.0 * sd / libm::sqrt(b);
    let (ci_low, ci_high) = (t_mean - half, t_mean + half);

    let len = tallies.iter().map(|t| t.histogram.len()).max().unwrap_or(0);
    let mut trail_histogram = vec![0u64; len];
    for t in tallies {
        for (k, &c) in t.histogram.iter().enumerate() {
            trail_histogram[k] += c;
        }
    }
    let shift = scale as f64 * crate::numeric::LN_2 / g.n() as f64;
    let rho = rho_from_t(g, t_mean)? + shift;
    let lo = if ci_low > 0.0 {
        rho_from_t(g, ci_low)? + shift
    } else {
        f64::NEG_INFINITY
    };
    let hi = rho_from_t(g, ci_high)? + shift;
    Ok(MCEstimate {
        t_mean,
        batch_means,
        ci_low,
        ci_high,
        rho,
        rho_ci: (lo, hi),
        trials_total: tallies.iter().map(BatchTally::trials).sum(),
        ns_per_trial,
        scale_log2: scale,
        trail_histogram,
    })
}

/// Single-threaded estimate; identical to any parallel run with the same
/// seed because each batch owns its RNG stream.
pub fn estimate_sequential(g: &Graph, cfg: &MCConfig) -> Result<MCEstimate> {
    cfg.validate()?;
    let mut sampler = PartitionSampler::new(g)?;
    let tallies: Vec<BatchTally> = (0..cfg.batches as u64)
        .map(|i| run_batch(&mut sampler, cfg.seed, i, cfg.trials_per_batch))
        .collect();
    summarize(g, &tallies, f64::NAN)
}

/// `ρ̂(G) + ln(t)/n`.
pub fn rho_from_t(g: &Graph, t: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 {
        return Err(Error::invalid("T(G) estimate must be positive"));
    }
    Ok(pauling(&g.degrees())? + libm::log(t) / g.n() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::LatticeSpec;

    #[test]
    fn cycle_always_one_trail() {
        let c5 = LatticeSpec::Cycle(5).make().unwrap();
        let cfg = MCConfig {
            trials_per_batch: 50,
            batches: 4,
            seed: 9,
            workers: 1,
        };
        let est = estimate_sequential(&c5, &cfg).unwrap();
        assert_eq!(est.t_mean, 2.0);
        assert_eq!(est.ci_low, est.ci_high);
        assert!((est.rho - libm::log(2.0) / 5.0).abs() < 1e-15);
    }

    #[test]
    fn k5_trail_counts_in_range() {
        let k5 = LatticeSpec::Clique(5).make().unwrap();
        let mut sampler = PartitionSampler::new(&k5).unwrap();
        let mut rng = batch_rng(3, 0);
        for _ in 0..1000 {
            let k = sampler.sample(&mut rng);
            assert!((1..=5).contains(&k));
        }
    }

    #[test]
    fn batches_are_reproducible() {
        let k5 = LatticeSpec::Clique(5).make().unwrap();
        let mut a = PartitionSampler::new(&k5).unwrap();
        let mut b = PartitionSampler::new(&k5).unwrap();
        run_batch(&mut b, 7, 0, 123);
        assert_eq!(run_batch(&mut a, 7, 1, 500), run_batch(&mut b, 7, 1, 500));
    }

    #[test]
    fn rho_from_t_checks() {
        let c3 = LatticeSpec::Cycle(3).make().unwrap();
        assert!((rho_from_t(&c3, 2.0).unwrap() - libm::log(2.0) / 3.0).abs() < 1e-15);
        assert!(rho_from_t(&c3, 0.0).is_err());
    }

    #[test]
    fn scaled_summary_matches_unscaled() {
        let c3 = LatticeSpec::Cycle(3).make().unwrap();
        let mut h = vec![0u64; 1001];
        h[1000] = 3;
        h[998] = 1;
        let tallies = vec![BatchTally { histogram: h.clone() }, BatchTally { histogram: h }];
        let est = summarize(&c3, &tallies, 0.0).unwrap();
        assert_eq!(est.scale_log2, 100);
        let expected = (3.0 * libm::exp2(900.0) + libm::exp2(898.0)) / 4.0;
        assert!((est.t_mean / expected - 1.0).abs() < 1e-14);
        let rho = crate::estimates::pauling(&[2, 2, 2]).unwrap()
            + (libm::log(expected) + 100.0 * crate::numeric::LN_2) / 3.0;
        assert!((est.rho - rho).abs() < 1e-12);
    }
}
