//! Monte-Carlo estimation with batches spread over a rayon pool.

use std::time::Instant;

use icegraph_core::mc::{run_batch, summarize, BatchTally, MCConfig, MCEstimate, PartitionSampler};
use icegraph_core::{Graph, Result};
use rayon::prelude::*;

/// Estimates `T(G)` and `ρ(G)`.
///
/// Batch `i` always uses RNG stream `i` of the configured seed, so the
/// output does not depend on `cfg.workers`. `ns_per_trial` is wall time
/// multiplied by the worker count, divided by the number of trials.
pub fn estimate(g: &Graph, cfg: &MCConfig) -> Result<MCEstimate> {
    cfg.validate()?;
    let template = PartitionSampler::new(g)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| icegraph_core::Error::invalid(e.to_string()))?;
    let workers = pool.current_num_threads();
    let start = Instant::now();
    let tallies: Vec<BatchTally> = pool.install(|| {
        (0..cfg.batches as u64)
            .into_par_iter()
            .map_init(
                || template.clone(),
                |sampler, i| run_batch(sampler, cfg.seed, i, cfg.trials_per_batch),
            )
            .collect()
    });
    let elapsed = start.elapsed().as_nanos() as f64;
    let trials = cfg.batches as f64 * cfg.trials_per_batch as f64;
    summarize(g, &tallies, elapsed * workers as f64 / trials)
}
