//! Correlation of the residual entropy with the tree-entropy heuristic on
//! randomly switched copies of a lattice.

use std::io::Write;

use icegraph_core::estimates::rho_tau;
use icegraph_core::generators::{random_switchings, LatticeSpec};
use icegraph_core::mc::MCConfig;
use icegraph_core::spanning::tree_entropy;
use icegraph_core::Error;

use crate::parallel;

pub const EXPERIMENT_HEADER: &str = "switches_requested,switches_applied,tau,rho_mc,rho_lo,rho_hi,rho_tau,seed";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub switches_requested: usize,
    pub switches_applied: usize,
    pub tau: f64,
    pub rho_mc: f64,
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub rho_tau: f64,
    pub seed: u64,
}

impl ExperimentRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.switches_requested,
            self.switches_applied,
            self.tau,
            self.rho_mc,
            self.rho_lo,
            self.rho_hi,
            self.rho_tau,
            self.seed
        )
    }
}

/// Seed for row `i`; rows are independent of one another.
pub fn row_seed(seed: u64, i: usize) -> u64 {
    let mut z = seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Switch counts evenly spaced over `[0, max_switches]`.
pub fn switch_levels(max_switches: usize, samples: usize) -> Vec<usize> {
    match samples {
        0 => Vec::new(),
        1 => vec![0],
        _ => (0..samples)
            .map(|i| ((i as f64) * max_switches as f64 / (samples - 1) as f64).round() as usize)
            .collect(),
    }
}

/// Runs one row per switch level, each on a fresh copy of `base`, writing
/// the CSV (header first) to `out` as rows complete.
pub fn run_experiment_corrupt<W: Write>(
    base: &LatticeSpec,
    max_switches: usize,
    samples: usize,
    mc: &MCConfig,
    out: &mut W,
) -> anyhow::Result<Vec<ExperimentRow>> {
    let g = base.make()?;
    if !g.is_simple() {
        return Err(Error::NotSimple.into());
    }
    g.require_even_degrees()?;
    let d = g
        .regular_degree()
        .ok_or(Error::NotRegular)?;
    writeln!(out, "{EXPERIMENT_HEADER}")?;
    let mut rows = Vec::with_capacity(samples);
    for (i, switches) in switch_levels(max_switches, samples).into_iter().enumerate() {
        let seed = row_seed(mc.seed, i);
        let (h, trace) = random_switchings(&g, switches, seed)?;
        let tau = tree_entropy(&h)?.tau;
        let cfg = MCConfig { seed, ..mc.clone() };
        let est = parallel::estimate(&h, &cfg)?;
        let row = ExperimentRow {
            switches_requested: switches,
            switches_applied: trace.applied,
            tau,
            rho_mc: est.rho,
            rho_lo: est.rho_ci.0,
            rho_hi: est.rho_ci.1,
            rho_tau: rho_tau(d, tau)?,
            seed,
        };
        writeln!(out, "{}", row.to_csv())?;
        out.flush()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Sample Pearson correlation; `None` when either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    (sxx > 0.0 && syy > 0.0).then(|| sxy / (sxx * syy).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn levels() {
        assert_eq!(switch_levels(0, 1), vec![0]);
        assert_eq!(switch_levels(10000, 5), vec![0, 2500, 5000, 7500, 10000]);
        assert_eq!(switch_levels(10, 4), vec![0, 3, 7, 10]);
    }

    #[test]
    fn correlation() {
        assert!((pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.5]).unwrap() - 1.0).abs() < 0.01);
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }
}
