//! Closed-form estimates and bounds for the residual entropy.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigUint;

use crate::eo_exact::{eo_count, RtTable};
use crate::error::{Error, Result};
use crate::graph::{DegreeStats, Graph};
use crate::mc::{MCConfig, MCEstimate};
use crate::numeric::{ln_big, ln_central_binomial, LN_2, PI};
use crate::spanning::{tau_random_regular, tree_entropy, TreeCount};

/// Upper limit on `ρ − ρ̂` for every even-degree graph.
pub const GAP_GENERAL: f64 = 27.0 / 10.0;
/// Upper limit on `ρ − ρ̂` for regular even-degree graphs.
pub const GAP_REGULAR: f64 = 21.0 / 22.0;
/// Largest `d + 1` for which the product bound uses exact tournament counts.
pub const CONJECTURE_EXACT_MAX: usize = 11;

fn check_degrees(degrees: &[usize]) -> Result<()> {
    if degrees.is_empty() {
        return Err(Error::Empty);
    }
    for (v, &d) in degrees.iter().enumerate() {
        if d == 0 {
            return Err(Error::IsolatedVertex(v));
        }
        if d % 2 == 1 {
            return Err(Error::OddDegree { vertex: v, degree: d });
        }
    }
    Ok(())
}

/// Pauling estimate `ρ̂ = (1/n) Σ (ln C(d_i, d_i/2) − (d_i/2) ln 2)`.
pub fn pauling(degrees: &[usize]) -> Result<f64> {
    check_degrees(degrees)?;
    let sum: f64 = degrees
        .iter()
        .map(|&d| ln_central_binomial(d) - (d / 2) as f64 * LN_2)
        .sum();
    Ok(sum / degrees.len() as f64)
}

/// `(1/2n) Σ ln C(d_i, d_i/2)`.
pub fn schrijver_upper(degrees: &[usize]) -> Result<f64> {
    check_degrees(degrees)?;
    let sum: f64 = degrees.iter().map(|&d| ln_central_binomial(d)).sum();
    Ok(sum / (2 * degrees.len()) as f64)
}

/// Girth-dependent bound for connected `d`-regular graphs with `d ≥ 4`:
/// `EO ≤ K^{2/(d−2)} (2^{d/(2g)} K^{1 − d/(g(d−2))})^n` with
/// `K = 2^{−d/2} C(d, d/2)`, returned as a bound on `ρ`.
pub fn las_vergnas_upper(g: &Graph) -> Result<f64> {
    let d = g.regular_degree().ok_or(Error::NotRegular)?;
    if d < 4 || d % 2 == 1 {
        return Err(Error::invalid(format!("needs even degree at least 4, got {d}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let girth = g.girth().ok_or_else(|| Error::invalid("graph is acyclic"))? as f64;
    let df = d as f64;
    let ln_k = ln_central_binomial(d) - df / 2.0 * LN_2;
    let n = g.n() as f64;
    let per_vertex = df / (2.0 * girth) * LN_2 + (1.0 - df / (girth * (df - 2.0))) * ln_k;
    Ok((2.0 / (df - 2.0) * ln_k + n * per_vertex) / n)
}

/// `EO ≤ 2^{|E| + 3(n−1)/2} / (π^{(n−1)/2} √t(G))` for connected graphs with
/// even degrees, returned as a bound on `ρ`.
pub fn new_bound_upper(g: &Graph, tree: &TreeCount) -> Result<f64> {
    g.require_even_degrees()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n() as f64;
    let e = g.edge_count() as f64;
    let ln_bound = (e + 1.5 * (n - 1.0)) * LN_2 - (n - 1.0) / 2.0 * libm::log(PI) - tree.log_value / 2.0;
    Ok(ln_bound / n)
}

/// Product bound `(1/n) Σ ln RT(d_i + 1) / (d_i + 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjectureBound {
    pub value: f64,
    /// Some `RT` factor came from the asymptotic formula.
    pub asymptotic: bool,
}

pub fn conjecture_upper(degrees: &[usize]) -> Result<ConjectureBound> {
    conjecture_upper_with(degrees, &mut RtTable::new())
}

pub fn conjecture_upper_with(degrees: &[usize], table: &mut RtTable) -> Result<ConjectureBound> {
    check_degrees(degrees)?;
    let mut asymptotic = false;
    let mut sum = 0.0;
    for &d in degrees {
        let m = d + 1;
        let ln_rt = if m <= CONJECTURE_EXACT_MAX {
            ln_big(&table.get(m)?)
        } else {
            asymptotic = true;
            rt_asymptotic(m)?
        };
        sum += ln_rt / m as f64;
    }
    Ok(ConjectureBound {
        value: sum / degrees.len() as f64,
        asymptotic,
    })
}

/// `ln RT(m) ≈ ln(d^{1/2} (2^{d+2}/(π(d+1)))^{d/2} e^{−1/2})` with `d = m − 1`.
pub fn rt_asymptotic(m: usize) -> Result<f64> {
    if m.is_multiple_of(2) || m < 5 {
        return Err(Error::invalid(format!("asymptotic RT needs odd m >= 5, got {m}")));
    }
    let d = (m - 1) as f64;
    Ok(0.5 * libm::log(d) + d / 2.0 * ((d + 2.0) * LN_2 - libm::log(PI * (d + 1.0))) - 0.5)
}

/// `ρ̂ + ½ τ_d − ½ τ` for a `d`-regular graph with tree entropy `tau`.
pub fn rho_tau(d: usize, tau: f64) -> Result<f64> {
    if d < 3 {
        return Err(Error::invalid("rho_tau needs d >= 3"));
    }
    let rho_hat = if d.is_multiple_of(2) {
        pauling(&[d])?
    } else {
        ln_central_binomial_odd(d)
    };
    Ok(rho_hat + 0.5 * tau_random_regular(d)? - 0.5 * tau)
}

/// Pauling term `ln(d! / (Γ(d/2+1)²)) − (d/2) ln 2` continued to odd `d`.
fn ln_central_binomial_odd(d: usize) -> f64 {
    let x = d as f64;
    libm::lgamma(x + 1.0) - 2.0 * libm::lgamma(x / 2.0 + 1.0) - x / 2.0 * LN_2
}

fn require_odd(m: usize, min: usize) -> Result<()> {
    if m.is_multiple_of(2) || m < min {
        return Err(Error::invalid(format!("needs odd m >= {min}, got {m}")));
    }
    Ok(())
}

/// `lim ρ(K_m □ C_ℓ) = (1/m) ln(RT(m+2) / C(m+1, (m+1)/2))`.
pub fn clique_cycle_rho(m: usize) -> Result<f64> {
    clique_cycle_rho_with(m, &mut RtTable::new())
}

pub fn clique_cycle_rho_with(m: usize, table: &mut RtTable) -> Result<f64> {
    require_odd(m, 3)?;
    let rt = table.get(m + 2)?;
    Ok((ln_big(&rt) - ln_central_binomial(m + 1)) / m as f64)
}

/// `(m+2)/2 · ln 2 − (m−1)/(2m) · ln m − ln π / 2 − 3/(2m)`.
pub fn clique_cycle_rho_asymptotic(m: usize) -> Result<f64> {
    require_odd(m, 5)?;
    let mf = m as f64;
    Ok((mf + 2.0) / 2.0 * LN_2 - (mf - 1.0) / (2.0 * mf) * libm::log(mf) - libm::log(PI) / 2.0 - 3.0 / (2.0 * mf))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolation {
    pub limit: f64,
    /// Change in the limit when the largest size is dropped.
    pub spread: f64,
}

/// Rational extrapolation of `(size, value)` samples to `size → ∞` in the
/// variable `h = 1/size`.
pub fn extrapolate_limit(points: &[(f64, f64)]) -> Result<Extrapolation> {
    if points.len() < 3 {
        return Err(Error::invalid("extrapolation needs at least 3 points"));
    }
    if points.windows(2).any(|w| w[1].0.partial_cmp(&w[0].0) != Some(core::cmp::Ordering::Greater)) || points[0].0 <= 0.0 {
        return Err(Error::invalid("sizes must be positive and increasing"));
    }
    let limit = rational_to_zero(points);
    let spread = (limit - rational_to_zero(&points[..points.len() - 1])).abs();
    Ok(Extrapolation { limit, spread })
}

fn rational_to_zero(points: &[(f64, f64)]) -> f64 {
    let h: Vec<f64> = points.iter().map(|&(s, _)| 1.0 / s).collect();
    let mut prev2: Vec<f64> = alloc::vec![0.0; points.len()];
    let mut prev: Vec<f64> = points.iter().map(|&(_, v)| v).collect();
    for k in 1..points.len() {
        let mut cur = alloc::vec![0.0; points.len()];
        for i in k..points.len() {
            let (a, b) = (prev[i], prev[i - 1]);
            let diff = a - b;
            let below = a - prev2[i - 1];
            cur[i] = if diff == 0.0 || below == 0.0 {
                a
            } else {
                let denom = h[i - k] / h[i] * (1.0 - diff / below) - 1.0;
                if denom == 0.0 {
                    a
                } else {
                    a + diff / denom
                }
            };
        }
        prev2 = prev;
        prev = cur;
    }
    prev[points.len() - 1]
}

/// Checks the general and regular gaps `ρ − ρ̂ ≤ 27/10` and `≤ 21/22`.
pub fn gap_within_limits(rho: f64, rho_hat: f64, regular: bool) -> bool {
    let gap = rho - rho_hat;
    gap <= GAP_GENERAL && (!regular || gap <= GAP_REGULAR)
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    /// Exact orientation counting is attempted up to this many edges.
    pub exact_edge_limit: usize,
    /// Monte-Carlo configuration used when exact counting is skipped or fails.
    pub mc: Option<MCConfig>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            exact_edge_limit: 80,
            mc: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EntropyReport {
    pub n: usize,
    pub edges: usize,
    pub degree_stats: DegreeStats,
    pub rho_hat: f64,
    pub tau: Option<f64>,
    pub rho_tau: Option<f64>,
    pub schrijver_upper: f64,
    pub las_vergnas_upper: Option<f64>,
    pub new_bound_upper: Option<f64>,
    pub conjecture_upper: Option<ConjectureBound>,
    pub eo_exact: Option<BigUint>,
    pub rho_exact: Option<f64>,
    pub rho_mc: Option<MCEstimate>,
}

impl EntropyReport {
    /// The exact value if known, else the Monte-Carlo estimate.
    pub fn rho(&self) -> Option<f64> {
        self.rho_exact.or(self.rho_mc.as_ref().map(|m| m.rho))
    }
}

/// Report using the sequential Monte-Carlo estimator.
pub fn report(g: &Graph, options: &ReportOptions) -> Result<EntropyReport> {
    report_with(g, options, crate::mc::estimate_sequential)
}

/// Report with a caller-supplied Monte-Carlo runner.
pub fn report_with<F>(g: &Graph, options: &ReportOptions, run_mc: F) -> Result<EntropyReport>
where
    F: FnOnce(&Graph, &MCConfig) -> Result<MCEstimate>,
{
    let degrees = g.degrees();
    let degree_stats = g.degree_stats()?;
    let rho_hat = pauling(&degrees)?;
    let schrijver = schrijver_upper(&degrees)?;
    let connected = g.is_connected();
    let tree = if connected { Some(tree_entropy(g)?) } else { None };
    let tau = tree.as_ref().map(|t| t.tau);
    let regular = g.regular_degree();
    let rho_tau_value = match (regular, tau) {
        (Some(d), Some(t)) if d >= 3 => Some(rho_tau(d, t)?),
        _ => None,
    };
    let las_vergnas = match regular {
        Some(d) if d >= 4 && connected && g.girth().is_some() => Some(las_vergnas_upper(g)?),
        _ => None,
    };
    let new_bound = match &tree {
        Some(t) => Some(new_bound_upper(g, t)?),
        None => None,
    };
    let conjecture = Some(conjecture_upper(&degrees)?);

    let mut eo_exact = None;
    if g.edge_count() <= options.exact_edge_limit {
        match eo_count(g) {
            Ok(c) => eo_exact = Some(c),
            Err(Error::ResourceLimit(_)) => {}
            Err(e) => return Err(e),
        }
    }
    let rho_exact = eo_exact.as_ref().map(|c| ln_big(c) / g.n() as f64);
    let rho_mc = match (&eo_exact, &options.mc) {
        (None, Some(cfg)) => Some(run_mc(g, cfg)?),
        _ => None,
    };
    Ok(EntropyReport {
        n: g.n(),
        edges: g.edge_count(),
        degree_stats,
        rho_hat,
        tau,
        rho_tau: rho_tau_value,
        schrijver_upper: schrijver,
        las_vergnas_upper: las_vergnas,
        new_bound_upper: new_bound,
        conjecture_upper: conjecture,
        eo_exact,
        rho_exact,
        rho_mc,
    })
}
