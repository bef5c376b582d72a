//! Tables of limits and estimates for lattice families.

use icegraph_core::eo_exact::{eo_count, RtTable};
use icegraph_core::estimates::{clique_cycle_rho_with, pauling, rho_tau};
use icegraph_core::generators::LatticeSpec;
use icegraph_core::mc::MCConfig;
use icegraph_core::numeric::ln_big;
use icegraph_core::spanning::{hypercube_tau, tau_limit_product_cycle, tube_tau_limit};
use icegraph_core::transfer::rho_product_cycle_limit;
use icegraph_core::{Error, Result};

use crate::output::{Cell, Table};
use crate::parallel;

/// Fibers of the three-cycle table, in row order.
pub const THREE_CYCLE_FIBERS: [(usize, usize); 6] = [(3, 3), (3, 4), (3, 5), (3, 6), (4, 4), (4, 5)];

fn transfer_limit(spec: &LatticeSpec) -> Result<f64> {
    rho_product_cycle_limit(&spec.make()?, &spec.automorphism_generators()?)
}

/// `C_m □ C_∞` for `m = 3..=max_m`: tree entropy, residual entropy and the
/// heuristic.
pub fn tubes(max_m: usize) -> Result<Table> {
    if !(3..=24).contains(&max_m) {
        return Err(Error::invalid("tubes support 3 <= max_m <= 24"));
    }
    let mut t = Table::new(vec!["m", "tau", "rho", "rho_tau"]);
    for m in 3..=max_m {
        let tau = tube_tau_limit(m)?;
        let rho = transfer_limit(&LatticeSpec::Cycle(m))?;
        t.push(vec![m.into(), tau.into(), rho.into(), rho_tau(4, tau)?.into()]);
    }
    Ok(t)
}

/// `C_a □ C_b □ C_∞`. The residual entropy is left empty for fibers with
/// more than `max_fiber` vertices.
pub fn three_cycles(max_fiber: usize) -> Result<Table> {
    let mut t = Table::new(vec!["a", "b", "tau", "rho", "rho_tau"]);
    for (a, b) in THREE_CYCLE_FIBERS {
        let spec = LatticeSpec::Torus(vec![a, b]);
        let tau = tau_limit_product_cycle(&spec.make()?)?;
        let rho = if a * b <= max_fiber {
            Some(transfer_limit(&spec)?)
        } else {
            None
        };
        t.push(vec![a.into(), b.into(), tau.into(), rho.into(), rho_tau(6, tau)?.into()]);
    }
    Ok(t)
}

/// `K_m □ C_∞` for odd `m = 3..=max_m`.
pub fn cliques(max_m: usize) -> Result<Table> {
    if !(3..=icegraph_core::eo_exact::RT_EXACT_MAX - 2).contains(&max_m) {
        return Err(Error::invalid(format!(
            "cliques support 3 <= max_m <= {}",
            icegraph_core::eo_exact::RT_EXACT_MAX - 2
        )));
    }
    let mut rt = RtTable::new();
    let mut t = Table::new(vec!["m", "degree", "tau", "rho", "rho_hat", "rho_tau"]);
    for m in (3..=max_m).step_by(2) {
        let tau = tau_limit_product_cycle(&LatticeSpec::Clique(m).make()?)?;
        let d = m + 1;
        t.push(vec![
            m.into(),
            d.into(),
            tau.into(),
            clique_cycle_rho_with(m, &mut rt)?.into(),
            pauling(&[d])?.into(),
            rho_tau(d, tau)?.into(),
        ]);
    }
    Ok(t)
}

/// Hypercubes `Q_d` for even `d = 4..=max_d`. The residual entropy is exact
/// for `Q_4` and a Monte-Carlo estimate otherwise (`rho_method` says which);
/// it is omitted entirely when `mc` is `None`.
pub fn hypercubes(max_d: u32, mc: Option<&MCConfig>) -> Result<Table> {
    if !(4..=20).contains(&max_d) {
        return Err(Error::invalid("hypercubes support 4 <= max_d <= 20"));
    }
    let mut t = Table::new(vec!["d", "n", "rho_hat", "rho_tau", "rho", "rho_lo", "rho_hi", "rho_method"]);
    for d in (4..=max_d).step_by(2) {
        let n = 1usize << d;
        let rho_hat = pauling(&[d as usize])?;
        let rho_tau_value = rho_tau(d as usize, hypercube_tau(d))?;
        let mut row: Vec<Cell> = vec![(d as usize).into(), n.into(), rho_hat.into(), rho_tau_value.into()];
        if d == 4 {
            let g = LatticeSpec::Hypercube(d).make()?;
            let rho = ln_big(&eo_count(&g)?) / n as f64;
            row.extend([rho.into(), rho.into(), rho.into(), "exact".into()]);
        } else if let Some(cfg) = mc {
            let g = LatticeSpec::Hypercube(d).make()?;
            let est = parallel::estimate(&g, cfg)?;
            row.extend([est.rho.into(), est.rho_ci.0.into(), est.rho_ci.1.into(), "mc".into()]);
        } else {
            row.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty]);
        }
        t.push(row);
    }
    Ok(t)
}
