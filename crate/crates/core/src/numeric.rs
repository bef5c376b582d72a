//! Small numerical helpers shared by the estimators.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

pub const LN_2: f64 = core::f64::consts::LN_2;
pub const PI: f64 = core::f64::consts::PI;

/// Exact central binomial `C(d, d/2)` for even `d`.
pub fn central_binomial(d: usize) -> BigUint {
    let k = d / 2;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= (d - i) as u64;
        acc /= (i + 1) as u64;
    }
    acc
}

/// `ln C(d, d/2)`: exact integer arithmetic up to `d = 60`, log-gamma above.
pub fn ln_central_binomial(d: usize) -> f64 {
    if d <= 60 {
        ln_big(&central_binomial(d))
    } else {
        let x = d as f64;
        libm::lgamma(x + 1.0) - 2.0 * libm::lgamma(x / 2.0 + 1.0)
    }
}

/// Natural log of a big integer; `-inf` for zero.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return libm::log(x.to_f64().unwrap_or(f64::INFINITY));
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    libm::log(top) + shift as f64 * LN_2
}

/// Neumaier (improved Kahan) summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if libm::fabs(self.sum) >= libm::fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Catalan's constant from the geometrically convergent series
/// `G = (π/8) ln(2 + √3) + (3/8) Σ (k!)² / ((2k)! (2k+1)²)`.
pub fn catalan() -> f64 {
    let mut term_ratio = 1.0; // (k!)^2 / (2k)!
    let mut sum = CompensatedSum::default();
    for k in 0..60u32 {
        if k > 0 {
            let kf = k as f64;
            term_ratio *= kf * kf / ((2.0 * kf - 1.0) * (2.0 * kf));
        }
        let odd = 2.0 * k as f64 + 1.0;
        sum.add(term_ratio / (odd * odd));
    }
    PI / 8.0 * libm::log(2.0 + libm::sqrt(3.0)) + 3.0 / 8.0 * sum.value()
}

/// Midpoint rule on an `N³` grid for `∫₀¹∫₀¹∫₀¹ f(cos 2πx, cos 2πy, cos 2πz)`
/// where `f` is symmetric under permutations of its arguments.
///
/// Reflection `x ↦ 1 − x` leaves the cosines unchanged and `f` is symmetric,
/// so only the sorted half-grid `i ≤ j ≤ k < N/2` is visited with the
/// appropriate multiplicity.
pub fn midpoint_cube_symmetric<F>(f: &F, n: usize) -> f64
where
    F: Fn(f64, f64, f64) -> f64,
{
    assert!(n.is_multiple_of(2) && n > 0);
    let half = n / 2;
    let cos: alloc::vec::Vec<f64> = (0..half)
        .map(|i| libm::cos(2.0 * PI * (i as f64 + 0.5) / n as f64))
        .collect();
    let mut total = CompensatedSum::default();
    for i in 0..half {
        for j in i..half {
            let mut row = 0.0;
            for k in j..half {
                let weight = match (i == j, j == k) {
                    (true, true) => 1.0,
                    (true, false) | (false, true) => 3.0,
                    (false, false) => 6.0,
                };
                row += weight * f(cos[i], cos[j], cos[k]);
            }
            total.add(row);
        }
    }
    total.value() / (half * half * half) as f64
}

/// Periodic cube integral with a logarithmic point singularity, refined by
/// grid doubling. The midpoint error of such integrands decays like `h³`,
/// so successive grids are combined by Richardson extrapolation of that
/// order until two extrapolants agree within `tol`.
pub fn integrate_log_cube<F>(f: &F, tol: f64) -> Result<f64>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let mut n = 16;
    let mut coarse = midpoint_cube_symmetric(f, n);
    let mut previous: Option<f64> = None;
    while n <= 1024 {
        n *= 2;
        let fine = midpoint_cube_symmetric(f, n);
        let extrapolated = (8.0 * fine - coarse) / 7.0;
        if let Some(p) = previous {
            if libm::fabs(extrapolated - p) < tol {
                return Ok(extrapolated);
            }
        }
        previous = Some(extrapolated);
        coarse = fine;
    }
    Err(Error::NoConvergence(n))
}
