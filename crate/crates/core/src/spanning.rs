//! Spanning-tree counts and spanning-tree entropies.
//!
//! Exact counts use fraction-free (Bareiss) elimination over the integers on
//! the reduced Laplacian. Floating log-counts use a Cholesky factorisation of
//! the same matrix, which is symmetric positive definite for connected
//! graphs. Lattice constants are computed from their integral or series
//! representations rather than stored.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::numeric::{self, integrate_log_cube, ln_big, PI};

/// Default largest vertex count for exact determinant evaluation.
pub const DEFAULT_EXACT_LIMIT: usize = 400;

/// `t(G)` as a natural log, normalised entropy, and (optionally) exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeCount {
    pub exact: Option<BigUint>,
    pub log_value: f64,
    pub tau: f64,
}

impl TreeCount {
    fn from_exact(exact: BigUint, n: usize) -> Self {
        let log_value = ln_big(&exact);
        TreeCount {
            exact: Some(exact),
            log_value,
            tau: log_value / n as f64,
        }
    }
}

/// Exact number of spanning trees. Disconnected graphs have zero.
pub fn tree_count_exact(g: &Graph) -> Result<BigUint> {
    tree_count_exact_with_limit(g, DEFAULT_EXACT_LIMIT)
}

pub fn tree_count_exact_with_limit(g: &Graph, limit: usize) -> Result<BigUint> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Empty);
    }
    if n > limit {
        return Err(Error::limit(format!(
            "exact tree count limited to {limit} vertices, graph has {n}"
        )));
    }
    if !g.is_connected() {
        return Ok(BigUint::zero());
    }
    if n == 1 {
        return Ok(BigUint::one());
    }
    let lap = g.laplacian();
    let m = n - 1;
    let matrix: Vec<BigInt> = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| BigInt::from(lap[i * n + j]))
        .collect();
    let det = bareiss_determinant(matrix, m);
    Ok(det.magnitude().clone())
}

/// Determinant of a square integer matrix by Bareiss elimination. Every
/// intermediate division is exact.
fn bareiss_determinant(mut a: Vec<BigInt>, m: usize) -> BigInt {
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..m {
        if a[k * m + k].is_zero() {
            match (k + 1..m).find(|&r| !a[r * m + k].is_zero()) {
                Some(r) => {
                    for j in 0..m {
                        a.swap(k * m + j, r * m + j);
                    }
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = a[k * m + k].clone();
        for i in k + 1..m {
            let factor = a[i * m + k].clone();
            for j in k + 1..m {
                let updated = &a[i * m + j] * &pivot - &factor * &a[k * m + j];
                a[i * m + j] = if prev.is_one() {
                    updated
                } else {
                    updated.div_floor(&prev)
                };
            }
            a[i * m + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = a[m * m - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `ln t(G)` from the Cholesky factor of the reduced Laplacian, with the
/// exact count attached when `n ≤ exact_limit`.
pub fn tree_entropy_with_limit(g: &Graph, exact_limit: usize) -> Result<TreeCount> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Empty);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let log_value = log_det_reduced_laplacian(g)?;
    let exact = if n <= exact_limit {
        Some(tree_count_exact_with_limit(g, exact_limit)?)
    } else {
        None
    };
    Ok(TreeCount {
        exact,
        log_value,
        tau: log_value / n as f64,
    })
}

/// [`tree_entropy_with_limit`] at [`DEFAULT_EXACT_LIMIT`].
pub fn tree_entropy(g: &Graph) -> Result<TreeCount> {
    tree_entropy_with_limit(g, DEFAULT_EXACT_LIMIT)
}

/// Floating-point spanning-tree entropy only.
pub fn tree_entropy_float(g: &Graph) -> Result<TreeCount> {
    tree_entropy_with_limit(g, 0)
}

fn log_det_reduced_laplacian(g: &Graph) -> Result<f64> {
    let n = g.n();
    if n == 1 {
        return Ok(0.0);
    }
    let m = n - 1;
    let mut l = vec![0.0f64; m * m];
    for v in 0..m {
        l[v * m + v] = g.degree(v) as f64;
    }
    for e in g.edges() {
        if e.v < m {
            l[e.v * m + e.u] -= e.mult as f64;
        }
    }
    let log_det = cholesky_log_det(&mut l, m).ok_or(Error::Disconnected)?;
    Ok(log_det)
}

/// In-place Cholesky on the lower triangle of a row-major SPD matrix;
/// returns `ln det`, or `None` if a pivot is not positive.
fn cholesky_log_det(a: &mut [f64], m: usize) -> Option<f64> {
    let mut log_det = 0.0;
    for j in 0..m {
        let row_j = &a[j * m..j * m + j];
        let d = a[j * m + j] - row_j.iter().map(|x| x * x).sum::<f64>();
        if d.is_nan() || d <= 0.0 {
            return None;
        }
        let djj = libm::sqrt(d);
        a[j * m + j] = djj;
        log_det += 2.0 * libm::log(djj);
        for i in j + 1..m {
            let dot: f64 = a[i * m..i * m + j]
                .iter()
                .zip(&a[j * m..j * m + j])
                .map(|(x, y)| x * y)
                .sum();
            a[i * m + j] = (a[i * m + j] - dot) / djj;
        }
    }
    Some(log_det)
}

/// Laplacian eigenvalues in increasing order, with multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts and validates: all values finite and `≥ −1e−9`.
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.iter().any(|x| !x.is_finite() || *x < -1e-9) {
            return Err(Error::invalid("Laplacian eigenvalues must be nonnegative"));
        }
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Spectrum { eigenvalues })
    }

    /// Spectrum of `L(C_n)`: `2 − 2 cos(2πj/n)`.
    pub fn cycle(n: usize) -> Self {
        let values = (0..n)
            .map(|j| 2.0 - 2.0 * libm::cos(2.0 * PI * j as f64 / n as f64))
            .map(|x| if x.abs() < 1e-15 { 0.0 } else { x })
            .collect();
        Spectrum::new(values).expect("cycle spectrum")
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Number of eigenvalues below `tol`.
    pub fn zero_count(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|&&x| x < tol).count()
    }

    /// `ln t(G)` by the Matrix Tree Theorem: the product of the nonzero
    /// eigenvalues divided by the vertex count.
    pub fn log_tree_count(&self) -> f64 {
        let s: f64 = self
            .eigenvalues
            .iter()
            .skip(1)
            .map(|&x| libm::log(x))
            .sum();
        s - libm::log(self.len() as f64)
    }
}

/// Laplacian spectrum by cyclic Jacobi rotations.
pub fn laplacian_spectrum(g: &Graph) -> Spectrum {
    let n = g.n();
    let mut a: Vec<f64> = g.laplacian().into_iter().map(|x| x as f64).collect();
    jacobi_eigenvalues(&mut a, n);
    let values = (0..n)
        .map(|i| a[i * n + i])
        .map(|x| if x.abs() < 1e-10 { 0.0 } else { x })
        .collect();
    Spectrum::new(values).expect("Laplacian is positive semidefinite")
}

fn jacobi_eigenvalues(a: &mut [f64], n: usize) {
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum();
        let scale: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum::<f64>().max(1.0);
        if off <= 1e-26 * scale {
            return;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
}

/// Spectrum of `L(G □ H)`: all pairwise sums.
pub fn product_spectrum(g: &Spectrum, h: &Spectrum) -> Spectrum {
    let mut values = Vec::with_capacity(g.len() * h.len());
    for &a in g.eigenvalues() {
        for &b in h.eigenvalues() {
            values.push(a + b);
        }
    }
    Spectrum::new(values).expect("sums of nonnegative values")
}

/// `lim_{ℓ→∞} τ(C_m □ C_ℓ) = (1/m) Σ_{j=1}^{m−1} ln g(2πj/m)` with
/// `g(y) = 2 − cos y + √(cos² y − 4 cos y + 3)`.
pub fn tube_tau_limit(m: usize) -> Result<f64> {
    if m < 3 {
        return Err(Error::invalid("tube circumference must be at least 3"));
    }
    let sum: f64 = (1..m)
        .map(|j| {
            let c = libm::cos(2.0 * PI * j as f64 / m as f64);
            libm::log(2.0 - c + libm::sqrt(c * c - 4.0 * c + 3.0))
        })
        .sum();
    Ok(sum / m as f64)
}

/// `lim_{ℓ→∞} τ(H □ C_ℓ)`: the mean over the `|V(H)|` Laplacian eigenvalues
/// `μ` of `ln((μ + 2 + √(μ² + 4μ)) / 2)`, where `μ = 0` contributes 0.
pub fn tau_limit_product_cycle(h: &Graph) -> Result<f64> {
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(tau_limit_from_spectrum(&laplacian_spectrum(h)))
}

pub fn tau_limit_from_spectrum(spectrum: &Spectrum) -> f64 {
    let sum: f64 = spectrum
        .eigenvalues()
        .iter()
        .skip(1)
        .map(|&mu| libm::log((mu + 2.0 + libm::sqrt(mu * mu + 4.0 * mu)) / 2.0))
        .sum();
    sum / spectrum.len() as f64
}

/// Square-lattice spanning-tree entropy, `(4/π)·G` with `G` Catalan's
/// constant.
pub fn square_lattice_tau_limit() -> f64 {
    4.0 / PI * numeric::catalan()
}

/// Simple cubic lattice: `∫ ln(6 − 2c_x − 2c_y − 2c_z)` over the unit cube.
pub fn cubic_lattice_tau_limit() -> Result<f64> {
    let f = |x: f64, y: f64, z: f64| libm::log(6.0 - 2.0 * (x + y + z));
    integrate_log_cube(&f, 1e-7)
}

/// Partial sum `(5/π) Σ_{i=1}^{n} sin(iπ/3)/i²`.
pub fn triangular_partial_sum(n: usize) -> f64 {
    let sum: f64 = (1..=n)
        .map(|i| libm::sin(i as f64 * PI / 3.0) / (i * i) as f64)
        .sum();
    5.0 / PI * sum
}

/// Triangular lattice: `(5/π) Σ_{i≥1} sin(iπ/3)/i²`.
///
/// `sin(iπ/3)` has period 6 with values `(√3/2)(1, 1, 0, −1, −1, 0)`, so the
/// series is summed in blocks of six. Each block is positive and at most
/// `30/(6k+1)³`, which bounds the neglected tail by `5/(2(6K−5)²)` after
/// `K` blocks; `K = 10⁵` puts that below `1e−10`.
pub fn triangular_tau_limit() -> f64 {
    const BLOCKS: usize = 100_000;
    let mut sum = numeric::CompensatedSum::default();
    for k in (0..BLOCKS).rev() {
        let b = 6.0 * k as f64;
        let sq = |x: f64| 1.0 / (x * x);
        sum.add(sq(b + 1.0) + sq(b + 2.0) - sq(b + 4.0) - sq(b + 5.0));
    }
    5.0 / PI * (libm::sqrt(3.0) / 2.0) * sum.value()
}

/// Cubic ice (Ic): `(1/8) ∫ ln P(c_x, c_y, c_z)` over the unit cube, with
/// `P` the determinant polynomial of the diamond network.
pub fn ice_ic_tau() -> Result<f64> {
    let f = |x: f64, y: f64, z: f64| ice_ic_polynomial(x, y, z);
    let integral = integrate_log_cube(&|x, y, z| libm::log(f(x, y, z)), 1e-8)?;
    Ok(integral / 8.0)
}

pub fn ice_ic_polynomial(x: f64, y: f64, z: f64) -> f64 {
    16464.0 - 3136.0 * (x + y + z) - 2016.0 * (x * y + x * z + y * z) - 960.0 * x * y * z
        + 16.0 * (x * x * y * y + x * x * z * z + y * y * z * z)
        - 32.0 * (x * x * y * z + x * y * y * z + x * y * z * z)
}

/// `t(K_m □ C_ℓ) = (ℓ/m)(u_ℓ − 2)^{m−1}` with `u_k = x^{2k} + x^{−2k}`,
/// `x = (√m + √(m+4))/2`, generated exactly by `u_0 = 2`, `u_1 = m + 2`,
/// `u_{k+1} = (m+2)u_k − u_{k−1}`.
///
/// The `−2` is the `j = 0` factor of the eigenvalue product
/// `Π_{j=0}^{ℓ−1}(m + 2 − 2cos(2πj/ℓ)) = u_ℓ − 2`; without it the formula
/// overcounts (for `(m, ℓ) = (3, 3)` it would give 12100 instead of 11664).
pub fn clique_cycle_tree_count(m: usize, len: usize) -> Result<TreeCount> {
    if m < 3 || len < 3 {
        return Err(Error::invalid("clique and cycle sizes must be at least 3"));
    }
    let step = BigInt::from(m as u64 + 2);
    let mut prev = BigInt::from(2u32);
    let mut cur = step.clone();
    for _ in 1..len {
        let next = &step * &cur - &prev;
        prev = cur;
        cur = next;
    }
    let base = cur - BigInt::from(2u32);
    let numerator = base.pow(m as u32 - 1) * BigInt::from(len as u64);
    let (q, r) = numerator.div_rem(&BigInt::from(m as u64));
    debug_assert!(r.is_zero());
    let exact = q
        .to_biguint()
        .ok_or_else(|| Error::invalid("negative tree count"))?;
    Ok(TreeCount::from_exact(exact, m * len))
}

/// `t(Q_d) = (1/2^d) Π_{i=1}^{d} (2i)^{C(d,i)}`.
pub fn hypercube_tree_count(d: u32) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::invalid("hypercube dimension must be positive"));
    }
    let mut acc = BigUint::one();
    let mut binom = BigUint::one();
    for i in 1..=d {
        binom = binom * (d - i + 1) / i;
        let exponent: u32 = u32::try_from(&binom)
            .map_err(|_| Error::limit("hypercube dimension too large"))?;
        acc *= BigUint::from(2 * i).pow(exponent);
    }
    Ok(acc >> d)
}

/// `τ(Q_d)` computed in floating point from the product formula.
pub fn hypercube_tau(d: u32) -> f64 {
    let mut log_t = -(d as f64) * numeric::LN_2;
    let mut binom = 1.0f64;
    for i in 1..=d {
        binom = binom * (d - i + 1) as f64 / i as f64;
        log_t += binom * libm::log(2.0 * i as f64);
    }
    log_t / libm::pow(2.0, d as f64)
}

/// Spanning-tree entropy around which random `d`-regular graphs concentrate:
/// `τ_d = ln((d−1)^{d−1} / (d² − 2d)^{d/2 − 1})`.
pub fn tau_random_regular(d: usize) -> Result<f64> {
    if d < 3 {
        return Err(Error::invalid("random-regular tree entropy needs d >= 3"));
    }
    let df = d as f64;
    Ok((df - 1.0) * libm::log(df - 1.0) - (df / 2.0 - 1.0) * libm::log(df * df - 2.0 * df))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::LatticeSpec;

    fn g(spec: LatticeSpec) -> Graph {
        spec.make().unwrap()
    }

    #[test]
    fn exact_counts_of_small_graphs() {
        for n in 3..9 {
            assert_eq!(tree_count_exact(&g(LatticeSpec::Cycle(n))).unwrap(), BigUint::from(n));
        }
        assert_eq!(tree_count_exact(&g(LatticeSpec::Clique(4))).unwrap(), BigUint::from(16u32));
        let c3c3 = g(LatticeSpec::Torus(vec![3, 3]));
        assert_eq!(tree_count_exact(&c3c3).unwrap(), BigUint::from(11664u32));
    }

    #[test]
    fn multigraph_and_disconnected_counts() {
        let double = Graph::new(2, [(0, 1, 3)]).unwrap();
        assert_eq!(tree_count_exact(&double).unwrap(), BigUint::from(3u32));
        let two = g(LatticeSpec::Cycle(3)).disjoint_union(&g(LatticeSpec::Cycle(3)));
        assert!(tree_count_exact(&two).unwrap().is_zero());
        assert_eq!(tree_entropy(&two), Err(Error::Disconnected));
    }

    #[test]
    fn exact_limit_enforced() {
        let c = g(LatticeSpec::Cycle(10));
        assert!(matches!(
            tree_count_exact_with_limit(&c, 9),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn entropy_examples() {
        let c3c3 = tree_entropy(&g(LatticeSpec::Torus(vec![3, 3]))).unwrap();
        assert!((c3c3.tau - libm::log(11664.0) / 9.0).abs() < 1e-12);
        assert!((c3c3.tau - libm::log(11664.0) / 9.0).abs() < 1e-12);

        let k5 = tree_entropy(&g(LatticeSpec::Clique(5))).unwrap();
        assert_eq!(k5.exact, Some(BigUint::from(125u32)));
        assert!((k5.tau - libm::log(125.0) / 5.0).abs() < 1e-12);

        let q4 = tree_entropy(&g(LatticeSpec::Hypercube(4))).unwrap();
        assert_eq!(q4.exact, Some(BigUint::from(42467328u32)));
        assert!((q4.tau - 1.097765).abs() < 1e-6);
    }

    #[test]
    fn spectra() {
        let c3 = laplacian_spectrum(&g(LatticeSpec::Cycle(3)));
        let expected = [0.0, 3.0, 3.0];
        for (a, b) in c3.eigenvalues().iter().zip(expected) {
            assert!((a - b).abs() < 1e-10);
        }
        let sq = product_spectrum(&c3, &c3);
        assert_eq!(sq.len(), 9);
        assert!((libm::exp(sq.log_tree_count()) - 11664.0).abs() < 1e-6 * 11664.0);

        let k1 = Spectrum::new(vec![0.0]).unwrap();
        assert_eq!(product_spectrum(&k1, &c3), c3);

        let two = g(LatticeSpec::Cycle(4)).disjoint_union(&g(LatticeSpec::Cycle(5)));
        assert_eq!(laplacian_spectrum(&two).zero_count(1e-8), 2);
    }

    #[test]
    fn tube_limits() {
        assert!((tube_tau_limit(3).unwrap() - 1.04453).abs() < 5e-6);
        assert!((tube_tau_limit(4).unwrap() - 1.09917).abs() < 5e-6);
        assert!((tube_tau_limit(16).unwrap() - 1.16215).abs() < 5e-6);
        assert!(tube_tau_limit(2).is_err());
        let c3 = tau_limit_product_cycle(&g(LatticeSpec::Cycle(3))).unwrap();
        assert!((c3 - tube_tau_limit(3).unwrap()).abs() < 1e-12);
        let mut last = 0.0;
        for m in 3..40 {
            let t = tube_tau_limit(m).unwrap();
            assert!(t > last && t < square_lattice_tau_limit());
            last = t;
        }
        assert!((tube_tau_limit(200).unwrap() - square_lattice_tau_limit()).abs() < 1e-4);
    }

    #[test]
    fn three_cycle_tube_limits() {
        let c3c3 = tau_limit_product_cycle(&g(LatticeSpec::Torus(vec![3, 3]))).unwrap();
        assert!((c3c3 - 1.61344).abs() < 5e-6);
        let c4c4 = tau_limit_product_cycle(&g(LatticeSpec::Torus(vec![4, 4]))).unwrap();
        assert!((c4c4 - 1.64941).abs() < 5e-6);
    }

    #[test]
    fn lattice_constants() {
        assert!((square_lattice_tau_limit() - 1.1662436).abs() < 1e-7);
        assert!((triangular_tau_limit() - 1.615_329_736_097).abs() < 1e-9);
        assert!((triangular_tau_limit() - triangular_partial_sum(200_000)).abs() < 5.0 / PI / 200_000.0);
        for i in [3usize, 6, 9, 300] {
            assert!(libm::sin(i as f64 * PI / 3.0).abs() < 1e-12);
        }
        assert!((ice_ic_polynomial(1.0, 1.0, 1.0)).abs() < 1e-9);
        assert!((libm::log(6.0 + 6.0) - libm::log(12.0)).abs() < 1e-15);
    }

    #[test]
    fn clique_cycle_counts() {
        let c = clique_cycle_tree_count(3, 3).unwrap();
        assert_eq!(c.exact, Some(BigUint::from(11664u32)));
        let built = tree_count_exact(&g(LatticeSpec::CliqueCycle { m: 3, len: 3 })).unwrap();
        assert_eq!(c.exact.unwrap(), built);
        let kc = clique_cycle_tree_count(5, 4).unwrap();
        let direct = tree_entropy(&g(LatticeSpec::CliqueCycle { m: 5, len: 4 })).unwrap();
        assert!((kc.tau - direct.tau).abs() < 1e-10);
        assert_eq!(kc.exact, direct.exact);
    }

    #[test]
    fn hypercube_counts() {
        assert_eq!(hypercube_tree_count(2).unwrap(), BigUint::from(4u32));
        assert_eq!(hypercube_tree_count(3).unwrap(), BigUint::from(384u32));
        assert_eq!(hypercube_tree_count(4).unwrap(), BigUint::from(42467328u32));
        let exact = ln_big(&hypercube_tree_count(10).unwrap()) / 1024.0;
        assert!((exact - hypercube_tau(10)).abs() < 1e-12);
    }

    #[test]
    fn random_regular_tree_entropy() {
        assert!((tau_random_regular(4).unwrap() - libm::log(27.0 / 8.0)).abs() < 1e-12);
        assert!((tau_random_regular(6).unwrap() - libm::log(3125.0 / 576.0)).abs() < 1e-12);
        assert!(tau_random_regular(2).is_err());
    }
}
