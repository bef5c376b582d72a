//! Transfer matrices for `G □ C_ℓ` as `ℓ → ∞`.
//!
//! A layer state `x ∈ {0,1}^n` records which cross-edges entering the layer
//! point forward. The transfer matrix is `t_{x,y} = N_G(2(y − x))`, where
//! `N_G` is the orientation census of the fiber. Symmetries of the fiber and
//! global complement preserve `T`, so its Perron root can be found on the
//! orbit-collapsed matrix `S` whose entry `s_{i,j}` is the common row sum of
//! the block `T[O_i, O_j]`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::eo_exact::{orientation_census, CensusTable};
use crate::error::{Error, Result};
use crate::generators::Permutation;
use crate::graph::Graph;

/// Largest fiber handled.
pub const MAX_FIBER_VERTICES: usize = 24;
/// Largest fiber for which the full transfer matrix may be built.
pub const MAX_DENSE_VERTICES: usize = 16;
/// Up to this many states every orbit member's row is validated.
const FULL_VALIDATION_STATES: usize = 4096;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_MAX_ITERATIONS: usize = 200_000;

/// A vertex permutation compiled to byte lookup tables acting on bitmasks.
struct MaskPermutation {
    tables: Vec<[u32; 256]>,
}

impl MaskPermutation {
    fn new(perm: &[usize]) -> Self {
        let chunks = perm.len().div_ceil(8);
        let tables = (0..chunks)
            .map(|c| {
                let mut table = [0u32; 256];
                for (byte, entry) in table.iter_mut().enumerate() {
                    for bit in 0..8 {
                        let v = 8 * c + bit;
                        if v < perm.len() && byte >> bit & 1 == 1 {
                            *entry |= 1 << perm[v];
                        }
                    }
                }
                table
            })
            .collect();
        MaskPermutation { tables }
    }

    fn apply(&self, x: u32) -> u32 {
        self.tables
            .iter()
            .enumerate()
            .fold(0, |acc, (c, t)| acc | t[(x >> (8 * c) & 0xff) as usize])
    }
}

/// Orbits of `{0,1}^n` under the group generated by the given vertex
/// permutations together with global bit complement.
#[derive(Debug, Clone)]
pub struct OrbitPartition {
    n: usize,
    orbit_of: Vec<u32>,
    representatives: Vec<u32>,
    sizes: Vec<u64>,
}

impl OrbitPartition {
    pub fn new(n: usize, generators: &[Permutation]) -> Result<Self> {
        if n == 0 || n > MAX_FIBER_VERTICES {
            return Err(Error::limit(format!(
                "fiber must have 1..={MAX_FIBER_VERTICES} vertices, got {n}"
            )));
        }
        for perm in generators {
            let mut seen = vec![false; n];
            if perm.len() != n || perm.iter().any(|&p| p >= n || core::mem::replace(&mut seen[p], true)) {
                return Err(Error::invalid("generator is not a permutation of the fiber vertices"));
            }
        }
        let maps: Vec<MaskPermutation> = generators.iter().map(|p| MaskPermutation::new(p)).collect();
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let states = 1usize << n;
        let mut orbit_of = vec![u32::MAX; states];
        let mut representatives = Vec::new();
        let mut sizes = Vec::new();
        let mut stack = Vec::new();
        for x in 0..states {
            if orbit_of[x] != u32::MAX {
                continue;
            }
            let id = representatives.len() as u32;
            representatives.push(x as u32);
            orbit_of[x] = id;
            stack.push(x as u32);
            let mut size = 0u64;
            while let Some(s) = stack.pop() {
                size += 1;
                let images = maps.iter().map(|m| m.apply(s)).chain(core::iter::once(!s & full));
                for t in images {
                    if orbit_of[t as usize] == u32::MAX {
                        orbit_of[t as usize] = id;
                        stack.push(t);
                    }
                }
            }
            sizes.push(size);
        }
        Ok(OrbitPartition {
            n,
            orbit_of,
            representatives,
            sizes,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.representatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.representatives.is_empty()
    }

    pub fn orbit_of(&self, x: u32) -> usize {
        self.orbit_of[x as usize] as usize
    }

    /// Smallest state of each orbit.
    pub fn representatives(&self) -> &[u32] {
        &self.representatives
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }
}

/// Nonnegative sparse matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    offsets: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<f64>,
}

impl SparseMatrix {
    fn from_rows(rows: Vec<Vec<(u32, u128)>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for row in rows {
            for (c, v) in row {
                cols.push(c);
                values.push(v as f64);
            }
            offsets.push(cols.len());
        }
        SparseMatrix {
            offsets,
            cols,
            values,
        }
    }

    pub fn order(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn nonzeros(&self) -> usize {
        self.values.len()
    }

    /// Entry `(i, j)`, zero when absent.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.offsets[i]..self.offsets[i + 1];
        self.cols[range.clone()]
            .iter()
            .position(|&c| c as usize == j)
            .map_or(0.0, |p| self.values[range.start + p])
    }

    pub fn mul_vec(&self, v: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            let range = self.offsets[i]..self.offsets[i + 1];
            *o = self.cols[range.clone()]
                .iter()
                .zip(&self.values[range])
                .map(|(&c, &a)| a * v[c as usize])
                .sum();
        }
    }

    /// Perron root by power iteration from the all-ones vector.
    ///
    /// The growth factor of the 1-norm is tracked; iteration stops once it
    /// changes by less than `tol` relative on three consecutive steps.
    pub fn leading_eigenvalue(&self, tol: f64, max_iterations: usize) -> Result<f64> {
        let order = self.order();
        let mut v = vec![1.0 / order as f64; order];
        let mut w = vec![0.0; order];
        let mut previous = f64::NAN;
        let mut calm = 0;
        for _ in 0..max_iterations {
            self.mul_vec(&v, &mut w);
            let lambda: f64 = w.iter().sum();
            if lambda.is_nan() || lambda <= 0.0 || !lambda.is_finite() {
                return Err(Error::invalid("matrix has no positive Perron root from the ones vector"));
            }
            for (vi, wi) in v.iter_mut().zip(&w) {
                *vi = wi / lambda;
            }
            if (lambda - previous).abs() <= tol * lambda {
                calm += 1;
                if calm >= 3 {
                    return Ok(lambda);
                }
            } else {
                calm = 0;
            }
            previous = lambda;
        }
        Err(Error::NoConvergence(max_iterations))
    }
}

fn census_entry(census: &CensusTable, x: u32, y: u32) -> u128 {
    census.get_masks(y & !x, x & !y)
}

/// Calls `f` on every `n`-bit mask with the same popcount as `x`.
fn for_each_same_weight(n: usize, x: u32, mut f: impl FnMut(u32)) {
    let k = x.count_ones();
    if k == 0 {
        f(0);
        return;
    }
    let limit: u64 = 1u64 << n;
    let mut y: u64 = (1u64 << k) - 1;
    while y < limit {
        f(y as u32);
        // next mask of equal weight (Gosper)
        let c = y & y.wrapping_neg();
        let r = y + c;
        y = (((r ^ y) >> 2) / c) | r;
    }
}

fn collapsed_row(census: &CensusTable, orbits: &OrbitPartition, x: u32) -> Vec<(u32, u128)> {
    let mut acc: HashMap<u32, u128> = HashMap::new();
    for_each_same_weight(orbits.n(), x, |y| {
        let c = census_entry(census, x, y);
        if c > 0 {
            *acc.entry(orbits.orbit_of(y) as u32).or_insert(0) += c;
        }
    });
    let mut row: Vec<(u32, u128)> = acc.into_iter().collect();
    row.sort_unstable();
    row
}

/// Fiber, symmetry data and the collapsed transfer matrix with its Perron
/// root.
#[derive(Debug, Clone)]
pub struct TransferSystem {
    fiber: Graph,
    generators: Vec<Permutation>,
    orbits: OrbitPartition,
    s_matrix: SparseMatrix,
    lambda: f64,
}

impl TransferSystem {
    /// Builds `S` and its leading eigenvalue with default tolerances.
    pub fn build(fiber: &Graph, generators: &[Permutation]) -> Result<Self> {
        let n = fiber.n();
        if n > MAX_FIBER_VERTICES {
            return Err(Error::limit(format!(
                "fiber has {n} vertices; at most {MAX_FIBER_VERTICES} supported"
            )));
        }
        fiber.require_even_degrees()?;
        if !fiber.is_connected() {
            return Err(Error::Disconnected);
        }
        for (i, perm) in generators.iter().enumerate() {
            if !fiber.is_automorphism(perm) {
                return Err(Error::NotAutomorphism(i));
            }
        }
        let orbits = OrbitPartition::new(n, generators)?;
        let census = orientation_census(fiber)?;
        let rows: Vec<Vec<(u32, u128)>> = orbits
            .representatives()
            .iter()
            .map(|&x| collapsed_row(&census, &orbits, x))
            .collect();
        validate_rows(&census, &orbits, generators, &rows)?;
        let s_matrix = SparseMatrix::from_rows(rows);
        let lambda = s_matrix.leading_eigenvalue(DEFAULT_TOLERANCE, DEFAULT_MAX_ITERATIONS)?;
        Ok(TransferSystem {
            fiber: fiber.clone(),
            generators: generators.to_vec(),
            orbits,
            s_matrix,
            lambda,
        })
    }

    pub fn fiber(&self) -> &Graph {
        &self.fiber
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn orbits(&self) -> &OrbitPartition {
        &self.orbits
    }

    pub fn s_matrix(&self) -> &SparseMatrix {
        &self.s_matrix
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `ln λ / n`.
    pub fn rho_limit(&self) -> f64 {
        libm::log(self.lambda) / self.fiber.n() as f64
    }

    /// Recomputes the Perron root of `S` with a custom tolerance.
    pub fn leading_eigenvalue(&self, tol: f64) -> Result<f64> {
        self.s_matrix.leading_eigenvalue(tol, DEFAULT_MAX_ITERATIONS)
    }
}

fn validate_rows(
    census: &CensusTable,
    orbits: &OrbitPartition,
    generators: &[Permutation],
    rows: &[Vec<(u32, u128)>],
) -> Result<()> {
    let n = orbits.n();
    let check = |x: u32| -> Result<()> {
        let i = orbits.orbit_of(x);
        if collapsed_row(census, orbits, x) != rows[i] {
            return Err(Error::invalid(format!(
                "state {x:#b} disagrees with its orbit representative; generators are not symmetries"
            )));
        }
        Ok(())
    };
    if (1usize << n) <= FULL_VALIDATION_STATES {
        for x in 0..1u32 << n {
            check(x)?;
        }
        return Ok(());
    }
    let maps: Vec<MaskPermutation> = generators.iter().map(|p| MaskPermutation::new(p)).collect();
    let full = (1u32 << n) - 1;
    for &rep in orbits.representatives() {
        let other = maps
            .iter()
            .map(|m| m.apply(rep))
            .chain(core::iter::once(!rep & full))
            .find(|&y| y != rep);
        if let Some(y) = other {
            check(y)?;
        }
    }
    Ok(())
}

/// `lim_{ℓ→∞} ρ(G □ C_ℓ) = ln λ / n`.
pub fn rho_product_cycle_limit(fiber: &Graph, generators: &[Permutation]) -> Result<f64> {
    Ok(TransferSystem::build(fiber, generators)?.rho_limit())
}

/// Full `2^n × 2^n` transfer matrix, checking `t_{x,y} = t_{x̄,ȳ}`.
pub fn dense_transfer(fiber: &Graph) -> Result<SparseMatrix> {
    let n = fiber.n();
    if n > MAX_DENSE_VERTICES {
        return Err(Error::limit(format!(
            "dense transfer matrix limited to {MAX_DENSE_VERTICES} vertices"
        )));
    }
    let census = orientation_census(fiber)?;
    let full = (1u32 << n) - 1;
    let mut rows = Vec::with_capacity(1 << n);
    for x in 0..1u32 << n {
        let mut row = Vec::new();
        for_each_same_weight(n, x, |y| {
            let c = census_entry(&census, x, y);
            if c > 0 {
                row.push((y, c));
            }
        });
        for &(y, c) in &row {
            if census_entry(&census, !x & full, !y & full) != c {
                return Err(Error::invalid("transfer matrix is not complement symmetric"));
            }
        }
        row.sort_unstable();
        rows.push(row);
    }
    Ok(SparseMatrix::from_rows(rows))
}

/// Perron root of the uncollapsed transfer matrix.
pub fn dense_leading_eigenvalue(fiber: &Graph, tol: f64) -> Result<f64> {
    fiber.require_even_degrees()?;
    dense_transfer(fiber)?.leading_eigenvalue(tol, DEFAULT_MAX_ITERATIONS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::LatticeSpec;

    fn system(spec: LatticeSpec) -> TransferSystem {
        let g = spec.make().unwrap();
        TransferSystem::build(&g, &spec.automorphism_generators().unwrap()).unwrap()
    }

    #[test]
    fn triangle_fiber() {
        let sys = system(LatticeSpec::Cycle(3));
        assert_eq!(sys.orbits().len(), 2);
        let s = sys.s_matrix();
        assert_eq!(
            [s.get(0, 0), s.get(0, 1), s.get(1, 0), s.get(1, 1)],
            [2.0, 0.0, 0.0, 4.0]
        );
        assert!((sys.lambda() - 4.0).abs() < 1e-12);
        assert!((sys.rho_limit() - libm::log(4.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn square_fiber_orbits() {
        let sys = system(LatticeSpec::Cycle(4));
        let mut sizes = sys.orbits().sizes().to_vec();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 2, 4, 8]);
    }

    #[test]
    fn complement_only_orbits() {
        let orbits = OrbitPartition::new(5, &[]).unwrap();
        assert_eq!(orbits.len(), 16);
        assert!(orbits.sizes().iter().all(|&s| s == 2));
    }

    #[test]
    fn rejects_non_automorphism() {
        let g = LatticeSpec::Cycle(5).make().unwrap();
        let bad = vec![vec![1, 0, 2, 3, 4]];
        assert!(matches!(TransferSystem::build(&g, &bad), Err(Error::NotAutomorphism(0))));
    }

    #[test]
    fn collapsed_matches_dense() {
        for spec in [LatticeSpec::Cycle(5), LatticeSpec::Cycle(6), LatticeSpec::Clique(5)] {
            let sys = system(spec.clone());
            let dense = dense_leading_eigenvalue(sys.fiber(), 1e-13).unwrap();
            assert!((sys.lambda() / dense - 1.0).abs() < 1e-10, "{spec:?}");
        }
    }

    #[test]
    fn gosper_enumerates_binomial() {
        let mut count = 0;
        for_each_same_weight(10, 0b111, |y| {
            assert_eq!(y.count_ones(), 3);
            count += 1;
        });
        assert_eq!(count, 120);
    }
}
