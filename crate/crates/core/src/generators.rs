//! Graph families: cycles, cliques, hypercubes, periodic lattices, ice
//! networks, cycles of cliques, and randomised graphs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A vertex permutation given as the image of each vertex.
pub type Permutation = Vec<usize>;

/// A named graph family with its size parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeSpec {
    /// `C_n`, `n ≥ 3`.
    Cycle(usize),
    /// `K_n`, `n ≥ 1`.
    Clique(usize),
    /// `Q_d` on `2^d` vertices, `d ≥ 1`.
    Hypercube(u32),
    /// `C_{a} □ C_{b} □ …`, each length `≥ 3`.
    Torus(Vec<usize>),
    /// `a × b` torus grid plus the diagonal `(i, j)–(i+1, j+1)` of every cell.
    TriangularTorus(usize, usize),
    /// Cubic ice (diamond network) on `k³` conventional cells.
    IceIc(usize),
    /// Hexagonal ice (lonsdaleite network) on `k³` hexagonal cells.
    IceIh(usize),
    /// `K_m □ C_len`, `m` odd.
    CliqueCycle { m: usize, len: usize },
}

impl LatticeSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            LatticeSpec::Cycle(n) => *n >= 3,
            LatticeSpec::Clique(n) => *n >= 1,
            LatticeSpec::Hypercube(d) => (1..=24).contains(d),
            LatticeSpec::Torus(lens) => !lens.is_empty() && lens.iter().all(|&l| l >= 3),
            LatticeSpec::TriangularTorus(a, b) => *a >= 3 && *b >= 3,
            LatticeSpec::IceIc(k) => *k >= 1,
            LatticeSpec::IceIh(k) => *k >= 2,
            LatticeSpec::CliqueCycle { m, len } => *m >= 3 && m % 2 == 1 && *len >= 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("invalid lattice parameters {self:?}")))
        }
    }

    pub fn make(&self) -> Result<Graph> {
        self.validate()?;
        match self {
            LatticeSpec::Cycle(n) => cycle(*n),
            LatticeSpec::Clique(n) => clique(*n),
            LatticeSpec::Hypercube(d) => hypercube(*d),
            LatticeSpec::Torus(lens) => {
                let mut g = cycle(lens[0])?;
                for &l in &lens[1..] {
                    g = g.cartesian_product(&cycle(l)?)?;
                }
                Ok(g)
            }
            LatticeSpec::TriangularTorus(a, b) => triangular_torus(*a, *b),
            LatticeSpec::IceIc(k) => ice_ic(*k),
            LatticeSpec::IceIh(k) => ice_ih(*k),
            LatticeSpec::CliqueCycle { m, len } => clique(*m)?.cartesian_product(&cycle(*len)?),
        }
    }

    /// Generators of a subgroup of the automorphism group, in the vertex
    /// numbering used by [`LatticeSpec::make`].
    pub fn automorphism_generators(&self) -> Result<Vec<Permutation>> {
        self.validate()?;
        Ok(match self {
            LatticeSpec::Cycle(n) => cycle_generators(*n),
            LatticeSpec::Clique(n) => clique_generators(*n),
            LatticeSpec::Hypercube(d) => hypercube_generators(*d),
            LatticeSpec::Torus(lens) => {
                let factors: Vec<(usize, Vec<Permutation>)> =
                    lens.iter().map(|&l| (l, cycle_generators(l))).collect();
                let mut gens = product_generators(&factors);
                // swapping two adjacent factors of equal length
                let dims = lens.len();
                for axis in 0..dims.saturating_sub(1) {
                    if lens[axis] == lens[axis + 1] {
                        gens.push(swap_axes(lens, axis));
                    }
                }
                gens
            }
            LatticeSpec::TriangularTorus(a, b) => product_generators(&[
                (*a, vec![rotation(*a)]),
                (*b, vec![rotation(*b)]),
            ]),
            LatticeSpec::IceIc(k) => cell_translations(*k, 8),
            LatticeSpec::IceIh(k) => cell_translations(*k, 4),
            LatticeSpec::CliqueCycle { m, len } => product_generators(&[
                (*m, clique_generators(*m)),
                (*len, cycle_generators(*len)),
            ]),
        })
    }
}

fn cycle(n: usize) -> Result<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_pairs(n, &pairs)
}

fn clique(n: usize) -> Result<Graph> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((u, v));
        }
    }
    Graph::from_pairs(n, &pairs)
}

fn hypercube(d: u32) -> Result<Graph> {
    let n = 1usize << d;
    let mut pairs = Vec::with_capacity(n * d as usize / 2);
    for x in 0..n {
        for bit in 0..d {
            let y = x ^ (1 << bit);
            if x < y {
                pairs.push((x, y));
            }
        }
    }
    Graph::from_pairs(n, &pairs)
}

fn triangular_torus(a: usize, b: usize) -> Result<Graph> {
    let idx = |i: usize, j: usize| (i % a) * b + (j % b);
    let mut pairs = Vec::with_capacity(3 * a * b);
    for i in 0..a {
        for j in 0..b {
            pairs.push((idx(i, j), idx(i + 1, j)));
            pairs.push((idx(i, j), idx(i, j + 1)));
            pairs.push((idx(i, j), idx(i + 1, j + 1)));
        }
    }
    Graph::from_pairs(a * b, &pairs)
}

/// Diamond cubic network. Coordinates are in units of a quarter of the
/// conventional cube edge, so the cell spans `0..4` on each axis. The eight
/// atoms are the FCC sites `(0,0,0) (0,2,2) (2,0,2) (2,2,0)` and the same
/// sites shifted by `(1,1,1)`; each unshifted atom bonds to the four atoms
/// at offsets `(±1,±1,±1)` with an even number of minus signs. Vertex index
/// is `((cx·k + cy)·k + cz)·8 + basis`.
fn ice_ic(k: usize) -> Result<Graph> {
    const FCC: [[usize; 3]; 4] = [[0, 0, 0], [0, 2, 2], [2, 0, 2], [2, 2, 0]];
    const BONDS: [[isize; 3]; 4] = [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]];
    let period = 4 * k as isize;
    let basis: Vec<[usize; 3]> = FCC
        .iter()
        .copied()
        .chain(FCC.iter().map(|p| [p[0] + 1, p[1] + 1, p[2] + 1]))
        .collect();
    let index = |p: [isize; 3]| -> usize {
        let w: Vec<usize> = p.iter().map(|&c| c.rem_euclid(period) as usize).collect();
        let local = [w[0] % 4, w[1] % 4, w[2] % 4];
        let b = basis.iter().position(|q| *q == local).expect("diamond site");
        (((w[0] / 4) * k + w[1] / 4) * k + w[2] / 4) * 8 + b
    };
    let mut pairs = Vec::with_capacity(16 * k * k * k);
    for cx in 0..k {
        for cy in 0..k {
            for cz in 0..k {
                for site in FCC {
                    let p = [
                        (4 * cx + site[0]) as isize,
                        (4 * cy + site[1]) as isize,
                        (4 * cz + site[2]) as isize,
                    ];
                    for bond in BONDS {
                        let q = [p[0] + bond[0], p[1] + bond[1], p[2] + bond[2]];
                        pairs.push((index(p), index(q)));
                    }
                }
            }
        }
    }
    Graph::from_pairs(8 * k * k * k, &pairs)
}

/// Lonsdaleite network on a hexagonal cell with four atoms:
/// `A (⅓,⅔,0)`, `B (⅓,⅔,⅜)`, `C (⅔,⅓,½)`, `D (⅔,⅓,⅞)` in fractional
/// coordinates. Bonds: `A–B` and `C–D` along `c` inside a cell; `B` to the
/// three in-plane honeycomb neighbours `C` in cells `(0,0,0)`, `(−1,0,0)`,
/// `(0,1,0)`; `D` to the three `A` in cells `(0,0,1)`, `(1,0,1)`,
/// `(0,−1,1)`. Vertex index is `((a·k + b)·k + c)·4 + atom`.
fn ice_ih(k: usize) -> Result<Graph> {
    let kk = k as isize;
    let index = |a: isize, b: isize, c: isize, atom: usize| -> usize {
        let w = |t: isize| t.rem_euclid(kk) as usize;
        ((w(a) * k + w(b)) * k + w(c)) * 4 + atom
    };
    let (at_a, at_b, at_c, at_d) = (0, 1, 2, 3);
    let mut pairs = Vec::with_capacity(8 * k * k * k);
    for a in 0..kk {
        for b in 0..kk {
            for c in 0..kk {
                pairs.push((index(a, b, c, at_a), index(a, b, c, at_b)));
                pairs.push((index(a, b, c, at_c), index(a, b, c, at_d)));
                for (da, db) in [(0, 0), (-1, 0), (0, 1)] {
                    pairs.push((index(a, b, c, at_b), index(a + da, b + db, c, at_c)));
                }
                for (da, db) in [(0, 0), (1, 0), (0, -1)] {
                    pairs.push((index(a, b, c, at_d), index(a + da, b + db, c + 1, at_a)));
                }
            }
        }
    }
    Graph::from_pairs(4 * k * k * k, &pairs)
}

fn rotation(n: usize) -> Permutation {
    (0..n).map(|i| (i + 1) % n).collect()
}

fn cycle_generators(n: usize) -> Vec<Permutation> {
    vec![rotation(n), (0..n).map(|i| (n - i) % n).collect()]
}

fn clique_generators(n: usize) -> Vec<Permutation> {
    if n < 2 {
        return Vec::new();
    }
    let mut swap: Permutation = (0..n).collect();
    swap.swap(0, 1);
    vec![swap, rotation(n)]
}

fn hypercube_generators(d: u32) -> Vec<Permutation> {
    let n = 1usize << d;
    let mut gens = vec![(0..n).map(|x| x ^ 1).collect::<Permutation>()];
    if d >= 2 {
        let swap01 = |x: usize| {
            let (b0, b1) = (x & 1, (x >> 1) & 1);
            (x & !3) | (b0 << 1) | b1
        };
        gens.push((0..n).map(swap01).collect());
        let shift = |x: usize| ((x << 1) | (x >> (d - 1))) & (n - 1);
        gens.push((0..n).map(shift).collect());
    }
    gens
}

/// Lifts each factor's generators to the row-major product numbering.
fn product_generators(factors: &[(usize, Vec<Permutation>)]) -> Vec<Permutation> {
    let sizes: Vec<usize> = factors.iter().map(|f| f.0).collect();
    let total: usize = sizes.iter().product();
    let mut gens = Vec::new();
    for (axis, (_, factor_gens)) in factors.iter().enumerate() {
        let stride: usize = sizes[axis + 1..].iter().product();
        for g in factor_gens {
            let perm = (0..total)
                .map(|x| {
                    let coord = (x / stride) % sizes[axis];
                    x - coord * stride + g[coord] * stride
                })
                .collect();
            gens.push(perm);
        }
    }
    gens
}

fn swap_axes(sizes: &[usize], axis: usize) -> Permutation {
    let total: usize = sizes.iter().product();
    let s1: usize = sizes[axis + 2..].iter().product();
    let s0 = s1 * sizes[axis + 1];
    let len = sizes[axis];
    (0..total)
        .map(|x| {
            let a = (x / s0) % len;
            let b = (x / s1) % len;
            x - a * s0 - b * s1 + b * s0 + a * s1
        })
        .collect()
}

/// Translations by one cell along each axis for a `k³` cell lattice with
/// `atoms` vertices per cell.
fn cell_translations(k: usize, atoms: usize) -> Vec<Permutation> {
    let total = k * k * k * atoms;
    (0..3)
        .map(|axis| {
            let stride = atoms * k.pow(2 - axis as u32);
            (0..total)
                .map(|x| {
                    let coord = (x / stride) % k;
                    x - coord * stride + ((coord + 1) % k) * stride
                })
                .collect()
        })
        .collect()
}

/// Record of a randomised switching run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwitchTrace {
    pub seed: u64,
    pub requested: usize,
    pub applied: usize,
}

/// Applies `count` attempted switchings `{ab, cd} → {ac, bd}` at uniformly
/// random pairs of edges. An attempt whose edges share a vertex or whose
/// result would contain a loop or a multiple edge is counted but not
/// retried. Degrees are preserved exactly.
pub fn random_switchings(g: &Graph, count: usize, seed: u64) -> Result<(Graph, SwitchTrace)> {
    if !g.is_simple() {
        return Err(Error::NotSimple);
    }
    if g.edges().len() < 2 {
        return Err(Error::invalid("switching needs at least two edges"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    let mut present: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
    let key = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    let mut applied = 0;
    for _ in 0..count {
        let i = rng.gen_range(0..edges.len());
        let mut j = rng.gen_range(0..edges.len() - 1);
        if j >= i {
            j += 1;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.gen::<bool>() {
            core::mem::swap(&mut c, &mut d);
        }
        if a == c || a == d || b == c || b == d {
            continue;
        }
        let (ac, bd) = (key(a, c), key(b, d));
        if present.contains(&ac) || present.contains(&bd) {
            continue;
        }
        present.remove(&key(a, b));
        present.remove(&key(c, d));
        present.insert(ac);
        present.insert(bd);
        edges[i] = ac;
        edges[j] = bd;
        applied += 1;
    }
    let out = Graph::from_pairs(g.n(), &edges)?;
    Ok((
        out,
        SwitchTrace {
            seed,
            requested: count,
            applied,
        },
    ))
}

/// Simple `d`-regular graph from the pairing model, restarting whenever a
/// loop or a repeated pair appears.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph> {
    const MAX_RESTARTS: usize = 200_000;
    if n * d % 2 == 1 || d >= n {
        return Err(Error::invalid(format!("no simple {d}-regular graph on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n * d).map(|p| p / d).collect();
    'restart: for _ in 0..MAX_RESTARTS {
        points.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !seen.insert(if u < v { (u, v) } else { (v, u) }) {
                continue 'restart;
            }
        }
        let pairs: Vec<(usize, usize)> = seen.into_iter().collect();
        return Graph::from_pairs(n, &pairs);
    }
    Err(Error::limit(format!(
        "pairing model found no simple graph in {MAX_RESTARTS} attempts"
    )))
}

/// Number of even-degree simple graphs on `n` labelled vertices, as a
/// power of two: `C(n−1, 2)`.
pub fn even_graph_bits(n: usize) -> usize {
    n.saturating_sub(1) * n.saturating_sub(2) / 2
}

/// The even-degree simple graph on `n` labelled vertices selected by `mask`.
///
/// Bit `k` of `mask` toggles the triangle `{0, i, j}` for the `k`-th pair
/// `1 ≤ i < j < n` in lexicographic order. These triangles form a basis of
/// the cycle space of `K_n`, so masks `0..2^{C(n−1,2)}` enumerate every even
/// subgraph exactly once. Isolated vertices are kept.
pub fn even_graph_from_mask(n: usize, mask: u64) -> Result<Graph> {
    let bits = even_graph_bits(n);
    if bits > 64 || (bits < 64 && mask >> bits != 0) {
        return Err(Error::invalid(format!("mask out of range for {n} vertices")));
    }
    let mut adjacent = vec![false; n * n];
    let mut toggle = |a: usize, b: usize| {
        adjacent[a * n + b] ^= true;
        adjacent[b * n + a] ^= true;
    };
    let mut k = 0;
    for i in 1..n {
        for j in i + 1..n {
            if mask >> k & 1 == 1 {
                toggle(0, i);
                toggle(i, j);
                toggle(0, j);
            }
            k += 1;
        }
    }
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if adjacent[a * n + b] {
                pairs.push((a, b));
            }
        }
    }
    Graph::from_pairs(n, &pairs)
}

/// Uniformly random even-degree simple graph on `n` labelled vertices.
pub fn random_even_graph(n: usize, seed: u64) -> Result<Graph> {
    let bits = even_graph_bits(n);
    if bits > 64 {
        return Err(Error::invalid("at most 12 vertices supported"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: u64 = rng.gen();
    let mask = if bits == 64 { raw } else { raw & ((1u64 << bits) - 1) };
    even_graph_from_mask(n, mask)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_degrees(g: &Graph) -> Vec<usize> {
        let mut d = g.degrees();
        d.sort_unstable();
        d
    }

    #[test]
    fn family_sizes() {
        let t = LatticeSpec::Torus(vec![16, 16]).make().unwrap();
        assert_eq!((t.n(), t.regular_degree()), (256, Some(4)));
        let q = LatticeSpec::Hypercube(8).make().unwrap();
        assert_eq!((q.n(), q.regular_degree()), (256, Some(8)));
        let tri = LatticeSpec::TriangularTorus(4, 5).make().unwrap();
        assert_eq!((tri.edge_count(), tri.regular_degree()), (60, Some(6)));
        assert!(tri.is_simple());
        let kc = LatticeSpec::CliqueCycle { m: 5, len: 6 }.make().unwrap();
        assert_eq!((kc.n(), kc.regular_degree()), (30, Some(6)));
    }

    #[test]
    fn cubic_ice_is_diamond() {
        let g = LatticeSpec::IceIc(2).make().unwrap();
        assert_eq!(g.n(), 64);
        assert_eq!(g.regular_degree(), Some(4));
        assert!(g.is_simple() && g.is_connected());
        assert_eq!(g.girth(), Some(6));
        // bipartite: the two sublattices (basis index < 4 and >= 4)
        assert!(g.edges().iter().all(|e| (e.u % 8 < 4) != (e.v % 8 < 4)));
    }

    #[test]
    fn hexagonal_ice_is_lonsdaleite() {
        let g = LatticeSpec::IceIh(3).make().unwrap();
        assert_eq!(g.n(), 108);
        assert_eq!(g.regular_degree(), Some(4));
        assert!(g.is_simple() && g.is_connected());
        assert_eq!(g.girth(), Some(6));
        let ic = LatticeSpec::IceIc(3).make().unwrap();
        assert_eq!(ic.edge_count(), 2 * ic.n());
        assert_eq!(g.edge_count(), 2 * g.n());
    }

    #[test]
    fn clique_cycle_requires_odd_m() {
        assert!(LatticeSpec::CliqueCycle { m: 4, len: 5 }.make().is_err());
        assert!(LatticeSpec::Cycle(2).make().is_err());
    }

    #[test]
    fn eulerian_families() {
        for spec in [
            LatticeSpec::TriangularTorus(5, 4),
            LatticeSpec::IceIc(2),
            LatticeSpec::IceIh(2),
            LatticeSpec::Torus(vec![3, 4, 5]),
            LatticeSpec::Hypercube(4),
            LatticeSpec::CliqueCycle { m: 3, len: 4 },
        ] {
            assert!(spec.make().unwrap().is_eulerian_orientable(), "{spec:?}");
        }
        assert!(!LatticeSpec::Hypercube(5).make().unwrap().is_eulerian_orientable());
    }

    #[test]
    fn generators_are_automorphisms() {
        for spec in [
            LatticeSpec::Cycle(7),
            LatticeSpec::Clique(5),
            LatticeSpec::Hypercube(4),
            LatticeSpec::Torus(vec![4, 4, 3]),
            LatticeSpec::TriangularTorus(4, 5),
            LatticeSpec::IceIc(2),
            LatticeSpec::IceIh(3),
            LatticeSpec::CliqueCycle { m: 5, len: 4 },
        ] {
            let g = spec.make().unwrap();
            for p in spec.automorphism_generators().unwrap() {
                assert!(g.is_automorphism(&p), "{spec:?}");
            }
        }
    }

    #[test]
    fn even_graphs_enumerate_cycle_space() {
        let mut seen = BTreeSet::new();
        for mask in 0..1u64 << even_graph_bits(5) {
            let g = even_graph_from_mask(5, mask).unwrap();
            assert!(g.degrees().iter().all(|d| d % 2 == 0));
            let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
            assert!(seen.insert(edges));
        }
        assert_eq!(seen.len(), 64);
        let k5 = even_graph_from_mask(5, 0b111111).unwrap();
        assert_eq!(k5.edge_count(), 10);
    }

    #[test]
    fn zero_switchings_is_identity() {
        let g = LatticeSpec::Torus(vec![5, 5]).make().unwrap();
        let (h, trace) = random_switchings(&g, 0, 3).unwrap();
        assert_eq!(h, g);
        assert_eq!(trace.applied, 0);
    }

    #[test]
    fn switchings_preserve_degrees() {
        let g = LatticeSpec::Torus(vec![40, 40]).make().unwrap();
        let (h, trace) = random_switchings(&g, 10_000, 7).unwrap();
        assert_eq!(h.n(), 1600);
        assert!(h.is_simple());
        assert_eq!(h.regular_degree(), Some(4));
        assert!(trace.applied <= trace.requested && trace.applied > 9_000);
        let (h2, _) = random_switchings(&g, 10_000, 7).unwrap();
        assert_eq!(h, h2);
    }

    #[test]
    fn random_regular_examples() {
        let g = random_regular(6, 2, 1).unwrap();
        assert_eq!(g.regular_degree(), Some(2));
        assert!(g.is_simple());
        let h = random_regular(10, 4, 5).unwrap();
        assert_eq!(h.regular_degree(), Some(4));
        assert!(h.is_simple());
        assert_eq!(random_regular(10, 4, 5).unwrap(), h);
        assert!(random_regular(5, 3, 0).is_err());
        assert_eq!(sorted_degrees(&h), vec![4; 10]);
    }
}
