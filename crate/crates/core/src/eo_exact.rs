//! Exact counting of Eulerian orientations and related quantities.
//!
//! The workhorse is a frontier dynamic programme. Edges are processed in an
//! order derived from a vertex order; a vertex is *active* from its first
//! processed edge until its last, and the DP state is the vector of partial
//! imbalances (out-degree minus in-degree) of the active vertices. When a
//! vertex finishes, its imbalance must equal a permitted terminal value;
//! states that can no longer reach one are dropped early.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::AddAssign;

use hashbrown::HashMap;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on the number of live DP states.
pub const DEFAULT_STATE_LIMIT: usize = 40_000_000;
/// Largest number of simultaneously active vertices the DP will track.
pub const MAX_FRONTIER_SLOTS: usize = 22;
/// Largest `m` for which `RT(m)` is computed exactly.
pub const RT_EXACT_MAX: usize = 13;

/// Options for the frontier DP.
#[derive(Debug, Clone)]
pub struct FrontierOptions {
    /// Vertex processing order; breadth-first from vertex 0 when `None`.
    pub vertex_order: Option<Vec<usize>>,
    pub state_limit: usize,
}

impl Default for FrontierOptions {
    fn default() -> Self {
        FrontierOptions {
            vertex_order: None,
            state_limit: DEFAULT_STATE_LIMIT,
        }
    }
}

trait Count: Clone + Zero + One + for<'a> AddAssign<&'a Self> {}
impl Count for u128 {}
impl Count for BigUint {}

/// Terminal constraint on each vertex's final imbalance.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Terminal {
    /// Imbalance 0 (Eulerian).
    Balanced,
    /// Imbalance in `{−2, 0, 2}`, recorded per vertex.
    Census,
}

/// Breadth-first vertex order covering every component.
pub fn bfs_order(g: &Graph) -> Vec<usize> {
    let mut seen = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    let mut queue = VecDeque::new();
    for start in 0..g.n() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

struct Plan {
    /// Edge instances in processing order.
    edges: Vec<(usize, usize)>,
    /// Slot assigned to each vertex while it is active.
    slot: Vec<usize>,
    slots: usize,
    bits: u32,
    /// Remaining unprocessed incident edges of each vertex before edge `i`
    /// is processed, for both endpoints: `(u_remaining, v_remaining)` after
    /// edge `i`.
    remaining_after: Vec<(usize, usize)>,
}

impl Plan {
    fn new(g: &Graph, order: &[usize]) -> Result<Self> {
        let n = g.n();
        if order.len() != n {
            return Err(Error::invalid("vertex order must list every vertex once"));
        }
        let mut pos = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || pos[v] != usize::MAX {
                return Err(Error::invalid("vertex order must list every vertex once"));
            }
            pos[v] = i;
        }
        let mut edges: Vec<(usize, usize)> = g
            .instances()
            .iter()
            .map(|&(u, v)| (u as usize, v as usize))
            .collect();
        edges.sort_by_key(|&(u, v)| {
            let (a, b) = (pos[u].max(pos[v]), pos[u].min(pos[v]));
            (a, b)
        });

        let mut remaining: Vec<usize> = g.degrees();
        let mut remaining_after = Vec::with_capacity(edges.len());
        let mut slot = vec![usize::MAX; n];
        let mut free: Vec<usize> = Vec::new();
        let mut slots = 0usize;
        let mut started = vec![false; n];
        let mut active = 0usize;
        let mut widest = 0usize;
        for &(u, v) in &edges {
            for w in [u, v] {
                if !started[w] {
                    started[w] = true;
                    slot[w] = free.pop().unwrap_or_else(|| {
                        slots += 1;
                        slots - 1
                    });
                    active += 1;
                }
            }
            widest = widest.max(active);
            remaining[u] -= 1;
            remaining[v] -= 1;
            remaining_after.push((remaining[u], remaining[v]));
            for w in [u, v] {
                if remaining[w] == 0 {
                    free.push(slot[w]);
                    active -= 1;
                }
            }
        }
        if widest > MAX_FRONTIER_SLOTS {
            return Err(Error::limit(format!(
                "frontier width {widest} exceeds {MAX_FRONTIER_SLOTS} slots"
            )));
        }
        let max_degree = g.degrees().into_iter().max().unwrap_or(0);
        // offset encoding of imbalances in [-max_degree, max_degree]
        let bits = usize::BITS - (2 * max_degree + 1).leading_zeros();
        if slots * bits as usize > 128 {
            return Err(Error::limit(format!(
                "{slots} frontier slots of {bits} bits do not fit a 128-bit state"
            )));
        }
        Ok(Plan {
            edges,
            slot,
            slots,
            bits,
            remaining_after,
        })
    }
}

/// Runs the DP. In `Balanced` mode the result has a single key `0`; in
/// `Census` mode keys pack the terminal imbalance vector as
/// `plus_mask | minus_mask << 32`.
fn frontier_dp<C: Count>(
    g: &Graph,
    terminal: Terminal,
    options: &FrontierOptions,
) -> Result<HashMap<u64, C>> {
    let n = g.n();
    if terminal == Terminal::Census && n > 32 {
        return Err(Error::limit("census supports at most 32 vertices"));
    }
    let order = match &options.vertex_order {
        Some(o) => o.clone(),
        None => bfs_order(g),
    };
    let plan = Plan::new(g, &order)?;
    let bits = plan.bits;
    let mask: u128 = (1u128 << bits) - 1;
    let bias: i64 = 1 << (bits - 1);
    let zero_state: u128 = (0..plan.slots).fold(0u128, |acc, s| acc | ((bias as u128) << (s as u32 * bits)));
    let read = |state: u128, s: usize| -> i64 { ((state >> (s as u32 * bits)) & mask) as i64 - bias };
    let write = |state: u128, s: usize, value: i64| -> u128 {
        let shift = s as u32 * bits;
        (state & !(mask << shift)) | (((value + bias) as u128) << shift)
    };
    let feasible = |value: i64, remaining: usize| -> bool {
        let r = remaining as i64;
        match terminal {
            Terminal::Balanced => value.abs() <= r,
            Terminal::Census => [-2i64, 0, 2].iter().any(|&t| (value - t).abs() <= r),
        }
    };

    let mut current: HashMap<(u128, u64), C> = HashMap::new();
    current.insert((zero_state, 0), C::one());
    for (i, &(u, v)) in plan.edges.iter().enumerate() {
        let (ru, rv) = plan.remaining_after[i];
        let (su, sv) = (plan.slot[u], plan.slot[v]);
        let mut next: HashMap<(u128, u64), C> = HashMap::with_capacity(current.len() * 2);
        for ((state, census), count) in current.drain() {
            let (bu, bv) = (read(state, su), read(state, sv));
            for delta in [1i64, -1] {
                let (nu, nv) = (bu + delta, bv - delta);
                let mut new_state = state;
                let mut new_census = census;
                let mut ok = true;
                for (w, value, rem, s) in [(u, nu, ru, su), (v, nv, rv, sv)] {
                    if rem == 0 {
                        match terminal {
                            Terminal::Balanced => ok &= value == 0,
                            Terminal::Census => match value {
                                0 => {}
                                2 => new_census |= 1u64 << w,
                                -2 => new_census |= 1u64 << (w + 32),
                                _ => ok = false,
                            },
                        }
                        new_state = write(new_state, s, 0);
                    } else {
                        ok &= feasible(value, rem);
                        new_state = write(new_state, s, value);
                    }
                }
                if ok {
                    next.entry((new_state, new_census))
                        .and_modify(|c| *c += &count)
                        .or_insert_with(|| count.clone());
                }
            }
        }
        if next.len() > options.state_limit {
            return Err(Error::limit(format!(
                "frontier DP exceeded {} states",
                options.state_limit
            )));
        }
        current = next;
    }
    let mut out: HashMap<u64, C> = HashMap::with_capacity(current.len());
    for ((_, census), count) in current {
        out.entry(census)
            .and_modify(|c| *c += &count)
            .or_insert(count);
    }
    Ok(out)
}

/// Number of Eulerian orientations. Zero unless every degree is positive
/// and even.
pub fn eo_count(g: &Graph) -> Result<BigUint> {
    eo_count_with(g, &FrontierOptions::default())
}

pub fn eo_count_with(g: &Graph, options: &FrontierOptions) -> Result<BigUint> {
    if !g.is_eulerian_orientable() {
        return Ok(BigUint::zero());
    }
    if g.edge_count() < 128 {
        let table = frontier_dp::<u128>(g, Terminal::Balanced, options)?;
        Ok(BigUint::from(table.get(&0).copied().unwrap_or(0)))
    } else {
        let table = frontier_dp::<BigUint>(g, Terminal::Balanced, options)?;
        Ok(table.get(&0).cloned().unwrap_or_default())
    }
}

/// `N_G(z)` for every `z ∈ {−2, 0, 2}^n`: the number of orientations whose
/// imbalance vector is `z`. Only nonzero entries are stored.
#[derive(Debug, Clone)]
pub struct CensusTable {
    n: usize,
    entries: HashMap<u64, u128>,
}

impl CensusTable {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of nonzero entries.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Count for the vector with `+2` on `plus` and `−2` on `minus`.
    pub fn get_masks(&self, plus: u32, minus: u32) -> u128 {
        self.entries
            .get(&(plus as u64 | (minus as u64) << 32))
            .copied()
            .unwrap_or(0)
    }

    /// Count for an explicit imbalance vector; zero for vectors outside
    /// `{−2, 0, 2}^n`.
    pub fn get(&self, z: &[i64]) -> BigUint {
        if z.len() != self.n {
            return BigUint::zero();
        }
        let (mut plus, mut minus) = (0u32, 0u32);
        for (v, &zv) in z.iter().enumerate() {
            match zv {
                0 => {}
                2 => plus |= 1 << v,
                -2 => minus |= 1 << v,
                _ => return BigUint::zero(),
            }
        }
        BigUint::from(self.get_masks(plus, minus))
    }

    /// Nonzero entries as `(plus_mask, minus_mask, count)`.
    pub fn iter(&self) -> impl Iterator<Item = (u32, u32, u128)> + '_ {
        self.entries
            .iter()
            .map(|(&k, &c)| (k as u32, (k >> 32) as u32, c))
    }

    /// Sum of all entries: orientations whose imbalances lie in `{−2, 0, 2}`.
    pub fn total(&self) -> BigUint {
        self.entries
            .values()
            .fold(BigUint::zero(), |acc, &c| acc + BigUint::from(c))
    }
}

/// Orientation census of a graph with even degrees.
pub fn orientation_census(g: &Graph) -> Result<CensusTable> {
    orientation_census_with(g, &FrontierOptions::default())
}

pub fn orientation_census_with(g: &Graph, options: &FrontierOptions) -> Result<CensusTable> {
    g.require_even_degrees()?;
    if g.edge_count() >= 128 {
        return Err(Error::limit("census supports fewer than 128 edges"));
    }
    let entries = frontier_dp::<u128>(g, Terminal::Census, options)?;
    Ok(CensusTable { n: g.n(), entries })
}

/// Regular tournament count `RT(m) = EO(K_m)` for odd `m ≤ RT_EXACT_MAX`.
pub fn rt(m: usize) -> Result<BigUint> {
    if m.is_multiple_of(2) || m == 0 {
        return Err(Error::invalid(format!("RT({m}) requires odd m")));
    }
    if m > RT_EXACT_MAX {
        return Err(Error::limit(format!("exact RT limited to m <= {RT_EXACT_MAX}")));
    }
    if m == 1 {
        return Ok(BigUint::one());
    }
    let k = crate::generators::LatticeSpec::Clique(m).make()?;
    eo_count(&k)
}

/// Memoised [`rt`].
#[derive(Debug, Clone, Default)]
pub struct RtTable {
    values: Vec<Option<BigUint>>,
}

impl RtTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, m: usize) -> Result<BigUint> {
        if self.values.len() <= m {
            self.values.resize(m + 1, None);
        }
        if let Some(v) = &self.values[m] {
            return Ok(v.clone());
        }
        let v = rt(m)?;
        self.values[m] = Some(v.clone());
        Ok(v)
    }
}

/// `|𝒫(G)| = Π d_i! / ((d_i/2)! 2^{d_i/2}) = Π (d_i − 1)!!`.
pub fn partition_count(g: &Graph) -> Result<BigUint> {
    g.require_even_degrees()?;
    let mut acc = BigUint::one();
    for d in g.degrees() {
        let mut k = d - 1;
        while k > 1 {
            acc *= k as u64;
            k -= 2;
        }
    }
    Ok(acc)
}

/// `Π (d_i/2)!`, the number of in/out bijections per Eulerian orientation.
pub fn half_degree_factorial_product(g: &Graph) -> BigUint {
    let mut acc = BigUint::one();
    for d in g.degrees() {
        for k in 2..=d / 2 {
            acc *= k as u64;
        }
    }
    acc
}

/// Largest partition count [`partition_sum_exact`] will enumerate.
pub const PARTITION_ENUMERATION_LIMIT: u64 = 100_000_000;

/// `Σ_P 2^{|P|}` over all Eulerian partitions, by enumerating every
/// combination of per-vertex perfect matchings of edge-ends and counting the
/// closed trails with a union-find over edges.
pub fn partition_sum_exact(g: &Graph) -> Result<BigUint> {
    let histogram = partition_trail_histogram(g)?;
    let mut sum = BigUint::zero();
    for (trails, &count) in histogram.iter().enumerate() {
        if count > 0 {
            sum += BigUint::from(count) << trails;
        }
    }
    Ok(sum)
}

/// Number of Eulerian partitions with exactly `k` trails, indexed by `k`.
pub fn partition_trail_histogram(g: &Graph) -> Result<Vec<u64>> {
    let total = partition_count(g)?;
    if total > BigUint::from(PARTITION_ENUMERATION_LIMIT) {
        return Err(Error::limit(format!(
            "{total} Eulerian partitions exceed the enumeration limit"
        )));
    }
    // end 2·id sits at the smaller endpoint of instance id, 2·id + 1 at the other
    let per_vertex: Vec<Vec<Vec<(u32, u32)>>> = (0..g.n())
        .map(|v| {
            let ends: Vec<u32> = g
                .incident(v)
                .iter()
                .map(|&id| {
                    let (a, _) = g.instances()[id as usize];
                    if a as usize == v {
                        2 * id
                    } else {
                        2 * id + 1
                    }
                })
                .collect();
            perfect_matchings(&ends)
        })
        .collect();

    let m = g.edge_count();
    let mut histogram = vec![0u64; m + 1];
    let mut choice = vec![0usize; g.n()];
    let mut parent: Vec<u32> = vec![0; m];
    loop {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        let mut trails = m;
        for (v, &c) in choice.iter().enumerate() {
            for &(a, b) in &per_vertex[v][c] {
                let (ra, rb) = (find(&mut parent, a / 2), find(&mut parent, b / 2));
                if ra != rb {
                    parent[ra as usize] = rb;
                    trails -= 1;
                }
            }
        }
        histogram[trails] += 1;

        // odometer over the per-vertex matching choices
        let mut v = 0;
        loop {
            if v == choice.len() {
                return Ok(histogram);
            }
            choice[v] += 1;
            if choice[v] < per_vertex[v].len() {
                break;
            }
            choice[v] = 0;
            v += 1;
        }
    }
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let grand = parent[parent[x as usize] as usize];
        parent[x as usize] = grand;
        x = grand;
    }
    x
}

/// All perfect matchings of an even-length list.
fn perfect_matchings(items: &[u32]) -> Vec<Vec<(u32, u32)>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let first = items[0];
    let mut out = Vec::new();
    for j in 1..items.len() {
        let rest: Vec<u32> = items[1..]
            .iter()
            .enumerate()
            .filter(|&(i, _)| i + 1 != j)
            .map(|(_, &x)| x)
            .collect();
        for mut tail in perfect_matchings(&rest) {
            tail.insert(0, (first, items[j]));
            out.push(tail);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::LatticeSpec;
    use crate::graph::Orientation;

    fn g(spec: LatticeSpec) -> Graph {
        spec.make().unwrap()
    }

    fn brute_force_eo(g: &Graph) -> u64 {
        (0..1u64 << g.edge_count())
            .filter(|&m| Orientation::from_mask(g, m).unwrap().is_eulerian())
            .count() as u64
    }

    #[test]
    fn cycles_have_two() {
        for n in 3..=10 {
            assert_eq!(eo_count(&g(LatticeSpec::Cycle(n))).unwrap(), BigUint::from(2u32));
        }
    }

    #[test]
    fn matches_brute_force() {
        let k5 = g(LatticeSpec::Clique(5));
        assert_eq!(brute_force_eo(&k5), 24);
        assert_eq!(eo_count(&k5).unwrap(), BigUint::from(24u32));
        let c3c3 = g(LatticeSpec::Torus(vec![3, 3]));
        assert_eq!(eo_count(&c3c3).unwrap(), BigUint::from(brute_force_eo(&c3c3)));
        let multi = Graph::new(3, [(0, 1, 2), (1, 2, 2), (0, 2, 2)]).unwrap();
        assert_eq!(eo_count(&multi).unwrap(), BigUint::from(brute_force_eo(&multi)));
    }

    #[test]
    fn odd_degree_gives_zero() {
        assert!(eo_count(&g(LatticeSpec::Hypercube(3))).unwrap().is_zero());
    }

    #[test]
    fn vertex_order_does_not_change_count() {
        let q4 = g(LatticeSpec::Hypercube(4));
        let a = eo_count(&q4).unwrap();
        let reversed: Vec<usize> = (0..16).rev().collect();
        let b = eo_count_with(
            &q4,
            &FrontierOptions {
                vertex_order: Some(reversed),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn state_limit_is_reported() {
        let q4 = g(LatticeSpec::Hypercube(4));
        let opts = FrontierOptions {
            vertex_order: None,
            state_limit: 3,
        };
        assert!(matches!(eo_count_with(&q4, &opts), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn regular_tournaments() {
        assert_eq!(rt(3).unwrap(), BigUint::from(2u32));
        assert_eq!(rt(5).unwrap(), BigUint::from(24u32));
        assert_eq!(rt(7).unwrap(), BigUint::from(2640u32));
        assert!(rt(4).is_err());
        assert!(rt(15).is_err());
    }

    #[test]
    fn triangle_census() {
        let c3 = g(LatticeSpec::Cycle(3));
        let census = orientation_census(&c3).unwrap();
        assert_eq!(census.get(&[0, 0, 0]), BigUint::from(2u32));
        let perms = [[2, -2, 0], [-2, 2, 0], [2, 0, -2], [-2, 0, 2], [0, 2, -2], [0, -2, 2]];
        for z in perms {
            assert_eq!(census.get(&z), BigUint::from(1u32), "{z:?}");
        }
        assert_eq!(census.len(), 7);
        assert_eq!(census.total(), BigUint::from(8u32));
    }

    #[test]
    fn census_symmetry_and_diagonal() {
        let k5 = g(LatticeSpec::Clique(5));
        let census = orientation_census(&k5).unwrap();
        assert_eq!(census.get(&[0; 5]), BigUint::from(24u32));
        for (plus, minus, count) in census.iter() {
            assert_eq!(census.get_masks(minus, plus), count);
        }
    }

    #[test]
    fn partition_counts() {
        assert_eq!(partition_count(&g(LatticeSpec::Cycle(7))).unwrap(), BigUint::one());
        assert_eq!(
            partition_count(&g(LatticeSpec::Torus(vec![3, 4]))).unwrap(),
            BigUint::from(3u32).pow(12)
        );
        assert_eq!(
            partition_count(&g(LatticeSpec::Hypercube(4))).unwrap(),
            BigUint::from(43046721u32)
        );
        assert!(partition_count(&g(LatticeSpec::Hypercube(3))).is_err());
    }

    #[test]
    fn partition_sums() {
        assert_eq!(partition_sum_exact(&g(LatticeSpec::Cycle(3))).unwrap(), BigUint::from(2u32));
        assert_eq!(partition_sum_exact(&g(LatticeSpec::Clique(5))).unwrap(), BigUint::from(768u32));
    }
}
