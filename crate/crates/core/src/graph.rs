//! Loop-free multigraphs with explicit edge multiplicities.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A distinct vertex pair `{u, v}` with `u < v` and its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub mult: u32,
}

/// Loop-free multigraph on vertices `0..n`.
///
/// Distinct edges are stored once with their multiplicity. Every other view
/// (edge instances, incidence lists, degrees) expands multiplicity, so an
/// edge of multiplicity 3 contributes three instances and three entries to
/// each endpoint's incidence list. Graphs are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    instances: Vec<(u32, u32)>,
    offsets: Vec<usize>,
    incidence: Vec<u32>,
}

impl Graph {
    /// Builds a graph from `(u, v, multiplicity)` triples. Repeated pairs are
    /// merged by adding their multiplicities.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, u32)>,
    {
        let mut list: Vec<Edge> = Vec::new();
        for (a, b, mult) in edges {
            for vertex in [a, b] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if a == b {
                return Err(Error::Loop(a));
            }
            if mult == 0 {
                return Err(Error::ZeroMultiplicity);
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            list.push(Edge { u, v, mult });
        }
        list.sort_unstable();
        let mut merged: Vec<Edge> = Vec::with_capacity(list.len());
        for e in list {
            match merged.last_mut() {
                Some(last) if last.u == e.u && last.v == e.v => last.mult += e.mult,
                _ => merged.push(e),
            }
        }
        Ok(Self::from_canonical(n, merged))
    }

    /// Builds a graph from unit-multiplicity pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(u, v)| (u, v, 1)))
    }

    fn from_canonical(n: usize, edges: Vec<Edge>) -> Self {
        let mut instances = Vec::new();
        let mut degree = vec![0usize; n];
        for e in &edges {
            for _ in 0..e.mult {
                instances.push((e.u as u32, e.v as u32));
            }
            degree[e.u] += e.mult as usize;
            degree[e.v] += e.mult as usize;
        }
        let mut offsets = vec![0usize; n + 1];
        for v in 0..n {
            offsets[v + 1] = offsets[v] + degree[v];
        }
        let mut fill = offsets.clone();
        let mut incidence = vec![0u32; offsets[n]];
        for (id, &(u, v)) in instances.iter().enumerate() {
            incidence[fill[u as usize]] = id as u32;
            fill[u as usize] += 1;
            incidence[fill[v as usize]] = id as u32;
            fill[v as usize] += 1;
        }
        Graph {
            n,
            edges,
            instances,
            offsets,
            incidence,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.instances.len()
    }

    /// Distinct edges, sorted, with multiplicities.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Expanded edge instances `(u, v)` with `u < v`; the index of an
    /// instance is its edge id everywhere else in the crate.
    pub fn instances(&self) -> &[(u32, u32)] {
        &self.instances
    }

    /// Edge-instance ids incident to `v`.
    pub fn incident(&self, v: usize) -> &[u32] {
        &self.incidence[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Neighbours of `v`, repeated according to multiplicity.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.incident(v).iter().map(move |&id| {
            let (a, b) = self.instances[id as usize];
            if a as usize == v {
                b as usize
            } else {
                a as usize
            }
        })
    }

    pub fn multiplicity(&self, a: usize, b: usize) -> u32 {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&(u, v)))
            .map(|i| self.edges[i].mult)
            .unwrap_or(0)
    }

    pub fn is_simple(&self) -> bool {
        self.edges.iter().all(|e| e.mult == 1)
    }

    /// `Some(d)` when every vertex has degree `d`.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = if self.n == 0 { return None } else { self.degree(0) };
        (1..self.n).all(|v| self.degree(v) == d).then_some(d)
    }

    /// True iff every vertex has positive even degree.
    pub fn is_eulerian_orientable(&self) -> bool {
        self.n > 0 && (0..self.n).all(|v| {
            let d = self.degree(v);
            d > 0 && d.is_multiple_of(2)
        })
    }

    /// Returns an error naming the first vertex with zero or odd degree.
    pub fn require_even_degrees(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Empty);
        }
        for v in 0..self.n {
            let degree = self.degree(v);
            if degree == 0 {
                return Err(Error::IsolatedVertex(v));
            }
            if degree % 2 == 1 {
                return Err(Error::OddDegree { vertex: v, degree });
            }
        }
        Ok(())
    }

    pub fn degree_stats(&self) -> Result<DegreeStats> {
        DegreeStats::from_degrees(&self.degrees())
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().len() == 1
    }

    /// Length of the shortest cycle, or `None` for a forest. A multiple
    /// edge is a cycle of length 2.
    pub fn girth(&self) -> Option<usize> {
        if self.edges.iter().any(|e| e.mult > 1) {
            return Some(2);
        }
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                if let Some(b) = best {
                    // no shorter cycle through this root can be found past here
                    if 2 * dist[v] >= b {
                        break;
                    }
                }
                for w in self.neighbors(v) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        parent[w] = v;
                        queue.push_back(w);
                    } else if parent[v] != w {
                        let len = dist[v] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                    }
                }
            }
        }
        best
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(other.edges.iter().map(|e| Edge {
            u: e.u + shift,
            v: e.v + shift,
            mult: e.mult,
        }));
        Graph::from_canonical(self.n + other.n, edges)
    }

    /// Cartesian product `self □ other`. Vertex `(u, v)` gets index
    /// `u * other.n() + v`. Both factors must be simple.
    pub fn cartesian_product(&self, other: &Graph) -> Result<Graph> {
        if !self.is_simple() || !other.is_simple() {
            return Err(Error::NotSimple);
        }
        let m = other.n;
        let mut pairs = Vec::with_capacity(self.n * other.edges.len() + m * self.edges.len());
        for u in 0..self.n {
            for e in &other.edges {
                pairs.push((u * m + e.u, u * m + e.v, 1));
            }
        }
        for e in &self.edges {
            for v in 0..m {
                pairs.push((e.u * m + v, e.v * m + v, 1));
            }
        }
        Graph::new(self.n * m, pairs)
    }

    /// Replaces one instance of the edge `{a, b}` by a path through a new
    /// vertex with index `self.n()`.
    pub fn subdivide_edge(&self, a: usize, b: usize) -> Result<Graph> {
        if self.multiplicity(a, b) == 0 {
            return Err(Error::MissingEdge(a, b));
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        let w = self.n;
        let mut triples: Vec<(usize, usize, u32)> = Vec::with_capacity(self.edges.len() + 2);
        for e in &self.edges {
            if e.u == u && e.v == v {
                if e.mult > 1 {
                    triples.push((u, v, e.mult - 1));
                }
            } else {
                triples.push((e.u, e.v, e.mult));
            }
        }
        triples.push((u, w, 1));
        triples.push((v, w, 1));
        Graph::new(self.n + 1, triples)
    }

    /// Permutes vertex labels: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::invalid("permutation length differs from vertex count"));
        }
        Graph::new(
            self.n,
            self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.mult)),
        )
    }

    /// True if `perm` maps the edge multiset onto itself.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        self.edges
            .iter()
            .all(|e| self.multiplicity(perm[e.u], perm[e.v]) == e.mult)
    }

    /// Integer Laplacian as a dense row-major `n × n` matrix.
    pub fn laplacian(&self) -> Vec<i64> {
        let n = self.n;
        let mut l = vec![0i64; n * n];
        for v in 0..n {
            l[v * n + v] = self.degree(v) as i64;
        }
        for e in &self.edges {
            l[e.u * n + e.v] -= e.mult as i64;
            l[e.v * n + e.u] -= e.mult as i64;
        }
        l
    }
}

/// Degree statistics: minimum, maximum, arithmetic, geometric and harmonic
/// means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub d_min: usize,
    pub d_max: usize,
    pub d_mean: f64,
    pub d_geo: f64,
    pub d_harm: f64,
}

impl DegreeStats {
    /// Isolated vertices are rejected rather than skipped.
    pub fn from_degrees(degrees: &[usize]) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(v) = degrees.iter().position(|&d| d == 0) {
            return Err(Error::IsolatedVertex(v));
        }
        let n = degrees.len() as f64;
        let d_min = *degrees.iter().min().unwrap();
        let d_max = *degrees.iter().max().unwrap();
        let d_mean = degrees.iter().sum::<usize>() as f64 / n;
        let d_geo = libm::exp(degrees.iter().map(|&d| libm::log(d as f64)).sum::<f64>() / n);
        let d_harm = n / degrees.iter().map(|&d| 1.0 / d as f64).sum::<f64>();
        Ok(DegreeStats {
            d_min,
            d_max,
            d_mean,
            d_geo,
            d_harm,
        })
    }
}

/// A direction for every edge instance of a graph, with per-vertex tallies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    forward: Vec<bool>,
    out_degree: Vec<u32>,
    in_degree: Vec<u32>,
}

impl Orientation {
    /// `forward[id]` orients instance `id = (u, v)` from `u` to `v`.
    pub fn new(g: &Graph, forward: Vec<bool>) -> Result<Self> {
        if forward.len() != g.edge_count() {
            return Err(Error::invalid("one direction per edge instance required"));
        }
        let mut out_degree = vec![0u32; g.n()];
        let mut in_degree = vec![0u32; g.n()];
        for (&(u, v), &fwd) in g.instances().iter().zip(&forward) {
            let (tail, head) = if fwd { (u, v) } else { (v, u) };
            out_degree[tail as usize] += 1;
            in_degree[head as usize] += 1;
        }
        Ok(Orientation {
            forward,
            out_degree,
            in_degree,
        })
    }

    /// Orientation encoded by the low `|E|` bits of `mask` (bit set means
    /// forward). Only meaningful for `|E| <= 64`.
    pub fn from_mask(g: &Graph, mask: u64) -> Result<Self> {
        let forward = (0..g.edge_count()).map(|i| mask >> i & 1 == 1).collect();
        Self::new(g, forward)
    }

    pub fn forward(&self) -> &[bool] {
        &self.forward
    }

    pub fn out_degree(&self, v: usize) -> u32 {
        self.out_degree[v]
    }

    pub fn in_degree(&self, v: usize) -> u32 {
        self.in_degree[v]
    }

    /// Out-degree minus in-degree.
    pub fn imbalance(&self, v: usize) -> i64 {
        self.out_degree[v] as i64 - self.in_degree[v] as i64
    }

    pub fn is_eulerian(&self) -> bool {
        self.out_degree == self.in_degree
    }
}
