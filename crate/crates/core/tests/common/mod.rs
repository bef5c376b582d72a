#![allow(dead_code)]

use icegraph_core::generators::{even_graph_from_mask, LatticeSpec};
use icegraph_core::{Graph, Orientation};
use proptest::prelude::*;

/// Eulerian orientations by enumerating all `2^|E|` orientations.
pub fn brute_force_eo(g: &Graph) -> u64 {
    assert!(g.edge_count() <= 26);
    (0..1u64 << g.edge_count())
        .filter(|&m| Orientation::from_mask(g, m).unwrap().is_eulerian())
        .count() as u64
}

/// Spanning trees by checking every `(n−1)`-subset of edge instances for
/// acyclicity.
pub fn brute_force_trees(g: &Graph) -> u64 {
    let inst = g.instances();
    let n = g.n();
    let m = inst.len();
    assert!(m <= 24);
    let mut count = 0;
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                x = p[x];
            }
            x
        }
        let mut ok = true;
        for (i, &(u, v)) in inst.iter().enumerate() {
            if mask >> i & 1 == 1 {
                let (a, b) = (root(&mut parent, u as usize), root(&mut parent, v as usize));
                if a == b {
                    ok = false;
                    break;
                }
                parent[a] = b;
            }
        }
        if ok {
            count += 1;
        }
    }
    count
}

pub fn small_lattices() -> Vec<LatticeSpec> {
    vec![
        LatticeSpec::Cycle(3),
        LatticeSpec::Cycle(6),
        LatticeSpec::Clique(3),
        LatticeSpec::Clique(5),
        LatticeSpec::Torus(vec![3, 3]),
        LatticeSpec::Torus(vec![3, 4]),
        LatticeSpec::Hypercube(2),
        LatticeSpec::CliqueCycle { m: 3, len: 3 },
    ]
}

/// Connected even-degree simple graphs without isolated vertices on 3 to 7
/// vertices, drawn uniformly from the labelled cycle space and filtered.
pub fn even_connected_graph() -> impl Strategy<Value = Graph> {
    (3usize..=7, any::<u64>()).prop_filter_map("needs a connected graph with no isolated vertex", |(n, raw)| {
        let bits = (n - 1) * (n - 2) / 2;
        let g = even_graph_from_mask(n, raw & ((1u64 << bits) - 1)).ok()?;
        (g.is_connected() && g.degrees().iter().all(|&d| d > 0)).then_some(g)
    })
}
