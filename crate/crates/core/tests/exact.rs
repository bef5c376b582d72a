mod common;

use common::{brute_force_eo, even_connected_graph, small_lattices};
use icegraph_core::eo_exact::{
    eo_count, half_degree_factorial_product, orientation_census, partition_count, partition_sum_exact,
    partition_trail_histogram, rt,
};
use icegraph_core::generators::LatticeSpec;
use icegraph_core::{Graph, Orientation};
use num_bigint::BigUint;
use proptest::prelude::*;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

#[test]
fn frontier_dp_matches_enumeration_on_lattices() {
    for spec in small_lattices() {
        let g = spec.make().unwrap();
        if g.edge_count() <= 24 {
            assert_eq!(eo_count(&g).unwrap(), big(brute_force_eo(&g)), "{spec:?}");
        }
    }
}

#[test]
fn regular_tournament_numbers() {
    let known = [(3, 2u64), (5, 24), (7, 2640), (9, 3_230_080), (11, 48_251_508_480)];
    for (m, v) in known {
        assert_eq!(rt(m).unwrap(), big(v), "RT({m})");
    }
}

#[test]
fn euler_identity_on_small_family() {
    let mut graphs: Vec<Graph> = (3..=6).map(|n| LatticeSpec::Cycle(n).make().unwrap()).collect();
    graphs.push(LatticeSpec::Clique(5).make().unwrap());
    graphs.push(LatticeSpec::Torus(vec![3, 3]).make().unwrap());
    for g in graphs {
        let lhs = eo_count(&g).unwrap() * half_degree_factorial_product(&g);
        assert_eq!(lhs, partition_sum_exact(&g).unwrap());
    }
}

#[test]
fn trail_histogram_counts_every_partition() {
    let g = LatticeSpec::Torus(vec![3, 3]).make().unwrap();
    let hist = partition_trail_histogram(&g).unwrap();
    let total: u64 = hist.iter().sum();
    assert_eq!(big(total), partition_count(&g).unwrap());
    assert_eq!(hist[0], 0);
}

#[test]
fn census_agrees_with_enumeration() {
    for spec in [LatticeSpec::Cycle(4), LatticeSpec::Clique(5), LatticeSpec::Torus(vec![3, 3])] {
        let g = spec.make().unwrap();
        let census = orientation_census(&g).unwrap();
        let mut expected = std::collections::HashMap::<Vec<i64>, u64>::new();
        for mask in 0..1u64 << g.edge_count() {
            let o = Orientation::from_mask(&g, mask).unwrap();
            let z: Vec<i64> = (0..g.n()).map(|v| o.imbalance(v)).collect();
            if z.iter().all(|x| x.abs() <= 2) {
                *expected.entry(z).or_default() += 1;
            }
        }
        assert_eq!(census.len(), expected.len(), "{spec:?}");
        for (z, count) in expected {
            assert_eq!(census.get(&z), big(count), "{spec:?} {z:?}");
        }
    }
}

fn pairs_of(g: &Graph) -> Vec<(usize, usize, u32)> {
    g.edges().iter().map(|e| (e.u, e.v, e.mult)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dp_matches_enumeration(g in even_connected_graph().prop_filter("small", |g| g.edge_count() <= 18)) {
        prop_assert_eq!(eo_count(&g).unwrap(), big(brute_force_eo(&g)));
    }

    #[test]
    fn disjoint_union_multiplies(a in even_connected_graph(), b in even_connected_graph()) {
        let u = a.disjoint_union(&b);
        prop_assert_eq!(eo_count(&u).unwrap(), eo_count(&a).unwrap() * eo_count(&b).unwrap());
    }

    #[test]
    fn subdivision_preserves_count(g in even_connected_graph(), pick in any::<prop::sample::Index>()) {
        let e = g.edges()[pick.index(g.edges().len())];
        let s = g.subdivide_edge(e.u, e.v).unwrap();
        prop_assert_eq!(s.n(), g.n() + 1);
        prop_assert_eq!(eo_count(&s).unwrap(), eo_count(&g).unwrap());
    }

    #[test]
    fn doubling_an_edge_set_is_handled(g in even_connected_graph()) {
        let doubled: Vec<(usize, usize, u32)> = pairs_of(&g).into_iter().map(|(u, v, m)| (u, v, 2 * m)).collect();
        let h = Graph::new(g.n(), doubled).unwrap();
        if h.edge_count() <= 22 {
            prop_assert_eq!(eo_count(&h).unwrap(), big(brute_force_eo(&h)));
        }
    }

    #[test]
    fn euler_identity(g in even_connected_graph().prop_filter("enumerable", |g| {
        partition_count(g).unwrap() <= BigUint::from(200_000u32)
    })) {
        let lhs = eo_count(&g).unwrap() * half_degree_factorial_product(&g);
        prop_assert_eq!(lhs, partition_sum_exact(&g).unwrap());
    }

    #[test]
    fn census_is_antisymmetric(g in even_connected_graph()) {
        let census = orientation_census(&g).unwrap();
        prop_assert_eq!(census.get(&vec![0; g.n()]), eo_count(&g).unwrap());
        for (plus, minus, count) in census.iter() {
            prop_assert_eq!(census.get_masks(minus, plus), count);
            prop_assert_eq!(plus.count_ones(), minus.count_ones());
        }
    }
}
