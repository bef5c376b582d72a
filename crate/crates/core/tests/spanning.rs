mod common;

use common::{brute_force_trees, even_connected_graph, small_lattices};
use icegraph_core::generators::LatticeSpec;
use icegraph_core::spanning::{
    clique_cycle_tree_count, hypercube_tree_count, laplacian_spectrum, product_spectrum, tree_count_exact,
    tree_entropy_float, Spectrum,
};
use num_bigint::BigUint;
use proptest::prelude::*;

#[test]
fn determinant_matches_enumeration() {
    for spec in small_lattices() {
        let g = spec.make().unwrap();
        if g.edge_count() <= 24 {
            assert_eq!(tree_count_exact(&g).unwrap(), BigUint::from(brute_force_trees(&g)), "{spec:?}");
        }
    }
}

#[test]
fn three_engines_on_c3_by_c3() {
    let g = LatticeSpec::Torus(vec![3, 3]).make().unwrap();
    assert_eq!(tree_count_exact(&g).unwrap(), BigUint::from(11664u32));
    let spectral = product_spectrum(&Spectrum::cycle(3), &Spectrum::cycle(3)).log_tree_count();
    assert!((spectral.exp() / 11664.0 - 1.0).abs() < 1e-9);
    let closed = clique_cycle_tree_count(3, 3).unwrap();
    assert_eq!(closed.exact, Some(BigUint::from(11664u32)));
}

#[test]
fn clique_cycle_closed_form() {
    for (m, len) in [(3, 4), (3, 5), (5, 3), (5, 4), (7, 3)] {
        let g = LatticeSpec::CliqueCycle { m, len }.make().unwrap();
        assert_eq!(
            clique_cycle_tree_count(m, len).unwrap().exact.unwrap(),
            tree_count_exact(&g).unwrap(),
            "K{m} x C{len}"
        );
    }
}

#[test]
fn hypercube_formula() {
    for d in 1..=6 {
        let g = LatticeSpec::Hypercube(d).make().unwrap();
        assert_eq!(hypercube_tree_count(d).unwrap(), tree_count_exact(&g).unwrap(), "Q{d}");
    }
}

#[test]
fn product_spectrum_matches_jacobi() {
    let g = LatticeSpec::Torus(vec![3, 5]).make().unwrap();
    let jacobi = laplacian_spectrum(&g);
    let product = product_spectrum(&Spectrum::cycle(3), &Spectrum::cycle(5));
    for (a, b) in jacobi.eigenvalues().iter().zip(product.eigenvalues()) {
        assert!((a - b).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn float_entropy_tracks_exact(g in even_connected_graph()) {
        let exact = tree_count_exact(&g).unwrap();
        let float = tree_entropy_float(&g).unwrap();
        let ln_exact = icegraph_core::numeric::ln_big(&exact);
        prop_assert!((float.log_value - ln_exact).abs() < 1e-9);
    }

    #[test]
    fn spectrum_counts_trees(g in even_connected_graph()) {
        let spectral = laplacian_spectrum(&g).log_tree_count();
        let exact = icegraph_core::numeric::ln_big(&tree_count_exact(&g).unwrap());
        prop_assert!((spectral - exact).abs() < 1e-8);
    }

    #[test]
    fn product_degrees_add(a in 3usize..7, b in 3usize..7, c in 3usize..6) {
        let g = LatticeSpec::Clique(c).make().unwrap();
        let h = LatticeSpec::Cycle(a).make().unwrap().cartesian_product(&LatticeSpec::Cycle(b).make().unwrap()).unwrap();
        let p = g.cartesian_product(&h).unwrap();
        for u in 0..g.n() {
            for v in 0..h.n() {
                prop_assert_eq!(p.degree(u * h.n() + v), g.degree(u) + h.degree(v));
            }
        }
    }

    #[test]
    fn torus_girth(a in 3usize..9, b in 3usize..9) {
        let g = LatticeSpec::Torus(vec![a, b]).make().unwrap();
        prop_assert_eq!(g.girth(), Some(a.min(b).min(4)));
    }
}
