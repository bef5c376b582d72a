mod common;

use common::even_connected_graph;
use icegraph_core::generators::LatticeSpec;
use icegraph_core::transfer::{dense_leading_eigenvalue, OrbitPartition, TransferSystem};
use proptest::prelude::*;

fn build(spec: &LatticeSpec) -> TransferSystem {
    let g = spec.make().unwrap();
    TransferSystem::build(&g, &spec.automorphism_generators().unwrap()).unwrap()
}

#[test]
fn collapse_preserves_perron_root() {
    let mut fibers: Vec<LatticeSpec> = (3..=12).map(LatticeSpec::Cycle).collect();
    fibers.extend([
        LatticeSpec::Clique(3),
        LatticeSpec::Clique(5),
        LatticeSpec::Torus(vec![3, 3]),
        LatticeSpec::Torus(vec![3, 4]),
        LatticeSpec::Hypercube(2),
    ]);
    for spec in fibers {
        let sys = build(&spec);
        let dense = dense_leading_eigenvalue(sys.fiber(), 1e-13).unwrap();
        assert!((sys.lambda() / dense - 1.0).abs() < 1e-10, "{spec:?}");
        let total: u64 = sys.orbits().sizes().iter().sum();
        assert_eq!(total, 1u64 << sys.fiber().n());
    }
}

#[test]
fn tube_limits_zigzag_down_to_square_ice() {
    let rho: Vec<f64> = (3..=12).map(|m| build(&LatticeSpec::Cycle(m)).rho_limit()).collect();
    let lieb = (8.0 * 3f64.sqrt() / 9.0).ln();
    assert!(rho.iter().all(|&r| r > lieb));
    for w in rho.windows(3) {
        assert!(w[2] < w[0]);
    }
    // odd circumferences sit below both even neighbours
    for i in (2..rho.len() - 1).step_by(2) {
        assert!(rho[i] < rho[i - 1] && rho[i] < rho[i + 1], "m={}", i + 3);
    }
}

#[test]
fn clique_fiber_equals_cycle_fiber() {
    let a = build(&LatticeSpec::Clique(3)).rho_limit();
    let b = build(&LatticeSpec::Cycle(3)).rho_limit();
    assert!((a - b).abs() < 1e-14);
}

#[test]
fn symmetric_group_orbits_are_weight_classes() {
    let gens = LatticeSpec::Clique(7).automorphism_generators().unwrap();
    let orbits = OrbitPartition::new(7, &gens).unwrap();
    // weights {0,7}, {1,6}, {2,5}, {3,4}
    assert_eq!(orbits.len(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complement_only_collapse(g in even_connected_graph()) {
        let sys = TransferSystem::build(&g, &[]).unwrap();
        let dense = dense_leading_eigenvalue(&g, 1e-13).unwrap();
        prop_assert!((sys.lambda() / dense - 1.0).abs() < 1e-10);
        prop_assert_eq!(sys.orbits().len(), 1 << (g.n() - 1));
    }
}
