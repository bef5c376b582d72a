use icegraph::io::{from_edge_list, to_edge_list, ParseError};
use icegraph_core::Graph;
use proptest::prelude::*;

fn multigraph() -> impl Strategy<Value = Graph> {
    (1usize..12).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n, 1u32..4), 0..30).prop_filter_map("loops are rejected", move |raw| {
            let edges: Vec<(usize, usize, u32)> = raw.into_iter().filter(|(u, v, _)| u != v).collect();
            Graph::new(n, edges).ok()
        })
    })
}

proptest! {
    #[test]
    fn round_trip(g in multigraph()) {
        let back = from_edge_list(&to_edge_list(&g)).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }
}

#[test]
fn comments_and_multiplicities() {
    let g = from_edge_list("# two vertices\n2 1\n0 1 3 # triple edge\n").unwrap();
    assert_eq!(g.multiplicity(0, 1), 3);
    assert_eq!(g.degree(0), 3);
}

#[test]
fn malformed_input() {
    assert!(matches!(from_edge_list(""), Err(ParseError::Empty)));
    assert!(matches!(from_edge_list("2 2\n0 1\n"), Err(ParseError::EdgeCount { .. })));
    assert!(matches!(from_edge_list("2 1\n0 x\n"), Err(ParseError::Syntax { line: 2, .. })));
    assert!(matches!(from_edge_list("2 1\n0 0\n"), Err(ParseError::Syntax { line: 2, .. })));
    assert!(matches!(from_edge_list("2 1\n0 2\n"), Err(ParseError::Syntax { line: 2, .. })));
}
