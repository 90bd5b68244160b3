use cluster_growth::{ClusterGraph, LeafChoice, NodeId, PhysicalCluster};
use cluster_protocol::{ProtocolSpec, StochasticProtocol};
use cluster_statevector::{Forced, Sampled};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn assert_consistent(pc: &PhysicalCluster) {
    let f = pc.fidelity().unwrap();
    assert!(f > 1.0 - TOL, "fidelity {f}");
}

fn two_chains() -> ClusterGraph {
    let mut g = ClusterGraph::new();
    g.add_path(2);
    g.add_path(2);
    g
}

#[test]
fn fusion_success_matches_graph_for_both_leaf_choices() {
    let protocol = StochasticProtocol::new(ProtocolSpec::new(3, 0.3).unwrap()).unwrap();
    for leaf in [LeafChoice::Tail, LeafChoice::Tip] {
        // 0,1,0 is a success sequence for n = 3.
        let mut pc = PhysicalCluster::new(two_chains(), 3).unwrap();
        let ok = pc
            .fuse(NodeId(1), NodeId(2), &protocol, leaf, Forced::new([0, 1, 0]))
            .unwrap();
        assert!(ok);
        assert_consistent(&pc);
        assert_eq!(pc.graph().link_count(), 3);
        assert_eq!(pc.graph().leaf_count(), 3);
    }
}

#[test]
fn fusion_success_with_odd_weight_records_byproduct() {
    let protocol = StochasticProtocol::new(ProtocolSpec::new(3, 1.0).unwrap()).unwrap();
    let mut pc = PhysicalCluster::new(two_chains(), 3).unwrap();
    assert!(pc
        .fuse(NodeId(1), NodeId(2), &protocol, LeafChoice::Tail, Forced::new([1, 1, 1]))
        .unwrap());
    assert_consistent(&pc);
    assert!(pc.graph().byproduct(NodeId(1)));
    pc.clear_byproduct(NodeId(1)).unwrap();
    assert_consistent(&pc);
}

#[test]
fn fusion_failure_detaches_tip_and_tail() {
    let protocol = StochasticProtocol::new(ProtocolSpec::new(3, 0.3).unwrap()).unwrap();
    let mut pc = PhysicalCluster::new(two_chains(), 3).unwrap();
    let ok = pc
        .fuse(NodeId(1), NodeId(2), &protocol, LeafChoice::Tail, Forced::new([0, 0, 0, 0, 0]))
        .unwrap();
    assert!(!ok);
    assert_eq!(pc.graph().node_count(), 2);
    assert_eq!(pc.graph().link_count(), 0);
    assert_consistent(&pc);
}

#[test]
fn trapped_hadamard_fusion_on_longer_clusters() {
    let protocol = StochasticProtocol::new(ProtocolSpec::new(1, 0.7).unwrap()).unwrap();
    let mut g = ClusterGraph::new();
    let left = g.add_path(3);
    let (_, leaves) = g.add_star(2);
    let mut pc = PhysicalCluster::new(g, 1).unwrap();
    assert!(pc
        .fuse(left[1], leaves[0], &protocol, LeafChoice::Tail, Forced::new([1]))
        .unwrap());
    assert_consistent(&pc);
}

#[test]
fn x_shorten_on_five_chain_both_outcomes() {
    for m in [0, 1] {
        let (g, ids) = ClusterGraph::path(5);
        let mut pc = PhysicalCluster::new(g, 0).unwrap();
        pc.x_measure_shorten(ids[2], ids[3], Forced::new([m])).unwrap();
        assert_consistent(&pc);
        assert_eq!(pc.graph().longest_linear_segment(), 3);
        assert!(pc.graph().is_leaf(ids[3]));
        assert!(pc.graph().has_edge(ids[1], ids[4]));
    }
}

#[test]
fn x_shorten_twice_removes_four() {
    let (g, ids) = ClusterGraph::path(9);
    let mut pc = PhysicalCluster::new(g, 0).unwrap();
    let mut rng = Sampled(ChaCha8Rng::seed_from_u64(1));
    pc.x_measure_shorten(ids[2], ids[3], &mut rng).unwrap();
    pc.x_measure_shorten(ids[5], ids[6], &mut rng).unwrap();
    assert_consistent(&pc);
    assert_eq!(pc.graph().longest_linear_segment(), 5);
}

#[test]
fn x_shorten_minimal_chain() {
    for m in [0, 1] {
        let (g, ids) = ClusterGraph::path(3);
        let mut pc = PhysicalCluster::new(g, 0).unwrap();
        pc.x_measure_shorten(ids[1], ids[2], Forced::new([m])).unwrap();
        assert_consistent(&pc);
        assert_eq!(pc.graph().node_count(), 2);
        assert!(pc.graph().is_leaf(ids[2]));
    }
}

#[test]
fn x_shorten_rejects_end_node() {
    let (g, ids) = ClusterGraph::path(4);
    let mut pc = PhysicalCluster::new(g, 0).unwrap();
    assert!(pc.x_measure_shorten(ids[0], ids[1], Forced::new([0])).is_err());
    assert_consistent(&pc);
}

#[test]
fn y_contract_joins_neighbours() {
    for m in [0, 1] {
        let (g, ids) = ClusterGraph::path(5);
        let mut pc = PhysicalCluster::new(g, 0).unwrap();
        pc.y_contract(ids[2], Forced::new([m])).unwrap();
        assert_consistent(&pc);
        assert!(pc.graph().has_edge(ids[1], ids[3]));
        assert_eq!(pc.graph().longest_linear_segment(), 4);
    }
}

#[test]
fn z_remove_leaf_of_three_node() {
    for m in [0, 1] {
        let mut g = ClusterGraph::new();
        let ids = g.add_path(3);
        let leaf = g.add_node();
        g.add_edge(ids[1], leaf).unwrap();
        let mut pc = PhysicalCluster::new(g, 0).unwrap();
        pc.z_remove_leaf(leaf, Forced::new([m])).unwrap();
        assert_consistent(&pc);
        assert_eq!(pc.graph().byproduct(ids[1]), m == 1);
        pc.clear_byproduct(ids[1]).unwrap();
        assert_consistent(&pc);
        assert_eq!(pc.graph().link_count(), 2);
    }
}

#[test]
fn z_remove_rejects_interior() {
    let (g, ids) = ClusterGraph::path(3);
    let mut pc = PhysicalCluster::new(g, 0).unwrap();
    assert!(pc.z_remove_leaf(ids[1], Forced::new([0])).is_err());
}

fn random_graph(size: usize, edges: &[(usize, usize)], byp: &[bool]) -> ClusterGraph {
    let mut g = ClusterGraph::new();
    for _ in 0..size {
        g.add_node();
    }
    for &(a, b) in edges {
        let (a, b) = (a % size, b % size);
        if a != b && !g.has_edge(NodeId(a), NodeId(b)) {
            g.add_edge(NodeId(a), NodeId(b)).unwrap();
        }
    }
    for (v, &z) in byp.iter().enumerate().take(size) {
        if z {
            g.flip_byproduct(NodeId(v)).unwrap();
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn x_measure_rewrite_matches_state(
        size in 3usize..8,
        edges in proptest::collection::vec((0usize..8, 0usize..8), 2..14),
        byp in proptest::collection::vec(any::<bool>(), 8),
        a in 0usize..8,
        pick in 0usize..8,
        m in 0u8..2,
    ) {
        let g = random_graph(size, &edges, &byp);
        let a = NodeId(a % size);
        let nbrs: Vec<NodeId> = g.neighbors(a).unwrap().iter().copied().collect();
        prop_assume!(!nbrs.is_empty());
        let b0 = nbrs[pick % nbrs.len()];
        let mut pc = PhysicalCluster::new(g, 0).unwrap();
        let p = pc.state().outcome_probability(pc.qubit(a), cluster_statevector::Basis::X, m).unwrap();
        prop_assume!(p > 1e-9);
        pc.x_measure(a, b0, Forced::new([m])).unwrap();
        prop_assert!(pc.fidelity().unwrap() > 1.0 - TOL);
    }

    #[test]
    fn y_contract_matches_state_with_byproducts(
        len in 3usize..7,
        at in 1usize..6,
        byp in proptest::collection::vec(any::<bool>(), 8),
        m in 0u8..2,
    ) {
        let at = 1 + at % (len - 2);
        let mut g = random_graph(len, &[], &byp);
        for k in 0..len - 1 {
            g.add_edge(NodeId(k), NodeId(k + 1)).unwrap();
        }
        let mut pc = PhysicalCluster::new(g, 0).unwrap();
        pc.y_contract(NodeId(at), Forced::new([m])).unwrap();
        prop_assert!(pc.fidelity().unwrap() > 1.0 - TOL);
    }

    #[test]
    fn leaves_have_degree_one_after_rewrites(seed in 0u64..200) {
        let protocol = StochasticProtocol::new(ProtocolSpec::new(1, 0.4).unwrap()).unwrap();
        let mut g = ClusterGraph::new();
        let row = g.add_path(6);
        let (_, star) = g.add_star(2);
        let mut pc = PhysicalCluster::new(g, 1).unwrap();
        let mut rng = Sampled(ChaCha8Rng::seed_from_u64(seed));
        pc.x_measure_shorten(row[2], row[3], &mut rng).unwrap();
        let _ = pc.fuse(row[5], star[0], &protocol, LeafChoice::Tail, &mut rng).unwrap();
        prop_assert!(pc.fidelity().unwrap() > 1.0 - TOL);
        for v in pc.graph().nodes() {
            if pc.graph().role(v).unwrap() == cluster_growth::Role::Leaf {
                prop_assert_eq!(pc.graph().degree(v), 1);
            }
        }
    }
}
