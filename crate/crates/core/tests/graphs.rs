mod common;

use exchci::graphs::{
    c_ij, c_ijkl, complement_graph, enumerate_separators, incidence_graph, induced_model,
    markov_equivalent, separates, unshielded_collider_trisections, EdgeKind, GraphFamily,
    MixedGraph, SeparatorMode,
};
use exchci::imodel::dual;
use exchci::sample::random_mixed_graph;
use exchci::{dyad_universe, GroundSet, VarSet};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn vs(g: &GroundSet, s: &str) -> VarSet {
    g.parse_set(s).unwrap()
}

/// Random graph with every edge of one kind.
fn uniform_graph(k: usize, p: f64, kind: EdgeKind, rng: &mut ChaCha8Rng) -> MixedGraph {
    random_mixed_graph(k, p, rng)
        .unwrap()
        .with_kind(kind)
        .unwrap()
}

#[test]
fn incidence_graph_matches_line_graph_of_complete_graph() {
    for n in 2..=6 {
        let g = incidence_graph(n, EdgeKind::Line).unwrap();
        assert_eq!(common::edge_set(&g), common::incidence_edges(n));
        for v in 0..g.len() {
            assert_eq!(g.degree(v), 2 * (n - 2));
        }
    }
    let g = incidence_graph(5, EdgeKind::Arc).unwrap();
    assert!(g.edges().iter().all(|e| e.2 == EdgeKind::Arc));
}

#[test]
fn complement_of_four_node_incidence_graph_is_a_matching() {
    let g = incidence_graph(4, EdgeKind::Line).unwrap();
    let c = complement_graph(&g, EdgeKind::Line).unwrap();
    let d = g.ground();
    let expected = [("1-2", "3-4"), ("1-3", "2-4"), ("1-4", "2-3")]
        .iter()
        .map(|(a, b)| (d.parse_element(a).unwrap(), d.parse_element(b).unwrap()))
        .collect();
    assert_eq!(common::edge_set(&c), expected);
}

#[test]
fn separation_examples_on_four_nodes() {
    let und = incidence_graph(4, EdgeKind::Line).unwrap();
    let bi = incidence_graph(4, EdgeKind::Arc).unwrap();
    let d = und.ground().clone();
    let (a, b) = (vs(&d, "{1-2}"), vs(&d, "{3-4}"));
    assert!(separates(&und, a, b, vs(&d, "{1-3,1-4,2-3,2-4}")).unwrap());
    assert!(!separates(&und, a, b, VarSet::EMPTY).unwrap());
    assert!(separates(&bi, a, b, VarSet::EMPTY).unwrap());
    assert!(!markov_equivalent(&und, &bi).unwrap());
}

#[test]
fn minimal_separator_of_disjoint_dyads_on_four_nodes() {
    let g = incidence_graph(4, EdgeKind::Line).unwrap();
    let d = g.ground().clone();
    let r = enumerate_separators(&g, 0, 5, SeparatorMode::Minimal).unwrap();
    assert_eq!(r.sets, vec![vs(&d, "{1-3,1-4,2-3,2-4}")]);
    assert_eq!(r.sets[0], c_ijkl(&d, 1, 2, 3, 4).unwrap());
}

#[test]
fn named_separator_on_six_nodes_is_minimal() {
    let g = incidence_graph(6, EdgeKind::Line).unwrap();
    let d = g.ground().clone();
    let c = vs(&d, "{1-3,1-4,1-5,2-3,2-4,2-5,3-6,4-6,5-6}");
    let (a, b) = (vs(&d, "{1-2}"), vs(&d, "{3-4}"));
    assert!(separates(&g, a, b, c).unwrap());
    assert!(common::undirected_separated(&g, a, b, c));
    for x in c.iter() {
        assert!(!common::undirected_separated(&g, a, b, c.without(x)));
    }
    assert_eq!(c.len(), c_ij(&d, 1, 2).unwrap().len() + 1);
}

#[test]
fn named_separator_in_complement_on_five_nodes() {
    let g = GraphFamily::ComplementUndirected.build(5).unwrap();
    let d = g.ground().clone();
    let c = vs(&d, "{3-4,2-4,1-4,4-5}");
    let (u, v) = (
        d.parse_element("1-2").unwrap(),
        d.parse_element("1-3").unwrap(),
    );
    let r = enumerate_separators(&g, u, v, SeparatorMode::Minimal).unwrap();
    assert!(r.sets.contains(&c));
}

#[test]
fn induced_models_of_bidirected_families_are_duals() {
    for n in 4..=5 {
        for (u, b) in [
            (
                GraphFamily::IncidenceUndirected,
                GraphFamily::IncidenceBidirected,
            ),
            (
                GraphFamily::ComplementUndirected,
                GraphFamily::ComplementBidirected,
            ),
        ] {
            let mu = induced_model(&u.build(n).unwrap()).unwrap();
            let mb = induced_model(&b.build(n).unwrap()).unwrap();
            assert_eq!(mb, dual(&mu), "{} n={n}", b.name());
        }
    }
}

#[test]
fn bidirected_incidence_graph_has_collider_through_shared_dyad() {
    let g = incidence_graph(4, EdgeKind::Arc).unwrap();
    let d = g.ground().clone();
    let (x, m, y) = (
        d.parse_element("1-2").unwrap(),
        d.parse_element("1-3").unwrap(),
        d.parse_element("3-4").unwrap(),
    );
    let ts = unshielded_collider_trisections(&g);
    assert!(ts
        .iter()
        .any(|t| t.i == x && t.j == y && t.section == VarSet::singleton(m)));
    assert!(
        unshielded_collider_trisections(&incidence_graph(4, EdgeKind::Line).unwrap()).is_empty()
    );
}

#[test]
fn separation_on_canonical_families_matches_path_oracles() {
    for n in 4..=5 {
        for fam in [
            GraphFamily::IncidenceUndirected,
            GraphFamily::ComplementUndirected,
        ] {
            let g = fam.build(n).unwrap();
            assert_eq!(
                induced_model(&g).unwrap(),
                common::model_from_oracle(&g, common::undirected_separated)
            );
        }
        for fam in [
            GraphFamily::IncidenceBidirected,
            GraphFamily::ComplementBidirected,
        ] {
            let g = fam.build(n).unwrap();
            assert_eq!(
                induced_model(&g).unwrap(),
                common::model_from_oracle(&g, common::bidirected_separated)
            );
        }
    }
    let d = dyad_universe(4).unwrap();
    assert!(
        induced_model(&MixedGraph::complete(d.clone(), EdgeKind::Line))
            .unwrap()
            .is_empty()
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn undirected_separation_matches_paths(seed in any::<u64>(), k in 3usize..=7, p in 0.2f64..0.8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = uniform_graph(k, p, EdgeKind::Line, &mut rng);
        for (a, b, c) in common::general_triples(g.ground().all()) {
            prop_assert_eq!(separates(&g, a, b, c).unwrap(), common::undirected_separated(&g, a, b, c));
        }
    }

    #[test]
    fn bidirected_separation_matches_paths(seed in any::<u64>(), k in 3usize..=7, p in 0.2f64..0.8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = uniform_graph(k, p, EdgeKind::Arc, &mut rng);
        for (a, b, c) in common::general_triples(g.ground().all()) {
            prop_assert_eq!(separates(&g, a, b, c).unwrap(), common::bidirected_separated(&g, a, b, c));
        }
    }

    #[test]
    fn mixed_separation_matches_walk_enumeration(seed in any::<u64>(), k in 3usize..=5, p in 0.3f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_mixed_graph(k, p, &mut rng).unwrap();
        for (a, b, c) in common::general_triples(g.ground().all()) {
            prop_assert_eq!(
                separates(&g, a, b, c).unwrap(),
                common::walk_separated(&g, a, b, c, 2 * k),
                "{:?}", g.edges()
            );
        }
    }

    #[test]
    fn bidirected_model_is_dual_of_undirected(seed in any::<u64>(), k in 2usize..=5, p in 0.1f64..0.9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = uniform_graph(k, p, EdgeKind::Line, &mut rng);
        let b = u.with_kind(EdgeKind::Arc).unwrap();
        prop_assert_eq!(induced_model(&b).unwrap(), dual(&induced_model(&u).unwrap()));
    }

    #[test]
    fn induced_model_holds_agrees_with_separation(seed in any::<u64>(), k in 3usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_mixed_graph(k, 0.5, &mut rng).unwrap();
        let m = induced_model(&g).unwrap();
        for (a, b, c) in common::general_triples(g.ground().all()) {
            prop_assert_eq!(m.holds(a, b, c).unwrap(), separates(&g, a, b, c).unwrap());
        }
    }

    #[test]
    fn complement_is_an_involution(seed in any::<u64>(), k in 1usize..=7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = uniform_graph(k, 0.5, EdgeKind::Line, &mut rng);
        let cc = complement_graph(&complement_graph(&g, EdgeKind::Line).unwrap(), EdgeKind::Line).unwrap();
        prop_assert_eq!(cc.skeleton(), g.skeleton());
        let empty = MixedGraph::empty(g.ground().clone());
        prop_assert_eq!(
            complement_graph(&empty, EdgeKind::Line).unwrap(),
            MixedGraph::complete(g.ground().clone(), EdgeKind::Line)
        );
    }

    #[test]
    fn separator_modes_filter_the_full_list(seed in any::<u64>(), k in 3usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = uniform_graph(k, 0.4, EdgeKind::Line, &mut rng);
        let all = enumerate_separators(&g, 0, 1, SeparatorMode::All).unwrap();
        prop_assert_eq!(all.adjacent, g.adjacent(0, 1));
        let rest = g.ground().all().without(0).without(1);
        let expected: Vec<VarSet> = rest
            .subsets()
            .filter(|&c| !g.adjacent(0, 1) && common::undirected_separated(&g, VarSet::singleton(0), VarSet::singleton(1), c))
            .collect();
        let mut got = all.sets.clone();
        got.sort_by_key(|s| s.bits());
        let mut want = expected.clone();
        want.sort_by_key(|s| s.bits());
        prop_assert_eq!(got, want);
        let min = enumerate_separators(&g, 0, 1, SeparatorMode::Minimal).unwrap().sets;
        let max = enumerate_separators(&g, 0, 1, SeparatorMode::Maximal).unwrap().sets;
        for c in &expected {
            let is_min = !expected.iter().any(|d| d != c && d.is_subset(*c));
            let is_max = !expected.iter().any(|d| d != c && c.is_subset(*d));
            prop_assert_eq!(min.contains(c), is_min);
            prop_assert_eq!(max.contains(c), is_max);
        }
    }
}

#[test]
fn walk_oracle_opens_colliders_when_conditioned() {
    let mut g = MixedGraph::empty(GroundSet::vector(4).unwrap());
    g.add_edge(0, 2, EdgeKind::Arrow).unwrap();
    g.add_edge(1, 3, EdgeKind::Arc).unwrap();
    g.add_edge(2, 3, EdgeKind::Line).unwrap();
    let (a, b) = (VarSet::singleton(0), VarSet::singleton(1));
    let s = |c: VarSet| {
        (
            separates(&g, a, b, c).unwrap(),
            common::walk_separated(&g, a, b, c, 8),
        )
    };
    assert_eq!(s(VarSet::EMPTY), (true, true));
    assert_eq!(s(VarSet::singleton(2)), (false, false));
    assert_eq!(s(VarSet::singleton(3)), (false, false));
}
