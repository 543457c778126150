use cohtt::model::{
    delta, gamma, hom_graphs, is_rel_codiscrete, locally_bijective, nabla, pi0, product, sharp_rel,
    simple_graphs, verify_cohesion, Fault, FinSet, GraphMor, ModelError, ReflGraph, VerifyParams,
};
use proptest::prelude::*;

const LIMIT: u64 = 1 << 20;

fn set(labels: &[&str]) -> FinSet {
    FinSet::new(labels.iter().copied()).unwrap()
}

/// `n` vertices with the listed extra edges.
fn graph(n: usize, edges: &[(usize, usize)]) -> ReflGraph {
    let mut g = delta(&FinSet::numbered(n));
    for &(s, t) in edges {
        g.add_edge(s, t);
    }
    g.validate().unwrap();
    g
}

fn arb_graph() -> impl Strategy<Value = ReflGraph> {
    (1usize..=3).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..4).prop_map(move |edges| graph(n, &edges))
    })
}

#[test]
fn components_of_a_product_with_a_discrete_graph() {
    // one path p -> q -> r and an isolated vertex s
    let x = graph(4, &[(0, 1), (1, 2)]);
    assert_eq!(pi0(&x).count, 2);
    let p = product(&x, &delta(&set(&["a", "b"])));
    assert_eq!(p.graph.vertex_count(), 8);
    assert_eq!(pi0(&p.graph).count, 4);
}

#[test]
fn hom_counts() {
    let d2 = delta(&set(&["a", "b"]));
    let d3 = delta(&set(&["x", "y", "z"]));
    assert_eq!(hom_graphs(&d2, &d3, LIMIT).unwrap().len(), 9);
    let path = graph(3, &[(0, 1), (1, 2)]);
    // vertex maps into a codiscrete graph extend uniquely
    assert_eq!(
        hom_graphs(&path, &nabla(&set(&["u", "v"])), LIMIT)
            .unwrap()
            .len(),
        8
    );
    // a path maps into a discrete graph only constantly
    assert_eq!(hom_graphs(&path, &d3, LIMIT).unwrap().len(), 3);
    assert!(matches!(
        hom_graphs(&d3, &d3, 2),
        Err(ModelError::SizeLimit { maps: 27, limit: 2 })
    ));
}

#[test]
fn codiscrete_square() {
    let n = nabla(&set(&["a", "b"]));
    let sq = product(&n, &n);
    assert_eq!(sq.graph.vertex_count(), 4);
    assert_eq!(sq.graph.edge_count(), 16);
    assert_eq!(pi0(&sq.graph).count, 1);
}

#[test]
fn simple_graph_family_sizes() {
    assert_eq!(simple_graphs(1).len(), 1);
    assert_eq!(simple_graphs(2).len(), 4);
    assert_eq!(simple_graphs(3).len(), 64);
}

#[test]
fn graph_json_round_trip() {
    let g = graph(3, &[(0, 1), (0, 1), (2, 0)]);
    let text = serde_json::to_string(&g).unwrap();
    let back: ReflGraph = serde_json::from_str(&text).unwrap();
    assert_eq!(back, g);
    let mut j = g.to_json();
    j.refl.insert("s1".into(), "nope".into());
    assert!(matches!(
        ReflGraph::from_json(&j),
        Err(ModelError::Invalid(_))
    ));
    let mut j = g.to_json();
    j.refl.insert("s1".into(), "rs0".into());
    assert!(matches!(
        ReflGraph::from_json(&j),
        Err(ModelError::Invalid(_))
    ));
}

#[test]
fn invalid_graphs_are_rejected() {
    assert!(matches!(
        FinSet::new(["a", "a"]),
        Err(ModelError::DuplicateLabel(_))
    ));
    let mut g = graph(2, &[(0, 1)]);
    g.refl[1] = 2;
    assert!(matches!(g.validate(), Err(ModelError::Invalid(_))));
}

#[test]
fn bounds_are_enforced() {
    for params in [
        VerifyParams {
            max_vertices: 4,
            ..VerifyParams::default()
        },
        VerifyParams {
            max_extra_edges: 5,
            ..VerifyParams::default()
        },
    ] {
        assert!(matches!(
            verify_cohesion(&params),
            Err(ModelError::TooLarge(_))
        ));
    }
}

#[test]
fn injected_fault_is_caught_with_a_counterexample() {
    let report = verify_cohesion(&VerifyParams {
        max_vertices: 2,
        fault: Some(Fault::NablaMissingDiagonalRefl),
        ..VerifyParams::default()
    })
    .unwrap();
    assert!(!report.passed);
    assert_eq!(report.failures(), 1);
    let last = report.sections.last().unwrap();
    assert_eq!(last.name, "fully-faithful-nabla");
    assert!(!last.passed);
    assert!(last.counterexample.is_some());
    assert!(report.to_json().contains("nabla-missing-diagonal-refl"));
}

#[test]
fn small_run_passes_and_is_byte_stable() {
    let params = VerifyParams {
        max_vertices: 2,
        max_extra_edges: 2,
        seed: 7,
        fault: None,
    };
    let a = verify_cohesion(&params).unwrap();
    assert!(a.passed, "{}", a.render_table());
    assert!(a.family.random_graphs > 0);
    assert!(a
        .section("random/factorization-uniqueness")
        .is_some_and(|s| s.passed));
    assert_eq!(a.to_json(), verify_cohesion(&params).unwrap().to_json());
    let other = verify_cohesion(&VerifyParams { seed: 8, ..params }).unwrap();
    assert!(other.passed);
}

/// `pi0 -| delta` by counting: `|Hom(pi0 x, s)| = |Hom(x, delta s)|`.
fn pi0_delta_count(x: &ReflGraph, s: usize) -> bool {
    let comps = pi0(x).count as u64;
    hom_graphs(x, &delta(&FinSet::numbered(s)), LIMIT)
        .unwrap()
        .len() as u64
        == (s as u64).pow(comps as u32)
}

/// `gamma -| nabla` by counting: `|Hom(x, nabla s)| = |s|^|gamma x|`.
fn gamma_nabla_count(x: &ReflGraph, s: usize) -> bool {
    let v = gamma(x).len() as u32;
    hom_graphs(x, &nabla(&FinSet::numbered(s)), LIMIT)
        .unwrap()
        .len() as u64
        == (s as u64).pow(v)
}

proptest! {
    #[test]
    fn adjoint_counts(x in arb_graph(), s in 0usize..=3) {
        prop_assert!(pi0_delta_count(&x, s));
        prop_assert!(gamma_nabla_count(&x, s));
    }

    #[test]
    fn homs_are_morphisms_and_compose(x in arb_graph(), y in arb_graph()) {
        let homs = hom_graphs(&x, &y, LIMIT).unwrap();
        for f in &homs {
            prop_assert!(f.is_morphism(&x, &y));
            prop_assert_eq!(&GraphMor::identity(&x).then(f), f);
            prop_assert_eq!(&f.then(&GraphMor::identity(&y)), f);
        }
    }

    #[test]
    fn pullback_form_agrees_with_local_bijectivity(x in arb_graph(), y in arb_graph()) {
        for f in hom_graphs(&x, &y, LIMIT).unwrap() {
            prop_assert_eq!(is_rel_codiscrete(&x, &y, &f), locally_bijective(&x, &y, &f));
            let r = sharp_rel(&x, &y, &f);
            prop_assert!(r.unit.is_morphism(&x, &r.cone.graph));
            prop_assert!(r.proj.is_morphism(&r.cone.graph, &y));
            prop_assert_eq!(r.unit.then(&r.proj), f.clone());
            prop_assert!(r.unit.is_vertex_bijective(r.cone.graph.vertex_count()));
            prop_assert!(locally_bijective(&r.cone.graph, &y, &r.proj));
        }
    }
}
