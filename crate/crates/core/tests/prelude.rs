use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use cohtt::cohesion::{
    axiom_catalog, load_prelude, load_prelude_text, manifest, prelude_source, unreferenced_axioms,
    AxiomTag, MissingAxiom, PreludeFlags, DOCUMENTED_LEAVES, GOLDEN_MANIFEST, MUTANTS,
    PRELUDE_SOURCE, PRELUDE_VERSION,
};
use cohtt::kernel::{conv, infer_closed, Origin, Term};
use cohtt::loader::{LoadError, Session};
use cohtt::syntax::parse_term;

fn no_assume() -> BTreeSet<String> {
    BTreeSet::new()
}

#[test]
fn default_prelude_loads_quickly() {
    let start = Instant::now();
    let session = load_prelude(PreludeFlags::default(), &no_assume()).expect("prelude loads");
    assert!(
        start.elapsed() < Duration::from_secs(5),
        "took {:?}",
        start.elapsed()
    );
    for tag in AxiomTag::ALL {
        let e = session
            .env
            .get(tag.constant())
            .unwrap_or_else(|| panic!("{tag} missing"));
        assert!(e.is_postulate(), "{tag}");
        assert_eq!(e.origin, Origin::PreludeAxiom, "{tag}");
    }
}

#[test]
fn catalog_is_a_bijection_onto_tags() {
    let session = load_prelude(PreludeFlags::default(), &no_assume()).unwrap();
    let catalog = axiom_catalog(&session.env).unwrap();
    assert_eq!(catalog.len(), AxiomTag::ALL.len());
    let names: BTreeSet<_> = catalog.iter().map(|e| e.name.to_string()).collect();
    assert_eq!(names.len(), catalog.len());
    for (e, tag) in catalog.iter().zip(AxiomTag::ALL) {
        assert_eq!(e.tag, *tag);
        assert_eq!(AxiomTag::from_constant(&e.name), Some(*tag));
    }
    // every postulate of the prelude module carries a tag
    let postulates = session
        .env
        .entries()
        .filter(|e| e.origin == Origin::PreludeAxiom && e.is_postulate())
        .count();
    assert_eq!(postulates, GOLDEN_MANIFEST.lines().count());
}

#[test]
fn manifest_matches_golden() {
    let session = load_prelude(PreludeFlags::default(), &no_assume()).unwrap();
    assert_eq!(manifest(&session.env).unwrap(), GOLDEN_MANIFEST);
}

#[test]
fn sharp_unit_has_the_expected_type() {
    let session = load_prelude(PreludeFlags::default(), &no_assume()).unwrap();
    let env = &session.env;
    let entry = axiom_catalog(env)
        .unwrap()
        .into_iter()
        .find(|e| e.tag == AxiomTag::SharpUnit)
        .unwrap();
    let (want, _) =
        infer_closed(env, &parse_term("(A : Type 0) -> A -> Sharp A").unwrap()).unwrap();
    assert!(conv(env, &entry.normal_type(env), &want));
    assert_eq!(
        entry.normal_type(env).to_string(),
        "(A : Type 0) -> A -> Sharp A"
    );
}

#[test]
fn printed_axiom_types_reparse_to_convertible_types() {
    let session = load_prelude(PreludeFlags::default(), &no_assume()).unwrap();
    let env = &session.env;
    for e in axiom_catalog(env).unwrap() {
        let printed = e.ty.to_string();
        let surface =
            parse_term(&printed).unwrap_or_else(|err| panic!("{}: {printed}: {err}", e.tag));
        let (t, sort) =
            infer_closed(env, &surface).unwrap_or_else(|err| panic!("{}: {printed}: {err}", e.tag));
        assert!(
            matches!(*cohtt::kernel::normalize(env, &sort), Term::Universe(_)),
            "{}",
            e.tag
        );
        assert!(conv(env, &t, &e.ty), "{}", e.tag);
    }
}

#[test]
fn every_mutant_fails_to_load() {
    for m in &MUTANTS {
        let mut session = Session::new(Default::default());
        let result = load_prelude_text(&mut session, &m.source(), PreludeFlags::default());
        assert!(result.is_err(), "mutant {} loads", m.name);
    }
}

#[test]
fn postcomposing_mutant_fails_at_the_universal_property() {
    let mut session = Session::new(Default::default());
    let err =
        load_prelude_text(&mut session, &MUTANTS[0].source(), PreludeFlags::default()).unwrap_err();
    match err {
        LoadError::Type { decl, module, .. } => {
            assert_eq!(module, "cohesion");
            assert_eq!(decl, "tsr");
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn mutant_names_are_distinct() {
    let names: BTreeSet<_> = MUTANTS.iter().map(|m| m.name).collect();
    assert_eq!(names.len(), 10);
}

#[test]
fn base_only_prelude_has_no_cohesion() {
    let flags = PreludeFlags {
        include_cohesion: false,
        ..PreludeFlags::default()
    };
    let module = prelude_source(flags);
    let full = prelude_source(PreludeFlags::default());
    let names: Vec<_> = module.decls().map(|d| d.name.as_str()).collect();
    assert!(names.len() < full.decls().count());
    assert_eq!(
        names.first().copied(),
        full.decls().next().map(|d| d.name.as_str())
    );
    assert!(!names.contains(&"Sharp") && !names.contains(&"isCodisc"));
    for kept in ["funext", "univalence", "PTrunc", "ptrunc_rec"] {
        assert!(names.contains(&kept), "{kept}");
    }
    let session = load_prelude(flags, &no_assume()).expect("base block loads");
    assert!(!session.env.contains("Sharp"));
    match axiom_catalog(&session.env) {
        Err(MissingAxiom(tag)) => assert!(tag >= AxiomTag::IsCodisc, "{tag}"),
        Ok(_) => panic!("catalog complete without cohesion"),
    }
}

#[test]
fn without_univalence_the_first_dependent_item_fails() {
    let flags = PreludeFlags {
        include_univalence: false,
        ..PreludeFlags::default()
    };
    assert!(!prelude_source(flags)
        .decls()
        .any(|d| d.name == "univalence"));
    let err = load_prelude(flags, &no_assume()).err().expect("load fails");
    assert!(err.to_string().contains("unbound: univalence"), "{err}");
}

#[test]
fn only_documented_leaves_are_unreferenced() {
    let (session, report) = cohtt::stdlib::stdlib_report(PreludeFlags::default(), &no_assume());
    assert!(report.ok());
    assert_eq!(unreferenced_axioms(&session.env), Vec::<AxiomTag>::new());
    for leaf in DOCUMENTED_LEAVES {
        assert!(session.env.contains(leaf.constant()));
    }
}

#[test]
fn version_tag() {
    assert_eq!(PRELUDE_VERSION, format!("v{}", env!("CARGO_PKG_VERSION")));
    assert!(PRELUDE_SOURCE.starts_with("--"));
}

#[test]
fn type_in_type_flag_reaches_the_kernel() {
    let flags = PreludeFlags {
        type_in_type: true,
        ..PreludeFlags::default()
    };
    let session = load_prelude(flags, &no_assume()).unwrap();
    assert!(session.env.options.type_in_type);
    let (_, ty) = infer_closed(&session.env, &parse_term("Sharp (Type 0)").unwrap()).unwrap();
    assert_eq!(ty.to_string(), "Type 0");
}
