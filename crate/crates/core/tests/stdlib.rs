use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use cohtt::cohesion::{load_prelude, PreludeFlags};
use cohtt::kernel::{conv, infer_closed, normalize, Origin, Term};
use cohtt::loader::{Embedded, Session};
use cohtt::stdlib::{
    build_conc, build_fiber_product, build_hfiber, check_stdlib, signature_hygiene, stdlib_report,
    BuildError, Status, StdlibError, Tier, FALLBACK, REQUIRED, SIGNATURES,
};
use cohtt::syntax::parse_term;

fn assume(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[test]
fn status_matches_golden() {
    let (_, report) = stdlib_report(PreludeFlags::default(), &BTreeSet::new());
    let golden = include_str!("golden/stdlib_status.txt");
    assert_eq!(report.status_lines(), golden);
    assert!(report.release_ready());
}

#[test]
fn required_entries_are_proved_without_assumptions() {
    let (_, report) = stdlib_report(PreludeFlags::default(), &BTreeSet::new());
    for name in REQUIRED.iter().chain(FALLBACK) {
        let e = report.entry(name).unwrap();
        assert_eq!(e.status, Status::Proved, "{name}");
        assert!(e.assumed_deps.is_empty(), "{name}");
        assert!(e.statement.is_some());
    }
    assert!(report.signatures_loaded);
    assert_eq!(
        report
            .entries
            .iter()
            .filter(|e| e.tier == Tier::Signature)
            .count(),
        9
    );
}

#[test]
fn signatures_check_within_budget() {
    let start = Instant::now();
    let (_, report) = stdlib_report(PreludeFlags::default(), &BTreeSet::new());
    assert!(
        start.elapsed() < Duration::from_secs(10),
        "{:?}",
        start.elapsed()
    );
    for (name, _) in SIGNATURES {
        assert_eq!(
            report.entry(name).unwrap().status,
            Status::CheckedSignature,
            "{name}"
        );
    }
}

#[test]
fn assumed_fallback_is_reported_and_downstream_still_checks() {
    let (session, report) = stdlib_report(PreludeFlags::default(), &assume(&["sharp_prod"]));
    assert!(report.ok());
    assert!(!report.release_ready());
    assert_eq!(report.entry("sharp_prod").unwrap().status, Status::Assumed);
    assert_eq!(report.assume, vec!["sharp_prod".to_owned()]);
    assert!(session.env.get("sharp_prod").unwrap().is_postulate());
    // everything else is unaffected
    for e in report.entries.iter().filter(|e| e.name != "sharp_prod") {
        assert!(
            matches!(e.status, Status::Proved | Status::CheckedSignature),
            "{}",
            e.name
        );
    }
}

#[test]
fn assuming_a_helper_marks_its_dependents() {
    let (_, report) = stdlib_report(PreludeFlags::default(), &assume(&["sharp_prod_bf"]));
    let e = report.entry("sharp_prod").unwrap();
    assert_eq!(e.status, Status::Proved);
    assert_eq!(e.assumed_deps, vec!["sharp_prod_bf".to_owned()]);
}

#[test]
fn unknown_assume_is_listed_as_unused() {
    let (_, report) = stdlib_report(PreludeFlags::default(), &assume(&["no_such_theorem"]));
    assert!(report.ok());
    assert_eq!(report.unused_assume, vec!["no_such_theorem".to_owned()]);
}

#[test]
fn missing_modality_is_reported() {
    let mut session = Session::new(Default::default());
    match check_stdlib(&mut session) {
        Err(StdlibError::MissingAxiom(m)) => assert_eq!(m.to_string(), "missing axiom Sharp"),
        Ok(_) => panic!("library checked without a prelude"),
    }
}

#[test]
fn signature_constants_stay_out_of_the_library() {
    let (session, _) = stdlib_report(PreludeFlags::default(), &BTreeSet::new());
    assert!(signature_hygiene(&session.env).is_empty());
    for (_, members) in SIGNATURES {
        for m in *members {
            assert_eq!(session.env.get(m).unwrap().origin, Origin::Signature, "{m}");
        }
    }
}

#[test]
fn report_json_is_stable_without_timings() {
    let run = || {
        let (_, r) = stdlib_report(PreludeFlags::default(), &BTreeSet::new());
        serde_json::to_string(&r.without_timings()).unwrap()
    };
    let a = run();
    assert_eq!(a, run());
    assert!(!a.contains("millis"));
}

const DIAGRAM: &str = "axiom A : Type 0\naxiom B : Type 0\naxiom C : Type 0\naxiom f : A -> C\naxiom g : B -> C\naxiom c : C\naxiom n : Unit\n";

fn diagram_session() -> Session {
    let mut session = load_prelude(PreludeFlags::default(), &BTreeSet::new()).unwrap();
    session.import("constructions", "test", &Embedded).unwrap();
    session
        .load_text("diagram", DIAGRAM, Origin::User, &Embedded)
        .unwrap();
    session
}

fn elab(session: &Session, src: &str) -> std::rc::Rc<Term> {
    infer_closed(&session.env, &parse_term(src).unwrap())
        .unwrap()
        .0
}

#[test]
fn built_hfiber_agrees_with_the_definition() {
    let s = diagram_session();
    let built = build_hfiber(&s.env, "f", &Term::Const("c".into(), 0)).unwrap();
    assert!(conv(&s.env, &built, &elab(&s, "hfiber A C f c")));
    let n = normalize(&s.env, &built);
    assert_eq!(normalize(&s.env, &n), n);
}

#[test]
fn built_fiber_product_agrees_with_the_definition() {
    let s = diagram_session();
    let built = build_fiber_product(&s.env, "f", "g").unwrap();
    assert!(conv(&s.env, &built, &elab(&s, "fiber_product A B C f g")));
    let n = normalize(&s.env, &built);
    assert_eq!(normalize(&s.env, &n), n);
}

#[test]
fn built_conc_agrees_with_the_definition() {
    let s = diagram_session();
    let (object, map) = build_conc(&s.env, "A").unwrap();
    assert!(conv(&s.env, &object, &elab(&s, "conc A")));
    assert!(conv(&s.env, &map, &elab(&s, "conc_in A")));
    let n = normalize(&s.env, &object);
    assert_eq!(normalize(&s.env, &n), n);
}

#[test]
fn builders_reject_bad_input() {
    let s = diagram_session();
    assert!(matches!(
        build_hfiber(&s.env, "nope", &Term::Star),
        Err(BuildError::Unbound(_))
    ));
    assert!(matches!(
        build_hfiber(&s.env, "c", &Term::Star),
        Err(BuildError::NotAFunction { .. })
    ));
    assert!(matches!(
        build_hfiber(&s.env, "f", &Term::Star),
        Err(BuildError::Type(_))
    ));
    assert!(matches!(
        build_fiber_product(&s.env, "f", "sharp_map"),
        Err(BuildError::NotAFunction { .. })
    ));
    assert!(matches!(
        build_conc(&s.env, "c"),
        Err(BuildError::NotAType { .. })
    ));
    let mut s2 = Session::new(Default::default());
    s2.load_text("diagram", DIAGRAM, Origin::User, &Embedded)
        .unwrap();
    assert!(
        matches!(build_conc(&s2.env, "A"), Err(BuildError::MissingDependency(d)) if d == "Sharp")
    );
    let mut s3 = Session::new(Default::default());
    s3.load_text(
        "d",
        "axiom A : Type 0\naxiom B : Type 0\naxiom f : A -> B\naxiom g : A -> A\n",
        Origin::User,
        &Embedded,
    )
    .unwrap();
    assert!(matches!(
        build_fiber_product(&s3.env, "f", "g"),
        Err(BuildError::CodomainMismatch { .. })
    ));
}
