use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::rc::Rc;

use serde::Serialize;
use thiserror::Error;

use crate::cohesion::{self, AxiomTag, MissingAxiom, PreludeFlags};
use crate::kernel::{GlobalEnv, Origin};
use crate::loader::{DeclStatus, Embedded, LoadError, Session};

use super::SIGNATURE_MODULE;

/// Bumped whenever a field of [`StdlibReport`] changes meaning.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tier {
    RequiredProof,
    ProofWithAssumedFallback,
    Signature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Proved,
    Assumed,
    CheckedSignature,
    Failed,
    /// Never reached, because something it depends on failed first.
    NotChecked,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Proved => "proved",
            Status::Assumed => "assumed",
            Status::CheckedSignature => "checked-signature",
            Status::Failed => "failed",
            Status::NotChecked => "not-checked",
        }
    }
}

impl Tier {
    pub fn as_str(self) -> &'static str {
        match self {
            Tier::RequiredProof => "required-proof",
            Tier::ProofWithAssumedFallback => "proof-with-assumed-fallback",
            Tier::Signature => "signature",
        }
    }
}

/// Library theorems and constructions that must check.
pub const REQUIRED: &[&str] = &[
    "fact_sharp",
    "fact_sharp_comm",
    "sharp_map",
    "sharp_idem",
    "externalize_map",
    "ext_compose",
    "ext_compose_extern",
    "ext_assoc_extern",
    "ext_unit_l_extern",
    "ext_unit_r_extern",
    "eisEquiv",
    "eisDiscIsProp",
    "factflat",
    "factflat_comm",
    "hfiber",
    "loop",
    "fiber_product",
    "image",
    "conc",
    "isConcrete",
];

/// Theorems that may be admitted with `--assume`, and are then reported so.
pub const FALLBACK: &[&str] = &["sharp_prod", "esc_codisc", "esc_eta", "exthom_ext"];

/// The signature catalog: each item is named by its principal constant and
/// lists every constant it is made of.
pub const SIGNATURES: &[(&str, &[&str])] = &[
    (
        "delooping",
        &["BG", "pt", "G", "delooping", "BAut", "BAut_pt"],
    ),
    (
        "flat_dR_BG",
        &["flat_BG", "eps_BG", "pt_incl", "flat_dR_BG"],
    ),
    (
        "theta_G",
        &[
            "theta_G",
            "B2G",
            "pt2",
            "flat_B2G",
            "eps_B2G",
            "flat_dR_B2G",
            "theta_BG",
        ],
    ),
    (
        "BG_conn_square",
        &[
            "Omega2_cl",
            "twist_i",
            "BG_conn",
            "conn_to_BG",
            "conn_curv",
            "BG_conn_square",
            "BG_conn_gap",
        ],
    ),
    ("c_conn", &["BnA_conn", "c_conn"]),
    (
        "exp_iS",
        &[
            "Sig",
            "Xt",
            "background",
            "U1",
            "pi0",
            "pi0_in",
            "holonomy",
            "exp_iS",
        ],
    ),
    ("prequantization", &["Omegan_cl", "curv", "prequantization"]),
    ("quantomorphism", &["quantomorphism"]),
    ("prequantum_states", &["assoc_bundle", "prequantum_states"]),
];

#[derive(Debug, Clone, Serialize)]
pub struct TheoremEntry {
    pub name: String,
    pub tier: Tier,
    /// Printed type of the entry; absent when it never loaded.
    pub statement: Option<String>,
    pub status: Status,
    /// Wall time; dropped by [`StdlibReport::without_timings`].
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
    /// Assumed definitions the entry depends on, transitively.
    pub assumed_deps: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StdlibReport {
    pub schema: u32,
    pub tool_version: &'static str,
    pub prelude_version: &'static str,
    pub assume: Vec<String>,
    /// `--assume` names that matched no library definition.
    pub unused_assume: Vec<String>,
    pub signatures_loaded: bool,
    pub entries: Vec<TheoremEntry>,
    pub failures: Vec<String>,
}

impl StdlibReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
            && self
                .entries
                .iter()
                .all(|e| !matches!(e.status, Status::Failed | Status::NotChecked))
    }

    /// A release build needs every fallback proved as well.
    pub fn release_ready(&self) -> bool {
        self.ok() && self.entries.iter().all(|e| e.status != Status::Assumed)
    }

    /// Strips wall times, leaving a report that is identical across runs.
    pub fn without_timings(mut self) -> Self {
        for e in &mut self.entries {
            e.millis = None;
        }
        self
    }

    pub fn entry(&self, name: &str) -> Option<&TheoremEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// `name tier status` per entry, with no timings.
    pub fn status_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(out, "{} {} {}", e.name, e.tier.as_str(), e.status.as_str());
        }
        out
    }

    pub fn render_table(&self) -> String {
        let mut out = format!(
            "stdlib report (schema {}, cohtt {}, prelude {})\n",
            self.schema, self.tool_version, self.prelude_version
        );
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(0);
        for e in &self.entries {
            let mut line = format!(
                "  {:width$}  {:27}  {:17}",
                e.name,
                e.tier.as_str(),
                e.status.as_str()
            );
            if let Some(ms) = e.millis {
                let _ = write!(line, " {ms:>9.2} ms");
            }
            out.push_str(line.trim_end());
            if !e.assumed_deps.is_empty() {
                let _ = write!(out, "  (assumes {})", e.assumed_deps.join(", "));
            }
            out.push('\n');
        }
        for name in &self.unused_assume {
            let _ = writeln!(out, "warning: --assume {name} matched no definition");
        }
        for f in &self.failures {
            let _ = writeln!(out, "error: {f}");
        }
        out
    }
}

#[derive(Debug, Clone, Error)]
pub enum StdlibError {
    #[error(transparent)]
    MissingAxiom(#[from] MissingAxiom),
}

/// Loads the prelude and the whole library in a fresh session and reports
/// on every entry. Load failures become failed entries, not errors.
pub fn stdlib_report(flags: PreludeFlags, assume: &BTreeSet<String>) -> (Session, StdlibReport) {
    let mut session = Session::new(flags.kernel_options());
    session.assume = assume.clone();
    let mut failures = Vec::new();
    if let Err(e) = cohesion::load_prelude_into(&mut session, flags) {
        failures.push(e);
    }
    let report = report_on(&mut session, failures);
    (session, report)
}

/// Checks the library on top of an already loaded prelude.
pub fn check_stdlib(session: &mut Session) -> Result<StdlibReport, StdlibError> {
    for tag in [AxiomTag::Sharp, AxiomTag::SharpUnit, AxiomTag::Flat] {
        if !session.env.contains(tag.constant()) {
            return Err(MissingAxiom(tag).into());
        }
    }
    Ok(report_on(session, Vec::new()))
}

/// Imports the library into `session` and reports on it. `failures` are
/// earlier load errors (a broken prelude, say); when present the library is
/// not loaded and its entries come out not-checked.
pub fn report_on(session: &mut Session, mut failures: Vec<LoadError>) -> StdlibReport {
    if failures.is_empty() {
        for module in ["constructions", "shape"] {
            if let Err(e) = session.import(module, "stdlib", &Embedded) {
                failures.push(e);
                break;
            }
        }
    }
    let mut entries = Vec::new();
    let deps = AssumedDeps::new(session);
    for &name in REQUIRED {
        entries.push(entry(
            session,
            &deps,
            name,
            Tier::RequiredProof,
            &[name],
            &failures,
        ));
    }
    for &name in FALLBACK {
        entries.push(entry(
            session,
            &deps,
            name,
            Tier::ProofWithAssumedFallback,
            &[name],
            &failures,
        ));
    }
    let required_ok = entries
        .iter()
        .filter(|e| e.tier == Tier::RequiredProof)
        .all(|e| matches!(e.status, Status::Proved | Status::Assumed));
    let mut signatures_loaded = false;
    if failures.is_empty() && required_ok {
        match session.import(SIGNATURE_MODULE, "stdlib", &Embedded) {
            Ok(()) => signatures_loaded = true,
            Err(e) => failures.push(e),
        }
    }
    let deps = AssumedDeps::new(session);
    for &(name, members) in SIGNATURES {
        entries.push(entry(
            session,
            &deps,
            name,
            Tier::Signature,
            members,
            &failures,
        ));
    }
    let unused_assume = session
        .assume
        .iter()
        .filter(|n| {
            !session
                .records
                .iter()
                .any(|r| &r.name == *n && r.status == DeclStatus::Assumed)
        })
        .cloned()
        .collect();
    StdlibReport {
        schema: REPORT_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        prelude_version: cohesion::PRELUDE_VERSION,
        assume: session.assume.iter().cloned().collect(),
        unused_assume,
        signatures_loaded,
        entries,
        failures: failures.iter().map(render_load_error).collect(),
    }
}

fn entry(
    session: &Session,
    deps: &AssumedDeps,
    name: &str,
    tier: Tier,
    members: &[&str],
    failures: &[LoadError],
) -> TheoremEntry {
    let env = &session.env;
    let millis = session
        .records
        .iter()
        .filter(|r| members.contains(&r.name.as_str()))
        .map(|r| r.millis)
        .sum::<f64>();
    let statement = env.get(name).map(|e| e.ty.to_string());
    let failed = failures.iter().find_map(|f| match f {
        LoadError::Type { decl, .. } if members.contains(&decl.as_str()) => {
            Some(render_load_error(f))
        }
        _ => None,
    });
    let status = if failed.is_some() {
        Status::Failed
    } else if !members.iter().all(|m| env.contains(m)) {
        Status::NotChecked
    } else if tier == Tier::Signature {
        Status::CheckedSignature
    } else if deps.is_assumed(name) {
        Status::Assumed
    } else {
        Status::Proved
    };
    let mut assumed_deps = BTreeSet::new();
    for m in members {
        deps.collect(env, m, &mut assumed_deps);
    }
    TheoremEntry {
        name: name.to_owned(),
        tier,
        statement,
        status,
        millis: Some(millis),
        assumed_deps: assumed_deps.into_iter().collect(),
        error: failed,
    }
}

/// Transitive dependencies on definitions admitted under `--assume`.
struct AssumedDeps {
    assumed: BTreeSet<String>,
}

impl AssumedDeps {
    fn new(session: &Session) -> Self {
        AssumedDeps {
            assumed: session
                .records
                .iter()
                .filter(|r| r.status == DeclStatus::Assumed)
                .map(|r| r.name.clone())
                .collect(),
        }
    }

    fn is_assumed(&self, name: &str) -> bool {
        self.assumed.contains(name)
    }

    fn collect(&self, env: &GlobalEnv, root: &str, out: &mut BTreeSet<String>) {
        if self.assumed.is_empty() {
            return;
        }
        let mut seen: HashSet<Rc<str>> = HashSet::new();
        let mut stack: Vec<Rc<str>> = vec![root.into()];
        while let Some(n) = stack.pop() {
            if !seen.insert(n.clone()) {
                continue;
            }
            if &*n != root && self.assumed.contains(&*n) {
                out.insert(n.to_string());
            }
            if let Some(e) = env.get(&n) {
                let mut cs = Vec::new();
                e.ty.constants(&mut cs);
                if let Some(b) = &e.body {
                    b.constants(&mut cs);
                }
                stack.extend(cs);
            }
        }
    }
}

/// Renders a load error against the embedded source it came from.
pub fn render_load_error(e: &LoadError) -> String {
    e.render(super::embedded_source(e.module()))
}

/// Library or prelude declarations that mention a signature constant.
pub fn signature_hygiene(env: &GlobalEnv) -> Vec<(String, String)> {
    let sig: BTreeSet<&str> = env
        .entries()
        .filter(|e| e.origin == Origin::Signature)
        .map(|e| &*e.name)
        .collect();
    let mut bad = Vec::new();
    for e in env.entries().filter(|e| {
        matches!(
            e.origin,
            Origin::Base | Origin::PreludeAxiom | Origin::Stdlib
        )
    }) {
        let mut cs = Vec::new();
        e.ty.constants(&mut cs);
        if let Some(b) = &e.body {
            b.constants(&mut cs);
        }
        for c in cs {
            if sig.contains(&*c) {
                bad.push((e.name.to_string(), c.to_string()));
            }
        }
    }
    bad
}
