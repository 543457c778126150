//! The standard library: derived theorems and signature-level constructions
//! over the cohesion prelude.

mod build;
mod report;

pub use build::{build_conc, build_fiber_product, build_hfiber, BuildError};
pub use report::{
    check_stdlib, render_load_error, report_on, signature_hygiene, stdlib_report, Status,
    StdlibError, StdlibReport, TheoremEntry, Tier, FALLBACK, REPORT_SCHEMA, REQUIRED, SIGNATURES,
};

/// Name of the module holding signature-level constructions.
pub const SIGNATURE_MODULE: &str = "signatures";

const MODULES: &[(&str, &str)] = &[
    ("basics", include_str!("../../stdlib/basics.cht")),
    ("sharp", include_str!("../../stdlib/sharp.cht")),
    ("external", include_str!("../../stdlib/external.cht")),
    ("flat", include_str!("../../stdlib/flat.cht")),
    (
        "constructions",
        include_str!("../../stdlib/constructions.cht"),
    ),
    ("shape", include_str!("../../stdlib/shape.cht")),
    ("signatures", include_str!("../../stdlib/signatures.cht")),
];

/// Source of an embedded library module.
pub fn module_source(name: &str) -> Option<&'static str> {
    MODULES.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Names of all embedded modules, in dependency order.
pub fn module_names() -> impl Iterator<Item = &'static str> {
    MODULES.iter().map(|(n, _)| *n)
}

/// Source of an embedded module, the prelude included.
pub fn embedded_source(name: &str) -> Option<&'static str> {
    if name == crate::cohesion::PRELUDE_MODULE {
        Some(crate::cohesion::PRELUDE_SOURCE)
    } else {
        module_source(name)
    }
}
