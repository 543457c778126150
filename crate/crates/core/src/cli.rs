//! The `cohtt` command line: argument parsing and the four subcommands.
//! Everything here returns its output instead of printing it, so the binary
//! stays a thin shell and tests can drive [`run`] directly.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cohesion::{self, PreludeFlags, PRELUDE_MODULE, PRELUDE_SOURCE, PRELUDE_VERSION};
use crate::kernel::{infer_closed, normalize, Origin, Term};
use crate::loader::{DeclRecord, DeclStatus, Embedded, LoadError, Resolver, Session};
use crate::model::{verify_cohesion, VerifyParams};
use crate::stdlib::{self, check_stdlib, report_on};
use crate::syntax::{parse_term, DeclKind};

/// Version of the `check` and `normalize` JSON layouts.
pub const CLI_SCHEMA: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "cohtt",
    version,
    about = "Proof checker for cohesive homotopy type theory"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type-check `.cht` files on top of the prelude.
    Check(CheckArgs),
    /// Print the normal form of a named definition or an expression.
    Normalize(NormalizeArgs),
    /// Check the standard library and report the status of every entry.
    StdlibReport(ReportArgs),
    /// Check the cohesion axioms in the finite reflexive-graph model.
    ModelVerify(ModelArgs),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PreludeSource {
    Builtin,
    None,
    Path(PathBuf),
}

impl std::str::FromStr for PreludeSource {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "builtin" => PreludeSource::Builtin,
            "none" => PreludeSource::None,
            path => PreludeSource::Path(path.into()),
        })
    }
}

impl PreludeSource {
    fn describe(&self) -> String {
        match self {
            PreludeSource::Builtin => "builtin".into(),
            PreludeSource::None => "none".into(),
            PreludeSource::Path(p) => p.display().to_string(),
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// `builtin`, `none`, or the path of a prelude file.
    #[arg(long, default_value = "builtin", value_name = "builtin|PATH|none")]
    pub prelude: PreludeSource,
    /// Emit the schema-versioned JSON report instead of a table.
    #[arg(long)]
    pub json: bool,
    /// Print each declaration to stderr as it is checked, and keep timings
    /// in the JSON report.
    #[arg(long)]
    pub trace: bool,
    /// Disable universe-level checks.
    #[arg(long)]
    pub type_in_type: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub common: Common,
    /// Admit this definition without checking its body.
    #[arg(long, value_name = "NAME")]
    pub assume: Vec<String>,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NormalizeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Read TARGET as an expression rather than a name.
    #[arg(long)]
    pub expr: bool,
    /// Load an embedded library module first.
    #[arg(long, value_name = "MODULE")]
    pub import: Vec<String>,
    pub target: String,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_name = "NAME")]
    pub assume: Vec<String>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 3)]
    pub max_vertices: usize,
    #[arg(long, default_value_t = 0)]
    pub max_extra_edges: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Exit code and rendered output of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        }
    }

    fn report(ok: bool, stdout: String) -> Outcome {
        Outcome {
            code: if ok { EXIT_OK } else { EXIT_FAILED },
            stdout,
            stderr: String::new(),
        }
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    match &config.command {
        Command::Check(a) => run_check(a),
        Command::Normalize(a) => run_normalize(a),
        Command::StdlibReport(a) => run_stdlib_report(a),
        Command::ModelVerify(a) => run_model_verify(a),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn trace_record(r: &DeclRecord) {
    let status = match r.status {
        DeclStatus::Checked => "checked",
        DeclStatus::Assumed => "assumed",
    };
    eprintln!("{status} {}.{} ({:.2} ms)", r.module, r.name, r.millis);
}

/// Input files keyed by module name, which is the file stem.
struct Inputs {
    order: Vec<String>,
    files: BTreeMap<String, (PathBuf, &'static str)>,
}

impl Inputs {
    fn read(paths: &[PathBuf]) -> Result<Inputs, String> {
        let mut inputs = Inputs {
            order: Vec::new(),
            files: BTreeMap::new(),
        };
        for path in paths {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let name = module_name(path)?;
            if let Some((prev, prev_text)) = inputs.files.get(&name) {
                if *prev_text != text {
                    return Err(format!(
                        "{} and {} both define module `{name}`",
                        prev.display(),
                        path.display()
                    ));
                }
                continue;
            }
            // loaded modules live for the rest of the process
            let text: &'static str = Box::leak(text.into_boxed_str());
            inputs.order.push(name.clone());
            inputs.files.insert(name, (path.clone(), text));
        }
        Ok(inputs)
    }

    fn source(&self, module: &str) -> Option<&str> {
        self.files
            .get(module)
            .map(|(_, t)| *t)
            .or_else(|| stdlib::embedded_source(module))
    }

    fn render(&self, e: &LoadError) -> String {
        match self.files.get(e.module()) {
            Some((path, text)) => e.render_as(&path.display().to_string(), Some(text)),
            None => e.render(self.source(e.module())),
        }
    }
}

fn module_name(path: &Path) -> Result<String, String> {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_owned)
        .ok_or_else(|| format!("{}: no module name", path.display()))
}

/// Input files first, then the embedded library. A file identical to an
/// embedded module keeps that module's origin.
impl Resolver for Inputs {
    fn resolve(&self, name: &str) -> Option<(&'static str, Origin)> {
        let embedded = Embedded.resolve(name);
        match (self.files.get(name), embedded) {
            (Some(&(_, text)), Some((etext, origin))) if text == etext => Some((etext, origin)),
            (Some(&(_, text)), _) => Some((text, Origin::User)),
            (None, embedded) => embedded,
        }
    }
}

/// A session with the configured prelude loaded; a broken prelude comes back
/// as the error next to the session.
fn start_session(
    common: &Common,
    assume: &[String],
) -> Result<(Session, Option<LoadError>, Option<String>), String> {
    let flags = PreludeFlags {
        type_in_type: common.type_in_type,
        ..PreludeFlags::default()
    };
    let mut session = Session::new(flags.kernel_options());
    session.assume = assume.iter().cloned().collect();
    if common.trace {
        session.trace = Some(trace_record);
    }
    let (result, text) = match &common.prelude {
        PreludeSource::None => (Ok(()), None),
        PreludeSource::Builtin => (
            cohesion::load_prelude_into(&mut session, flags),
            Some(PRELUDE_SOURCE.to_owned()),
        ),
        PreludeSource::Path(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read prelude {}: {e}", p.display()))?;
            (
                cohesion::load_prelude_text(&mut session, &text, flags),
                Some(text),
            )
        }
    };
    Ok((session, result.err(), text))
}

fn render_prelude_error(common: &Common, e: &LoadError, text: Option<&str>) -> String {
    match &common.prelude {
        PreludeSource::Path(p) => e.render_as(&p.display().to_string(), text),
        _ => e.render(text),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub module: String,
    pub kind: DeclKind,
    pub status: DeclStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub schema: u32,
    pub tool_version: &'static str,
    /// Absent when no prelude was loaded.
    pub prelude_version: Option<&'static str>,
    pub prelude: String,
    pub files: Vec<String>,
    /// Declarations checked after the prelude, in order.
    pub decls: Vec<CheckRecord>,
    /// Modules named on the command line that were already loaded.
    pub skipped: Vec<String>,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn render_table(&self) -> String {
        let mut out = format!(
            "check (schema {}, cohtt {}, prelude {})\n",
            self.schema,
            self.tool_version,
            self.prelude_version.unwrap_or("none")
        );
        for d in &self.decls {
            let status = match d.status {
                DeclStatus::Checked => "checked",
                DeclStatus::Assumed => "assumed",
            };
            let _ = write!(out, "  {:9} {}.{}", status, d.module, d.name);
            if let Some(ms) = d.millis {
                let _ = write!(out, "  {ms:.2} ms");
            }
            out.push('\n');
        }
        for s in &self.skipped {
            let _ = writeln!(out, "  skipped   {s} (already loaded)");
        }
        for f in &self.failures {
            let _ = writeln!(out, "error: {f}");
        }
        let _ = writeln!(
            out,
            "{} declarations, {} failures",
            self.decls.len(),
            self.failures.len()
        );
        out
    }
}

fn run_check(a: &CheckArgs) -> Outcome {
    let inputs = match Inputs::read(&a.files) {
        Ok(i) => i,
        Err(e) => return Outcome::usage(e),
    };
    let (mut session, prelude_err, prelude_text) = match start_session(&a.common, &a.assume) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    let base = session.records.len();
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    if let Some(e) = &prelude_err {
        failures.push(render_prelude_error(&a.common, e, prelude_text.as_deref()));
    } else {
        // modules the prelude pulled in came from embedded sources; anything
        // imported later resolved to the input file itself
        let preloaded: Vec<String> = session.loaded_modules().to_vec();
        for name in &inputs.order {
            let (_, text) = inputs.files[name];
            if session.is_loaded(name) {
                let same = if name == PRELUDE_MODULE {
                    prelude_text.as_deref() == Some(text)
                } else {
                    !preloaded.contains(name) || stdlib::embedded_source(name) == Some(text)
                };
                if same {
                    skipped.push(name.clone());
                } else {
                    failures.push(format!(
                        "module `{name}` is already loaded from a different source"
                    ));
                }
                continue;
            }
            let origin = inputs.resolve(name).map_or(Origin::User, |(_, o)| o);
            if let Err(e) = session.load_text(name, text, origin, &inputs) {
                failures.push(inputs.render(&e));
            }
        }
    }
    let report = CheckReport {
        schema: CLI_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        prelude_version: (a.common.prelude != PreludeSource::None).then_some(PRELUDE_VERSION),
        prelude: a.common.prelude.describe(),
        files: a.files.iter().map(|p| p.display().to_string()).collect(),
        decls: session.records[base..]
            .iter()
            .map(|r| CheckRecord {
                name: r.name.clone(),
                module: r.module.clone(),
                kind: r.kind,
                status: r.status,
                millis: a.common.trace.then_some(r.millis),
            })
            .collect(),
        skipped,
        failures,
    };
    let ok = report.failures.is_empty();
    Outcome::report(
        ok,
        if a.common.json {
            to_json(&report)
        } else {
            report.render_table()
        },
    )
}

#[derive(Debug, Clone, Serialize)]
pub struct NormalizeReport {
    pub schema: u32,
    pub tool_version: &'static str,
    pub prelude_version: Option<&'static str>,
    pub target: String,
    #[serde(rename = "type")]
    pub ty: Option<String>,
    pub normal_form: Option<String>,
    pub failures: Vec<String>,
}

fn run_normalize(a: &NormalizeArgs) -> Outcome {
    let inputs = match Inputs::read(&a.files) {
        Ok(i) => i,
        Err(e) => return Outcome::usage(e),
    };
    let (mut session, prelude_err, prelude_text) = match start_session(&a.common, &[]) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    let mut report = NormalizeReport {
        schema: CLI_SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        prelude_version: (a.common.prelude != PreludeSource::None).then_some(PRELUDE_VERSION),
        target: a.target.clone(),
        ty: None,
        normal_form: None,
        failures: Vec::new(),
    };
    if let Some(e) = &prelude_err {
        report
            .failures
            .push(render_prelude_error(&a.common, e, prelude_text.as_deref()));
    }
    for m in &a.import {
        if report.failures.is_empty() {
            if let Err(e) = session.import(m, "command line", &inputs) {
                report.failures.push(inputs.render(&e));
            }
        }
    }
    for name in &inputs.order {
        if report.failures.is_empty() && !session.is_loaded(name) {
            let (_, text) = inputs.files[name];
            let origin = inputs.resolve(name).map_or(Origin::User, |(_, o)| o);
            if let Err(e) = session.load_text(name, text, origin, &inputs) {
                report.failures.push(inputs.render(&e));
            }
        }
    }
    if report.failures.is_empty() {
        let env = &session.env;
        let result = if a.expr {
            parse_term(&a.target)
                .map_err(|e| format!("<expr>: {e}"))
                .and_then(|t| infer_closed(env, &t).map_err(|e| format!("<expr>: {e}")))
                .map(|(t, ty)| (normalize(env, &t), ty))
        } else {
            match env.get(&a.target) {
                Some(entry) => {
                    let body = entry
                        .body
                        .clone()
                        .unwrap_or_else(|| Term::constant(&a.target));
                    Ok((normalize(env, &body), entry.ty.clone()))
                }
                None => Err(format!("unbound: {}", a.target)),
            }
        };
        match result {
            Ok((nf, ty)) => {
                report.ty = Some(ty.to_string());
                report.normal_form = Some(nf.to_string());
            }
            Err(e) => report.failures.push(e),
        }
    }
    let ok = report.failures.is_empty();
    let out = if a.common.json {
        to_json(&report)
    } else {
        let mut out = String::new();
        if let (Some(ty), Some(nf)) = (&report.ty, &report.normal_form) {
            let _ = writeln!(out, "{} : {ty}", report.target);
            let _ = writeln!(out, "  ~> {nf}");
        }
        for f in &report.failures {
            let _ = writeln!(out, "error: {f}");
        }
        out
    };
    Outcome::report(ok, out)
}

fn run_stdlib_report(a: &ReportArgs) -> Outcome {
    let (mut session, prelude_err, prelude_text) = match start_session(&a.common, &a.assume) {
        Ok(s) => s,
        Err(e) => return Outcome::usage(e),
    };
    let report = match prelude_err {
        Some(e) => {
            let mut r = report_on(&mut session, vec![e.clone()]);
            r.failures = vec![render_prelude_error(&a.common, &e, prelude_text.as_deref())];
            r
        }
        None => match check_stdlib(&mut session) {
            Ok(r) => r,
            Err(e) => {
                return Outcome {
                    code: EXIT_FAILED,
                    stdout: String::new(),
                    stderr: format!("error: {e}\n"),
                }
            }
        },
    };
    let report = if a.common.trace {
        report
    } else {
        report.without_timings()
    };
    let ok = report.ok();
    Outcome::report(
        ok,
        if a.common.json {
            to_json(&report)
        } else {
            report.render_table()
        },
    )
}

fn run_model_verify(a: &ModelArgs) -> Outcome {
    let params = VerifyParams {
        max_vertices: a.max_vertices,
        max_extra_edges: a.max_extra_edges,
        seed: a.seed,
        fault: None,
    };
    match verify_cohesion(&params) {
        Ok(report) => Outcome::report(
            report.passed,
            if a.json {
                report.to_json()
            } else {
                report.render_table()
            },
        ),
        Err(e) => Outcome::usage(e),
    }
}

/// Parses `args` (program name first) and runs; usage errors and `--help`
/// come back as outcomes too.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            }
        }
    }
}
