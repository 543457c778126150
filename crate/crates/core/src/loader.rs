//! Folding source modules into a global environment, resolving `import`
//! items against the embedded standard library.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{check_decl, GlobalEnv, KernelOptions, Origin, TypeError};
use crate::syntax::{
    line_col, parse_module, Decl, DeclKind, Item, SourceModule, Span, SyntaxError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DeclStatus {
    Checked,
    /// A definition whose body was skipped under `--assume`.
    Assumed,
}

#[derive(Debug, Clone, Serialize)]
pub struct DeclRecord {
    pub name: String,
    pub module: String,
    pub kind: DeclKind,
    pub status: DeclStatus,
    pub millis: f64,
}

#[derive(Debug, Clone, Error)]
pub enum LoadError {
    #[error("{module}: {error}")]
    Syntax { module: String, error: SyntaxError },
    #[error("{module}: in `{decl}`: {error}")]
    Type {
        module: String,
        decl: String,
        error: TypeError,
    },
    #[error("{from}: unknown module `{name}`")]
    UnknownModule { name: String, from: String },
}

impl LoadError {
    pub fn module(&self) -> &str {
        match self {
            LoadError::Syntax { module, .. } | LoadError::Type { module, .. } => module,
            LoadError::UnknownModule { from, .. } => from,
        }
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            LoadError::Syntax { error, .. } => Some(error.span()),
            LoadError::Type { error, .. } => error.span,
            LoadError::UnknownModule { .. } => None,
        }
    }

    /// Renders the error with a `line:col` prefix when the source is known.
    pub fn render(&self, source: Option<&str>) -> String {
        self.render_as(self.module(), source)
    }

    /// As [`render`](Self::render), with `label` (a file path, say) in place
    /// of the module name.
    pub fn render_as(&self, label: &str, source: Option<&str>) -> String {
        match (self.span(), source) {
            (Some(span), Some(src)) => {
                let (l, c) = line_col(src, span.start);
                format!("{label}:{l}:{c}: {}", self.message())
            }
            _ => format!("{label}: {}", self.message()),
        }
    }

    fn message(&self) -> String {
        match self {
            LoadError::Syntax { error, .. } => error.to_string(),
            LoadError::Type { decl, error, .. } => format!("in `{decl}`: {error}"),
            LoadError::UnknownModule { name, .. } => format!("unknown module `{name}`"),
        }
    }
}

/// Resolves module names for `import` items.
pub trait Resolver {
    fn resolve(&self, name: &str) -> Option<(&'static str, Origin)>;
}

/// Resolves against the embedded standard library.
pub struct Embedded;

impl Resolver for Embedded {
    fn resolve(&self, name: &str) -> Option<(&'static str, Origin)> {
        crate::stdlib::module_source(name).map(|src| {
            let origin = if name == crate::stdlib::SIGNATURE_MODULE {
                Origin::Signature
            } else {
                Origin::Stdlib
            };
            (src, origin)
        })
    }
}

pub struct Session {
    pub env: GlobalEnv,
    /// Definitions to admit without checking their bodies.
    pub assume: BTreeSet<String>,
    pub records: Vec<DeclRecord>,
    loaded: Vec<String>,
    /// Called with each record as it is produced.
    pub trace: Option<fn(&DeclRecord)>,
}

impl Session {
    pub fn new(options: KernelOptions) -> Self {
        Session {
            env: GlobalEnv::new(options),
            assume: BTreeSet::new(),
            records: Vec::new(),
            loaded: Vec::new(),
            trace: None,
        }
    }

    pub fn is_loaded(&self, module: &str) -> bool {
        self.loaded.iter().any(|m| m == module)
    }

    pub fn loaded_modules(&self) -> &[String] {
        &self.loaded
    }

    /// Parses and loads a module; imports are resolved with `resolver`.
    pub fn load_text(
        &mut self,
        name: &str,
        text: &str,
        origin: Origin,
        resolver: &dyn Resolver,
    ) -> Result<(), LoadError> {
        let module = parse_module(name, text).map_err(|error| LoadError::Syntax {
            module: name.to_owned(),
            error,
        })?;
        self.load_module(&module, origin, resolver)
    }

    pub fn load_module(
        &mut self,
        module: &SourceModule,
        origin: Origin,
        resolver: &dyn Resolver,
    ) -> Result<(), LoadError> {
        self.loaded.push(module.name.clone());
        for item in &module.items {
            match item {
                Item::Import { name, .. } => self.import(name, &module.name, resolver)?,
                Item::Decl(d) => {
                    // prelude definitions are base vocabulary; only its postulates are axioms
                    let origin = match (origin, d.kind) {
                        (Origin::PreludeAxiom, DeclKind::Definition) => Origin::Base,
                        _ => origin,
                    };
                    self.declare(&module.name, d, origin)?
                }
            }
        }
        Ok(())
    }

    pub fn import(
        &mut self,
        name: &str,
        from: &str,
        resolver: &dyn Resolver,
    ) -> Result<(), LoadError> {
        if self.is_loaded(name) {
            return Ok(());
        }
        let (text, origin) = resolver
            .resolve(name)
            .ok_or_else(|| LoadError::UnknownModule {
                name: name.to_owned(),
                from: from.to_owned(),
            })?;
        self.load_text(name, text, origin, resolver)
    }

    pub fn declare(&mut self, module: &str, d: &Decl, origin: Origin) -> Result<(), LoadError> {
        let start = Instant::now();
        let assumed = d.body.is_some() && self.assume.contains(&d.name);
        let result = if assumed {
            let mut stripped = d.clone();
            stripped.body = None;
            stripped.kind = DeclKind::Postulate;
            check_decl(&mut self.env, &stripped, origin, Some(module))
        } else {
            check_decl(&mut self.env, d, origin, Some(module))
        };
        result.map_err(|error| LoadError::Type {
            module: module.to_owned(),
            decl: d.name.clone(),
            error,
        })?;
        let record = DeclRecord {
            name: d.name.clone(),
            module: module.to_owned(),
            kind: d.kind,
            status: if assumed {
                DeclStatus::Assumed
            } else {
                DeclStatus::Checked
            },
            millis: start.elapsed().as_secs_f64() * 1e3,
        };
        if let Some(trace) = self.trace {
            trace(&record);
        }
        self.records.push(record);
        Ok(())
    }
}
