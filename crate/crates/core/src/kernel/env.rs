use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use super::term::{Name, Term};
use crate::syntax::Span;

/// Where a global declaration came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Base,
    PreludeAxiom,
    Stdlib,
    Signature,
    User,
}

#[derive(Debug, Clone)]
pub struct GlobalEntry {
    pub name: Name,
    pub ty: Rc<Term>,
    /// `None` for postulates, which stay opaque during evaluation.
    pub body: Option<Rc<Term>>,
    pub origin: Origin,
    pub doc: Option<String>,
    /// Source file the declaration was read from, if any.
    pub source: Option<String>,
    pub span: Span,
}

impl GlobalEntry {
    pub fn is_postulate(&self) -> bool {
        self.body.is_none()
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct KernelOptions {
    /// Disables every universe-level comparison.
    pub type_in_type: bool,
}

/// Append-only registry of checked declarations. Cloning takes an
/// immutable snapshot.
#[derive(Debug, Clone, Default)]
pub struct GlobalEnv {
    entries: Vec<Rc<GlobalEntry>>,
    index: HashMap<Name, usize>,
    pub options: KernelOptions,
}

impl GlobalEnv {
    pub fn new(options: KernelOptions) -> Self {
        GlobalEnv {
            options,
            ..Default::default()
        }
    }

    pub fn get(&self, name: &str) -> Option<&Rc<GlobalEntry>> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Rc<GlobalEntry>> {
        self.entries.iter()
    }

    /// Position of a declaration in the environment order.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Appends an entry that has already been checked. Panics on a
    /// duplicate name; callers check freshness first.
    pub(crate) fn push(&mut self, entry: GlobalEntry) {
        assert!(
            !self.index.contains_key(&entry.name),
            "duplicate global {}",
            entry.name
        );
        self.index.insert(entry.name.clone(), self.entries.len());
        self.entries.push(Rc::new(entry));
    }
}
