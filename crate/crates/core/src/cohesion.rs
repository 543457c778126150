//! The cohesion prelude: base homotopy type theory plus the axioms for the
//! codiscrete, discrete and flat modalities.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::kernel::{GlobalEnv, KernelOptions, Name, Origin, Term};
use crate::loader::{Embedded, LoadError, Session};
use crate::syntax::{parse_module, Item, SourceModule};

pub const PRELUDE_SOURCE: &str = include_str!("../prelude/cohesion.cht");

/// The golden manifest: one `tag name sha256` line per axiom.
pub const GOLDEN_MANIFEST: &str = include_str!("../prelude/manifest.txt");

pub const PRELUDE_VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

pub const PRELUDE_MODULE: &str = "cohesion";

/// Postulates that no library item needs to mention.
pub const DOCUMENTED_LEAVES: [AxiomTag; 3] = [AxiomTag::SharpLex, AxiomTag::SFE, AxiomTag::FSE];

macro_rules! axiom_tags {
    ($($tag:ident => $name:literal,)*) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub enum AxiomTag {
            $($tag,)*
        }

        impl AxiomTag {
            pub const ALL: &'static [AxiomTag] = &[$(AxiomTag::$tag,)*];

            /// Name of the prelude postulate carrying this tag.
            pub fn constant(self) -> &'static str {
                match self {
                    $(AxiomTag::$tag => $name,)*
                }
            }
        }
    };
}

axiom_tags! {
    Funext => "funext",
    Univalence => "univalence",
    PTruncFormer => "PTrunc",
    PTruncIntro => "ptrunc_in",
    PTruncIsProp => "ptrunc_isProp",
    PTruncRec => "ptrunc_rec",
    IsCodisc => "isCodisc",
    IsCodiscIsProp => "isCodiscIsProp",
    Sharp => "Sharp",
    SharpIsCodisc => "sharpIsCodisc",
    SharpUnit => "eta",
    SharpUnivProp => "tsr",
    SharpDepFact => "factsharp",
    SharpDepFactComm => "ff",
    SharpLex => "sharpLex",
    IsDisc => "isDisc",
    IsDiscIsProp => "isDiscIsProp",
    Shape => "Shape",
    ShapeIsDisc => "shapeIsDisc",
    ShapeUnit => "etaShape",
    ShapeUnivProp => "tsrShape",
    ShapeDepFact => "factshape",
    ShapeDepFactComm => "ffshape",
    Flat => "Flat",
    FlatIsDisc => "flatIsDisc",
    FlatCounit => "epsilon",
    FlatUnivProp => "flr",
    SFE => "sfe",
    FSE => "fse",
}

impl AxiomTag {
    pub fn from_constant(name: &str) -> Option<AxiomTag> {
        AxiomTag::ALL.iter().copied().find(|t| t.constant() == name)
    }
}

impl fmt::Display for AxiomTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PreludeFlags {
    /// When false, only the base definitions, funext, univalence and truncation load.
    pub include_cohesion: bool,
    pub include_univalence: bool,
    pub type_in_type: bool,
}

impl Default for PreludeFlags {
    fn default() -> Self {
        PreludeFlags {
            include_cohesion: true,
            include_univalence: true,
            type_in_type: false,
        }
    }
}

impl PreludeFlags {
    pub fn kernel_options(&self) -> KernelOptions {
        KernelOptions {
            type_in_type: self.type_in_type,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("missing axiom {0}")]
pub struct MissingAxiom(pub AxiomTag);

/// The embedded prelude, filtered by `flags`.
pub fn prelude_source(flags: PreludeFlags) -> SourceModule {
    let mut module = parse_module(PRELUDE_MODULE, PRELUDE_SOURCE).expect("embedded prelude parses");
    filter_module(&mut module, flags);
    module
}

fn filter_module(module: &mut SourceModule, flags: PreludeFlags) {
    let is_decl = |item: &Item, name: &str| matches!(item, Item::Decl(d) if d.name == name);
    if !flags.include_cohesion {
        let cut = module
            .items
            .iter()
            .position(|i| is_decl(i, AxiomTag::IsCodisc.constant()))
            .unwrap_or(module.items.len());
        module.items.truncate(cut);
    }
    if !flags.include_univalence {
        module
            .items
            .retain(|i| !is_decl(i, AxiomTag::Univalence.constant()));
    }
}

/// A fresh session with the prelude (and the library modules it imports) loaded.
pub fn load_prelude(flags: PreludeFlags, assume: &BTreeSet<String>) -> Result<Session, LoadError> {
    let mut session = Session::new(flags.kernel_options());
    session.assume = assume.clone();
    load_prelude_into(&mut session, flags)?;
    Ok(session)
}

pub fn load_prelude_into(session: &mut Session, flags: PreludeFlags) -> Result<(), LoadError> {
    load_prelude_text(session, PRELUDE_SOURCE, flags)
}

/// Loads a prelude from arbitrary text, e.g. a mutant or a user-supplied file.
pub fn load_prelude_text(
    session: &mut Session,
    text: &str,
    flags: PreludeFlags,
) -> Result<(), LoadError> {
    let mut module = parse_module(PRELUDE_MODULE, text).map_err(|error| LoadError::Syntax {
        module: PRELUDE_MODULE.to_owned(),
        error,
    })?;
    filter_module(&mut module, flags);
    session.load_module(&module, Origin::PreludeAxiom, &Embedded)
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub tag: AxiomTag,
    pub name: Name,
    /// The type as checked.
    pub ty: Rc<Term>,
}

impl CatalogEntry {
    /// Fully unfolded normal form of the type.
    pub fn normal_type(&self, env: &GlobalEnv) -> Rc<Term> {
        crate::kernel::normalize(env, &self.ty)
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.ty.to_string().as_bytes()))
    }
}

/// One entry per tag, in tag order.
pub fn axiom_catalog(env: &GlobalEnv) -> Result<Vec<CatalogEntry>, MissingAxiom> {
    AxiomTag::ALL
        .iter()
        .map(|&tag| {
            let entry = env
                .get(tag.constant())
                .filter(|e| e.is_postulate() && e.origin == Origin::PreludeAxiom)
                .ok_or(MissingAxiom(tag))?;
            Ok(CatalogEntry {
                tag,
                name: entry.name.clone(),
                ty: entry.ty.clone(),
            })
        })
        .collect()
}

/// Renders the manifest compared against [`GOLDEN_MANIFEST`].
pub fn manifest(env: &GlobalEnv) -> Result<String, MissingAxiom> {
    let mut out = String::new();
    for e in axiom_catalog(env)? {
        out.push_str(&format!("{} {} {}\n", e.tag, e.name, e.digest()));
    }
    Ok(out)
}

/// Prelude postulates with no reference from library, signature or user
/// declarations, other than the documented leaves.
pub fn unreferenced_axioms(env: &GlobalEnv) -> Vec<AxiomTag> {
    let mut used = BTreeSet::new();
    for e in env.entries() {
        if matches!(e.origin, Origin::Stdlib | Origin::Signature | Origin::User) {
            let mut names = Vec::new();
            e.ty.constants(&mut names);
            if let Some(b) = &e.body {
                b.constants(&mut names);
            }
            used.extend(names);
        }
    }
    AxiomTag::ALL
        .iter()
        .copied()
        .filter(|t| !DOCUMENTED_LEAVES.contains(t))
        .filter(|t| env.contains(t.constant()) && !used.contains(t.constant()))
        .collect()
}

/// A single-site edit of the prelude that must make it fail to load.
#[derive(Debug, Clone)]
pub struct Mutant {
    pub name: &'static str,
    pub find: &'static str,
    pub replace: &'static str,
}

impl Mutant {
    pub fn source(&self) -> String {
        assert_eq!(
            PRELUDE_SOURCE.matches(self.find).count(),
            1,
            "mutant {} must match exactly one site",
            self.name
        );
        PRELUDE_SOURCE.replacen(self.find, self.replace, 1)
    }
}

pub const MUTANTS: [Mutant; 10] = [
    Mutant {
        name: "universal-property-postcomposes",
        find: "(fun f x => f (eta A x))",
        replace: "(fun f x => eta A (f x))",
    },
    Mutant {
        name: "unit-reversed",
        find: "axiom eta : (A : Type 0) -> A -> Sharp A",
        replace: "axiom eta : (A : Type 0) -> Sharp A -> A",
    },
    Mutant {
        name: "reflection-codiscrete-on-subject",
        find: "axiom sharpIsCodisc : (A : Type 0) -> isCodisc (Sharp A)",
        replace: "axiom sharpIsCodisc : (A : Type 0) -> isCodisc A",
    },
    Mutant {
        name: "dependent-factorization-unit-dropped",
        find: "((x : A) -> B (eta A x)) -> (x : Sharp A) -> B x",
        replace: "((x : A) -> B x) -> (x : Sharp A) -> B x",
    },
    Mutant {
        name: "hfiber-path-in-domain",
        find: "fun A B f b => Sigma (x : A), Id B (f x) b",
        replace: "fun A B f b => Sigma (x : A), Id A (f x) b",
    },
    Mutant {
        name: "lex-fiber-swapped",
        find: "isContr (Sharp (hfiber A B f b))",
        replace: "isContr (Sharp (hfiber B A f b))",
    },
    Mutant {
        name: "escape-path-in-universe",
        find: "Id (Sharp@1 (Type 0)) (sharp_map@1",
        replace: "Id (Type 0) (sharp_map@1",
    },
    Mutant {
        name: "counit-reversed",
        find: "ExtHom (Flat A) A",
        replace: "ExtHom A (Flat A)",
    },
    Mutant {
        name: "flat-lands-in-universe",
        find: "axiom Flat : Sharp@1 (Type 0) -> Sharp@1 (Type 0)",
        replace: "axiom Flat : Sharp@1 (Type 0) -> Type 0",
    },
    Mutant {
        name: "extern-undisplaced",
        find: "fun A => eta@1 (Type 0) A",
        replace: "fun A => eta (Type 0) A",
    },
];
