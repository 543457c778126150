//! A finite cohesive model: reflexive graphs over finite sets, with the
//! adjoint string `pi0 -| delta -| gamma -| nabla` and the codiscrete
//! reflection `sharp0 = nabla . gamma`, checked by exhaustive enumeration.

use thiserror::Error;

mod graph;
mod verify;

pub use graph::{
    all_maps, delta, empty, extend_vertex_map, flat0, flat_counit, gamma, hom_graphs, is_bijection,
    is_rel_codiscrete, locally_bijective, nabla, pi0, pi0_map, product, pullback, sharp0,
    sharp_map, sharp_rel, sharp_unit, terminal, to_terminal, Components, Cone, Edge, EdgeJson,
    FinSet, GraphJson, GraphMor, ReflGraph, RelSharp,
};
pub use verify::{
    simple_graphs, verify_cohesion, AdjunctionReport, Counterexample, Fault, NamedGraph, Section,
    VerifyParams, MODEL_SCHEMA,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("enumeration of {maps} vertex maps exceeds the limit of {limit}")]
    SizeLimit { maps: u64, limit: u64 },
    #[error("bounds too large for exhaustive enumeration: {0}")]
    TooLarge(String),
}
