//! Helpers shared by several test targets; each target uses a subset.
#![allow(dead_code)]

pub mod corpus;
pub mod files;
pub mod gen;
pub mod metatheory;
