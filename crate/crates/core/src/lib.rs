//! Symbolic derivation of the sphere operators A^(m,r,l) in higher-order
//! Reshetnyak formulas, and numeric verification of the ray-transform isometry.

#![allow(clippy::type_complexity, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod numerics;
pub mod opcalc;
pub mod raykit;
pub mod spherecalc;
pub mod symtensor;

pub use error::{Error, Result};

/// Book chapters, compiled so their snippets run as doc-tests.
#[cfg(doctest)]
pub mod book {
    #[doc = include_str!("../../../book/src/symmetric-tensors.md")]
    pub struct SymmetricTensors;
    #[doc = include_str!("../../../book/src/operator-words.md")]
    pub struct OperatorWords;
    #[doc = include_str!("../../../book/src/sphere-calculus.md")]
    pub struct SphereCalculus;
    #[doc = include_str!("../../../book/src/ray-transforms.md")]
    pub struct RayTransforms;
    #[doc = include_str!("../../../book/src/command-line.md")]
    pub struct CommandLine;
}
