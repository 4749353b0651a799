//! Exact symbolic verification for left-symmetric and Lie conformal algebras
//! over the one-variable polynomial ring generated by the derivation `D`.
//!
//! The engine evaluates lambda-products with exact rational (optionally
//! parametric) coefficients, checks the defining axioms, computes the two
//! coboundary operators, verifies deformation and Nijenhuis conditions, and
//! constructs T*-extensions.

pub mod algebra;
pub mod cohomology;
pub mod conformal;
pub mod deform;
pub mod lang;
pub mod linalg;
pub mod poly;
pub mod rep;
pub mod report;
pub mod tstar;

pub use conformal::{dual_pair, ConformalMapValue, DualElement, Element, FreeModule, LambdaMap, ModuleMap};
pub use poly::{Poly, Rat, Ring, VarId};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("name {0:?} is reserved")]
    ReservedName(String),
    #[error("name {0:?} declared twice")]
    DuplicateName(String),
    #[error("{kind} error at line {line}, column {col}: {msg}")]
    Lang {
        kind: &'static str,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("structure fails required axioms: {0}")]
    InvalidStructure(String),
    #[error("{0}")]
    Input(String),
}
