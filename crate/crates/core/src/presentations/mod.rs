//! Finitely presented Lie superalgebras: relations, free nilpotent
//! quotients, contragredient algebras of Cartan matrices and relation
//! checks on realizations.

pub mod cartan;
pub mod dsl;
pub mod free;
pub mod presentation;
pub mod realize;
pub mod suite;

use thiserror::Error;

pub use cartan::{chevalley_skeleton, CartanSpec, DiagTag};
pub use dsl::{DslError, Expr, LieSuper, Relation};
pub use presentation::{quotient, quotient_dims, verify_relations, Generator, Presentation, Verification};
pub use suite::{verify_suite, MatrixCheck, SuiteReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("malformed diagonal tag `{0}`: expected 2, ev, 1 or 0")]
    DiagonalTag(String),
    #[error("bad matrix entry `{0}`")]
    Entry(String),
    #[error("matrix is not square: {0} rows, a row of length {1}")]
    NotSquare(usize, usize),
    #[error("grading has {0} entries for {1} simple roots")]
    Grading(usize, usize),
    #[error("duplicate generator `{0}`")]
    Duplicate(String),
    #[error("generator `{0}` needs a positive degree")]
    NonPositiveDegree(String),
    #[error(transparent)]
    Dsl(#[from] DslError),
}
