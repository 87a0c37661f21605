//! Exact prolongation engine for graded Lie superalgebras of vector fields
//! over prime fields.

pub mod divided;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod parse;
pub mod presentations;
pub mod prolong;
pub mod report;
pub mod scenarios;
pub mod split;
pub mod structure;
pub mod vectorfield;

pub use field::{Fp, PrimeField};

pub type F3 = Fp<3>;
pub type F5 = Fp<5>;
pub type F7 = Fp<7>;
