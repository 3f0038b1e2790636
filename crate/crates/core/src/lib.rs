//! Exact computations with Coxeter groups, Hecke algebras, Bott-Samelson
//! bimodules, light leaves and moment graphs.
//!
//! Everything is computed over `ℚ` or a prime field with arbitrary-precision
//! integers, so every check is an equality test.

pub mod bimodule;
pub mod config;
pub mod coxeter;
pub mod error;
pub mod field;
pub mod hecke;
pub mod laurent;
pub mod linalg;
pub mod momentgraph;
pub mod morphism;
pub mod poly;
pub mod realization;
pub mod report;
pub mod verify;

pub use coxeter::{CoxeterMatrix, CoxeterSystem, Element, Gen};
pub use error::{Error, Result};
pub use field::{Field, Scalar};
pub use hecke::{Hecke, HeckeElt};
pub use laurent::{GradedRank, LaurentPoly};
pub use poly::MultiPoly;
pub use realization::Realization;
pub use report::{Check, Report};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
pub mod chapter1 {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/coxeter.md")]
pub mod chapter2 {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/hecke.md")]
pub mod chapter3 {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/polynomials.md")]
pub mod chapter4 {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/bimodules.md")]
pub mod chapter5 {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/morphisms.md")]
pub mod chapter6 {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/moment-graph.md")]
pub mod chapter7 {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/verify.md")]
pub mod chapter8 {}
