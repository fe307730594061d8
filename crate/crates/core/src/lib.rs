//! Indecomposable integers in simplest cubic fields with a non-monogenic ring of integers.
//!
//! The field is K = Q(ρ) with ρ a root of x³ − ax² − (a+3)x − 1. Element coordinates
//! are generic over the integer type; [`Context`] and [`Elem`] fix it to `i128`, and
//! [`BigContext`] and [`BigElem`] to arbitrary precision.

pub mod apps;
pub mod classify;
pub mod codifferent;
pub mod enclosure;
pub mod error;
pub mod field;
pub mod indecomposables;
pub mod int;
pub mod lattice;
pub mod regions;
pub mod scan;

pub use classify::{classify, BasisDescriptor, BasisKind, Classification};
pub use error::{Error, Result};
pub use field::{make_context, BigContext, BigElem, Context, Elem, FieldContext, FieldElement};
pub use int::{Int, Rat};
