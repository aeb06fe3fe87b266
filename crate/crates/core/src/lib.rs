//! Möbius summatory functions with certified error, integral identities,
//! Mellin closed forms and an explicit bound-conversion engine.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arith;
pub mod bounds;
pub mod error;
pub mod identities;
pub mod numeric;
pub mod quadrature;
pub mod special;
pub mod verify;
pub mod weights;

pub use arith::{EvaluationPoint, MuTable, PrefixSeries, SieveOptions, Tables};
pub use error::{Error, Result};
