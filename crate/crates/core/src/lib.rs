//! Polyhedral and piecewise-polyhedral relaxations of univariate functions.
//!
//! The pipeline is: parse an [`expr::Expression`] (or supply any
//! [`expr::FunctionOracle`]), build a base [`partition::Partition`], refine it
//! with [`relax::refine`], turn it into a [`relax::TriangleChain`] and export
//! the chain as an MILP or LP [`model::ConstraintSystem`].

// negated comparisons are used deliberately to reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod cli;
pub mod error;
pub mod expr;
pub mod model;
pub mod partition;
pub mod relax;

pub use error::{Error, Result};
