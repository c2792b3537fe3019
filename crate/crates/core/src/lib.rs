//! Analytic rank of tensors over prime fields.
//!
//! * [`algebra`]: prime fields, dense labelled tensors, lex-order echelon
//!   forms, Veronese and symmetric-tensor coordinates.
//! * [`rank`]: exact bias / analytic rank, matrix rank, a partition-rank
//!   oracle for micro instances and coset character averages.
//! * [`extract`]: from a large subspace of tensors, build a subspace whose
//!   nonzero elements all have analytic rank at least `c·r`, with a
//!   re-checkable certificate.
//! * [`szemeredi`]: Veronese independence, AP-blocking polynomial sets and
//!   the tail-bound checks behind random-difference lower bounds.

pub mod acceptance;
pub mod algebra;
pub mod cli;
pub mod error;
pub mod extract;
pub mod rank;
pub mod szemeredi;

pub use error::{Error, Result};
