//! Prime-field arithmetic, dense tensors and tensor-space linear algebra.

pub mod basis;
pub mod field;
pub mod io;
pub mod linalg;
pub mod tensor;
pub mod veronese;

pub use basis::{gaussian_eliminate, Elimination, SubspaceBasis};
pub use field::PrimeField;
pub use tensor::{full_axis, Tensor};
pub use veronese::{monomial_vector, monomials, symmetric_dim, veronese};
