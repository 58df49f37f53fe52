//! Exact linear algebra over F_q and over F_q[x].

mod matrix;
mod smith;

pub use matrix::{vec_mat_mul_into, MatFq, Rref};
pub use smith::{cecioni_frobenius_dim, invariant_factors, sylvester_operator, sylvester_solution_count, PolyMatFq};
