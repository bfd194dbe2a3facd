//! Exact rational scalars, vectors and matrices, and the integer lattice
//! algorithms the rest of the crate is built on.

mod integer;
mod matrix;
mod rational;
mod vector;

pub use integer::{
    inner, integer_kernel, integer_solve, integer_span_basis, smith_normal_form, SnfResult,
};
pub(crate) use integer::solve_full_column_rank;
pub use matrix::QMatrix;
pub use rational::{
    floor_sqrt, format_rational, frac, is_integer, parse_rational, rat, to_f64, Rational,
};
pub use vector::QVector;
