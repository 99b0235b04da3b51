//! Polynomials and total maps over the tower: evaluation, permutation
//! testing, compositional inverses, additive permutations of `F_q`,
//! `F_q`-linear maps of `F_{q^n}` and matrix rank over `F_q`.

mod additive;
mod linear;
mod map;
mod matrix;
mod poly;

pub use additive::{apply_additive, apply_additive_inverse, AdditivePerm};
pub use linear::{span_rank, LinearAnalysis, LinearMap};
pub use map::FieldFn;
pub use matrix::{matrix_rank, Matrix};
pub use poly::{interpolate, Poly};
