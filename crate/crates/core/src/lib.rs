//! Permutation polynomials over finite-field towers `F_p ⊂ F_q ⊂ F_{q^n}`
//! built from `(b, A)`-linear translators.
//!
//! Every construction is paired with a brute-force oracle: maps are stored as
//! dense value tables, so permutation status, compositional inverses,
//! involutions, translator relations and bentness are all checked pointwise.

pub mod error;
pub mod field;

pub use error::{Error, Result};
pub use field::{ElemOp, Field, FieldElement, FieldTower, Level};
pub mod polyfun;

pub use polyfun::{AdditivePerm, FieldFn, LinearMap, Matrix, Poly};
pub mod translators;

pub use translators::{TranslatorCert, TranslatorChecker, Verdict};
pub mod constructions;

pub use constructions::{ConstructionResult, Theorem, TranslatorSystem};
pub mod bent;

pub use bent::{BentInstance, BentVerdict, BoolTable};
pub mod families;
pub mod catalog;
pub mod cli;
