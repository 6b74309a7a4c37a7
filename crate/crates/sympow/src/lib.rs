//! Solvable Lie algebra structures on symmetric powers of a dual space.
//!
//! A square matrix `A` over an exact field, together with an eigenvector `w`,
//! induces a bracket on the space of degree-`d` forms in the dual coordinates:
//!
//! ```text
//! [f, g] = g(w)·φ*(f) − f(w)·φ*(g)
//! ```
//!
//! where `φ*` substitutes row `i` of `A` for the variable `x_i`. Every such
//! algebra is solvable with second derived subalgebra zero, and is nilpotent
//! when `A` is. The crate constructs these structure-constant tables exactly
//! over `Q`, `Q(i)` and prime fields `F_p`, analyzes them (Jacobi check,
//! derived and lower-central series, center, homomorphism verification),
//! classifies the two-variable case over `Q(i)` into the known one-parameter
//! families, and enumerates conjugation orbits of `(A, w)` pairs over small
//! prime fields.
//!
//! All arithmetic is exact: arbitrary-precision rationals, Gaussian
//! rationals, or residues mod a prime. No floating point is used anywhere.

pub mod analysis;
pub mod bracket;
pub mod classify;
pub mod field;
pub mod matrix;
pub mod orbits;
pub mod poly;

pub(crate) mod fp;
pub(crate) mod par;

pub use analysis::{
    ad_matrix, brute_force_iso, center, check_alternating_jacobi, conjugated_iso, derived_series,
    fingerprint, is_nilpotent, is_solvable, lower_central_series, product_space, verify_hom,
    Fingerprint, HomWitness, JacobiCheck, SeriesKind, SeriesReport, DEFAULT_ISO_BUDGET,
};
pub use bracket::{
    bracket, graded_table, structure_constants, validate_seed, LieTable, Provenance, SeedPair,
};
pub use classify::{
    classify, family_table, jordan_form_2x2, ClassLabel, Classification, JordanForm2, JordanKind,
};
pub use field::{Field, Scalar};
pub use matrix::{Matrix, Subspace};
pub use orbits::{
    eigendirections, enumerate_m, gl_orbits, iso_class_count, IsoClassReport, OrbitReport,
    DEFAULT_ENUM_BUDGET,
};
pub use poly::{induced_matrix, monomial_basis, HomPoly, MonomialBasis};

/// Errors shared by every module in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("singular matrix")]
    Singular,
    #[error("division by zero")]
    DivisionByZero,
    #[error("w is not an eigenvector: {0}")]
    NotAnEigenvector(String),
    #[error("eigenvalues are not in the working field")]
    EigenvaluesNotInField,
    #[error("budget exceeded: required {required}, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("operation not supported over {0}")]
    UnsupportedField(Field),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}
