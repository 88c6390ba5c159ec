//! Exact computations for restricted Lie algebras over finite fields.
//!
//! The crate works entirely over `F_{p^k}` (odd `p >= 3`) and provides:
//!
//! * [`field`] — canonical finite-field arithmetic,
//! * [`linalg`] — dense exact matrices, subspaces, exterior powers,
//! * [`forms`] — homogeneous binary forms and their gcd,
//! * [`liealg`] — restricted Lie algebras `(g, [p])` with verified axioms,
//! * [`varieties`] — rational points of the nullcone `V(g)`, sandwich sets,
//!   the strata `N_i(g)` and the plane variety `E(2, g)`,
//! * [`u0`] — PBW arithmetic in the restricted enveloping algebra `U_0(g)`
//!   and induced (baby Verma) modules,
//! * [`modules`] — verified matrix representations with functors, radical
//!   and socle series, and isomorphism testing,
//! * [`rankdeg`] — Jordan types, constant-rank and equal-images predicates,
//!   generic kernels and the `j`-degree invariants,
//! * [`cli`] — the command-line front end with machine-readable reports,
//! * [`checks`] — the builtin verification suite run by `paper-check`.
//!
//! Every operation is pure and deterministic; enumerations are guarded by
//! explicit bounds so that desk-scale runs stay desk-scale.

pub mod checks;
pub mod cli;
pub mod field;
pub mod forms;
pub mod liealg;
pub mod linalg;
pub mod modules;
pub mod rankdeg;
pub mod u0;
pub mod varieties;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field parameters: {0}")]
    Field(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("all input forms are zero")]
    AllFormsZero,
    #[error("algebra axioms violated:\n{0}")]
    InvalidAlgebra(String),
    #[error("not a subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("not an ideal: {0}")]
    NotIdeal(String),
    #[error("p-map does not descend to the quotient: {0}")]
    QuotientPMap(String),
    #[error("element is not in the required stratum: {0}")]
    NotNilpotent(String),
    #[error("enumeration bound exceeded: {0} candidates (limit {1}); raise the bound to override")]
    EnumerationBound(u64, u64),
    #[error("character is not restricted: {0}")]
    CharacterNotRestricted(String),
    #[error("module axioms violated:\n{0}")]
    InvalidModule(String),
    #[error("subspace is not invariant under the action")]
    NotInvariant,
    #[error("no radical generators declared for algebra `{0}`")]
    NoRadicalGenerators(String),
    #[error("nullcone has no rational points at this level")]
    EmptyNullcone,
    #[error("not constant j-rank: {0}")]
    NonConstantRank(String),
    #[error("not an elementary abelian plane: {0}")]
    NotElementaryPlane(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
