//! Higher Auslander–Reiten theory for tensor products of homogeneous
//! representation-finite path algebras.
//!
//! The crate knits cluster-tilting categories from Dynkin quivers, realizes
//! almost split sequences as mapping cones of radical chain maps, forms total
//! tensor products of such chain maps across algebra factors, and verifies
//! that the resulting cones are higher almost split sequences. All linear
//! algebra is exact over the rationals, so every output is bit-reproducible.

pub mod exactlin;
pub mod almostsplit;
pub mod complexes;
pub mod ctcat;
pub mod oracle;
pub mod quiver;
pub mod report;
pub mod rng;

use thiserror::Error;

/// Crate-wide error type. CLI exit codes are derived from these variants.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("quiver is not representation-finite (orbit generation exceeded the Dynkin bound)")]
    RepInfinite,
    #[error("tensor factors are not homogeneous of a common length: {0}")]
    HeterogeneousFactors(String),
    #[error("slice mismatch: {0}")]
    SliceMismatch(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("module is not indecomposable")]
    NotIndecomposable,
    #[error("zero module where a nonzero one is required")]
    ZeroModule,
    #[error("endomorphism ring has an unsupported division algebra quotient")]
    UnsupportedField,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("summand outside the two admissible slices: {0}")]
    SliceLeak(String),
    #[error("label {0} is injective; no almost split sequence starts there")]
    Injective(String),
    #[error("no extension candidate produced a verified almost split sequence")]
    ConstructionFailed,
    #[error("differential image does not land in the radical subspace")]
    NonRadicalTail,
    #[error("chain map is not radical")]
    NotRadical,
    #[error("unknown label: {0}")]
    UnknownLabel(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
