//! Lower bounds for cyclic actions.
//!
//! If an orthogonal `A` in `SO(m)` has `s` points whose orbit lengths are
//! pairwise coprime and greater than one, then each length `w` forces an
//! eigenvalue `exp(2 pi i k/w)` with `1 <= k < w` (the orbit mean is fixed,
//! so the deviation `u` satisfies `(I + A + ... + A^(w-1)) u = 0`). These
//! roots are distinct, non-real ones come in conjugate pairs, and at most one
//! can be `-1`; with `det A > 0` this gives `m >= 2s`.

mod certificate;
mod coprime;
pub mod spectral;

use thiserror::Error;

pub use certificate::{
    certify, dimension_audit, make_tight_rotation, pairwise_coprime, CertifyOptions, ContradictionReason,
    DimensionAudit, SpectralCertificate, SpectralRecord, TightRotation, Verdict, Witness,
};
pub use coprime::{max_coprime_subset, prime_factors, OrbitProfile};
pub use spectral::{OrthogonalOperator, RotationBlocks, DEFAULT_TOL, MAX_ORBIT_CAP};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix domain error: {0}")]
    MatrixDomain(String),
    #[error("orbit length error: {0}")]
    OrbitLength(String),
    #[error("matrix is not special orthogonal: det A = {0}")]
    NotSpecialOrthogonal(f64),
    #[error("witness error: {0}")]
    Witness(String),
    #[error("spectral check failed: {0}")]
    Spectral(String),
}
