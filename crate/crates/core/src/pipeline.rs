//! End-to-end runs: lifting a given action, forging a counterexample, and
//! lifting a forged surface against its own lower bound.

use serde::Serialize;
use thiserror::Error;

use crate::complex::{validate_action, verify_pl_embedding, ActionReport, EmbeddedComplex, EmbeddingReport, VertexAction};
use crate::forge::{counterexample_pipeline, forge_surface, orbit_audit, CounterexampleReport, ForgeError, ForgeMetadata};
use crate::lifter::{
    determinant_extend, force_extend, stack_embedding, verify_equivariance, EquivarianceReport, LiftError,
    LiftedEmbedding, DEFAULT_DIMENSION_CAP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UpperOptions {
    pub cap: usize,
    pub force_extend: bool,
    /// Run the PL embedding check on the lift.
    pub verify_embedding: bool,
}

impl Default for UpperOptions {
    fn default() -> Self {
        UpperOptions { cap: DEFAULT_DIMENSION_CAP, force_extend: false, verify_embedding: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpperReport {
    /// Source dimension.
    pub d: usize,
    /// Group order.
    pub n: usize,
    /// Lifted dimension: `d*n`, or `d*n + 1` when extended.
    pub m: usize,
    pub extended: bool,
    pub action: ActionReport,
    pub equivariance: EquivarianceReport,
    pub embedding: Option<EmbeddingReport>,
}

impl UpperReport {
    pub fn passed(&self) -> bool {
        self.action.passed() && self.equivariance.passed() && self.embedding.as_ref().is_none_or(EmbeddingReport::passed)
    }
}

/// Lifts `e` along `a`, extends by the determinant coordinate when needed,
/// and verifies the result.
pub fn pipeline_upper(
    e: &EmbeddedComplex,
    a: &VertexAction,
    opts: UpperOptions,
) -> Result<(LiftedEmbedding, UpperReport), LiftError> {
    let action = validate_action(e.complex(), a);
    let stacked = stack_embedding(e, a, opts.cap)?;
    let lifted = if opts.force_extend { force_extend(stacked) } else { determinant_extend(stacked) };
    let equivariance = verify_equivariance(&lifted, a);
    let embedding = opts.verify_embedding.then(|| verify_pl_embedding(lifted.complex()));
    let report = UpperReport {
        d: lifted.source_dim(),
        n: a.group().order(),
        m: lifted.dim(),
        extended: lifted.rep().is_extended(),
        action,
        equivariance,
        embedding,
    };
    Ok((lifted, report))
}

/// The counterexample statement for `m`.
pub fn pipeline_lower(m: usize) -> Result<CounterexampleReport, ForgeError> {
    counterexample_pipeline(m).map(|(_, r)| r)
}

#[derive(Debug, Error)]
pub enum RoundtripError {
    #[error(transparent)]
    Forge(#[from] ForgeError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    pub l: usize,
    pub surface: ForgeMetadata,
    pub vertex_count: usize,
    /// `2l`, from the coprime orbit lengths of the deck action.
    pub lower_bound: usize,
    /// Canonical source dimension `V - 1`.
    pub source_dim: usize,
    pub lifted_dim: usize,
    pub extended: bool,
    pub orbit_audit_passed: bool,
    pub upper: UpperReport,
    pub consistent: bool,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        self.orbit_audit_passed && self.upper.passed() && self.consistent
    }
}

/// Forges the surface for `l`, lifts its canonical coordinates along the
/// deck action, and checks the lift against the lower bound `2l`.
pub fn pipeline_roundtrip(l: usize, opts: UpperOptions) -> Result<RoundtripReport, RoundtripError> {
    let surface = forge_surface(l)?;
    let audit = orbit_audit(&surface);
    let e = surface.canonical_embedding();
    let (lifted, upper) = pipeline_upper(&e, &surface.deck, opts)?;
    let lower_bound = 2 * audit.profile.l;
    Ok(RoundtripReport {
        l,
        surface: surface.metadata(),
        vertex_count: surface.complex.vertex_count(),
        lower_bound,
        source_dim: e.dim(),
        lifted_dim: lifted.dim(),
        extended: lifted.rep().is_extended(),
        orbit_audit_passed: audit.passed(),
        consistent: lifted.dim() >= lower_bound,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{interval, octahedron};
    use crate::group::make_cyclic;

    #[test]
    fn upper_examples() {
        let swap = VertexAction::new(make_cyclic(2).unwrap(), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let (_, r) = pipeline_upper(&interval(), &swap, UpperOptions::default()).unwrap();
        assert_eq!((r.d, r.n, r.m, r.extended), (1, 2, 3, true));
        assert!(r.passed(), "{r:?}");
        let anti = VertexAction::new(make_cyclic(2).unwrap(), vec![(0..6).collect(), vec![1, 0, 3, 2, 5, 4]]).unwrap();
        let (_, r) = pipeline_upper(&octahedron(), &anti, UpperOptions::default()).unwrap();
        assert_eq!(r.m, 7);
        assert!(r.passed());
        let (_, r) = pipeline_upper(&octahedron(), &VertexAction::trivial(6), UpperOptions::default()).unwrap();
        assert_eq!((r.m, r.extended), (3, false));
        assert!(r.passed());
    }

    #[test]
    fn corrupted_action_is_diagnosed() {
        // a 3-cycle is not an involution: rho(2)*rho(2) != rho(1)
        let bad = VertexAction::new(make_cyclic(2).unwrap(), vec![(0..6).collect(), vec![2, 0, 1, 3, 4, 5]]).unwrap();
        let (_, r) = pipeline_upper(&octahedron(), &bad, UpperOptions::default()).unwrap();
        assert!(!r.action.homomorphism.passed);
        assert!(!r.passed());
    }

    #[test]
    fn lower_examples() {
        let r = pipeline_lower(2).unwrap();
        assert_eq!((r.bound, r.surface.genus), (4, 2));
        let r = pipeline_lower(4).unwrap();
        assert_eq!((r.bound, r.surface.genus), (6, 51));
        assert!(pipeline_lower(0).is_err());
    }

    #[test]
    fn roundtrip_small() {
        let r = pipeline_roundtrip(1, UpperOptions::default()).unwrap();
        assert_eq!((r.source_dim, r.lifted_dim, r.lower_bound), (5, 11, 2));
        assert!(r.passed(), "{r:?}");
        let r = pipeline_roundtrip(2, UpperOptions::default()).unwrap();
        assert_eq!((r.source_dim, r.lifted_dim, r.lower_bound), (45, 271, 4));
        assert!(r.passed());
    }
}
