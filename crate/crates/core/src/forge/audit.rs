use std::collections::BTreeSet;

use serde::Serialize;

use super::cover::{forge_surface, BranchedCoverSurface, Construction, ForgeMetadata};
use super::{audit_monodromy, literal_misprint_monodromy, orbifold_signature, ForgeError, MonodromyAudit};
use crate::certifier::OrbitProfile;
use crate::group::{orbit_of_vertex, CheckResult};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeFiberCheck {
    pub base_vertex: usize,
    pub index: u64,
    pub expected_length: u64,
    pub fiber: Vec<usize>,
    pub result: CheckResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitAudit {
    pub order: u64,
    pub cone_fibers: Vec<ConeFiberCheck>,
    /// Every vertex off the cone fibers has an orbit of length `P`.
    pub free_elsewhere: CheckResult,
    /// Distinct orbit lengths with their multiplicities, ascending.
    pub length_counts: Vec<(usize, usize)>,
    /// Largest pairwise coprime choice of orbit lengths.
    pub profile: OrbitProfile,
    /// One vertex realizing each chosen length.
    pub witnesses: Vec<(usize, u64)>,
    /// The profile supplies `l` coprime lengths.
    pub hypothesis: CheckResult,
}

impl OrbitAudit {
    pub fn passed(&self) -> bool {
        self.cone_fibers.iter().all(|c| c.result.passed) && self.free_elsewhere.passed && self.hypothesis.passed
    }
}

/// Recomputes every vertex orbit from the deck table and compares it with
/// the fibers of the projection. Orbits are read directly off the table, so
/// a corrupted entry shows up at the fiber that contains it.
pub fn orbit_audit(s: &BranchedCoverSurface) -> OrbitAudit {
    let vcount = s.complex.vertex_count();
    let orbit: Vec<Vec<usize>> = (0..vcount).map(|x| orbit_of_vertex(&s.deck, x)).collect();

    let mut on_cone = vec![false; vcount];
    let cone_fibers = s
        .cone_points
        .iter()
        .map(|cp| {
            let fiber = s.fiber(cp.base_vertex);
            for &x in &fiber {
                on_cone[x] = true;
            }
            let result = if fiber.len() as u64 != cp.fiber_length {
                CheckResult::fail(format!("fiber has {} vertices, expected {}", fiber.len(), cp.fiber_length))
            } else if let Some(&x) = fiber.iter().find(|&&x| orbit[x] != fiber) {
                CheckResult::fail(format!("orbit of vertex {x} is {:?}, fiber is {fiber:?}", orbit[x]))
            } else {
                CheckResult::pass()
            };
            ConeFiberCheck {
                base_vertex: cp.base_vertex,
                index: cp.index,
                expected_length: cp.fiber_length,
                fiber,
                result,
            }
        })
        .collect();

    let p = s.order as usize;
    let free_elsewhere = match (0..vcount).find(|&x| !on_cone[x] && orbit[x].len() != p) {
        None => CheckResult::pass(),
        Some(x) => CheckResult::fail(format!("vertex {x} has orbit length {}, expected {p}", orbit[x].len())),
    };

    let distinct: BTreeSet<&Vec<usize>> = orbit.iter().collect();
    let lengths: Vec<u64> = distinct.iter().map(|o| o.len() as u64).collect();
    let mut length_counts: Vec<(usize, usize)> = Vec::new();
    let mut sorted = lengths.clone();
    sorted.sort_unstable();
    for w in sorted {
        match length_counts.last_mut() {
            Some((len, n)) if *len == w as usize => *n += 1,
            _ => length_counts.push((w as usize, 1)),
        }
    }
    let profile = OrbitProfile::from_orbit_lengths(&lengths).expect("orbit lengths are positive");
    let witnesses = profile
        .chosen
        .iter()
        .map(|&w| ((0..vcount).find(|&x| orbit[x].len() as u64 == w).expect("length occurs"), w))
        .collect();
    let hypothesis = if profile.l == s.l && profile.chosen.iter().all(|&w| w > 1) {
        CheckResult::pass()
    } else {
        CheckResult::fail(format!("coprime orbit lengths {:?}, wanted {} of them", profile.chosen, s.l))
    };

    OrbitAudit { order: s.order, cone_fibers, free_elsewhere, length_counts, profile, witnesses, hypothesis }
}

/// The statement that no `f`-equivariant embedding of `F` into `R^m` exists.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub m: usize,
    pub l: usize,
    pub construction: Construction,
    pub surface: ForgeMetadata,
    pub vertex_count: usize,
    pub audit: OrbitAudit,
    /// Audit of the monodromy used; absent for the rotation sphere.
    pub monodromy: Option<MonodromyAudit>,
    /// Audit of the literally printed exponents, which must fail.
    pub literal_misprint: Option<MonodromyAudit>,
    /// Every equivariant embedding needs dimension at least `2l`.
    pub bound: usize,
    pub exceeds_m: bool,
}

impl CounterexampleReport {
    pub fn holds(&self) -> bool {
        self.audit.passed()
            && self.exceeds_m
            && self.monodromy.as_ref().is_none_or(MonodromyAudit::passed)
            && self.literal_misprint.as_ref().is_none_or(|a| !a.surjective.passed)
    }
}

/// Forges the surface for `l = floor(m/2) + 1` and certifies `2l > m`.
pub fn counterexample_pipeline(m: usize) -> Result<(BranchedCoverSurface, CounterexampleReport), ForgeError> {
    if m == 0 {
        return Err(ForgeError::Domain("m must be at least 1".into()));
    }
    let l = m / 2 + 1;
    let surface = forge_surface(l)?;
    let audit = orbit_audit(&surface);
    let (monodromy, literal_misprint) = match (&surface.monodromy, surface.construction) {
        (Some(mono), Construction::SlitCover) => {
            let sig = orbifold_signature(l)?;
            (Some(audit_monodromy(&sig, mono)), Some(audit_monodromy(&sig, &literal_misprint_monodromy(&sig))))
        }
        _ => (None, None),
    };
    let bound = 2 * audit.profile.l;
    let report = CounterexampleReport {
        m,
        l,
        construction: surface.construction,
        surface: surface.metadata(),
        vertex_count: surface.complex.vertex_count(),
        monodromy,
        literal_misprint,
        bound,
        exceeds_m: bound > m,
        audit,
    };
    Ok((surface, report))
}
