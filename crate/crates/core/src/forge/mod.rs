//! Closed orientable surfaces with a cyclic action realizing `l` orbits of
//! pairwise coprime lengths, built as branched covers of the sphere.
//!
//! For the first `l` primes `p_1..p_l` with product `P`, the base orbifold is
//! a sphere with two cone points of index `delta_j = P/p_j` for every `j`.
//! The monodromy sends the loops around them to `f^(p_j)` and `f^(-p_j)` in
//! `Z_P`; the fiber over a cone point of index `delta_j` is then a single
//! deck orbit of length `p_j`.

mod audit;
mod cover;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::complex::ComplexError;
use crate::exact::Rational;
use crate::group::{CheckResult, GroupError};

pub use audit::{counterexample_pipeline, orbit_audit, ConeFiberCheck, CounterexampleReport, OrbitAudit};
pub use cover::{
    build_branched_cover, build_slit_cover, forge_surface, rotation_sphere, BranchedCoverSurface, ConePoint,
    Construction, ForgeMetadata,
};

/// Largest `l` the forge builds; `l = 5` already needs `P = 2310` copies
/// and a dense deck table of about 64 million entries.
pub const MAX_FORGE_L: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ForgeError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("l = {0} gives a degenerate signature (delta = 1 is not a cone index); use the rotation sphere")]
    DegenerateSignature(usize),
    #[error("l = {l} exceeds the forge limit {cap}")]
    Capacity { l: usize, cap: usize },
    #[error("monodromy audit failed: {0}")]
    Monodromy(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// The first `l` primes.
pub fn first_primes(l: usize) -> Result<Vec<u64>, ForgeError> {
    if l == 0 {
        return Err(ForgeError::Domain("l must be at least 1".into()));
    }
    let mut primes: Vec<u64> = Vec::with_capacity(l);
    let mut n = 2u64;
    while primes.len() < l {
        if primes.iter().take_while(|&&p| p * p <= n).all(|&p| !n.is_multiple_of(p)) {
            primes.push(n);
        }
        n += 1;
    }
    Ok(primes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbifoldSignature {
    pub l: usize,
    pub primes: Vec<u64>,
    /// `P = p_1 * ... * p_l`.
    pub order: u64,
    /// `delta_1, delta_1, delta_2, delta_2, ...`: cone points ordered by `j`,
    /// unprimed before primed.
    pub cone_indices: Vec<u64>,
}

pub fn orbifold_signature(l: usize) -> Result<OrbifoldSignature, ForgeError> {
    if l < 2 {
        return Err(ForgeError::DegenerateSignature(l));
    }
    let primes = first_primes(l)?;
    let order: u64 = primes.iter().product();
    let cone_indices = primes.iter().flat_map(|&p| [order / p, order / p]).collect();
    Ok(OrbifoldSignature { l, primes, order, cone_indices })
}

/// Images of the loop generators in `Z_P`, as exponents of `f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyData {
    pub order: u64,
    /// `(a_j, a'_j)` for each `j`.
    pub exponents: Vec<(u64, u64)>,
}

impl MonodromyData {
    /// Exponents in slit order: `a_1, a'_1, a_2, a'_2, ...`.
    pub fn shifts(&self) -> Vec<u64> {
        self.exponents.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonodromyAudit {
    /// `sum_j (a_j + a'_j) = 0 mod P`: the product relation maps to 1.
    pub relation: CheckResult,
    /// `f^(a)` has order exactly `delta` at every cone point.
    pub order_constraint: CheckResult,
    /// `gcd(a_1, a'_1, ..., P) = 1`.
    pub surjective: CheckResult,
}

impl MonodromyAudit {
    pub fn passed(&self) -> bool {
        self.relation.passed && self.order_constraint.passed && self.surjective.passed
    }
}

/// Order of `f^a` in `Z_P`.
pub fn exponent_order(a: u64, order: u64) -> u64 {
    order / a.gcd(&order)
}

pub fn audit_monodromy(sig: &OrbifoldSignature, mono: &MonodromyData) -> MonodromyAudit {
    let p = sig.order;
    let shifts = mono.shifts();
    let total = shifts.iter().fold(0u64, |acc, a| (acc + a % p) % p);
    let relation = if mono.order == p && shifts.len() == sig.cone_indices.len() && total == 0 {
        CheckResult::pass()
    } else {
        CheckResult::fail(format!("exponents {shifts:?} sum to {total} mod {p}"))
    };
    let order_constraint = match shifts.iter().zip(&sig.cone_indices).enumerate().find(|(_, (&a, &delta))| {
        (delta * a) % p != 0 || exponent_order(a, p) != delta
    }) {
        None if shifts.len() == sig.cone_indices.len() => CheckResult::pass(),
        None => CheckResult::fail(format!("{} exponents for {} cone points", shifts.len(), sig.cone_indices.len())),
        Some((t, (&a, &delta))) => CheckResult::fail(format!(
            "cone point {t}: f^{a} has order {} in Z_{p}, index is {delta}",
            exponent_order(a, p)
        )),
    };
    let g = shifts.iter().fold(p, |acc, a| acc.gcd(a));
    let surjective = if g == 1 {
        CheckResult::pass()
    } else {
        CheckResult::fail(format!("image is generated by f^{g}, a proper subgroup of Z_{p}"))
    };
    MonodromyAudit { relation, order_constraint, surjective }
}

/// `x_j -> f^(p_j)`, `x'_j -> f^(-p_j)`.
pub fn monodromy(sig: &OrbifoldSignature) -> Result<MonodromyData, ForgeError> {
    let p = sig.order;
    let mono = MonodromyData { order: p, exponents: sig.primes.iter().map(|&q| (q % p, (p - q % p) % p)).collect() };
    let audit = audit_monodromy(sig, &mono);
    if !audit.passed() {
        return Err(ForgeError::Monodromy(format!("{audit:?}")));
    }
    Ok(mono)
}

/// The exponents as literally printed, `f^(p_l)` and `f^(-p_l)` for every
/// `j`. Fails the audit for every `l >= 2`; kept as a negative case.
pub fn literal_misprint_monodromy(sig: &OrbifoldSignature) -> MonodromyData {
    let p = sig.order;
    let last = *sig.primes.last().expect("signature has primes") % p;
    MonodromyData { order: p, exponents: vec![(last, (p - last) % p); sig.l] }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RiemannHurwitz {
    /// `2 - sum (1 - 1/delta)`.
    pub chi_orb: Rational,
    /// `P * chi_orb`.
    pub chi: i64,
    pub genus: i64,
}

/// Euler characteristic and genus of a connected degree-`order` cyclic
/// branched cover of the sphere with the given cone indices.
pub fn riemann_hurwitz(order: u64, cone_indices: &[u64]) -> Result<RiemannHurwitz, ForgeError> {
    if order == 0 {
        return Err(ForgeError::Domain("cover degree 0".into()));
    }
    let mut chi_orb = Rational::from_integer(2.into());
    for &delta in cone_indices {
        if delta == 0 || !order.is_multiple_of(delta) {
            return Err(ForgeError::Domain(format!("cone index {delta} does not divide {order}")));
        }
        chi_orb -= Rational::one() - Rational::new(1.into(), delta.into());
    }
    let chi_f = &chi_orb * Rational::from_integer(order.into());
    if !chi_f.is_integer() {
        return Err(ForgeError::Construction(format!("P * chi_orb = {chi_f} is not an integer")));
    }
    let chi = chi_f.to_integer().to_i64().ok_or_else(|| ForgeError::Construction("chi overflows".into()))?;
    if chi % 2 != 0 {
        return Err(ForgeError::Construction(format!("chi = {chi} is odd; no closed orientable surface")));
    }
    let genus = 1 - chi / 2;
    if genus < 0 {
        return Err(ForgeError::Construction(format!("chi = {chi} gives negative genus")));
    }
    debug_assert!(!chi_orb.is_zero() || genus == 1);
    Ok(RiemannHurwitz { chi_orb, chi, genus })
}

pub fn riemann_hurwitz_genus(sig: &OrbifoldSignature) -> Result<RiemannHurwitz, ForgeError> {
    riemann_hurwitz(sig.order, &sig.cone_indices)
}

/// `252(g-1)+1`: a genus-`g` surface with `g > 1` embeds equivariantly for
/// every finite group action in this dimension, as such groups have order at
/// most `84(g-1)`.
pub fn hurwitz_dimension(genus: u64) -> Result<u64, ForgeError> {
    if genus < 2 {
        return Err(ForgeError::Domain(format!("genus {genus}: the Hurwitz bound needs g > 1")));
    }
    252u64
        .checked_mul(genus - 1)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| ForgeError::Domain(format!("genus {genus} overflows")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> Rational {
        Rational::new(p.into(), q.into())
    }

    #[test]
    fn primes() {
        assert_eq!(first_primes(1).unwrap(), vec![2]);
        assert_eq!(first_primes(2).unwrap(), vec![2, 3]);
        let p5 = first_primes(5).unwrap();
        assert_eq!(p5, vec![2, 3, 5, 7, 11]);
        assert_eq!(p5.iter().product::<u64>(), 2310);
        assert!(first_primes(0).is_err());
        assert_eq!(first_primes(10).unwrap()[9], 29);
    }

    #[test]
    fn signatures() {
        let s = orbifold_signature(2).unwrap();
        assert_eq!((s.order, s.cone_indices.clone()), (6, vec![3, 3, 2, 2]));
        let s = orbifold_signature(3).unwrap();
        assert_eq!((s.order, s.cone_indices.clone()), (30, vec![15, 15, 10, 10, 6, 6]));
        assert_eq!(orbifold_signature(1), Err(ForgeError::DegenerateSignature(1)));
    }

    #[test]
    fn monodromy_exponents() {
        let s = orbifold_signature(2).unwrap();
        let m = monodromy(&s).unwrap();
        assert_eq!(m.exponents, vec![(2, 4), (3, 3)]);
        let s = orbifold_signature(3).unwrap();
        let m = monodromy(&s).unwrap();
        assert_eq!(m.exponents.iter().map(|e| e.0).collect::<Vec<_>>(), vec![2, 3, 5]);
        let a = audit_monodromy(&s, &m);
        assert!(a.passed(), "{a:?}");
    }

    #[test]
    fn literal_misprint_fails_surjectivity() {
        for l in 2..=4 {
            let s = orbifold_signature(l).unwrap();
            let m = literal_misprint_monodromy(&s);
            let a = audit_monodromy(&s, &m);
            assert!(a.relation.passed);
            assert!(!a.surjective.passed, "l={l}");
            assert!(!a.order_constraint.passed, "l={l}");
        }
        let s = orbifold_signature(2).unwrap();
        let a = audit_monodromy(&s, &literal_misprint_monodromy(&s));
        assert!(a.surjective.detail.unwrap().contains("f^3"));
    }

    #[test]
    fn riemann_hurwitz_values() {
        let rh = riemann_hurwitz_genus(&orbifold_signature(2).unwrap()).unwrap();
        assert_eq!((rh.chi_orb, rh.chi, rh.genus), (r(-1, 3), -2, 2));
        let rh = riemann_hurwitz_genus(&orbifold_signature(3).unwrap()).unwrap();
        assert_eq!((rh.chi_orb, rh.chi, rh.genus), (r(-10, 3), -100, 51));
        let rh = riemann_hurwitz(1, &[1, 1]).unwrap();
        assert_eq!((rh.chi, rh.genus), (2, 0));
        assert!(riemann_hurwitz(2, &[1, 1]).is_err());
        assert!(riemann_hurwitz(6, &[4]).is_err());
        let rh = riemann_hurwitz(2, &[2, 2]).unwrap();
        assert_eq!((rh.chi, rh.genus), (2, 0));
    }

    #[test]
    fn hurwitz_dimensions() {
        assert_eq!(hurwitz_dimension(2).unwrap(), 253);
        assert_eq!(hurwitz_dimension(3).unwrap(), 505);
        assert!(hurwitz_dimension(1).is_err());
        assert!(hurwitz_dimension(0).is_err());
    }
}
