use nalgebra::DVector;
use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use super::spectral::{
    check_orthogonal, eigenvalues, geometric_sum_det, match_roots, matrix_orbit_length, orbit_average,
    OrthogonalOperator, RotationBlocks, DEFAULT_TOL, MAX_ORBIT_CAP,
};
use super::CertifyError;

/// A point claimed to have an orbit of the given length.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub point: Vec<f64>,
    pub length: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub tol: f64,
    /// Orbit-length search cap; defaults to the lcm of the claimed lengths.
    pub cap: Option<usize>,
    /// Ambient dimension to audit; defaults to the matrix size.
    pub claimed_dim: Option<usize>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { tol: DEFAULT_TOL, cap: None, claimed_dim: None }
    }
}

/// Per-length evidence that `A` has a nontrivial `w`-th root of unity as an
/// eigenvalue.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralRecord {
    pub w: usize,
    /// `|det(I + A + ... + A^(w-1))|`.
    pub det_residual: f64,
    /// The matched root is `exp(2 pi i k / w)`.
    pub k: usize,
    /// `k/w` in lowest terms, as `[numerator, denominator]`.
    pub root: [usize; 2],
    /// `|(I + A + ... + A^(w-1)) u|` for the witness deviation `u`.
    pub averaging_residual: f64,
}

impl SpectralRecord {
    /// True when the matched root is `-1`.
    pub fn is_minus_one(&self) -> bool {
        self.root == [1, 2]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContradictionReason {
    /// Fewer dimensions than distinct eigenvalues the records force.
    EigenvalueCount,
    /// The forced eigenvalues fill the dimension exactly and multiply to a
    /// negative number, against `det A = +1`.
    DeterminantSign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Consistent,
    Contradiction(ContradictionReason),
}

/// Step-by-step audit of a claimed ambient dimension against the records.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionAudit {
    pub claimed_dim: usize,
    pub s: usize,
    /// Non-real roots: each brings its conjugate, two eigenvalues apiece.
    pub conjugate_pairs: usize,
    /// Roots equal to `-1` (at most one, from the single even length).
    pub real_minus_one: usize,
    pub forced_eigenvalues: usize,
    /// Sign of the product of the forced eigenvalues.
    pub product_sign: i8,
    pub verdict: Verdict,
}

/// Counts the eigenvalues the records force on a real operator of the
/// claimed dimension and checks them against `det A > 0`.
pub fn dimension_audit(records: &[SpectralRecord], claimed_dim: usize) -> DimensionAudit {
    let s = records.len();
    let real_minus_one = records.iter().filter(|r| r.is_minus_one()).count();
    let conjugate_pairs = s - real_minus_one;
    let forced = 2 * conjugate_pairs + real_minus_one;
    // |z|^2 = 1 for every conjugate pair; each -1 flips the sign.
    let product_sign = if real_minus_one % 2 == 1 { -1 } else { 1 };
    let verdict = if claimed_dim >= 2 * s {
        Verdict::Consistent
    } else if claimed_dim < forced {
        Verdict::Contradiction(ContradictionReason::EigenvalueCount)
    } else if claimed_dim == forced && product_sign < 0 {
        Verdict::Contradiction(ContradictionReason::DeterminantSign)
    } else {
        // claimed_dim sits between the forced count and 2s while the
        // product is positive: cannot happen with pairwise coprime lengths.
        Verdict::Consistent
    };
    DimensionAudit {
        claimed_dim,
        s,
        conjugate_pairs,
        real_minus_one,
        forced_eigenvalues: forced,
        product_sign,
        verdict,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCertificate {
    pub m: usize,
    pub s: usize,
    pub records: Vec<SpectralRecord>,
    pub verdict: Verdict,
    pub audit: DimensionAudit,
    pub det: f64,
    pub exact: bool,
    pub tol: f64,
}

impl SpectralCertificate {
    pub fn bound(&self) -> usize {
        2 * self.s
    }
}

pub fn pairwise_coprime(values: &[usize]) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, a)| values[i + 1..].iter().all(|b| a.gcd(b) == 1))
}

/// Verifies witness orbit lengths on `A` and certifies the lower bound
/// `m >= 2s` eigenvalue by eigenvalue.
pub fn certify(
    op: &OrthogonalOperator,
    witnesses: &[Witness],
    opts: CertifyOptions,
) -> Result<SpectralCertificate, CertifyError> {
    let tol = opts.tol;
    let m = op.dim();
    let dense = op.dense();
    check_orthogonal(&dense, tol)?;
    let det = dense.determinant();
    if (det + 1.0).abs() <= tol {
        return Err(CertifyError::NotSpecialOrthogonal(det));
    }
    if (det - 1.0).abs() > tol {
        return Err(CertifyError::MatrixDomain(format!("det A = {det} is not +1")));
    }

    let lengths: Vec<usize> = witnesses.iter().map(|w| w.length).collect();
    if let Some(bad) = lengths.iter().find(|&&w| w <= 1) {
        return Err(CertifyError::Domain(format!("claimed length {bad} is not greater than 1")));
    }
    if !pairwise_coprime(&lengths) {
        return Err(CertifyError::Domain(format!(
            "claimed lengths {lengths:?} are not pairwise coprime; reduce them with max_coprime_subset first"
        )));
    }
    let cap = opts
        .cap
        .unwrap_or_else(|| lengths.iter().fold(1usize, |acc, w| acc.lcm(w).min(MAX_ORBIT_CAP)))
        .min(MAX_ORBIT_CAP);

    let eig = match op {
        OrthogonalOperator::Dense(_) => Some(eigenvalues(&dense)?),
        OrthogonalOperator::Rotations(_) => None,
    };

    let mut records = Vec::with_capacity(witnesses.len());
    for (idx, wit) in witnesses.iter().enumerate() {
        if wit.point.len() != m {
            return Err(CertifyError::Witness(format!("witness {idx} has {} coordinates, expected {m}", wit.point.len())));
        }
        let x = DVector::from_column_slice(&wit.point);
        let measured = match op {
            OrthogonalOperator::Rotations(r) => {
                if x.amax() <= tol {
                    return Err(CertifyError::Witness(format!("witness {idx} is the zero vector")));
                }
                Some(r.orbit_length(&wit.point, tol))
            }
            OrthogonalOperator::Dense(a) => matrix_orbit_length(a, &x, cap, tol)?,
        };
        if measured != Some(wit.length) {
            return Err(CertifyError::Witness(format!(
                "witness {idx} claims orbit length {} but its orbit has length {}",
                wit.length,
                measured.map_or_else(|| format!("> {cap}"), |k| k.to_string())
            )));
        }
        let w = wit.length;
        let avg = orbit_average(&dense, &x, w, tol)?;
        let (det_residual, k) = match (op, &eig) {
            (OrthogonalOperator::Rotations(r), _) => (r.geometric_sum_det(w).abs(), r.eigen_match(w)),
            (OrthogonalOperator::Dense(a), Some(eig)) => (geometric_sum_det(a, w).abs(), match_roots(eig, w, tol)),
            (OrthogonalOperator::Dense(_), None) => unreachable!("dense operators have eigenvalues"),
        };
        let k = k.ok_or_else(|| {
            CertifyError::Spectral(format!("no eigenvalue within {tol:e} of a nontrivial {w}-th root of unity"))
        })?;
        let reduced = Ratio::new(k, w);
        records.push(SpectralRecord {
            w,
            det_residual,
            k,
            root: [*reduced.numer(), *reduced.denom()],
            averaging_residual: avg.sum_residual,
        });
    }

    for (i, a) in records.iter().enumerate() {
        if let Some(b) = records[i + 1..].iter().find(|b| b.root == a.root) {
            return Err(CertifyError::Spectral(format!(
                "lengths {} and {} matched the same root {}/{}",
                a.w, b.w, a.root[0], a.root[1]
            )));
        }
    }

    let audit = dimension_audit(&records, opts.claimed_dim.unwrap_or(m));
    Ok(SpectralCertificate {
        m,
        s: records.len(),
        verdict: audit.verdict,
        records,
        audit,
        det,
        exact: op.is_exact(),
        tol,
    })
}

/// Block rotation in `SO(2s)` realizing the given pairwise coprime orbit
/// lengths, with one witness per block.
#[derive(Debug, Clone, PartialEq)]
pub struct TightRotation {
    pub blocks: RotationBlocks,
    pub witnesses: Vec<Witness>,
}

pub fn make_tight_rotation(lengths: &[usize]) -> Result<TightRotation, CertifyError> {
    if let Some(bad) = lengths.iter().find(|&&w| w < 2) {
        return Err(CertifyError::Domain(format!("length {bad} is less than 2")));
    }
    if !pairwise_coprime(lengths) {
        return Err(CertifyError::Domain(format!("lengths {lengths:?} are not pairwise coprime")));
    }
    let s = lengths.len();
    let angles = lengths.iter().map(|&w| Ratio::new(1, w as i64)).collect();
    let witnesses = (0..s)
        .map(|j| {
            let mut point = vec![0.0; 2 * s];
            point[2 * j] = 1.0;
            Witness { point, length: lengths[j] }
        })
        .collect();
    Ok(TightRotation { blocks: RotationBlocks { angles, fixed: 0 }, witnesses })
}
