//! Orthogonal operators and the spectral facts the lower bound rests on.
//!
//! Two representations are supported: a dense floating matrix, and an exact
//! block-rotation form whose angles are rational fractions of a full turn.
//! The exact form answers eigenvalue and orbit questions without any
//! numerical eigensolver.

use nalgebra::{Complex, DMatrix, DVector, Schur};
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::CertifyError;

/// Default tolerance for every floating comparison.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Upper bound on orbit-length searches.
pub const MAX_ORBIT_CAP: usize = 1_000_000;

/// Block-diagonal rotation: one 2x2 rotation by `2*pi*angle` per entry of
/// `angles`, followed by `fixed` coordinates left pointwise fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationBlocks {
    pub angles: Vec<Ratio<i64>>,
    pub fixed: usize,
}

impl RotationBlocks {
    pub fn dim(&self) -> usize {
        2 * self.angles.len() + self.fixed
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let m = self.dim();
        let mut a = DMatrix::<f64>::identity(m, m);
        for (j, angle) in self.angles.iter().enumerate() {
            let t = std::f64::consts::TAU * (*angle.numer() as f64) / (*angle.denom() as f64);
            let (s, c) = t.sin_cos();
            let r = 2 * j;
            a[(r, r)] = c;
            a[(r, r + 1)] = -s;
            a[(r + 1, r)] = s;
            a[(r + 1, r + 1)] = c;
        }
        a
    }

    /// Exact orbit length of `x`: the lcm of the orders of the rotations
    /// acting on blocks where `x` is nonzero.
    pub fn orbit_length(&self, x: &[f64], tol: f64) -> usize {
        self.angles
            .iter()
            .enumerate()
            .filter(|(j, _)| x[2 * j].hypot(x[2 * j + 1]) > tol)
            .map(|(_, a)| turn_order(a))
            .fold(1, |acc, o| acc.lcm(&o))
    }

    /// `det(I + A + ... + A^(w-1))`. Zero is returned exactly when some
    /// block angle is a nontrivial `w`-th root of unity.
    pub fn geometric_sum_det(&self, w: usize) -> f64 {
        let mut det = (w as f64).powi(self.fixed as i32);
        for a in &self.angles {
            let theta = fract(a);
            let wt = fract(&(*a * Ratio::from_integer(w as i64)));
            let block = if theta.is_zero() {
                (w * w) as f64
            } else if wt.is_zero() {
                0.0
            } else {
                let pi = std::f64::consts::PI;
                let th = *theta.numer() as f64 / *theta.denom() as f64;
                let ratio = (pi * w as f64 * th).sin() / (pi * th).sin();
                ratio * ratio
            };
            det *= block;
        }
        det
    }

    /// Smallest `k` in `1..w` such that `exp(2 pi i k / w)` is an eigenvalue.
    pub fn eigen_match(&self, w: usize) -> Option<usize> {
        (1..w).find(|&k| {
            let target = Ratio::new(k as i64, w as i64);
            self.angles.iter().any(|a| fract(a) == target || fract(&-*a) == target)
        })
    }
}

fn fract(a: &Ratio<i64>) -> Ratio<i64> {
    let f = a - a.floor();
    if f < Ratio::zero() {
        f + Ratio::one()
    } else {
        f
    }
}

/// Order of the rotation by `angle` full turns.
fn turn_order(angle: &Ratio<i64>) -> usize {
    *fract(angle).denom() as usize
}

/// An orthogonal operator, dense or in exact rotation form.
#[derive(Debug, Clone, PartialEq)]
pub enum OrthogonalOperator {
    Dense(DMatrix<f64>),
    Rotations(RotationBlocks),
}

impl OrthogonalOperator {
    pub fn dim(&self) -> usize {
        match self {
            OrthogonalOperator::Dense(a) => a.nrows(),
            OrthogonalOperator::Rotations(r) => r.dim(),
        }
    }

    pub fn dense(&self) -> DMatrix<f64> {
        match self {
            OrthogonalOperator::Dense(a) => a.clone(),
            OrthogonalOperator::Rotations(r) => r.to_dense(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, OrthogonalOperator::Rotations(_))
    }
}

pub fn check_orthogonal(a: &DMatrix<f64>, tol: f64) -> Result<(), CertifyError> {
    if !a.is_square() {
        return Err(CertifyError::MatrixDomain(format!("matrix is {}x{}", a.nrows(), a.ncols())));
    }
    let n = a.nrows();
    let err = (a.transpose() * a - DMatrix::<f64>::identity(n, n)).amax();
    if err > tol {
        return Err(CertifyError::MatrixDomain(format!("|A^T A - I| = {err:e} exceeds {tol:e}")));
    }
    Ok(())
}

/// Smallest `k` in `1..=cap` with `|A^k x - x| <= tol`.
pub fn matrix_orbit_length(a: &DMatrix<f64>, x: &DVector<f64>, cap: usize, tol: f64) -> Result<Option<usize>, CertifyError> {
    check_orthogonal(a, tol)?;
    if x.len() != a.nrows() {
        return Err(CertifyError::MatrixDomain(format!("point has {} coordinates, matrix is {}x{}", x.len(), a.nrows(), a.nrows())));
    }
    if x.amax() <= tol {
        return Err(CertifyError::MatrixDomain("point is zero".into()));
    }
    let mut y = x.clone();
    for k in 1..=cap {
        y = a * y;
        if (&y - x).norm() <= tol {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// The orbit mean `x̄ = (x + Ax + ... + A^(w-1) x) / w` and the deviation
/// `u = x - x̄`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitAverage {
    pub mean: DVector<f64>,
    pub deviation: DVector<f64>,
    /// `|A x̄ - x̄|`.
    pub fixed_residual: f64,
    /// `|(I + A + ... + A^(w-1)) u|`.
    pub sum_residual: f64,
}

pub fn orbit_average(a: &DMatrix<f64>, x: &DVector<f64>, w: usize, tol: f64) -> Result<OrbitAverage, CertifyError> {
    if w == 0 {
        return Err(CertifyError::OrbitLength("orbit length must be positive".into()));
    }
    let powers = orbit_points(a, x, w);
    let back = a * &powers[w - 1];
    if (&back - x).norm() > tol {
        return Err(CertifyError::OrbitLength(format!("A^{w} x differs from x by {:e}", (&back - x).norm())));
    }
    let mean = powers.iter().fold(DVector::zeros(x.len()), |acc, p| acc + p) / w as f64;
    let deviation = x - &mean;
    let fixed_residual = (a * &mean - &mean).norm();
    let sum_residual = orbit_points(a, &deviation, w)
        .iter()
        .fold(DVector::zeros(x.len()), |acc, p| acc + p)
        .norm();
    Ok(OrbitAverage { mean, deviation, fixed_residual, sum_residual })
}

fn orbit_points(a: &DMatrix<f64>, x: &DVector<f64>, w: usize) -> Vec<DVector<f64>> {
    let mut out = Vec::with_capacity(w);
    let mut y = x.clone();
    for _ in 0..w {
        out.push(y.clone());
        y = a * y;
    }
    out
}

/// `det(I + A + ... + A^(w-1))`.
pub fn geometric_sum_det(a: &DMatrix<f64>, w: usize) -> f64 {
    let n = a.nrows();
    let mut sum = DMatrix::<f64>::zeros(n, n);
    let mut power = DMatrix::<f64>::identity(n, n);
    for _ in 0..w {
        sum += &power;
        power = &power * a;
    }
    sum.determinant()
}

/// Eigenvalues from the real Schur form.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>, CertifyError> {
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| CertifyError::MatrixDomain("Schur iteration did not converge".into()))?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Smallest `k` in `1..w` with an eigenvalue within `tol` of `exp(2 pi i k/w)`.
pub fn eigen_match(a: &DMatrix<f64>, w: usize, tol: f64) -> Result<Option<usize>, CertifyError> {
    let eig = eigenvalues(a)?;
    Ok(match_roots(&eig, w, tol))
}

pub(crate) fn match_roots(eig: &[Complex<f64>], w: usize, tol: f64) -> Option<usize> {
    (1..w).find(|&k| {
        let root = Complex::from_polar(1.0, std::f64::consts::TAU * k as f64 / w as f64);
        eig.iter().any(|l| (l - root).norm() <= tol)
    })
}

/// 2x2 rotation by `2*pi*num/den`.
pub fn rotation(num: i64, den: i64) -> DMatrix<f64> {
    RotationBlocks { angles: vec![Ratio::new(num, den)], fixed: 0 }.to_dense()
}
