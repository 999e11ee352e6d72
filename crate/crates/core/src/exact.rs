//! Exact rational arithmetic helpers.
//!
//! Every coordinate and every predicate in the geometric part of the crate
//! goes through [`Rational`]; nothing here touches floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// A point in `R^d` with exact rational coordinates.
pub type Point = Vec<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational `{0}` (expected \"numerator/denominator\")")]
pub struct ParseRationalError(pub String);

/// Parses `"p/q"` or a plain integer `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError(s.to_string());
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| err())?;
    let den: BigInt = den.parse().map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// Formats as `"p/q"` in lowest terms with a positive denominator, always
/// including the denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Row-reduces `rows` in place to reduced row echelon form and returns the
/// pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for v in rows[r].iter_mut().skip(c) {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (k, pv) in pivot_row.iter().enumerate().skip(c) {
                if !pv.is_zero() {
                    row[k] -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Exact determinant by Gaussian elimination. Zero entries are skipped, so
/// signed permutation matrices cost little more than a scan.
pub fn determinant(matrix: &[Vec<Rational>]) -> Rational {
    let n = matrix.len();
    let mut a = matrix.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for i in (c + 1)..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            for k in c..n {
                if !a[c][k].is_zero() {
                    let t = &f * &a[c][k];
                    a[i][k] -= t;
                }
            }
        }
    }
    det
}

/// Solves a square system exactly; `None` when singular.
pub fn solve(matrix: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let n = matrix.len();
    let mut aug: Vec<Vec<Rational>> = matrix
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// True iff the given points are affinely independent.
pub fn affinely_independent(points: &[&Point]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let base = points[0];
    let diffs: Vec<Point> = points[1..].iter().map(|p| sub(p, base)).collect();
    if diffs.len() > base.len() {
        return false;
    }
    rank(&diffs) == diffs.len()
}

const MERSENNE_61: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MERSENNE_61 as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

fn reduce_mod(v: &BigInt) -> u64 {
    v.mod_floor(&BigInt::from(MERSENNE_61)).to_u64().unwrap_or(0)
}

/// Sufficient test for affine independence of many points.
///
/// Each difference vector `p_i - p_0` is scaled to an integer vector, the Gram
/// matrix is formed modulo the prime `2^61 - 1`, and its rank is computed in
/// that field. A full rank there forces a nonzero integer Gram determinant,
/// hence independence over the rationals. `false` is inconclusive.
pub fn certainly_affinely_independent(points: &[Point]) -> bool {
    if points.len() <= 1 {
        return true;
    }
    let dim = points[0].len();
    let k = points.len() - 1;
    if k > dim {
        return false;
    }
    // Sparse integer rows modulo p.
    let rows: Vec<Vec<(usize, u64)>> = points[1..]
        .iter()
        .map(|p| {
            let diff = sub(p, &points[0]);
            let lcm = diff
                .iter()
                .filter(|x| !x.is_zero())
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            diff.iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, reduce_mod(&(x.numer() * (&lcm / x.denom())))))
                .collect()
        })
        .collect();
    let dot = |a: &[(usize, u64)], b: &[(usize, u64)]| {
        let (mut i, mut j, mut acc) = (0, 0, 0u64);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc = (acc + mulmod(a[i].1, b[j].1)) % MERSENNE_61;
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    };
    let mut gram = vec![vec![0u64; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = dot(&rows[i], &rows[j]);
            gram[i][j] = v;
            gram[j][i] = v;
        }
    }
    for c in 0..k {
        let Some(p) = (c..k).find(|&i| gram[i][c] != 0) else {
            return false;
        };
        gram.swap(p, c);
        let inv = powmod(gram[c][c], MERSENNE_61 - 2);
        for i in (c + 1)..k {
            if gram[i][c] == 0 {
                continue;
            }
            let f = mulmod(gram[i][c], inv);
            for j in c..k {
                let t = mulmod(f, gram[c][j]);
                gram[i][j] = (gram[i][j] + MERSENNE_61 - t) % MERSENNE_61;
            }
        }
    }
    true
}

/// Outcome of intersecting two simplices given by their vertex coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimplexIntersection {
    Disjoint,
    /// They meet, and the largest barycentric weight found on the
    /// `flagged` vertices over all common points.
    Meets { max_flagged_weight: Rational },
}

/// Decides how two simplices `sigma` and `tau` meet.
///
/// The common points are `{ sum l_i s_i = sum u_j t_j, sum l = sum u = 1,
/// l, u >= 0 }`; this is a polytope in barycentric space and the linear
/// objective (total weight on the flagged vertices) attains its maximum at a
/// basic feasible solution, so enumerating bases is exact.
pub fn intersect_simplices(
    sigma: &[&Point],
    tau: &[&Point],
    flag_sigma: &[bool],
    flag_tau: &[bool],
) -> SimplexIntersection {
    let ns = sigma.len();
    let ncols = ns + tau.len();
    let dim = sigma[0].len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for c in 0..dim {
        let involved = sigma.iter().chain(tau).any(|p| !p[c].is_zero());
        if !involved {
            continue;
        }
        let mut row: Vec<Rational> = sigma.iter().map(|p| p[c].clone()).collect();
        row.extend(tau.iter().map(|p| -&p[c]));
        row.push(Rational::zero());
        rows.push(row);
    }
    let mut sum_s = vec![Rational::zero(); ncols + 1];
    let mut sum_t = vec![Rational::zero(); ncols + 1];
    for v in &mut sum_s[..ns] {
        *v = Rational::one();
    }
    for v in &mut sum_t[ns..ncols] {
        *v = Rational::one();
    }
    sum_s[ncols] = Rational::one();
    sum_t[ncols] = Rational::one();
    rows.push(sum_s);
    rows.push(sum_t);

    let pivots = rref(&mut rows);
    if pivots.last() == Some(&ncols) {
        return SimplexIntersection::Disjoint;
    }
    let r = pivots.len();
    let weights: Vec<bool> = flag_sigma.iter().chain(flag_tau).copied().collect();
    let mut best: Option<Rational> = None;
    for basis in combinations(ncols, r) {
        let sub_m: Vec<Vec<Rational>> = rows
            .iter()
            .map(|row| basis.iter().map(|&c| row[c].clone()).collect())
            .collect();
        let rhs: Vec<Rational> = rows.iter().map(|row| row[ncols].clone()).collect();
        let Some(x) = solve(&sub_m, &rhs) else { continue };
        if x.iter().any(Signed::is_negative) {
            continue;
        }
        let obj: Rational = basis
            .iter()
            .zip(&x)
            .filter(|(c, _)| weights[**c])
            .map(|(_, v)| v.clone())
            .sum();
        if best.as_ref().is_none_or(|b| obj > *b) {
            best = Some(obj);
        }
    }
    match best {
        Some(max_flagged_weight) => SimplexIntersection::Meets { max_flagged_weight },
        None => SimplexIntersection::Disjoint,
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        parse_rational(s).unwrap()
    }

    fn pt(v: &[&str]) -> Point {
        v.iter().map(|s| q(s)).collect()
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(format_rational(&q("6/-4")), "-3/2");
        assert_eq!(format_rational(&q("7")), "7/1");
        assert_eq!(format_rational(&q("0")), "0/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn determinant_of_swap_and_rotation() {
        let swap = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(determinant(&swap), int(-1));
        let m = vec![
            vec![int(2), int(1), int(0)],
            vec![int(1), int(3), int(1)],
            vec![int(0), int(1), int(4)],
        ];
        // 2(12-1) - 1(4-0) = 18
        assert_eq!(determinant(&m), int(18));
    }

    #[test]
    fn modular_independence_agrees_on_simple_cases() {
        let pts = vec![pt(&["0", "0", "0"]), pt(&["1", "0", "0"]), pt(&["0", "1/2", "0"])];
        assert!(certainly_affinely_independent(&pts));
        let collinear = vec![pt(&["0", "0"]), pt(&["1", "1"]), pt(&["2", "2"])];
        assert!(!certainly_affinely_independent(&collinear));
        let refs: Vec<&Point> = collinear.iter().collect();
        assert!(!affinely_independent(&refs));
    }

    #[test]
    fn crossing_segments_meet_in_interior() {
        let a = pt(&["0", "0"]);
        let b = pt(&["2", "2"]);
        let c = pt(&["0", "2"]);
        let d = pt(&["2", "0"]);
        match intersect_simplices(&[&a, &b], &[&c, &d], &[true, true], &[true, true]) {
            SimplexIntersection::Meets { max_flagged_weight } => assert_eq!(max_flagged_weight, int(2)),
            other => panic!("{other:?}"),
        }
        let e = pt(&["3", "0"]);
        let f = pt(&["3", "1"]);
        assert_eq!(
            intersect_simplices(&[&a, &b], &[&e, &f], &[true, true], &[true, true]),
            SimplexIntersection::Disjoint
        );
    }
}
