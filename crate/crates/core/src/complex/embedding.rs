//! Piecewise-linear embedding verification.
//!
//! A simplexwise-linear map is an embedding iff it is injective on vertices,
//! every simplex image is nondegenerate, and any two simplex images meet
//! exactly in the image of their common face. All three are decided in exact
//! arithmetic.

use std::collections::HashSet;

use num_traits::Zero;
use serde::Serialize;

use super::{EmbeddedComplex, SimplicialComplex};
use crate::exact::{affinely_independent, certainly_affinely_independent, intersect_simplices, Point, SimplexIntersection};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IntersectionMethod {
    /// All vertex images are affinely independent, so any two simplices meet
    /// exactly in their common face.
    GlobalIndependence,
    Pairwise,
    /// Not reached: an earlier check failed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub injective: bool,
    pub nondegenerate: bool,
    pub intersections: bool,
    pub method: IntersectionMethod,
    pub pairs_checked: usize,
    /// Failure descriptions in sorted simplex-pair order.
    pub failures: Vec<String>,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.injective && self.nondegenerate && self.intersections
    }
}

pub fn verify_pl_embedding(c: &EmbeddedComplex) -> EmbeddingReport {
    verify_pl_embedding_raw(c.complex(), c.coords())
}

/// Same as [`verify_pl_embedding`] but for coordinates that have not been
/// validated (e.g. deliberately corrupted ones).
pub fn verify_pl_embedding_raw(c: &SimplicialComplex, coords: &[Point]) -> EmbeddingReport {
    let mut failures = Vec::new();

    let mut seen: HashSet<&Point> = HashSet::with_capacity(coords.len());
    for (i, p) in coords.iter().enumerate() {
        if !seen.insert(p) {
            failures.push(format!("vertex {i} repeats an earlier position"));
        }
    }
    let injective = failures.is_empty();

    let mut simplices: Vec<Vec<usize>> = Vec::new();
    simplices.extend(c.triangles().iter().map(|t| t.to_vec()));
    simplices.extend(c.edges().iter().map(|e| e.to_vec()));
    simplices.extend(c.isolated_vertices().into_iter().map(|v| vec![v]));

    let before = failures.len();
    for s in &simplices {
        let pts: Vec<&Point> = s.iter().map(|&v| &coords[v]).collect();
        if !affinely_independent(&pts) {
            failures.push(format!("simplex {s:?} is degenerate"));
        }
    }
    let nondegenerate = failures.len() == before;

    if !(injective && nondegenerate) {
        return EmbeddingReport {
            injective,
            nondegenerate,
            intersections: false,
            method: IntersectionMethod::Skipped,
            pairs_checked: 0,
            failures,
        };
    }

    if certainly_affinely_independent(coords) {
        return EmbeddingReport {
            injective,
            nondegenerate,
            intersections: true,
            method: IntersectionMethod::GlobalIndependence,
            pairs_checked: 0,
            failures,
        };
    }

    let mut pairs_checked = 0;
    for i in 0..simplices.len() {
        for j in (i + 1)..simplices.len() {
            let (s, t) = (&simplices[i], &simplices[j]);
            if is_face(s, t) || is_face(t, s) {
                continue;
            }
            pairs_checked += 1;
            if boxes_disjoint(s, t, coords) {
                continue;
            }
            let flag_s: Vec<bool> = s.iter().map(|v| !t.contains(v)).collect();
            let flag_t: Vec<bool> = t.iter().map(|v| !s.contains(v)).collect();
            let ps: Vec<&Point> = s.iter().map(|&v| &coords[v]).collect();
            let pt: Vec<&Point> = t.iter().map(|&v| &coords[v]).collect();
            if let SimplexIntersection::Meets { max_flagged_weight } = intersect_simplices(&ps, &pt, &flag_s, &flag_t) {
                if !max_flagged_weight.is_zero() {
                    failures.push(format!("simplices {s:?} and {t:?} meet outside their common face"));
                }
            }
        }
    }
    EmbeddingReport {
        injective,
        nondegenerate,
        intersections: failures.is_empty(),
        method: IntersectionMethod::Pairwise,
        pairs_checked,
        failures,
    }
}

fn is_face(small: &[usize], big: &[usize]) -> bool {
    small.len() < big.len() && small.iter().all(|v| big.contains(v))
}

fn boxes_disjoint(s: &[usize], t: &[usize], coords: &[Point]) -> bool {
    let dim = coords[s[0]].len();
    (0..dim).any(|k| {
        let lo_s = s.iter().map(|&v| &coords[v][k]).min().expect("nonempty");
        let hi_s = s.iter().map(|&v| &coords[v][k]).max().expect("nonempty");
        let lo_t = t.iter().map(|&v| &coords[v][k]).min().expect("nonempty");
        let hi_t = t.iter().map(|&v| &coords[v][k]).max().expect("nonempty");
        hi_s < lo_t || hi_t < lo_s
    })
}
