//! Finite groups given by multiplication tables.
//!
//! Labels are 1-based: a group of order `n` has elements `1..=n` and `1` is
//! the identity. Internally the table is stored 0-based and row-major.
//!
//! # Composition convention
//!
//! Group actions satisfy `rho(i*j)(x) = rho(i)(rho(j)(x))`. The right
//! multiplication map `sigma_g(i) = i*g` therefore composes as
//! `sigma_{g*h} = sigma_h . sigma_g` (apply `sigma_g` first), and the block
//! matrices built from it in [`crate::lifter`] satisfy
//! `M(g*h) = M(g) M(h)` with ordinary matrix multiplication.

use serde::Serialize;
use thiserror::Error;

use crate::complex::VertexAction;

/// 1-based group element label.
pub type Label = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order must be positive")]
    InvalidOrder,
    #[error("table is not square: expected {expected} entries in row {row}, found {found}")]
    Shape { row: usize, expected: usize, found: usize },
    #[error("label {label} out of range 1..={order}")]
    Label { label: usize, order: usize },
    #[error("table is not a group: {0}")]
    NotAGroup(String),
    #[error("action is not consistent: {0}")]
    Consistency(String),
}

/// A validated finite group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    order: usize,
    table: Vec<u32>,
}

/// Outcome of checking the group axioms on a raw table.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct TableReport {
    pub order: usize,
    pub shape: CheckResult,
    pub latin_square: CheckResult,
    pub identity: CheckResult,
    pub associativity: CheckResult,
    pub inverses: CheckResult,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn pass() -> Self {
        CheckResult { passed: true, detail: None }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        CheckResult { passed: false, detail: Some(detail.into()) }
    }

    fn skipped() -> Self {
        CheckResult::fail("skipped: table shape invalid")
    }
}

impl TableReport {
    pub fn passed(&self) -> bool {
        [&self.shape, &self.latin_square, &self.identity, &self.associativity, &self.inverses]
            .iter()
            .all(|c| c.passed)
    }

    fn first_failure(&self) -> String {
        [
            ("shape", &self.shape),
            ("latin square", &self.latin_square),
            ("identity", &self.identity),
            ("associativity", &self.associativity),
            ("inverses", &self.inverses),
        ]
        .iter()
        .find(|(_, c)| !c.passed)
        .map(|(name, c)| format!("{name}: {}", c.detail.clone().unwrap_or_default()))
        .unwrap_or_default()
    }
}

/// Checks every group axiom on `rows` (1-based labels), reporting each one.
pub fn validate_table(rows: &[Vec<usize>]) -> TableReport {
    let n = rows.len();
    let shape = shape_check(rows);
    if !shape.passed {
        return TableReport {
            order: n,
            shape,
            latin_square: CheckResult::skipped(),
            identity: CheckResult::skipped(),
            associativity: CheckResult::skipped(),
            inverses: CheckResult::skipped(),
        };
    }
    let at = |i: usize, j: usize| rows[i - 1][j - 1];

    let latin_square = (|| {
        for i in 0..n {
            let mut seen_row = vec![false; n + 1];
            let mut seen_col = vec![false; n + 1];
            for j in 0..n {
                let r = rows[i][j];
                if std::mem::replace(&mut seen_row[r], true) {
                    return CheckResult::fail(format!("row {} repeats label {r}", i + 1));
                }
                let c = rows[j][i];
                if std::mem::replace(&mut seen_col[c], true) {
                    return CheckResult::fail(format!("column {} repeats label {c}", i + 1));
                }
            }
        }
        CheckResult::pass()
    })();

    let identity = (|| {
        for i in 1..=n {
            if at(1, i) != i || at(i, 1) != i {
                return CheckResult::fail(format!("1*{i} or {i}*1 differs from {i}"));
            }
        }
        CheckResult::pass()
    })();

    let associativity = (|| {
        for a in 1..=n {
            for b in 1..=n {
                let ab = at(a, b);
                for c in 1..=n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return CheckResult::fail(format!("({a}*{b})*{c} != {a}*({b}*{c})"));
                    }
                }
            }
        }
        CheckResult::pass()
    })();

    let inverses = (|| {
        for a in 1..=n {
            if !(1..=n).any(|b| at(a, b) == 1 && at(b, a) == 1) {
                return CheckResult::fail(format!("element {a} has no two-sided inverse"));
            }
        }
        CheckResult::pass()
    })();

    TableReport { order: n, shape: CheckResult::pass(), latin_square, identity, associativity, inverses }
}

fn shape_check(rows: &[Vec<usize>]) -> CheckResult {
    let n = rows.len();
    if n == 0 {
        return CheckResult::fail("empty table");
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return CheckResult::fail(format!("row {} has {} entries, expected {n}", i + 1, row.len()));
        }
        if let Some(&bad) = row.iter().find(|&&v| v == 0 || v > n) {
            return CheckResult::fail(format!("row {} contains label {bad} outside 1..={n}", i + 1));
        }
    }
    CheckResult::pass()
}

impl GroupTable {
    /// Builds a group from 1-based rows, validating every axiom.
    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        if rows.is_empty() {
            return Err(GroupError::InvalidOrder);
        }
        let report = validate_table(rows);
        if !report.shape.passed {
            return Err(GroupError::NotAGroup(report.first_failure()));
        }
        if !report.passed() {
            return Err(GroupError::NotAGroup(report.first_failure()));
        }
        let table = rows.iter().flatten().map(|&v| (v - 1) as u32).collect();
        Ok(GroupTable { order: rows.len(), table })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Label {
        1
    }

    pub fn elements(&self) -> std::ops::RangeInclusive<Label> {
        1..=self.order
    }

    pub fn mul(&self, a: Label, b: Label) -> Label {
        self.table[(a - 1) * self.order + (b - 1)] as usize + 1
    }

    pub fn check_label(&self, g: Label) -> Result<(), GroupError> {
        if g == 0 || g > self.order {
            Err(GroupError::Label { label: g, order: self.order })
        } else {
            Ok(())
        }
    }

    pub fn inverse(&self, a: Label) -> Label {
        self.elements().find(|&b| self.mul(a, b) == 1).expect("validated group has inverses")
    }

    pub fn element_order(&self, g: Label) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    /// 1-based rows, as stored in group files.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table
            .chunks(self.order)
            .map(|r| r.iter().map(|&v| v as usize + 1).collect())
            .collect()
    }

    /// A generating set, chosen greedily in label order.
    pub fn generators(&self) -> Vec<Label> {
        let mut gens = Vec::new();
        let mut span = vec![false; self.order + 1];
        span[1] = true;
        for g in self.elements() {
            if span[g] {
                continue;
            }
            gens.push(g);
            // closure of the span under right multiplication by all generators
            let mut stack: Vec<Label> = self.elements().filter(|&h| span[h]).collect();
            while let Some(h) = stack.pop() {
                for &s in &gens {
                    let hs = self.mul(h, s);
                    if !span[hs] {
                        span[hs] = true;
                        stack.push(hs);
                    }
                }
            }
        }
        gens
    }

    pub fn is_cyclic(&self) -> bool {
        self.elements().any(|g| self.element_order(g) == self.order)
    }
}

/// The cyclic group `Z_n`; label `k` stands for `f^(k-1)`.
pub fn make_cyclic(n: usize) -> Result<GroupTable, GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidOrder);
    }
    let table = (0..n)
        .flat_map(|i| (0..n).map(move |j| ((i + j) % n) as u32))
        .collect();
    Ok(GroupTable { order: n, table })
}

/// Right multiplication `i -> i*g` as a permutation of labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyPermutation {
    pub element: Label,
    /// `sigma[i-1] = i*g`.
    pub sigma: Vec<Label>,
    pub parity: i8,
}

impl CayleyPermutation {
    pub fn apply(&self, i: Label) -> Label {
        self.sigma[i - 1]
    }
}

pub fn right_mult_permutation(t: &GroupTable, g: Label) -> Result<CayleyPermutation, GroupError> {
    t.check_label(g)?;
    let sigma: Vec<Label> = t.elements().map(|i| t.mul(i, g)).collect();
    let zero_based: Vec<usize> = sigma.iter().map(|&s| s - 1).collect();
    Ok(CayleyPermutation { element: g, parity: permutation_sign(&zero_based), sigma })
}

/// Sign of a 0-based permutation via its cycle decomposition.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0usize;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        transpositions += len - 1;
    }
    if transpositions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    perm.iter().all(|&p| p < perm.len() && !std::mem::replace(&mut seen[p], true))
}

/// Orbits of a vertex action, sorted by smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexOrbits {
    pub group_order: usize,
    pub orbits: Vec<Vec<usize>>,
}

impl VertexOrbits {
    pub fn lengths(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }

    /// Index of the orbit containing each vertex.
    pub fn orbit_of(&self) -> Vec<usize> {
        let n: usize = self.orbits.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (k, orbit) in self.orbits.iter().enumerate() {
            for &v in orbit {
                out[v] = k;
            }
        }
        out
    }
}

/// Orbit of a single vertex: `{ rho(g)(x) : g in G }`, sorted.
pub fn orbit_of_vertex(action: &VertexAction, x: usize) -> Vec<usize> {
    let mut orbit: Vec<usize> = action.perms().iter().map(|p| p[x]).collect();
    orbit.sort_unstable();
    orbit.dedup();
    orbit
}

/// Partitions the vertices into orbits. The action must be a homomorphism.
pub fn orbits(action: &VertexAction) -> Result<VertexOrbits, GroupError> {
    if let Some(bad) = action.homomorphism_failure() {
        return Err(GroupError::Consistency(bad));
    }
    let n = action.group().order();
    let vcount = action.vertex_count();
    let mut assigned = vec![false; vcount];
    let mut out = Vec::new();
    for x in 0..vcount {
        if assigned[x] {
            continue;
        }
        let orbit = orbit_of_vertex(action, x);
        for &v in &orbit {
            assigned[v] = true;
        }
        if !n.is_multiple_of(orbit.len()) {
            return Err(GroupError::Consistency(format!(
                "orbit of vertex {x} has length {} not dividing {n}",
                orbit.len()
            )));
        }
        out.push(orbit);
    }
    Ok(VertexOrbits { group_order: n, orbits: out })
}
