use serde::Serialize;

use super::{ComplexError, SimplicialComplex};
use crate::group::{is_permutation, CheckResult, GroupTable, Label};

/// A group acting on vertex indices: `perms[g-1][x] = rho(g)(x)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexAction {
    group: GroupTable,
    perms: Vec<Vec<usize>>,
}

impl VertexAction {
    /// Checks shape only: one bijection of the vertex set per element.
    /// Group-theoretic and simplicial checks live in [`validate_action`].
    pub fn new(group: GroupTable, perms: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        if perms.len() != group.order() {
            return Err(ComplexError::Action(format!(
                "{} permutations for a group of order {}",
                perms.len(),
                group.order()
            )));
        }
        let v = perms.first().map_or(0, Vec::len);
        for (g, p) in perms.iter().enumerate() {
            if p.len() != v || !is_permutation(p) {
                return Err(ComplexError::Action(format!("perms[{}] is not a permutation of 0..{v}", g + 1)));
            }
        }
        Ok(VertexAction { group, perms })
    }

    /// The trivial group acting on `vertex_count` vertices.
    pub fn trivial(vertex_count: usize) -> Self {
        VertexAction {
            group: crate::group::make_cyclic(1).expect("order 1"),
            perms: vec![(0..vertex_count).collect()],
        }
    }

    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn perm(&self, g: Label) -> &[usize] {
        &self.perms[g - 1]
    }

    pub fn apply(&self, g: Label, x: usize) -> usize {
        self.perms[g - 1][x]
    }

    pub fn vertex_count(&self) -> usize {
        self.perms.first().map_or(0, Vec::len)
    }

    /// Overwrites one image; used to build deliberately broken actions.
    pub fn with_image(mut self, g: Label, x: usize, image: usize) -> Self {
        self.perms[g - 1][x] = image;
        self
    }

    fn identity_failure(&self) -> Option<String> {
        self.perms[0]
            .iter()
            .enumerate()
            .find(|(x, &y)| *x != y)
            .map(|(x, y)| format!("rho(1) moves vertex {x} to {y}"))
    }

    /// `None` when `rho(i*j) = rho(i) . rho(j)` for all `i, j`.
    ///
    /// It suffices to check `j` over a generating set: every element is a
    /// word in the generators, and the identity extends along words.
    pub fn homomorphism_failure(&self) -> Option<String> {
        if let Some(f) = self.identity_failure() {
            return Some(f);
        }
        let t = &self.group;
        for s in t.generators() {
            let ps = &self.perms[s - 1];
            for i in t.elements() {
                let pi = &self.perms[i - 1];
                let pis = &self.perms[t.mul(i, s) - 1];
                if let Some(x) = (0..ps.len()).find(|&x| pis[x] != pi[ps[x]]) {
                    return Some(format!(
                        "rho({i}*{s}) differs from rho({i}) . rho({s}) at vertex {x}"
                    ));
                }
            }
        }
        None
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ActionReport {
    pub vertex_count: CheckResult,
    pub homomorphism: CheckResult,
    pub simplicial: CheckResult,
    pub faithful: CheckResult,
}

impl ActionReport {
    pub fn passed(&self) -> bool {
        self.vertex_count.passed && self.homomorphism.passed && self.simplicial.passed && self.faithful.passed
    }
}

/// Checks that `a` is a faithful simplicial group action on `c`.
pub fn validate_action(c: &SimplicialComplex, a: &VertexAction) -> ActionReport {
    let vertex_count = if a.vertex_count() == c.vertex_count() {
        CheckResult::pass()
    } else {
        CheckResult::fail(format!(
            "action permutes {} vertices, complex has {}",
            a.vertex_count(),
            c.vertex_count()
        ))
    };
    if !vertex_count.passed {
        let skipped = || CheckResult::fail("skipped: vertex count mismatch");
        return ActionReport { vertex_count, homomorphism: skipped(), simplicial: skipped(), faithful: skipped() };
    }

    let homomorphism = match a.homomorphism_failure() {
        None => CheckResult::pass(),
        Some(f) => CheckResult::fail(f),
    };

    let simplicial = (|| {
        let edges = c.edge_set();
        let tris = c.triangle_set();
        for g in a.group().elements() {
            let p = a.perm(g);
            for e in c.edges() {
                let (u, v) = (p[e[0]], p[e[1]]);
                if !edges.contains(&[u.min(v), u.max(v)]) {
                    return CheckResult::fail(format!("rho({g}) sends edge {e:?} to non-edge [{u}, {v}]"));
                }
            }
            for t in c.triangles() {
                let mut img = [p[t[0]], p[t[1]], p[t[2]]];
                img.sort_unstable();
                if !tris.contains(&img) {
                    return CheckResult::fail(format!("rho({g}) sends triangle {t:?} to non-triangle {img:?}"));
                }
            }
        }
        CheckResult::pass()
    })();

    let faithful = match a
        .group()
        .elements()
        .skip(1)
        .find(|&g| a.perm(g).iter().enumerate().all(|(x, &y)| x == y))
    {
        None => CheckResult::pass(),
        Some(g) => CheckResult::fail(format!("rho({g}) is the identity")),
    };

    ActionReport { vertex_count, homomorphism, simplicial, faithful }
}
