//! Simplicial complexes of dimension at most two, their exact embeddings,
//! and simplicial group actions on their vertices.

mod action;
mod embedding;

use std::collections::{BTreeMap, HashSet, VecDeque};

use thiserror::Error;

use crate::exact::{affinely_independent, Point};

pub use action::{validate_action, ActionReport, VertexAction};
pub use embedding::{verify_pl_embedding, verify_pl_embedding_raw, EmbeddingReport, IntersectionMethod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("invariant `{invariant}` violated: {detail}")]
    Invariant { invariant: &'static str, detail: String },
    #[error("action error: {0}")]
    Action(String),
}

fn violated(invariant: &'static str, detail: impl Into<String>) -> ComplexError {
    ComplexError::Invariant { invariant, detail: detail.into() }
}

/// Which structural invariants a complex is held to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ComplexKind {
    #[default]
    General,
    /// Closed, connected surface: every edge in exactly two triangles and
    /// every vertex link a single cycle.
    Surface,
}

/// An abstract simplicial complex with edges and triangles.
///
/// Simplices are stored as sorted vertex tuples; the edge list is closed
/// under taking faces of triangles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    edges: Vec<[usize; 2]>,
    triangles: Vec<[usize; 3]>,
}

impl SimplicialComplex {
    pub fn new(
        vertex_count: usize,
        edges: &[[usize; 2]],
        triangles: &[[usize; 3]],
    ) -> Result<Self, ComplexError> {
        let in_range = |v: usize| v < vertex_count;
        let mut tris = Vec::with_capacity(triangles.len());
        for t in triangles {
            if !t.iter().all(|&v| in_range(v)) {
                return Err(violated("vertex index range", format!("triangle {t:?}")));
            }
            let mut s = *t;
            s.sort_unstable();
            if s[0] == s[1] || s[1] == s[2] {
                return Err(violated("nondegenerate simplex", format!("triangle {t:?}")));
            }
            tris.push(s);
        }
        tris.sort_unstable();
        if let Some(w) = tris.windows(2).find(|w| w[0] == w[1]) {
            return Err(violated("distinct simplices", format!("triangle {:?} listed twice", w[0])));
        }
        let mut all_edges: Vec<[usize; 2]> = Vec::with_capacity(edges.len() + 3 * tris.len());
        for e in edges {
            if !e.iter().all(|&v| in_range(v)) {
                return Err(violated("vertex index range", format!("edge {e:?}")));
            }
            if e[0] == e[1] {
                return Err(violated("nondegenerate simplex", format!("edge {e:?}")));
            }
            all_edges.push([e[0].min(e[1]), e[0].max(e[1])]);
        }
        for t in &tris {
            all_edges.extend([[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]);
        }
        all_edges.sort_unstable();
        all_edges.dedup();
        Ok(SimplicialComplex { vertex_count, edges: all_edges, triangles: tris })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.triangles.len() as i64
    }

    /// Vertices that belong to no edge or triangle.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        let mut used = vec![false; self.vertex_count];
        for e in &self.edges {
            used[e[0]] = true;
            used[e[1]] = true;
        }
        (0..self.vertex_count).filter(|&v| !used[v]).collect()
    }

    fn edge_triangle_counts(&self) -> BTreeMap<[usize; 2], usize> {
        let mut counts: BTreeMap<[usize; 2], usize> = self.edges.iter().map(|&e| (e, 0)).collect();
        for t in &self.triangles {
            for e in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
                *counts.get_mut(&e).expect("edges closed under faces") += 1;
            }
        }
        counts
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !std::mem::replace(&mut seen[w], true) {
                    queue.push_back(w);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for e in &self.edges {
            adj[e[0]].push(e[1]);
            adj[e[1]].push(e[0]);
        }
        adj
    }

    /// Checks the closed-surface invariants.
    pub fn check_closed_surface(&self) -> Result<(), ComplexError> {
        if self.vertex_count <= 1 || self.triangles.is_empty() {
            return Err(violated(
                "closed surface",
                format!("{} vertices and {} triangles", self.vertex_count, self.triangles.len()),
            ));
        }
        for (e, count) in self.edge_triangle_counts() {
            if count != 2 {
                return Err(violated(
                    "closed surface: edge in exactly two triangles",
                    format!("edge {e:?} lies in {count} triangles"),
                ));
            }
        }
        let mut links: Vec<Vec<[usize; 2]>> = vec![Vec::new(); self.vertex_count];
        for t in &self.triangles {
            links[t[0]].push([t[1], t[2]]);
            links[t[1]].push([t[0], t[2]]);
            links[t[2]].push([t[0], t[1]]);
        }
        for (v, link) in links.iter().enumerate() {
            if !is_single_cycle(link) {
                return Err(violated(
                    "closed surface: vertex link is a single cycle",
                    format!("link of vertex {v} is not a cycle"),
                ));
            }
        }
        if !self.is_connected() {
            return Err(violated("closed surface: connected", "complex has several components"));
        }
        Ok(())
    }

    /// Coherently orients all triangles by propagation across shared edges.
    /// Returns `None` when the complex is not orientable (or an edge has
    /// more than two triangles).
    pub fn orient(&self) -> Option<Vec<[usize; 3]>> {
        let mut by_edge: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            for e in [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]] {
                by_edge.entry(e).or_default().push(i);
            }
        }
        if by_edge.values().any(|v| v.len() > 2) {
            return None;
        }
        let mut oriented: Vec<Option<[usize; 3]>> = vec![None; self.triangles.len()];
        for start in 0..self.triangles.len() {
            if oriented[start].is_some() {
                continue;
            }
            oriented[start] = Some(self.triangles[start]);
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                let t = oriented[i].expect("queued triangles are oriented");
                for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])] {
                    let key = [a.min(b), a.max(b)];
                    for &j in &by_edge[&key] {
                        if j == i {
                            continue;
                        }
                        // The neighbour must traverse the shared edge as b -> a.
                        let u = self.triangles[j];
                        let third = u.iter().copied().find(|&x| x != a && x != b).expect("triangle");
                        let want = [b, a, third];
                        match oriented[j] {
                            None => {
                                oriented[j] = Some(want);
                                queue.push_back(j);
                            }
                            Some(have) => {
                                if !same_cyclic_order(&have, &want) {
                                    return None;
                                }
                            }
                        }
                    }
                }
            }
        }
        Some(oriented.into_iter().map(|t| t.expect("all oriented")).collect())
    }

    /// Applies a vertex relabeling `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, ComplexError> {
        let edges: Vec<[usize; 2]> = self.edges.iter().map(|e| [perm[e[0]], perm[e[1]]]).collect();
        let tris: Vec<[usize; 3]> =
            self.triangles.iter().map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]]).collect();
        SimplicialComplex::new(self.vertex_count, &edges, &tris)
    }

    pub(crate) fn edge_set(&self) -> HashSet<[usize; 2]> {
        self.edges.iter().copied().collect()
    }

    pub(crate) fn triangle_set(&self) -> HashSet<[usize; 3]> {
        self.triangles.iter().copied().collect()
    }
}

fn same_cyclic_order(a: &[usize; 3], b: &[usize; 3]) -> bool {
    (0..3).any(|r| (0..3).all(|i| a[(i + r) % 3] == b[i]))
}

fn is_single_cycle(link: &[[usize; 2]]) -> bool {
    if link.len() < 3 {
        return false;
    }
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for e in link {
        adj.entry(e[0]).or_default().push(e[1]);
        adj.entry(e[1]).or_default().push(e[0]);
    }
    if adj.values().any(|n| n.len() != 2) || adj.len() != link.len() {
        return false;
    }
    // Walk the cycle from the first vertex.
    let start = *adj.keys().next().expect("nonempty");
    let (mut prev, mut cur) = (start, adj[&start][0]);
    let mut steps = 1;
    while cur != start {
        let n = &adj[&cur];
        let next = if n[0] == prev { n[1] } else { n[0] };
        prev = cur;
        cur = next;
        steps += 1;
        if steps > link.len() {
            return false;
        }
    }
    steps == link.len()
}

/// A simplicial complex with exact rational vertex coordinates in `R^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddedComplex {
    complex: SimplicialComplex,
    dim: usize,
    coords: Vec<Point>,
}

impl EmbeddedComplex {
    /// Validates coordinate shape, vertex injectivity and affine
    /// independence of every triangle.
    pub fn new(complex: SimplicialComplex, dim: usize, coords: Vec<Point>) -> Result<Self, ComplexError> {
        if coords.len() != complex.vertex_count() {
            return Err(violated(
                "coordinate count",
                format!("{} vertices but {} coordinate vectors", complex.vertex_count(), coords.len()),
            ));
        }
        if let Some((i, p)) = coords.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(violated("coordinate dimension", format!("vertex {i} has {} coordinates, expected {dim}", p.len())));
        }
        let mut seen = HashSet::with_capacity(coords.len());
        for (i, p) in coords.iter().enumerate() {
            if !seen.insert(p) {
                return Err(violated("coordinates injective on vertices", format!("vertex {i} repeats a position")));
            }
        }
        for t in complex.triangles() {
            if !affinely_independent(&[&coords[t[0]], &coords[t[1]], &coords[t[2]]]) {
                return Err(violated("triangle affinely independent", format!("triangle {t:?}")));
            }
        }
        Ok(EmbeddedComplex { complex, dim, coords })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }

    /// Vertex `i` placed at the `i`-th standard basis point of `R^(V-1)`
    /// (vertex 0 at the origin). Every complex embeds this way.
    pub fn canonical(complex: SimplicialComplex) -> Self {
        let v = complex.vertex_count();
        let dim = v.saturating_sub(1);
        let coords = (0..v)
            .map(|i| {
                let mut p = vec![crate::exact::int(0); dim];
                if i > 0 {
                    p[i - 1] = crate::exact::int(1);
                }
                p
            })
            .collect();
        EmbeddedComplex { complex, dim, coords }
    }
}

pub fn euler_characteristic(c: &EmbeddedComplex) -> i64 {
    c.euler_characteristic()
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::exact::int;

    #[test]
    fn octahedron_is_a_sphere() {
        let o = octahedron();
        assert_eq!(o.complex().edges().len(), 12);
        assert_eq!(o.euler_characteristic(), 2);
        o.complex().check_closed_surface().unwrap();
        assert!(o.complex().orient().is_some());
    }

    #[test]
    fn interval_has_euler_one() {
        assert_eq!(interval().euler_characteristic(), 1);
    }

    #[test]
    fn edge_in_three_triangles_is_not_a_surface() {
        let mut tris = octahedron_triangles();
        tris.push([0, 2, 6]);
        let c = SimplicialComplex::new(7, &[], &tris).unwrap();
        let err = c.check_closed_surface().unwrap_err();
        assert!(matches!(err, ComplexError::Invariant { invariant, .. } if invariant.contains("two triangles")));
    }

    #[test]
    fn degenerate_inputs() {
        assert!(SimplicialComplex::new(0, &[], &[]).unwrap().check_closed_surface().is_err());
        assert!(SimplicialComplex::new(1, &[], &[]).unwrap().check_closed_surface().is_err());
        assert!(SimplicialComplex::new(3, &[[0, 0]], &[]).is_err());
        assert!(SimplicialComplex::new(3, &[], &[[0, 1, 3]]).is_err());
        assert!(SimplicialComplex::new(3, &[], &[[0, 1, 2], [2, 1, 0]]).is_err());
    }

    #[test]
    fn two_disjoint_octahedra_are_disconnected() {
        let mut tris = octahedron_triangles();
        tris.extend(octahedron_triangles().iter().map(|t| [t[0] + 6, t[1] + 6, t[2] + 6]));
        let c = SimplicialComplex::new(12, &[], &tris).unwrap();
        assert!(c.check_closed_surface().is_err());
        assert_eq!(c.euler_characteristic(), 4);
    }

    #[test]
    fn pinched_vertex_link_is_rejected() {
        // Two octahedra glued at one vertex: the link of that vertex has two cycles.
        let mut tris = octahedron_triangles();
        let shift = |v: usize| if v == 0 { 0 } else { v + 5 };
        tris.extend(octahedron_triangles().iter().map(|t| [shift(t[0]), shift(t[1]), shift(t[2])]));
        let c = SimplicialComplex::new(11, &[], &tris).unwrap();
        let err = c.check_closed_surface().unwrap_err();
        assert!(err.to_string().contains("link"));
    }

    #[test]
    fn projective_plane_is_not_orientable() {
        // Six-vertex real projective plane.
        let tris = [
            [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 5, 1],
            [1, 2, 4], [2, 3, 5], [3, 4, 1], [4, 5, 2], [5, 1, 3],
        ];
        let c = SimplicialComplex::new(6, &[], &tris).unwrap();
        c.check_closed_surface().unwrap();
        assert_eq!(c.euler_characteristic(), 1);
        assert!(c.orient().is_none());
    }

    #[test]
    fn coordinate_invariants() {
        let c = SimplicialComplex::new(3, &[], &[[0, 1, 2]]).unwrap();
        let line = vec![vec![int(0), int(0)], vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(EmbeddedComplex::new(c.clone(), 2, line).is_err());
        let dup = vec![vec![int(0), int(0)], vec![int(0), int(0)], vec![int(2), int(1)]];
        assert!(EmbeddedComplex::new(c.clone(), 2, dup).is_err());
        let short = vec![vec![int(0)], vec![int(1), int(0)], vec![int(0), int(1)]];
        assert!(EmbeddedComplex::new(c, 2, short).is_err());
    }

    #[test]
    fn euler_is_invariant_under_relabeling() {
        let o = octahedron();
        let perm = [3, 5, 0, 1, 4, 2];
        let r = o.complex().relabel(&perm).unwrap();
        assert_eq!(r.euler_characteristic(), o.euler_characteristic());
    }
}
