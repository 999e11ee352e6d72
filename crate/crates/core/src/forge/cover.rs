use num_integer::Integer;
use serde::Serialize;

use super::{
    audit_monodromy, first_primes, monodromy, orbifold_signature, riemann_hurwitz, ForgeError, MonodromyData,
    OrbifoldSignature, MAX_FORGE_L,
};
use crate::complex::{validate_action, EmbeddedComplex, SimplicialComplex, VertexAction};
use crate::group::make_cyclic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Slit cover of the bipyramid over the cone points.
    SlitCover,
    /// Octahedron with a half-turn about the axis through two vertices.
    RotationSphere,
}

/// A branch point of the base together with the expected deck behaviour
/// over it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConePoint {
    pub base_vertex: usize,
    /// Ramification index `delta`.
    pub index: u64,
    /// `P / delta` vertices lie over it, forming one orbit.
    pub fiber_length: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForgeMetadata {
    pub l: usize,
    pub primes: Vec<u64>,
    #[serde(rename = "P")]
    pub order: u64,
    pub cone_indices: Vec<u64>,
    pub genus: i64,
    pub chi: i64,
}

/// A triangulated closed orientable surface `F` with the deck action of
/// `Z_P` (label 2 is the generator `f`) and the projection to the base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchedCoverSurface {
    pub construction: Construction,
    pub l: usize,
    pub primes: Vec<u64>,
    pub order: u64,
    pub monodromy: Option<MonodromyData>,
    pub cone_points: Vec<ConePoint>,
    pub complex: SimplicialComplex,
    pub deck: VertexAction,
    /// Base vertex under each vertex of `F`.
    pub projection: Vec<usize>,
    pub base_vertex_count: usize,
    pub chi: i64,
    pub genus: i64,
}

impl BranchedCoverSurface {
    pub fn metadata(&self) -> ForgeMetadata {
        ForgeMetadata {
            l: self.l,
            primes: self.primes.clone(),
            order: self.order,
            cone_indices: self.cone_points.iter().map(|c| c.index).collect(),
            genus: self.genus,
            chi: self.chi,
        }
    }

    /// Vertices lying over a base vertex, ascending.
    pub fn fiber(&self, base_vertex: usize) -> Vec<usize> {
        (0..self.projection.len()).filter(|&x| self.projection[x] == base_vertex).collect()
    }

    /// Vertex `i` at the `i`-th standard basis point of `R^(V-1)`.
    pub fn canonical_embedding(&self) -> EmbeddedComplex {
        EmbeddedComplex::canonical(self.complex.clone())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Cyclic `order`-fold cover of the sphere branched over one cone point per
/// entry of `shifts`.
///
/// The base is the bipyramid with apexes `b = 0`, `s = 1` over the ring
/// `r_0..r_{2N-1}` (vertices `2..2N+1`), cone point `t` at `r_{2t}` and a
/// regular vertex at each odd ring position. Triangles are `(b, r_i, r_{i+1})`
/// and `(s, r_{i+1}, r_i)`. The slit at cone point `t` is the edge
/// `(b, r_{2t})`; crossing it counterclockwise about `b` moves from sheet `k`
/// to sheet `k + shifts[t]`. Vertices of the cover are numbered copy-major:
/// by sheet, then by base vertex.
pub fn build_slit_cover(order: u64, shifts: &[u64]) -> Result<BranchedCoverSurface, ForgeError> {
    let n_cone = shifts.len();
    if order < 2 || n_cone < 2 {
        return Err(ForgeError::Domain(format!("degree {order} with {n_cone} cone points")));
    }
    if shifts.iter().sum::<u64>() % order != 0 {
        return Err(ForgeError::Construction("slit shifts do not sum to 0: the apex would branch".into()));
    }
    let p = order as usize;
    let ring = 2 * n_cone;
    let rv = |i: usize| 2 + i % ring;
    let base_vertex_count = ring + 2;
    let mut base_tris = Vec::with_capacity(2 * ring);
    for i in 0..ring {
        base_tris.push([0, rv(i), rv(i + 1)]);
    }
    for i in 0..ring {
        base_tris.push([1, rv(i + 1), rv(i)]);
    }
    let upper = |i: usize| i % ring;
    let lower = |i: usize| ring + i % ring;

    let corner = |t: usize, k: usize, pos: usize| (t * p + k) * 3 + pos;
    let pos_of = |t: usize, v: usize| base_tris[t].iter().position(|&x| x == v).expect("vertex of triangle");
    let mut uf = UnionFind::new(base_tris.len() * p * 3);
    let mut glue = |t1: usize, t2: usize, edge: [usize; 2], shift: usize| {
        for k in 0..p {
            let k2 = (k + shift) % p;
            for v in edge {
                uf.union(corner(t1, k, pos_of(t1, v)), corner(t2, k2, pos_of(t2, v)));
            }
        }
    };
    for i in 0..ring {
        let shift = if i % 2 == 0 { (shifts[i / 2] % order) as usize } else { 0 };
        glue(upper(i + ring - 1), upper(i), [0, rv(i)], shift);
        glue(upper(i), lower(i), [rv(i), rv(i + 1)], 0);
        glue(lower(i + ring - 1), lower(i), [1, rv(i)], 0);
    }

    // Each class is keyed by the first sheet in which it meets the first
    // base triangle around its base vertex.
    let n_corners = base_tris.len() * p * 3;
    let mut reference = vec![usize::MAX; base_vertex_count];
    for (t, tri) in base_tris.iter().enumerate() {
        for &v in tri {
            reference[v] = reference[v].min(t);
        }
    }
    let mut class_key: Vec<Option<(usize, usize)>> = vec![None; n_corners];
    for t in 0..base_tris.len() {
        for k in 0..p {
            for pos in 0..3 {
                if reference[base_tris[t][pos]] != t {
                    continue;
                }
                let root = uf.find(corner(t, k, pos));
                let key = (k, base_tris[t][pos]);
                let slot = &mut class_key[root];
                if slot.is_none_or(|old| key < old) {
                    *slot = Some(key);
                }
            }
        }
    }
    let mut roots: Vec<(usize, usize, usize)> = class_key
        .iter()
        .enumerate()
        .filter_map(|(root, key)| key.map(|(k, v)| (k, v, root)))
        .collect();
    roots.sort_unstable();
    let mut vertex_of_root = vec![usize::MAX; n_corners];
    let mut projection = Vec::with_capacity(roots.len());
    let mut rep = Vec::with_capacity(roots.len());
    for (idx, &(_, v, root)) in roots.iter().enumerate() {
        vertex_of_root[root] = idx;
        projection.push(v);
        rep.push(root);
    }
    let vcount = roots.len();
    let mut vertex = |c: usize| vertex_of_root[uf.find(c)];

    let mut triangles = Vec::with_capacity(base_tris.len() * p);
    for t in 0..base_tris.len() {
        for k in 0..p {
            triangles.push([vertex(corner(t, k, 0)), vertex(corner(t, k, 1)), vertex(corner(t, k, 2))]);
        }
    }
    let complex = SimplicialComplex::new(vcount, &[], &triangles)?;

    // Any corner of a vertex's class, shifted by e sheets, lands in the class
    // of its image under f^e.
    let rep_corner: Vec<(usize, usize, usize)> = rep.iter().map(|&c| (c / 3 / p, (c / 3) % p, c % 3)).collect();
    let perms = (0..p)
        .map(|e| rep_corner.iter().map(|&(t, k, pos)| vertex(corner(t, (k + e) % p, pos))).collect())
        .collect();
    let deck = VertexAction::new(make_cyclic(p)?, perms)?;

    let cone_points = (0..n_cone)
        .map(|t| {
            let index = order / (shifts[t] % order).gcd(&order);
            ConePoint { base_vertex: rv(2 * t), index, fiber_length: order / index }
        })
        .collect::<Vec<_>>();
    let indices: Vec<u64> = cone_points.iter().map(|c| c.index).collect();
    let rh = riemann_hurwitz(order, &indices)?;

    let surface = BranchedCoverSurface {
        construction: Construction::SlitCover,
        l: 0,
        primes: Vec::new(),
        order,
        monodromy: None,
        cone_points,
        complex,
        deck,
        projection,
        base_vertex_count,
        chi: rh.chi,
        genus: rh.genus,
    };
    check_surface(&surface)?;
    Ok(surface)
}

/// Structural audits every forged surface must pass: closed connected
/// surface, orientable, valid faithful simplicial deck action, and the
/// simplex-count Euler characteristic equal to the Riemann-Hurwitz value.
fn check_surface(s: &BranchedCoverSurface) -> Result<(), ForgeError> {
    s.complex.check_closed_surface()?;
    if s.complex.orient().is_none() {
        return Err(ForgeError::Construction("surface is not orientable".into()));
    }
    let counted = s.complex.euler_characteristic();
    if counted != s.chi {
        return Err(ForgeError::Construction(format!(
            "V - E + F = {counted} but Riemann-Hurwitz predicts {}",
            s.chi
        )));
    }
    let report = validate_action(&s.complex, &s.deck);
    if !report.passed() {
        return Err(ForgeError::Construction(format!("deck action invalid: {report:?}")));
    }
    Ok(())
}

/// The slit cover for an audited signature and monodromy.
pub fn build_branched_cover(sig: &OrbifoldSignature, mono: &MonodromyData) -> Result<BranchedCoverSurface, ForgeError> {
    let audit = audit_monodromy(sig, mono);
    if !audit.passed() {
        return Err(ForgeError::Monodromy(format!("{audit:?}")));
    }
    let mut s = build_slit_cover(sig.order, &mono.shifts())?;
    let got: Vec<u64> = s.cone_points.iter().map(|c| c.index).collect();
    if got != sig.cone_indices {
        return Err(ForgeError::Construction(format!(
            "cover has cone indices {got:?}, signature has {:?}",
            sig.cone_indices
        )));
    }
    s.l = sig.l;
    s.primes = sig.primes.clone();
    s.monodromy = Some(mono.clone());
    Ok(s)
}

/// Octahedron on `+x, -x, +y, -y, +z, -z` with the half-turn
/// `(x, y, z) -> (-x, -y, z)`. The two poles are fixed; the other orbits
/// have length 2.
pub fn rotation_sphere() -> Result<BranchedCoverSurface, ForgeError> {
    let mut triangles = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                triangles.push([x, y, z]);
            }
        }
    }
    let complex = SimplicialComplex::new(6, &[], &triangles)?;
    let deck = VertexAction::new(make_cyclic(2)?, vec![(0..6).collect(), vec![1, 0, 3, 2, 4, 5]])?;
    let cone_points = vec![
        ConePoint { base_vertex: 2, index: 2, fiber_length: 1 },
        ConePoint { base_vertex: 3, index: 2, fiber_length: 1 },
    ];
    let rh = riemann_hurwitz(2, &[2, 2])?;
    let surface = BranchedCoverSurface {
        construction: Construction::RotationSphere,
        l: 1,
        primes: first_primes(1)?,
        order: 2,
        monodromy: None,
        cone_points,
        complex,
        deck,
        projection: vec![0, 0, 1, 1, 2, 3],
        base_vertex_count: 4,
        chi: rh.chi,
        genus: rh.genus,
    };
    check_surface(&surface)?;
    Ok(surface)
}

/// The surface for `l`: the rotation sphere for `l = 1`, the slit cover
/// otherwise.
pub fn forge_surface(l: usize) -> Result<BranchedCoverSurface, ForgeError> {
    match l {
        0 => Err(ForgeError::Domain("l must be at least 1".into())),
        1 => rotation_sphere(),
        l if l > MAX_FORGE_L => Err(ForgeError::Capacity { l, cap: MAX_FORGE_L }),
        l => {
            let sig = orbifold_signature(l)?;
            let mono = monodromy(&sig)?;
            build_branched_cover(&sig, &mono)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::literal_misprint_monodromy;
    use crate::group::orbits;

    #[test]
    fn genus_two_counts() {
        let s = forge_surface(2).unwrap();
        let c = &s.complex;
        assert_eq!((c.vertex_count(), c.edges().len(), c.triangles().len()), (46, 144, 96));
        assert_eq!((s.chi, s.genus, s.order), (-2, 2, 6));
        assert_eq!(s.deck.group().order(), 6);
        assert!(s.deck.group().is_cyclic());
        let lens: Vec<usize> = s.cone_points.iter().map(|cp| s.fiber(cp.base_vertex).len()).collect();
        assert_eq!(lens, vec![2, 2, 3, 3]);
    }

    #[test]
    fn genus_51_counts() {
        let s = forge_surface(3).unwrap();
        assert_eq!(s.complex.vertex_count(), 260);
        assert_eq!((s.chi, s.genus), (-100, 51));
        assert_eq!(s.metadata().cone_indices, vec![15, 15, 10, 10, 6, 6]);
    }

    #[test]
    fn deck_orbits_match_fibers() {
        let s = forge_surface(2).unwrap();
        let o = orbits(&s.deck).unwrap();
        for orbit in &o.orbits {
            let base = s.projection[orbit[0]];
            assert!(orbit.iter().all(|&x| s.projection[x] == base));
            assert_eq!(orbit, &s.fiber(base));
        }
        assert_eq!(o.orbits.len(), s.base_vertex_count);
    }

    #[test]
    fn construction_is_deterministic() {
        let (a, b) = (forge_surface(2).unwrap(), forge_surface(2).unwrap());
        assert_eq!(a, b);
        // sheet 0 holds one vertex over every base vertex
        assert_eq!(a.projection[..10], [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn rotation_sphere_is_a_sphere() {
        let s = forge_surface(1).unwrap();
        assert_eq!((s.chi, s.genus, s.order), (2, 0, 2));
        assert_eq!(s.fiber(2), vec![4]);
        assert_eq!(s.metadata().cone_indices, vec![2, 2]);
    }

    #[test]
    fn misprint_monodromy_is_refused() {
        let sig = orbifold_signature(2).unwrap();
        let bad = literal_misprint_monodromy(&sig);
        assert!(matches!(build_branched_cover(&sig, &bad), Err(ForgeError::Monodromy(_))));
        // built anyway, the cover falls apart into three sheets' worth of pieces
        assert!(build_slit_cover(6, &bad.shifts()).is_err());
    }

    #[test]
    fn limits() {
        assert!(forge_surface(0).is_err());
        assert_eq!(forge_surface(5), Err(ForgeError::Capacity { l: 5, cap: 4 }));
        assert!(build_slit_cover(6, &[1, 1]).is_err());
    }
}
