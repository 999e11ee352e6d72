//! Equivariant lifting of an embedding.
//!
//! Given `e: M -> R^d` and a group `G = {1..n}` acting on `M`, the stacked
//! map `E(x) = (e(rho(1)x), ..., e(rho(n)x))` lands in `R^(dn)`, and `G`
//! acts on `R^(dn)` by permuting the `n` blocks: `(R(j) y)_i = y_{i*j}`.
//! Then `R(j) E(x) = E(rho(j) x)` for every `j` and `x`. When some `R(j)` has
//! determinant `-1`, one extra coordinate carrying `det R(j)` is appended so
//! that every matrix lies in `SO(dn + 1)`.
//!
//! Matrices are kept in structural form (block permutation, block size and
//! an optional sign on the last coordinate) and applied without
//! materialization; [`BlockOrthogonalRep::dense`] exists for cross-checks.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{ComplexError, EmbeddedComplex, VertexAction};
use crate::exact::{Point, Rational};
use crate::group::{right_mult_permutation, CayleyPermutation, GroupError, GroupTable, Label};

/// Default bound on the ambient dimension of a lift.
pub const DEFAULT_DIMENSION_CAP: usize = 100_000;

#[derive(Debug, Error)]
pub enum LiftError {
    #[error("block size must be positive")]
    BlockSize,
    #[error("lift dimension {requested} exceeds cap {cap}")]
    Capacity { requested: usize, cap: usize },
    #[error("lifted coordinates live in R^{coords} but the representation acts on R^{rep}")]
    DimensionMismatch { coords: usize, rep: usize },
    #[error("action permutes {action} vertices but the complex has {complex}")]
    VertexMismatch { action: usize, complex: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// The block permutation representation of a finite group, optionally
/// extended by a determinant coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockOrthogonalRep {
    group: GroupTable,
    block_size: usize,
    blocks: Vec<CayleyPermutation>,
    /// `det R(g)` per element, present when extended.
    detcol: Option<Vec<i8>>,
}

pub fn build_block_rep(group: &GroupTable, d: usize) -> Result<BlockOrthogonalRep, LiftError> {
    if d == 0 {
        return Err(LiftError::BlockSize);
    }
    let blocks = group
        .elements()
        .map(|g| right_mult_permutation(group, g))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BlockOrthogonalRep { group: group.clone(), block_size: d, blocks, detcol: None })
}

impl BlockOrthogonalRep {
    pub fn group(&self) -> &GroupTable {
        &self.group
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn block(&self, g: Label) -> &CayleyPermutation {
        &self.blocks[g - 1]
    }

    pub fn is_extended(&self) -> bool {
        self.detcol.is_some()
    }

    /// Ambient dimension: `d*n`, plus one when extended.
    pub fn dim(&self) -> usize {
        self.block_size * self.group.order() + usize::from(self.is_extended())
    }

    /// Determinant of the unextended block matrix: `parity(sigma_g)^d`.
    pub fn block_det(&self, g: Label) -> i8 {
        let parity = self.blocks[g - 1].parity;
        if parity == -1 && self.block_size % 2 == 1 {
            -1
        } else {
            1
        }
    }

    /// Determinant of the represented matrix, extension included.
    pub fn det(&self, g: Label) -> i8 {
        match &self.detcol {
            Some(col) => self.block_det(g) * col[g - 1],
            None => self.block_det(g),
        }
    }

    /// The entry on the extra diagonal coordinate, if extended.
    pub fn detcol(&self, g: Label) -> Option<i8> {
        self.detcol.as_ref().map(|c| c[g - 1])
    }

    pub fn needs_extension(&self) -> bool {
        self.group.elements().any(|g| self.block_det(g) == -1)
    }

    /// Appends the determinant coordinate unconditionally.
    pub fn extended(mut self) -> Self {
        if self.detcol.is_none() {
            let col = self.group.elements().map(|g| self.block_det(g)).collect();
            self.detcol = Some(col);
        }
        self
    }

    /// Applies `R(g)` to `y`: output block `i` is input block `i*g`.
    pub fn apply(&self, g: Label, y: &[Rational]) -> Point {
        let d = self.block_size;
        let sigma = &self.blocks[g - 1];
        let mut out = Vec::with_capacity(y.len());
        for i in 1..=self.group.order() {
            let src = (sigma.apply(i) - 1) * d;
            out.extend_from_slice(&y[src..src + d]);
        }
        if let Some(col) = &self.detcol {
            let last = &y[y.len() - 1];
            out.push(if col[g - 1] == 1 { last.clone() } else { -last });
        }
        out
    }

    /// Dense integer matrix of `R(g)`, row-major.
    pub fn dense(&self, g: Label) -> Vec<Vec<i64>> {
        let m = self.dim();
        let d = self.block_size;
        let sigma = &self.blocks[g - 1];
        let mut a = vec![vec![0i64; m]; m];
        for i in 1..=self.group.order() {
            let (row, col) = ((i - 1) * d, (sigma.apply(i) - 1) * d);
            for k in 0..d {
                a[row + k][col + k] = 1;
            }
        }
        if let Some(c) = &self.detcol {
            a[m - 1][m - 1] = c[g - 1] as i64;
        }
        a
    }
}

/// Matrix product skipping zeros; representation matrices have one nonzero
/// per row.
pub fn dense_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut c = vec![vec![0i64; n]; n];
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik == 0 {
                continue;
            }
            for (j, &bkj) in b[k].iter().enumerate() {
                if bkj != 0 {
                    c[i][j] += aik * bkj;
                }
            }
        }
    }
    c
}

pub fn dense_transpose(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

pub fn is_identity(a: &[Vec<i64>]) -> bool {
    a.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == i64::from(i == j)))
}

/// An equivariant lift: the source complex re-embedded in `R^m` together
/// with the representation it is equivariant for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedEmbedding {
    complex: EmbeddedComplex,
    source_dim: usize,
    rep: BlockOrthogonalRep,
}

impl LiftedEmbedding {
    /// Reassembles a lift from stored parts (e.g. files); checks dimensions only.
    pub fn from_parts(complex: EmbeddedComplex, rep: BlockOrthogonalRep) -> Result<Self, LiftError> {
        if complex.dim() != rep.dim() {
            return Err(LiftError::DimensionMismatch { coords: complex.dim(), rep: rep.dim() });
        }
        let source_dim = rep.block_size();
        Ok(LiftedEmbedding { complex, source_dim, rep })
    }

    pub fn complex(&self) -> &EmbeddedComplex {
        &self.complex
    }

    pub fn rep(&self) -> &BlockOrthogonalRep {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn coords(&self) -> &[Point] {
        self.complex.coords()
    }

    /// The `i`-th block (1-based) of the lifted coordinates of `x`.
    pub fn block(&self, x: usize, i: Label) -> &[Rational] {
        let d = self.rep.block_size();
        &self.complex.coords()[x][(i - 1) * d..i * d]
    }
}

/// Builds `E(x) = (e(rho(1)x), ..., e(rho(n)x))` with `m = d*n`.
pub fn stack_embedding(c: &EmbeddedComplex, a: &VertexAction, cap: usize) -> Result<LiftedEmbedding, LiftError> {
    if a.vertex_count() != c.complex().vertex_count() {
        return Err(LiftError::VertexMismatch { action: a.vertex_count(), complex: c.complex().vertex_count() });
    }
    let d = c.dim().max(1);
    let n = a.group().order();
    let m = d.saturating_mul(n);
    if m > cap {
        return Err(LiftError::Capacity { requested: m, cap });
    }
    let rep = build_block_rep(a.group(), d)?;
    let src = c.coords();
    let coords: Vec<Point> = (0..src.len())
        .map(|x| {
            let mut p = Vec::with_capacity(m);
            for g in a.group().elements() {
                let y = &src[a.apply(g, x)];
                if y.is_empty() {
                    p.push(Rational::zero());
                } else {
                    p.extend_from_slice(y);
                }
            }
            p
        })
        .collect();
    let complex = EmbeddedComplex::new(c.complex().clone(), m, coords)?;
    Ok(LiftedEmbedding { complex, source_dim: c.dim(), rep })
}

fn extend_lift(le: LiftedEmbedding) -> LiftedEmbedding {
    let m = le.rep.dim() + 1;
    let coords = le
        .complex
        .coords()
        .iter()
        .map(|p| {
            let mut q = p.clone();
            q.push(Rational::zero());
            q
        })
        .collect();
    let complex = EmbeddedComplex::new(le.complex.complex().clone(), m, coords)
        .expect("appending a constant coordinate keeps the embedding valid");
    LiftedEmbedding { complex, source_dim: le.source_dim, rep: le.rep.extended() }
}

/// Appends the determinant coordinate when some `R(g)` reverses orientation;
/// otherwise returns the lift unchanged.
pub fn determinant_extend(le: LiftedEmbedding) -> LiftedEmbedding {
    if le.rep.is_extended() || !le.rep.needs_extension() {
        le
    } else {
        extend_lift(le)
    }
}

/// Appends the determinant coordinate even when every `R(g)` is already
/// orientation preserving.
pub fn force_extend(le: LiftedEmbedding) -> LiftedEmbedding {
    if le.rep.is_extended() {
        le
    } else {
        extend_lift(le)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivarianceFailure {
    pub element: Label,
    pub vertex: usize,
    pub image: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    pub checked: usize,
    /// Failing `(g, x)` pairs in `(g, x)` order.
    pub failures: Vec<EquivarianceFailure>,
}

impl EquivarianceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `R(g) E(x) = E(rho(g) x)` exactly for every `g` and vertex `x`.
pub fn verify_equivariance(le: &LiftedEmbedding, a: &VertexAction) -> EquivarianceReport {
    let coords = le.coords();
    let mut failures = Vec::new();
    let mut checked = 0;
    for g in a.group().elements() {
        for (x, p) in coords.iter().enumerate() {
            checked += 1;
            let image = a.apply(g, x);
            if le.rep.apply(g, p) != coords[image] {
                failures.push(EquivarianceFailure { element: g, vertex: x, image });
            }
        }
    }
    EquivarianceReport { checked, failures }
}
