//! JSON file formats and OFF export.
//!
//! Rationals are written as `"p/q"` strings; group labels are 1-based and
//! vertex indices 0-based throughout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_rational::Ratio;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certifier::{OrthogonalOperator, RotationBlocks, Witness};
use crate::complex::{ComplexError, ComplexKind, EmbeddedComplex, SimplicialComplex, VertexAction};
use crate::exact::{format_rational, parse_rational, to_f64, ParseRationalError, Point};
use crate::group::{GroupError, GroupTable, Label};
use crate::lifter::{build_block_rep, BlockOrthogonalRep, LiftError};
use crate::manifest::RunManifest;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Lift(#[from] LiftError),
}

fn invalid(msg: impl Into<String>) -> FormatError {
    FormatError::Invalid(msg.into())
}

pub fn read_bytes(path: &Path) -> Result<Vec<u8>, FormatError> {
    std::fs::read(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn parse_json<T: DeserializeOwned>(path: &Path, bytes: &[u8]) -> Result<T, FormatError> {
    serde_json::from_slice(bytes).map_err(|source| FormatError::Json { path: path.to_path_buf(), source })
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    parse_json(path, &read_bytes(path)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), FormatError> {
    std::fs::write(path, to_json_string(value)).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupFile {
    pub order: usize,
    pub table: Vec<Vec<usize>>,
}

impl GroupFile {
    pub fn from_table(t: &GroupTable) -> Self {
        GroupFile { order: t.order(), table: t.rows() }
    }

    pub fn to_table(&self) -> Result<GroupTable, FormatError> {
        if self.table.len() != self.order {
            return Err(invalid(format!("order {} but {} table rows", self.order, self.table.len())));
        }
        Ok(GroupTable::from_rows(&self.table)?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupRef {
    Inline(GroupFile),
    Path(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionBlock {
    pub group: GroupRef,
    /// `perms[g][x] = rho(g)(x)`, keyed by 1-based label.
    pub perms: BTreeMap<Label, Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Simplices {
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub triangles: Vec<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RepRef {
    Inline(RepFile),
    Path(String),
}

/// Complex file. Either `vertices` (with `dim`) or `vertex_count` must be
/// present; the latter describes an abstract complex without coordinates.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<String>>>,
    pub simplices: Simplices,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<ActionBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representation: Option<RepRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<RunManifest>,
}

/// A complex file with references resolved and every part validated.
#[derive(Debug, Clone)]
pub struct LoadedComplex {
    pub kind: ComplexKind,
    pub complex: SimplicialComplex,
    pub embedded: Option<EmbeddedComplex>,
    pub action: Option<VertexAction>,
    pub representation: Option<BlockOrthogonalRep>,
    pub metadata: Option<serde_json::Value>,
}

impl LoadedComplex {
    /// The given coordinates, or the canonical simplex coordinates.
    pub fn embedded_or_canonical(&self) -> EmbeddedComplex {
        self.embedded.clone().unwrap_or_else(|| EmbeddedComplex::canonical(self.complex.clone()))
    }
}

pub fn encode_points(coords: &[Point]) -> Vec<Vec<String>> {
    coords.iter().map(|p| p.iter().map(format_rational).collect()).collect()
}

pub fn decode_points(rows: &[Vec<String>]) -> Result<Vec<Point>, FormatError> {
    rows.iter()
        .map(|p| p.iter().map(|s| parse_rational(s)).collect::<Result<Point, _>>())
        .collect::<Result<_, _>>()
        .map_err(FormatError::from)
}

pub fn encode_action(a: &VertexAction) -> ActionBlock {
    ActionBlock {
        group: GroupRef::Inline(GroupFile::from_table(a.group())),
        perms: a.group().elements().map(|g| (g, a.perm(g).to_vec())).collect(),
    }
}

impl ComplexFile {
    pub fn abstract_complex(c: &SimplicialComplex) -> Self {
        ComplexFile {
            vertex_count: Some(c.vertex_count()),
            simplices: Simplices { edges: c.edges().to_vec(), triangles: c.triangles().to_vec() },
            ..Default::default()
        }
    }

    pub fn embedded(e: &EmbeddedComplex) -> Self {
        ComplexFile {
            dim: Some(e.dim()),
            vertices: Some(encode_points(e.coords())),
            ..ComplexFile::abstract_complex(e.complex())
        }
    }

    pub fn with_action(mut self, a: &VertexAction) -> Self {
        self.action = Some(encode_action(a));
        self
    }

    pub fn with_kind(mut self, kind: ComplexKind) -> Self {
        self.kind = match kind {
            ComplexKind::General => None,
            ComplexKind::Surface => Some("surface".into()),
        };
        self
    }

    /// Resolves relative paths against `base_dir` and validates.
    pub fn resolve(&self, base_dir: &Path) -> Result<LoadedComplex, FormatError> {
        let kind = match self.kind.as_deref() {
            None | Some("general") => ComplexKind::General,
            Some("surface") => ComplexKind::Surface,
            Some(other) => return Err(invalid(format!("unknown complex kind `{other}`"))),
        };
        let coords = self.vertices.as_deref().map(decode_points).transpose()?;
        let vertex_count = match (&coords, self.vertex_count) {
            (Some(c), Some(n)) if c.len() != n => {
                return Err(invalid(format!("vertex_count {n} but {} vertices listed", c.len())))
            }
            (Some(c), _) => c.len(),
            (None, Some(n)) => n,
            (None, None) => return Err(invalid("complex file needs `vertices` or `vertex_count`")),
        };
        let complex = SimplicialComplex::new(vertex_count, &self.simplices.edges, &self.simplices.triangles)?;
        if kind == ComplexKind::Surface {
            complex.check_closed_surface()?;
        }
        let embedded = match coords {
            Some(c) => {
                let dim = match self.dim {
                    Some(d) => d,
                    None => c.first().map_or(0, Vec::len),
                };
                Some(EmbeddedComplex::new(complex.clone(), dim, c)?)
            }
            None => None,
        };
        let action = self.action.as_ref().map(|a| decode_action(a, base_dir)).transpose()?;
        let representation = match &self.representation {
            None => None,
            Some(RepRef::Inline(r)) => Some(r.to_rep()?),
            Some(RepRef::Path(p)) => Some(read_json::<RepFile>(&base_dir.join(p))?.to_rep()?),
        };
        Ok(LoadedComplex { kind, complex, embedded, action, representation, metadata: self.metadata.clone() })
    }
}

pub fn decode_action(a: &ActionBlock, base_dir: &Path) -> Result<VertexAction, FormatError> {
    let group = match &a.group {
        GroupRef::Inline(g) => g.to_table()?,
        GroupRef::Path(p) => read_json::<GroupFile>(&base_dir.join(p))?.to_table()?,
    };
    let keys: Vec<Label> = a.perms.keys().copied().collect();
    let expected: Vec<Label> = group.elements().collect();
    if keys != expected {
        return Err(invalid(format!("action perms keyed by {keys:?}, expected labels {expected:?}")));
    }
    Ok(VertexAction::new(group, a.perms.values().cloned().collect())?)
}

/// Loads a complex file and everything it references.
pub fn load_complex(path: &Path) -> Result<LoadedComplex, FormatError> {
    let file: ComplexFile = read_json(path)?;
    file.resolve(path.parent().unwrap_or(Path::new(".")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepElement {
    pub sigma: Vec<Label>,
    pub det: i8,
}

/// Representation file: `R(g)` permutes blocks by `sigma`, with `det R(g)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepFile {
    pub m: usize,
    pub d: usize,
    pub extended: bool,
    pub elements: BTreeMap<Label, RepElement>,
}

impl RepFile {
    pub fn from_rep(r: &BlockOrthogonalRep) -> Self {
        RepFile {
            m: r.dim(),
            d: r.block_size(),
            extended: r.is_extended(),
            elements: r
                .group()
                .elements()
                .map(|g| (g, RepElement { sigma: r.block(g).sigma.clone(), det: r.det(g) }))
                .collect(),
        }
    }

    /// Rebuilds the representation; `sigma_g(i) = i*g` recovers the table.
    pub fn to_rep(&self) -> Result<BlockOrthogonalRep, FormatError> {
        let n = self.elements.len();
        let keys: Vec<Label> = self.elements.keys().copied().collect();
        if keys != (1..=n).collect::<Vec<_>>() {
            return Err(invalid(format!("representation elements keyed by {keys:?}")));
        }
        if let Some((g, e)) = self.elements.iter().find(|(_, e)| e.sigma.len() != n) {
            return Err(invalid(format!("sigma of element {g} has length {}, expected {n}", e.sigma.len())));
        }
        let rows: Vec<Vec<usize>> =
            (0..n).map(|i| self.elements.values().map(|e| e.sigma[i]).collect()).collect();
        let group = GroupTable::from_rows(&rows)?;
        let mut rep = build_block_rep(&group, self.d)?;
        if self.extended {
            rep = rep.extended();
        }
        if rep.dim() != self.m {
            return Err(invalid(format!("m = {} but d*n{} = {}", self.m, if self.extended { "+1" } else { "" }, rep.dim())));
        }
        if let Some((g, e)) = self.elements.iter().find(|(&g, e)| rep.det(g) != e.det) {
            return Err(invalid(format!("element {g}: recorded det {} but the matrix has det {}", e.det, rep.det(*g))));
        }
        Ok(rep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngleEntry {
    pub angle_num: i64,
    pub angle_den: i64,
}

/// A number given either as a JSON number or as a `"p/q"` string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

impl Scalar {
    pub fn to_f64(&self) -> Result<f64, FormatError> {
        match self {
            Scalar::Number(v) => Ok(*v),
            Scalar::Text(s) => Ok(to_f64(&parse_rational(s)?)),
        }
    }
}

/// Matrix file: dense row-major entries, or block rotations by
/// `angle_num/angle_den` of a full turn followed by `fixed` fixed axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixFile {
    Blocks {
        blocks: Vec<AngleEntry>,
        #[serde(default)]
        fixed: usize,
    },
    Rows(Vec<Vec<Scalar>>),
}

impl MatrixFile {
    pub fn to_operator(&self) -> Result<OrthogonalOperator, FormatError> {
        match self {
            MatrixFile::Blocks { blocks, fixed } => {
                let angles = blocks
                    .iter()
                    .map(|b| {
                        if b.angle_den <= 0 {
                            Err(invalid(format!("angle denominator {} must be positive", b.angle_den)))
                        } else {
                            Ok(Ratio::new(b.angle_num, b.angle_den))
                        }
                    })
                    .collect::<Result<_, _>>()?;
                Ok(OrthogonalOperator::Rotations(RotationBlocks { angles, fixed: *fixed }))
            }
            MatrixFile::Rows(rows) => {
                let m = rows.len();
                if m == 0 {
                    return Err(invalid("empty matrix"));
                }
                if let Some(i) = rows.iter().position(|r| r.len() != m) {
                    return Err(invalid(format!("row {i} has {} entries, expected {m}", rows[i].len())));
                }
                let mut data = Vec::with_capacity(m * m);
                for r in rows {
                    for v in r {
                        data.push(v.to_f64()?);
                    }
                }
                Ok(OrthogonalOperator::Dense(DMatrix::from_row_slice(m, m, &data)))
            }
        }
    }

    pub fn from_blocks(b: &RotationBlocks) -> Self {
        MatrixFile::Blocks {
            blocks: b.angles.iter().map(|a| AngleEntry { angle_num: *a.numer(), angle_den: *a.denom() }).collect(),
            fixed: b.fixed,
        }
    }

    /// Exact dense export of `R(g)` with `"p/q"` entries.
    pub fn from_rep(r: &BlockOrthogonalRep, g: Label) -> Self {
        MatrixFile::Rows(
            r.dense(g)
                .into_iter()
                .map(|row| row.into_iter().map(|v| Scalar::Text(format!("{v}/1"))).collect())
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub point: Vec<Scalar>,
    pub length: usize,
}

pub fn decode_witnesses(entries: &[WitnessEntry]) -> Result<Vec<Witness>, FormatError> {
    entries
        .iter()
        .map(|e| {
            Ok(Witness { point: e.point.iter().map(Scalar::to_f64).collect::<Result<_, _>>()?, length: e.length })
        })
        .collect()
}

pub fn encode_witnesses(ws: &[Witness]) -> Vec<WitnessEntry> {
    ws.iter()
        .map(|w| WitnessEntry { point: w.point.iter().map(|&v| Scalar::Number(v)).collect(), length: w.length })
        .collect()
}

/// OFF text with floating coordinates. Up to three coordinates are written
/// as plain OFF (padded with zeros); higher dimensions use `nOFF`. Edges
/// not on any triangle become two-vertex faces.
pub fn to_off(e: &EmbeddedComplex) -> String {
    let c = e.complex();
    let dim = e.dim();
    let covered = c.triangles().iter().flat_map(|t| [[t[0], t[1]], [t[0], t[2]], [t[1], t[2]]]).collect::<std::collections::HashSet<_>>();
    let lone: Vec<&[usize; 2]> = c.edges().iter().filter(|ed| !covered.contains(*ed)).collect();
    let faces = c.triangles().len() + lone.len();
    let mut out = String::new();
    if dim <= 3 {
        out.push_str("OFF\n");
    } else {
        let _ = write!(out, "nOFF\n{dim}\n");
    }
    let _ = writeln!(out, "{} {} 0", c.vertex_count(), faces);
    for p in e.coords() {
        let mut xs: Vec<String> = p.iter().map(|r| format!("{}", to_f64(r))).collect();
        while xs.len() < 3 {
            xs.push("0".into());
        }
        let _ = writeln!(out, "{}", xs.join(" "));
    }
    for t in c.triangles() {
        let _ = writeln!(out, "3 {} {} {}", t[0], t[1], t[2]);
    }
    for ed in lone {
        let _ = writeln!(out, "2 {} {}", ed[0], ed[1]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::fixtures::{interval, octahedron};
    use crate::group::make_cyclic;
    use crate::lifter::{determinant_extend, stack_embedding, DEFAULT_DIMENSION_CAP};

    fn swap() -> VertexAction {
        VertexAction::new(make_cyclic(2).unwrap(), vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    #[test]
    fn complex_round_trip() {
        let e = interval();
        let file = ComplexFile::embedded(&e).with_action(&swap());
        let text = to_json_string(&file);
        assert!(text.contains("\"-1/1\""));
        let back: ComplexFile = serde_json::from_str(&text).unwrap();
        let loaded = back.resolve(Path::new(".")).unwrap();
        assert_eq!(loaded.embedded.unwrap(), e);
        assert_eq!(loaded.action.unwrap(), swap());
    }

    #[test]
    fn abstract_surface_needs_no_coordinates() {
        let o = octahedron();
        let file = ComplexFile::abstract_complex(o.complex()).with_kind(ComplexKind::Surface);
        let loaded = file.resolve(Path::new(".")).unwrap();
        assert!(loaded.embedded.is_none());
        assert_eq!(loaded.embedded_or_canonical().dim(), 5);
        let mut broken = file.clone();
        broken.simplices.triangles.pop();
        assert!(broken.resolve(Path::new(".")).is_err());
    }

    #[test]
    fn bad_inputs_are_reported() {
        let mut file = ComplexFile::embedded(&interval()).with_action(&swap());
        file.vertices.as_mut().unwrap()[0][0] = "1/0".into();
        assert!(matches!(file.resolve(Path::new(".")), Err(FormatError::Rational(_))));
        let mut file = ComplexFile::embedded(&interval()).with_action(&swap());
        file.action.as_mut().unwrap().perms.remove(&2);
        assert!(matches!(file.resolve(Path::new(".")), Err(FormatError::Invalid(_))));
        let file = ComplexFile { simplices: Simplices::default(), ..Default::default() };
        assert!(file.resolve(Path::new(".")).is_err());
    }

    #[test]
    fn representation_round_trip() {
        let le = determinant_extend(stack_embedding(&octahedron(), &{
            VertexAction::new(make_cyclic(2).unwrap(), vec![(0..6).collect(), vec![1, 0, 3, 2, 5, 4]]).unwrap()
        }, DEFAULT_DIMENSION_CAP)
        .unwrap());
        let file = RepFile::from_rep(le.rep());
        assert_eq!((file.m, file.d, file.extended), (7, 3, true));
        assert!(file.elements.values().all(|e| e.det == 1));
        let text = to_json_string(&file);
        let back: RepFile = serde_json::from_str(&text).unwrap();
        assert_eq!(&back.to_rep().unwrap(), le.rep());
        let mut bad = file.clone();
        bad.elements.get_mut(&2).unwrap().det = -1;
        assert!(bad.to_rep().is_err());
    }

    #[test]
    fn matrix_files() {
        let blocks: MatrixFile = serde_json::from_str(r#"{"blocks":[{"angle_num":1,"angle_den":2},{"angle_num":1,"angle_den":3}]}"#).unwrap();
        let op = blocks.to_operator().unwrap();
        assert!(op.is_exact());
        assert_eq!(op.dim(), 4);
        let rows: MatrixFile = serde_json::from_str(r#"[[0, -1], ["1/1", 0.0]]"#).unwrap();
        let op = rows.to_operator().unwrap();
        assert_eq!(op.dense()[(0, 1)], -1.0);
        assert_eq!(op.dense()[(1, 0)], 1.0);
        let ragged: MatrixFile = serde_json::from_str("[[1, 0], [0]]").unwrap();
        assert!(ragged.to_operator().is_err());
        let bad: MatrixFile = serde_json::from_str(r#"{"blocks":[{"angle_num":1,"angle_den":0}]}"#).unwrap();
        assert!(bad.to_operator().is_err());
    }

    #[test]
    fn off_export() {
        let off = to_off(&octahedron());
        assert!(off.starts_with("OFF\n6 8 0\n1 0 0\n"));
        let off = to_off(&interval());
        assert_eq!(off, "OFF\n2 1 0\n-1 0 0\n1 0 0\n2 0 1\n");
    }
}
