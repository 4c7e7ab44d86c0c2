//! Polygonal 2-spheres with a face pairing.
//!
//! A [`BoundaryComplex`] lists vertices, edges (endpoint pairs, loops and
//! parallel edges allowed) and faces, each face a cyclic walk of directed
//! edges. A [`FacePairingScheme`] adds a fixed-point-free pairing of faces,
//! each pair carrying an explicit position bijection given by an offset and
//! a direction flag.
//!
//! Boundary position `i` of a face is its `i`-th directed edge; the corner
//! at position `i` is the tail vertex of that edge.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::unionfind::UnionFind;

/// Structural problems that make a scheme unusable before any invariant can
/// be checked. Each names the offending face or edge.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("edge {edge} references vertex {vertex}, but there are only {count} vertices")]
    EdgeVertexOutOfRange { edge: usize, vertex: usize, count: usize },
    #[error("face {face} is empty")]
    EmptyFace { face: usize },
    #[error("face {face}, position {position}: edge reference 0 is invalid (edges are 1-based and signed)")]
    ZeroEdgeRef { face: usize, position: usize },
    #[error("face {face}, position {position}: edge {edge} does not exist ({count} edges)")]
    EdgeOutOfRange { face: usize, position: usize, edge: usize, count: usize },
    #[error("pairing entry {entry} references face {face}, but there are only {count} faces")]
    PairFaceOutOfRange { entry: usize, face: usize, count: usize },
    #[error("offset {offset} in pairing entry {entry} is negative")]
    NegativeOffset { entry: usize, offset: i64 },
    #[error("failed to parse scheme: {0}")]
    Parse(String),
}

/// One side of an edge as it appears on a face boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    pub edge: usize,
    /// Traversed from the edge's second endpoint to its first.
    pub reversed: bool,
}

impl DirectedEdge {
    pub fn forward(edge: usize) -> Self {
        DirectedEdge { edge, reversed: false }
    }

    pub fn backward(edge: usize) -> Self {
        DirectedEdge { edge, reversed: true }
    }

    /// Which end of the underlying edge (0 or 1) this traversal starts at.
    pub fn tail_end(self) -> usize {
        self.reversed as usize
    }

    pub fn head_end(self) -> usize {
        1 - self.tail_end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryComplex {
    pub vertices: Vec<String>,
    pub edges: Vec<[usize; 2]>,
    pub faces: Vec<Vec<DirectedEdge>>,
}

impl BoundaryComplex {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<[usize; 2]>,
        faces: Vec<Vec<DirectedEdge>>,
    ) -> Result<Self, SchemeError> {
        for (e, ends) in edges.iter().enumerate() {
            for &v in ends {
                if v >= vertices.len() {
                    return Err(SchemeError::EdgeVertexOutOfRange { edge: e, vertex: v, count: vertices.len() });
                }
            }
        }
        for (f, face) in faces.iter().enumerate() {
            if face.is_empty() {
                return Err(SchemeError::EmptyFace { face: f });
            }
            for (i, d) in face.iter().enumerate() {
                if d.edge >= edges.len() {
                    return Err(SchemeError::EdgeOutOfRange { face: f, position: i, edge: d.edge, count: edges.len() });
                }
            }
        }
        Ok(BoundaryComplex { vertices, edges, faces })
    }

    /// Builds a complex from faces given as cyclic vertex sequences. Edges are
    /// created for each unordered vertex pair in order of first appearance in
    /// the sorted pair list, oriented from the smaller vertex to the larger.
    pub fn from_vertex_cycles(vertex_count: usize, cycles: &[&[usize]]) -> Self {
        let mut pairs: Vec<[usize; 2]> = cycles
            .iter()
            .flat_map(|c| {
                (0..c.len()).map(move |i| {
                    let (a, b) = (c[i], c[(i + 1) % c.len()]);
                    [a.min(b), a.max(b)]
                })
            })
            .collect();
        pairs.sort_unstable();
        pairs.dedup();
        let index: BTreeMap<[usize; 2], usize> = pairs.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let faces = cycles
            .iter()
            .map(|c| {
                (0..c.len())
                    .map(|i| {
                        let (a, b) = (c[i], c[(i + 1) % c.len()]);
                        DirectedEdge { edge: index[&[a.min(b), a.max(b)]], reversed: a > b }
                    })
                    .collect()
            })
            .collect();
        BoundaryComplex { vertices: (0..vertex_count).map(|v| format!("v{v}")).collect(), edges: pairs, faces }
    }

    pub fn tail(&self, d: DirectedEdge) -> usize {
        self.edges[d.edge][d.tail_end()]
    }

    pub fn head(&self, d: DirectedEdge) -> usize {
        self.edges[d.edge][d.head_end()]
    }

    pub fn face_len(&self, face: usize) -> usize {
        self.faces[face].len()
    }

    /// Every (face, position) at which each edge occurs.
    pub fn edge_sides(&self) -> Vec<Vec<(usize, usize)>> {
        let mut sides = vec![Vec::new(); self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            for (i, d) in face.iter().enumerate() {
                sides[d.edge].push((f, i));
            }
        }
        sides
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.vertices.len());
        for &[a, b] in &self.edges {
            uf.union(a, b);
        }
        uf.classes().len() == 1
    }
}

/// A pair of identified faces. Face `a` is carried onto face `b`.
///
/// Without reversal, position `i` of `a` goes to position `i + offset` of
/// `b` with the traversal direction kept. With reversal, position `i` goes
/// to position `offset - i` traversed backwards, so the corner at `i` lands
/// on the corner at `offset - i + 1`. Indices are taken modulo the common
/// face length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: usize,
    pub b: usize,
    pub offset: usize,
    pub reversed: bool,
}

/// Where a boundary position lands under the pairing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Image {
    pub face: usize,
    pub position: usize,
    /// The traversal direction is flipped by the gluing.
    pub reversed: bool,
}

/// Free-form record of how a scheme was produced (generator name and parameters).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub parameters: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacePairingScheme {
    pub complex: BoundaryComplex,
    pub pairing: Vec<Gluing>,
    pub provenance: Option<Provenance>,
    /// Per face: index into `pairing` and whether the face is the `a` side.
    partner: Vec<Option<(usize, bool)>>,
}

impl FacePairingScheme {
    pub fn new(complex: BoundaryComplex, pairing: Vec<Gluing>) -> Result<Self, SchemeError> {
        let n = complex.faces.len();
        let mut partner = vec![None; n];
        for (k, g) in pairing.iter().enumerate() {
            for face in [g.a, g.b] {
                if face >= n {
                    return Err(SchemeError::PairFaceOutOfRange { entry: k, face, count: n });
                }
            }
            // first entry wins; duplicates are reported by validation
            if partner[g.a].is_none() {
                partner[g.a] = Some((k, true));
            }
            if partner[g.b].is_none() {
                partner[g.b] = Some((k, false));
            }
        }
        Ok(FacePairingScheme { complex, pairing, provenance: None, partner })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn face_count(&self) -> usize {
        self.complex.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.complex.edges.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.complex.vertices.len()
    }

    /// The face paired with `face`, if any.
    pub fn peer(&self, face: usize) -> Option<usize> {
        self.partner[face].map(|(k, is_a)| {
            let g = self.pairing[k];
            if is_a {
                g.b
            } else {
                g.a
            }
        })
    }

    /// Image of boundary position `position` of `face` on its peer.
    ///
    /// # Panics
    ///
    /// Panics if `face` is unpaired; call [`validate`] first.
    pub fn image(&self, face: usize, position: usize) -> Image {
        let (k, is_a) = self.partner[face].expect("face is not paired; validate the scheme first");
        let g = self.pairing[k];
        let n = self.complex.face_len(face) as i64;
        let (i, off) = (position as i64, g.offset as i64);
        let (target, j) = match (is_a, g.reversed) {
            (true, false) => (g.b, i + off),
            (false, false) => (g.a, i - off),
            (_, true) => (if is_a { g.b } else { g.a }, off - i),
        };
        Image { face: target, position: j.rem_euclid(n) as usize, reversed: g.reversed }
    }

    /// Corner (face, position) that the corner at `position` is glued onto.
    pub fn corner_image(&self, face: usize, position: usize) -> (usize, usize) {
        let img = self.image(face, position);
        if img.reversed {
            let n = self.complex.face_len(img.face);
            (img.face, (img.position + 1) % n)
        } else {
            (img.face, img.position)
        }
    }

    /// Total number of boundary positions over all faces.
    pub fn flag_count(&self) -> usize {
        self.complex.faces.iter().map(Vec::len).sum()
    }

    /// Returns a copy with faces and edges renamed: old face `f` becomes
    /// `face_perm[f]`, old edge `e` becomes `edge_perm[e]`.
    pub fn relabeled(&self, face_perm: &[usize], edge_perm: &[usize]) -> FacePairingScheme {
        let c = &self.complex;
        let mut edges = vec![[0, 0]; c.edges.len()];
        for (e, ends) in c.edges.iter().enumerate() {
            edges[edge_perm[e]] = *ends;
        }
        let mut faces = vec![Vec::new(); c.faces.len()];
        for (f, face) in c.faces.iter().enumerate() {
            faces[face_perm[f]] =
                face.iter().map(|d| DirectedEdge { edge: edge_perm[d.edge], reversed: d.reversed }).collect();
        }
        let pairing = self.pairing.iter().map(|g| Gluing { a: face_perm[g.a], b: face_perm[g.b], ..*g }).collect();
        let complex = BoundaryComplex { vertices: c.vertices.clone(), edges, faces };
        let mut out = FacePairingScheme::new(complex, pairing).expect("relabeling preserves structure");
        out.provenance = self.provenance.clone();
        out
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Checks every invariant of the boundary complex and the pairing.
///
/// Faces carrying two distinct edges of one identification class are a
/// warning only; everything downstream works on flags.
pub fn validate(scheme: &FacePairingScheme) -> ValidationReport {
    let mut report = ValidationReport::default();
    let c = &scheme.complex;

    for (f, face) in c.faces.iter().enumerate() {
        let n = face.len();
        for i in 0..n {
            let (d, next) = (face[i], face[(i + 1) % n]);
            if c.head(d) != c.tail(next) {
                report.errors.push(format!(
                    "face {f} is not a closed walk: position {i} ends at vertex {} but position {} starts at vertex {}",
                    c.head(d),
                    (i + 1) % n,
                    c.tail(next)
                ));
            }
        }
    }
    for (e, sides) in c.edge_sides().iter().enumerate() {
        if sides.len() != 2 {
            report.errors.push(format!("edge {e} appears on {} face sides (expected 2)", sides.len()));
        }
    }
    if !c.is_connected() {
        report.errors.push("boundary complex is not connected".to_string());
    }
    let chi = c.euler_characteristic();
    if chi != 2 {
        report.errors.push(format!("V - E + F = {chi}, expected 2 for a sphere"));
    }

    let n = c.faces.len();
    let mut seen = vec![0usize; n];
    let mut fixed_or_odd = n % 2 == 1;
    for (k, g) in scheme.pairing.iter().enumerate() {
        if g.a == g.b {
            fixed_or_odd = true;
        }
        seen[g.a] += 1;
        if g.b != g.a {
            seen[g.b] += 1;
        }
        let (la, lb) = (c.face_len(g.a), c.face_len(g.b));
        if la != lb {
            report
                .errors
                .push(format!("pairing entry {k}: faces {} and {} have boundary lengths {la} and {lb}", g.a, g.b));
        } else if g.offset >= la {
            report.errors.push(format!("pairing entry {k}: offset {} out of range for length {la}", g.offset));
        }
    }
    if seen.contains(&0) {
        fixed_or_odd = true;
    }
    if fixed_or_odd {
        report.errors.push("pairing has a fixed point or odd face count".to_string());
    }
    for (f, &s) in seen.iter().enumerate() {
        if s > 1 {
            report.errors.push(format!("face {f} appears in {s} pairing entries"));
        }
    }

    if report.errors.is_empty() {
        let classes = edge_classes(scheme);
        let mut offenders: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (f, face) in c.faces.iter().enumerate() {
            let mut per_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for d in face {
                per_class.entry(classes.class_of[d.edge]).or_default().push(d.edge);
            }
            for (class, mut members) in per_class {
                members.sort_unstable();
                members.dedup();
                if members.len() > 1 {
                    offenders.entry(class).or_default().push(f);
                }
            }
        }
        for (class, faces) in offenders {
            let list: Vec<String> = faces.iter().map(ToString::to_string).collect();
            report
                .warnings
                .push(format!("faces {} each carry several distinct edges of edge class {class}", list.join(", ")));
        }
    }
    report
}

// ---------------------------------------------------------------------------
// Identification classes

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Vertex,
    Edge,
    Face,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassPartition {
    pub kind: ElementKind,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
}

impl ClassPartition {
    pub(crate) fn from_union_find(kind: ElementKind, uf: &mut UnionFind) -> Self {
        let (class_of, _) = uf.labels();
        let classes = uf.classes();
        ClassPartition { kind, classes, class_of }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class sizes in ascending order.
    pub fn sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        s.sort_unstable();
        s
    }
}

/// Edge classes together with each edge's orientation relative to its class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrientedEdgeClasses {
    pub partition: ClassPartition,
    /// `true` when the edge runs against the smallest member of its class.
    pub flipped: Vec<bool>,
    /// Classes in which some edge is glued onto itself (or a class-mate)
    /// with inconsistent orientation.
    pub folded: Vec<usize>,
}

pub fn edge_classes(scheme: &FacePairingScheme) -> ClassPartition {
    oriented_edge_classes(scheme).partition
}

pub fn oriented_edge_classes(scheme: &FacePairingScheme) -> OrientedEdgeClasses {
    let c = &scheme.complex;
    let mut uf = UnionFind::new(c.edges.len());
    let mut conflicts = Vec::new();
    for g in &scheme.pairing {
        for i in 0..c.face_len(g.a) {
            let d = c.faces[g.a][i];
            let img = scheme.image(g.a, i);
            let d2 = c.faces[img.face][img.position];
            let odd = d.reversed ^ d2.reversed ^ img.reversed;
            if uf.union_with_parity(d.edge, d2.edge, odd).is_none() {
                conflicts.push(d.edge);
            }
        }
    }
    let partition = ClassPartition::from_union_find(ElementKind::Edge, &mut uf);
    // parity relative to the smallest member, not to the internal root
    let mut flipped = vec![false; c.edges.len()];
    for class in &partition.classes {
        let (_, rep_parity) = uf.find_with_parity(class[0]);
        for &e in class {
            flipped[e] = uf.find_with_parity(e).1 ^ rep_parity;
        }
    }
    let mut folded: Vec<usize> = conflicts.iter().map(|&e| partition.class_of[e]).collect();
    folded.sort_unstable();
    folded.dedup();
    OrientedEdgeClasses { partition, flipped, folded }
}

pub fn vertex_classes(scheme: &FacePairingScheme) -> ClassPartition {
    let c = &scheme.complex;
    let mut uf = UnionFind::new(c.vertices.len());
    for g in &scheme.pairing {
        for i in 0..c.face_len(g.a) {
            let v = c.tail(c.faces[g.a][i]);
            let (f2, j) = scheme.corner_image(g.a, i);
            uf.union(v, c.tail(c.faces[f2][j]));
        }
    }
    ClassPartition::from_union_find(ElementKind::Vertex, &mut uf)
}

/// Classes of edge ends; element `2 * e + end` is end `end` of edge `e`.
pub fn edge_end_classes(scheme: &FacePairingScheme) -> ClassPartition {
    let c = &scheme.complex;
    let mut uf = UnionFind::new(2 * c.edges.len());
    for g in &scheme.pairing {
        for i in 0..c.face_len(g.a) {
            let d = c.faces[g.a][i];
            let img = scheme.image(g.a, i);
            let d2 = c.faces[img.face][img.position];
            let (t2, h2) = if img.reversed { (d2.head_end(), d2.tail_end()) } else { (d2.tail_end(), d2.head_end()) };
            uf.union(2 * d.edge + d.tail_end(), 2 * d2.edge + t2);
            uf.union(2 * d.edge + d.head_end(), 2 * d2.edge + h2);
        }
    }
    ClassPartition::from_union_find(ElementKind::Vertex, &mut uf)
}

// ---------------------------------------------------------------------------
// JSON file format

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SchemeFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    vertices: Vec<String>,
    edges: Vec<[usize; 2]>,
    faces: Vec<Vec<i64>>,
    pairing: Vec<PairEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairEntry {
    a: usize,
    b: usize,
    offset: i64,
    reversed: bool,
}

impl FacePairingScheme {
    /// Parses the JSON scheme format. Face entries are signed 1-based edge
    /// indices; the sign gives the traversal direction.
    pub fn from_json(text: &str) -> Result<Self, SchemeError> {
        let file: SchemeFile = serde_json::from_str(text).map_err(|e| SchemeError::Parse(e.to_string()))?;
        let mut faces = Vec::with_capacity(file.faces.len());
        for (f, face) in file.faces.iter().enumerate() {
            let mut walk = Vec::with_capacity(face.len());
            for (i, &s) in face.iter().enumerate() {
                if s == 0 {
                    return Err(SchemeError::ZeroEdgeRef { face: f, position: i });
                }
                let edge = (s.unsigned_abs() - 1) as usize;
                walk.push(DirectedEdge { edge, reversed: s < 0 });
            }
            faces.push(walk);
        }
        let complex = BoundaryComplex::new(file.vertices, file.edges, faces)?;
        let mut pairing = Vec::with_capacity(file.pairing.len());
        for (k, p) in file.pairing.iter().enumerate() {
            if p.offset < 0 {
                return Err(SchemeError::NegativeOffset { entry: k, offset: p.offset });
            }
            pairing.push(Gluing { a: p.a, b: p.b, offset: p.offset as usize, reversed: p.reversed });
        }
        let mut scheme = FacePairingScheme::new(complex, pairing)?;
        scheme.provenance = file.provenance;
        Ok(scheme)
    }

    pub fn to_json(&self) -> String {
        let c = &self.complex;
        let file = SchemeFile {
            provenance: self.provenance.clone(),
            vertices: c.vertices.clone(),
            edges: c.edges.clone(),
            faces: c
                .faces
                .iter()
                .map(|face| {
                    face.iter()
                        .map(|d| {
                            let s = d.edge as i64 + 1;
                            if d.reversed {
                                -s
                            } else {
                                s
                            }
                        })
                        .collect()
                })
                .collect(),
            pairing: self
                .pairing
                .iter()
                .map(|g| PairEntry { a: g.a, b: g.b, offset: g.offset as i64, reversed: g.reversed })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("scheme serialization cannot fail")
    }
}

impl fmt::Display for FacePairingScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "scheme: {} vertices, {} edges, {} faces, {} pairs",
            self.vertex_count(),
            self.edge_count(),
            self.face_count(),
            self.pairing.len()
        )
    }
}
