//! Cellular deformations of quotient complexes: contracting trees or single
//! edges, and collapsing a connected subcomplex to a point.
//!
//! Every operation returns a new complex plus a [`DeformationRecord`]
//! describing the surjective cellular map from the old complex.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use super::{Cell, EdgeSymbol, QuotientComplex, QuotientEdge, QuotientVertex};
use crate::unionfind::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformError {
    #[error("edge {0} does not exist")]
    UnknownEdge(usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("cell {0} does not exist")]
    UnknownCell(usize),
    #[error("edge {0} is a loop; contracting it changes the homotopy type")]
    LoopContraction(usize),
    #[error("edge set is not a forest (edge {0} closes a cycle)")]
    NotAcyclic(usize),
    #[error("selection is not closed under boundary: {0}")]
    NotSubcomplex(String),
    #[error("selection is not connected")]
    Disconnected,
    #[error("selection is empty")]
    EmptySelection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeformationKind {
    TreeContraction,
    EdgeContraction,
    SubcomplexCollapse,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationRecord {
    pub kind: DeformationKind,
    pub removed_vertices: Vec<usize>,
    pub removed_edges: Vec<usize>,
    pub removed_cells: Vec<usize>,
    /// Old vertex id to new vertex id.
    pub vertex_map: Vec<usize>,
    /// Old edge id to new edge id, `None` for removed edges.
    pub edge_map: Vec<Option<usize>>,
    pub cell_map: Vec<Option<usize>>,
    /// Endpoints of every edge of the source complex.
    pub edge_ends: Vec<[usize; 2]>,
    pub source: String,
    pub target: String,
    pub euler_before: i64,
    pub euler_after: i64,
}

impl DeformationRecord {
    /// A record of the identity map on `q`.
    pub fn identity(q: &QuotientComplex) -> Self {
        let fp = q.fingerprint();
        DeformationRecord {
            kind: DeformationKind::SubcomplexCollapse,
            removed_vertices: Vec::new(),
            removed_edges: Vec::new(),
            removed_cells: Vec::new(),
            vertex_map: (0..q.vertices.len()).collect(),
            edge_map: (0..q.edges.len()).map(Some).collect(),
            cell_map: (0..q.cells.len()).map(Some).collect(),
            edge_ends: q.edges.iter().map(|e| [e.tail, e.head]).collect(),
            source: fp.clone(),
            target: fp,
            euler_before: q.euler_characteristic(),
            euler_after: q.euler_characteristic(),
        }
    }

    pub fn is_contraction(&self) -> bool {
        matches!(self.kind, DeformationKind::TreeContraction | DeformationKind::EdgeContraction)
    }
}

/// A selection of cells, edges and vertices to collapse.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subcomplex {
    pub vertices: BTreeSet<usize>,
    pub edges: BTreeSet<usize>,
    pub cells: BTreeSet<usize>,
}

impl Subcomplex {
    /// The closure of a set of cells: the cells, every edge in their
    /// attaching words, and all endpoints and basepoints.
    pub fn closure_of_cells(q: &QuotientComplex, cells: &[usize]) -> Self {
        let mut sub = Subcomplex::default();
        for &k in cells {
            sub.cells.insert(k);
            sub.vertices.insert(q.cells[k].base);
            for s in &q.cells[k].word {
                sub.edges.insert(s.edge);
                sub.vertices.insert(q.edges[s.edge].tail);
                sub.vertices.insert(q.edges[s.edge].head);
            }
        }
        sub
    }

    pub fn vertex(v: usize) -> Self {
        Subcomplex { vertices: BTreeSet::from([v]), ..Default::default() }
    }
}

/// Merges vertices by the given labelling, drops the listed edges and
/// cells, and erases dropped edges from the surviving words.
fn rebuild(
    q: &QuotientComplex,
    merge: &mut UnionFind,
    drop_edges: &BTreeSet<usize>,
    drop_cells: &BTreeSet<usize>,
    kind: DeformationKind,
) -> (QuotientComplex, DeformationRecord) {
    let classes = merge.classes();
    let (labels, _) = merge.labels();
    let vertices: Vec<QuotientVertex> = classes
        .iter()
        .map(|group| {
            let mut members: Vec<usize> = group.iter().flat_map(|&v| q.vertices[v].members.iter().copied()).collect();
            members.sort_unstable();
            QuotientVertex { members }
        })
        .collect();

    let mut edge_map = vec![None; q.edges.len()];
    let mut edges = Vec::new();
    for (id, e) in q.edges.iter().enumerate() {
        if drop_edges.contains(&id) {
            continue;
        }
        edge_map[id] = Some(edges.len());
        edges.push(QuotientEdge { tail: labels[e.tail], head: labels[e.head], ..e.clone() });
    }

    let mut cell_map = vec![None; q.cells.len()];
    let mut cells = Vec::new();
    for (k, cell) in q.cells.iter().enumerate() {
        if drop_cells.contains(&k) {
            continue;
        }
        cell_map[k] = Some(cells.len());
        let word: Vec<EdgeSymbol> = cell
            .word
            .iter()
            .filter_map(|s| edge_map[s.edge].map(|edge| EdgeSymbol { edge, inverse: s.inverse }))
            .collect();
        cells.push(Cell { word, base: labels[cell.base], faces: cell.faces });
    }

    let out = QuotientComplex { vertices, edges, cells };
    let mut removed_vertices: Vec<usize> = (0..q.vertices.len()).filter(|&v| classes[labels[v]][0] != v).collect();
    removed_vertices.sort_unstable();
    let record = DeformationRecord {
        kind,
        removed_vertices,
        removed_edges: drop_edges.iter().copied().collect(),
        removed_cells: drop_cells.iter().copied().collect(),
        vertex_map: labels,
        edge_map,
        cell_map,
        edge_ends: q.edges.iter().map(|e| [e.tail, e.head]).collect(),
        source: q.fingerprint(),
        target: out.fingerprint(),
        euler_before: q.euler_characteristic(),
        euler_after: out.euler_characteristic(),
    };
    (out, record)
}

fn contract_forest(
    q: &QuotientComplex,
    tree: &[usize],
    kind: DeformationKind,
) -> Result<(QuotientComplex, DeformationRecord), DeformError> {
    let mut uf = UnionFind::new(q.vertices.len());
    let mut drop = BTreeSet::new();
    for &id in tree {
        let e = q.edges.get(id).ok_or(DeformError::UnknownEdge(id))?;
        if !drop.insert(id) || !uf.union(e.tail, e.head) {
            return Err(DeformError::NotAcyclic(id));
        }
    }
    Ok(rebuild(q, &mut uf, &drop, &BTreeSet::new(), kind))
}

/// Contracts a forest of the 1-skeleton: each tree becomes one vertex, tree
/// edges disappear from the complex and from every attaching word.
pub fn contract_tree(q: &QuotientComplex, tree: &[usize]) -> Result<(QuotientComplex, DeformationRecord), DeformError> {
    contract_forest(q, tree, DeformationKind::TreeContraction)
}

/// Contracts one non-loop edge, merging its endpoints.
pub fn contract_edge(q: &QuotientComplex, edge: usize) -> Result<(QuotientComplex, DeformationRecord), DeformError> {
    let e = q.edges.get(edge).ok_or(DeformError::UnknownEdge(edge))?;
    if e.is_loop() {
        return Err(DeformError::LoopContraction(edge));
    }
    contract_forest(q, &[edge], DeformationKind::EdgeContraction)
}

/// Collapses a connected subcomplex to a single vertex.
pub fn collapse_subcomplex(
    q: &QuotientComplex,
    sub: &Subcomplex,
) -> Result<(QuotientComplex, DeformationRecord), DeformError> {
    if sub.vertices.is_empty() {
        return Err(DeformError::EmptySelection);
    }
    for &v in &sub.vertices {
        if v >= q.vertices.len() {
            return Err(DeformError::UnknownVertex(v));
        }
    }
    for &id in &sub.edges {
        let e = q.edges.get(id).ok_or(DeformError::UnknownEdge(id))?;
        for end in [e.tail, e.head] {
            if !sub.vertices.contains(&end) {
                return Err(DeformError::NotSubcomplex(format!("endpoint {end} of edge {id} is not selected")));
            }
        }
    }
    for &k in &sub.cells {
        let cell = q.cells.get(k).ok_or(DeformError::UnknownCell(k))?;
        if let Some(s) = cell.word.iter().find(|s| !sub.edges.contains(&s.edge)) {
            return Err(DeformError::NotSubcomplex(format!(
                "edge {} on the boundary of cell {k} is not selected",
                s.edge
            )));
        }
        if !sub.vertices.contains(&cell.base) {
            return Err(DeformError::NotSubcomplex(format!("basepoint of cell {k} is not selected")));
        }
    }
    let mut inner = UnionFind::new(q.vertices.len());
    for &id in &sub.edges {
        inner.union(q.edges[id].tail, q.edges[id].head);
    }
    let first = *sub.vertices.iter().next().expect("nonempty");
    if sub.vertices.iter().any(|&v| !inner.same(first, v)) {
        return Err(DeformError::Disconnected);
    }
    let mut merge = UnionFind::new(q.vertices.len());
    for &v in &sub.vertices {
        merge.union(first, v);
    }
    Ok(rebuild(q, &mut merge, &sub.edges, &sub.cells, DeformationKind::SubcomplexCollapse))
}

/// Non-flat edges still present; after contracting a tree through every
/// non-flat vertex these are the loops of the wedge of circles.
pub fn nonflat_circles(q: &QuotientComplex) -> usize {
    q.edges.iter().filter(|e| e.is_nonflat()).count()
}
