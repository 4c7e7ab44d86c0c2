//! The identified 2-complex: vertex classes, edge classes and one 2-cell per
//! face pair, each cell carrying its attaching word.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::actions::PairingActions;
use crate::complex::{oriented_edge_classes, vertex_classes, FacePairingScheme};

mod deform;
mod gamma;
mod manifold;
mod surface;

pub use deform::{
    collapse_subcomplex, contract_edge, contract_tree, nonflat_circles, DeformError, DeformationKind,
    DeformationRecord, Subcomplex,
};
pub use gamma::{gamma_graph, gamma_spanning_tree, has_circuit, spanning_tree, GraphEdge, NonFlatGraph};
pub use manifold::{verify_manifold, ManifoldReport, VertexLink};
pub use surface::{classify_surface, recognize_lens_shell, SurfaceClass};

/// A quotient edge traversed forwards or backwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct EdgeSymbol {
    pub edge: usize,
    pub inverse: bool,
}

impl EdgeSymbol {
    pub fn inv(self) -> Self {
        EdgeSymbol { inverse: !self.inverse, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientVertex {
    /// Vertices of the boundary sphere mapped here.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientEdge {
    pub tail: usize,
    pub head: usize,
    /// Order of the edge class (1 for edges not coming from a scheme).
    pub order: u64,
    /// Sphere edges in the class, with `true` marking those running against
    /// the class orientation.
    pub members: Vec<(usize, bool)>,
}

impl QuotientEdge {
    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }

    pub fn is_nonflat(&self) -> bool {
        self.order > 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub word: Vec<EdgeSymbol>,
    /// Basepoint of the attaching map; the tail of the first symbol when the
    /// word is nonempty.
    pub base: usize,
    /// The pair of sphere faces this cell came from.
    pub faces: [usize; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientComplex {
    pub vertices: Vec<QuotientVertex>,
    pub edges: Vec<QuotientEdge>,
    pub cells: Vec<Cell>,
}

impl QuotientComplex {
    pub fn tail(&self, s: EdgeSymbol) -> usize {
        let e = &self.edges[s.edge];
        if s.inverse {
            e.head
        } else {
            e.tail
        }
    }

    pub fn head(&self, s: EdgeSymbol) -> usize {
        let e = &self.edges[s.edge];
        if s.inverse {
            e.tail
        } else {
            e.head
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.cells.len() as i64
    }

    /// Number of times each edge occurs in attaching words.
    pub fn edge_incidences(&self) -> Vec<usize> {
        let mut count = vec![0; self.edges.len()];
        for cell in &self.cells {
            for s in &cell.word {
                count[s.edge] += 1;
            }
        }
        count
    }

    /// Stable content hash (hex SHA-256 of the JSON form).
    pub fn fingerprint(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("complex serialization cannot fail");
        hex::encode(Sha256::digest(bytes))
    }

    /// Structural invariants: attaching words are closed walks starting at
    /// the basepoint, and all indices are in range.
    pub fn check(&self) -> Result<(), String> {
        for (k, e) in self.edges.iter().enumerate() {
            if e.tail >= self.vertices.len() || e.head >= self.vertices.len() {
                return Err(format!("edge {k} has an endpoint out of range"));
            }
        }
        for (k, cell) in self.cells.iter().enumerate() {
            if cell.base >= self.vertices.len() {
                return Err(format!("cell {k} has basepoint out of range"));
            }
            let n = cell.word.len();
            for (i, s) in cell.word.iter().enumerate() {
                if s.edge >= self.edges.len() {
                    return Err(format!("cell {k} uses unknown edge {}", s.edge));
                }
                let next = cell.word[(i + 1) % n];
                if next.edge < self.edges.len() && self.head(*s) != self.tail(next) {
                    return Err(format!("attaching word of cell {k} breaks at position {i}"));
                }
            }
            if let Some(first) = cell.word.first() {
                if first.edge < self.edges.len() && self.tail(*first) != cell.base {
                    return Err(format!("cell {k} does not start at its basepoint"));
                }
            }
        }
        Ok(())
    }

    pub fn word_string(&self, word: &[EdgeSymbol]) -> String {
        if word.is_empty() {
            return "1".to_string();
        }
        word.iter()
            .map(|s| if s.inverse { format!("e{}⁻¹", s.edge) } else { format!("e{}", s.edge) })
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl fmt::Display for QuotientComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} vertices, {} edges, {} cells", self.vertices.len(), self.edges.len(), self.cells.len())?;
        for (k, cell) in self.cells.iter().enumerate() {
            writeln!(f, "  cell {k}: {}", self.word_string(&cell.word))?;
        }
        Ok(())
    }
}

/// Builds the quotient 2-complex of a valid scheme.
///
/// Each cell reads the boundary of the lower-indexed face of its pair in
/// the listed direction. An edge class glued onto itself with reversed
/// orientation folds at its midpoint: it becomes a half-edge from its end
/// class to a new midpoint vertex (with no sphere members), and each
/// occurrence reads out and back along it.
pub fn build_quotient(scheme: &FacePairingScheme) -> QuotientComplex {
    let actions = PairingActions::new(scheme);
    build_quotient_with(scheme, &actions)
}

pub fn build_quotient_with(scheme: &FacePairingScheme, actions: &PairingActions) -> QuotientComplex {
    let c = &scheme.complex;
    let oriented = oriented_edge_classes(scheme);
    let vclasses = vertex_classes(scheme);
    let eclasses = &oriented.partition;
    let nv = vclasses.len();
    let mut midpoint = vec![None; eclasses.len()];
    for (i, &k) in oriented.folded.iter().enumerate() {
        midpoint[k] = Some(nv + i);
    }

    let mut vertices: Vec<QuotientVertex> =
        vclasses.classes.iter().map(|m| QuotientVertex { members: m.clone() }).collect();
    vertices.extend(oriented.folded.iter().map(|_| QuotientVertex { members: Vec::new() }));
    let edges = eclasses
        .classes
        .iter()
        .enumerate()
        .map(|(k, members)| {
            let rep = c.edges[members[0]];
            QuotientEdge {
                tail: vclasses.class_of[rep[0]],
                head: midpoint[k].unwrap_or(vclasses.class_of[rep[1]]),
                order: actions.order(k),
                members: members.iter().map(|&e| (e, oriented.flipped[e])).collect(),
            }
        })
        .collect();

    let mut pairs: Vec<[usize; 2]> = scheme.pairing.iter().map(|g| [g.a.min(g.b), g.a.max(g.b)]).collect();
    pairs.sort_unstable();
    let cells = pairs
        .into_iter()
        .map(|faces| {
            let mut word = Vec::with_capacity(c.faces[faces[0]].len());
            for d in &c.faces[faces[0]] {
                let edge = eclasses.class_of[d.edge];
                if midpoint[edge].is_some() {
                    word.push(EdgeSymbol { edge, inverse: false });
                    word.push(EdgeSymbol { edge, inverse: true });
                } else {
                    word.push(EdgeSymbol { edge, inverse: d.reversed ^ oriented.flipped[d.edge] });
                }
            }
            let base = vclasses.class_of[c.tail(c.faces[faces[0]][0])];
            Cell { word, base, faces }
        })
        .collect();
    QuotientComplex { vertices, edges, cells }
}

pub fn euler_characteristic(q: &QuotientComplex) -> i64 {
    q.euler_characteristic()
}
