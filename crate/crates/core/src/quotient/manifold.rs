//! Manifold check for the 3-dimensional identification space.
//!
//! The link of a sphere vertex inside the ball is a disk whose boundary arcs
//! are the face corners at that vertex and whose boundary points are edge
//! ends. Gluing corners by the pairing assembles, for each vertex class, a
//! closed polygonal surface: its vertices are edge-end classes, its edges
//! glued corner pairs, its faces the sphere vertices of the class. The space
//! is a manifold exactly when every such link is a connected surface of
//! Euler characteristic 2 and no edge is glued onto itself backwards.

use serde::Serialize;

use crate::complex::{edge_end_classes, oriented_edge_classes, vertex_classes, FacePairingScheme};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexLink {
    /// Quotient vertex (vertex class) id.
    pub vertex: usize,
    /// Link faces: sphere vertices in the class.
    pub faces: usize,
    /// Link edges: corner pairs at the class.
    pub edges: usize,
    /// Link vertices: edge-end classes at the class.
    pub vertices: usize,
    pub euler_characteristic: i64,
    pub connected: bool,
}

impl VertexLink {
    pub fn is_sphere(&self) -> bool {
        self.connected && self.euler_characteristic == 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ManifoldReport {
    pub is_manifold: bool,
    pub links: Vec<VertexLink>,
    /// Edge classes glued onto themselves with reversed orientation; the
    /// midpoint of such an edge has a projective-plane link.
    pub folded_edge_classes: Vec<usize>,
    pub diagnostics: Vec<String>,
}

pub fn verify_manifold(scheme: &FacePairingScheme) -> ManifoldReport {
    let c = &scheme.complex;
    let vclasses = vertex_classes(scheme);
    let ends = edge_end_classes(scheme);
    let folded = oriented_edge_classes(scheme).folded;
    let nv = vclasses.len();

    let mut faces = vec![0usize; nv];
    for &k in &vclasses.class_of {
        faces[k] += 1;
    }
    let mut corners = vec![0usize; nv];
    for face in &c.faces {
        for d in face {
            corners[vclasses.class_of[c.tail(*d)]] += 1;
        }
    }
    let mut end_classes = vec![0usize; nv];
    for members in &ends.classes {
        let (e, end) = (members[0] / 2, members[0] % 2);
        end_classes[vclasses.class_of[c.edges[e][end]]] += 1;
    }

    // connectivity: sphere vertices joined to the edge-end classes they carry
    let end_base = c.vertices.len();
    let mut uf = UnionFind::new(end_base + ends.len());
    for (e, ends_of_e) in c.edges.iter().enumerate() {
        for (end, &v) in ends_of_e.iter().enumerate() {
            uf.union(v, end_base + ends.class_of[2 * e + end]);
        }
    }
    for g in &scheme.pairing {
        for i in 0..c.face_len(g.a) {
            let (f2, j) = scheme.corner_image(g.a, i);
            uf.union(c.tail(c.faces[g.a][i]), c.tail(c.faces[f2][j]));
        }
    }
    let mut roots: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (v, &k) in vclasses.class_of.iter().enumerate() {
        roots[k].push(uf.find(v));
    }

    let mut diagnostics = Vec::new();
    let links: Vec<VertexLink> = (0..nv)
        .map(|k| {
            if corners[k] % 2 == 1 {
                diagnostics.push(format!("vertex {k}: odd number of corners ({})", corners[k]));
            }
            let mut r = roots[k].clone();
            r.sort_unstable();
            r.dedup();
            let link = VertexLink {
                vertex: k,
                faces: faces[k],
                edges: corners[k] / 2,
                vertices: end_classes[k],
                euler_characteristic: end_classes[k] as i64 - (corners[k] / 2) as i64 + faces[k] as i64,
                connected: r.len() == 1,
            };
            if !link.is_sphere() {
                diagnostics.push(format!(
                    "vertex {k}: link has Euler characteristic {}{}",
                    link.euler_characteristic,
                    if link.connected { "" } else { " and is disconnected" }
                ));
            }
            link
        })
        .collect();
    for &class in &folded {
        diagnostics.push(format!("edge class {class} is glued onto itself with reversed orientation"));
    }
    ManifoldReport {
        is_manifold: folded.is_empty() && links.iter().all(VertexLink::is_sphere),
        links,
        folded_edge_classes: folded,
        diagnostics,
    }
}
