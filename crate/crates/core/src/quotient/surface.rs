//! Surface recognition for 2-complexes and lens-shell detection.

use serde::Serialize;

use super::{EdgeSymbol, QuotientComplex};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "class")]
pub enum SurfaceClass {
    Disk,
    ProjectivePlane,
    Sphere,
    Other { euler_characteristic: i64, orientable: bool, has_boundary: bool },
    NotASurface,
}

impl SurfaceClass {
    pub fn name(&self) -> &'static str {
        match self {
            SurfaceClass::Disk => "disk",
            SurfaceClass::ProjectivePlane => "projective_plane",
            SurfaceClass::Sphere => "sphere",
            SurfaceClass::Other { .. } => "other",
            SurfaceClass::NotASurface => "not_a_surface",
        }
    }
}

fn arriving_end(s: EdgeSymbol) -> usize {
    2 * s.edge + usize::from(!s.inverse)
}

fn leaving_end(s: EdgeSymbol) -> usize {
    2 * s.edge + usize::from(s.inverse)
}

/// Decides whether `q` is a compact surface and, if so, which one.
///
/// Each edge must lie on one or two cell sides. The link of a vertex is the
/// graph whose nodes are edge ends at the vertex and whose arcs are cell
/// corners; it must be a single arc or circle.
pub fn classify_surface(q: &QuotientComplex) -> SurfaceClass {
    let sides = q.edge_incidences();
    if sides.iter().any(|&n| n == 0 || n > 2) {
        return SurfaceClass::NotASurface;
    }

    // link graph over edge ends, plus one extra node per empty-word cell
    let ends = 2 * q.edges.len();
    let empty: Vec<usize> = (0..q.cells.len()).filter(|&k| q.cells[k].word.is_empty()).collect();
    let mut link = UnionFind::new(ends + empty.len());
    for cell in &q.cells {
        let n = cell.word.len();
        for i in 0..n {
            link.union(arriving_end(cell.word[(i + n - 1) % n]), leaving_end(cell.word[i]));
        }
    }
    let mut components_at: Vec<Vec<usize>> = vec![Vec::new(); q.vertices.len()];
    for (id, e) in q.edges.iter().enumerate() {
        components_at[e.tail].push(link.find(2 * id));
        components_at[e.head].push(link.find(2 * id + 1));
    }
    for (k, &cell) in empty.iter().enumerate() {
        components_at[q.cells[cell].base].push(link.find(ends + k));
    }
    for comps in &mut components_at {
        comps.sort_unstable();
        comps.dedup();
        if comps.len() != 1 {
            return SurfaceClass::NotASurface;
        }
    }

    // coherent orientation: cells sharing an edge traverse it oppositely
    let mut orient = UnionFind::new(q.cells.len());
    let mut seen: Vec<Option<(usize, bool)>> = vec![None; q.edges.len()];
    let mut orientable = true;
    for (k, cell) in q.cells.iter().enumerate() {
        for s in &cell.word {
            match seen[s.edge] {
                None => seen[s.edge] = Some((k, s.inverse)),
                Some((other, inv)) => {
                    if orient.union_with_parity(k, other, !(s.inverse ^ inv)).is_none() {
                        orientable = false;
                    }
                }
            }
        }
    }

    let mut whole = UnionFind::new(q.vertices.len() + q.cells.len());
    for e in &q.edges {
        whole.union(e.tail, e.head);
    }
    for (k, cell) in q.cells.iter().enumerate() {
        whole.union(q.vertices.len() + k, cell.base);
    }
    let connected = whole.labels().1 == 1;
    let has_boundary = sides.contains(&1);
    let chi = q.euler_characteristic();
    match (connected, chi, orientable, has_boundary) {
        (true, 1, true, true) => SurfaceClass::Disk,
        (true, 1, false, false) => SurfaceClass::ProjectivePlane,
        (true, 2, true, false) => SurfaceClass::Sphere,
        _ => SurfaceClass::Other { euler_characteristic: chi, orientable, has_boundary },
    }
}

/// Returns `q` when the complex is one vertex, one edge and one cell whose
/// attaching word is a power `a^q` (either sign) with `q >= 3`.
pub fn recognize_lens_shell(q: &QuotientComplex) -> Option<usize> {
    if q.vertices.len() != 1 || q.edges.len() != 1 || q.cells.len() != 1 {
        return None;
    }
    let word = &q.cells[0].word;
    let first = *word.first()?;
    (word.len() >= 3 && word.iter().all(|&s| s == first)).then_some(word.len())
}

#[cfg(test)]
mod tests {
    use super::super::build_quotient;
    use super::*;
    use crate::gallery::{gen_lens, gen_platonic_space, gen_trivial_sphere, PlatonicKind};

    fn cell_complex(vertices: usize, edges: &[(usize, usize)], words: &[&[i64]]) -> QuotientComplex {
        use super::super::{Cell, QuotientEdge, QuotientVertex};
        let edges: Vec<QuotientEdge> =
            edges.iter().map(|&(tail, head)| QuotientEdge { tail, head, order: 1, members: vec![] }).collect();
        let cells = words
            .iter()
            .map(|w| {
                let word: Vec<EdgeSymbol> =
                    w.iter().map(|&x| EdgeSymbol { edge: x.unsigned_abs() as usize - 1, inverse: x < 0 }).collect();
                let base = word.first().map_or(0, |&s| if s.inverse { edges[s.edge].head } else { edges[s.edge].tail });
                Cell { word, base, faces: [0, 0] }
            })
            .collect();
        let q = QuotientComplex {
            vertices: (0..vertices).map(|v| QuotientVertex { members: vec![v] }).collect(),
            edges,
            cells,
        };
        q.check().unwrap();
        q
    }

    #[test]
    fn gallery_surfaces() {
        assert_eq!(classify_surface(&build_quotient(&gen_lens(2, 1).unwrap())), SurfaceClass::ProjectivePlane);
        for n in 1..=6 {
            assert_eq!(classify_surface(&build_quotient(&gen_trivial_sphere(n).unwrap())), SurfaceClass::Disk, "n={n}");
        }
        assert_eq!(classify_surface(&build_quotient(&gen_lens(5, 2).unwrap())), SurfaceClass::NotASurface);
    }

    #[test]
    fn classic_words() {
        // torus a b a^-1 b^-1
        let torus = cell_complex(1, &[(0, 0), (0, 0)], &[&[1, 2, -1, -2]]);
        assert_eq!(
            classify_surface(&torus),
            SurfaceClass::Other { euler_characteristic: 0, orientable: true, has_boundary: false }
        );
        // Klein bottle a b a^-1 b
        let klein = cell_complex(1, &[(0, 0), (0, 0)], &[&[1, 2, -1, 2]]);
        assert_eq!(
            classify_surface(&klein),
            SurfaceClass::Other { euler_characteristic: 0, orientable: false, has_boundary: false }
        );
        // sphere a a^-1 on an arc
        assert_eq!(classify_surface(&cell_complex(2, &[(0, 1)], &[&[1, -1]])), SurfaceClass::Sphere);
        // Moebius band: a a b with b a free edge
        let moebius = cell_complex(1, &[(0, 0), (0, 0)], &[&[1, 1, 2]]);
        assert_eq!(
            classify_surface(&moebius),
            SurfaceClass::Other { euler_characteristic: 0, orientable: false, has_boundary: true }
        );
        // two disks sharing a vertex: not a surface
        assert_eq!(classify_surface(&cell_complex(1, &[(0, 0), (0, 0)], &[&[1], &[2]])), SurfaceClass::NotASurface);
        // a dangling edge
        assert_eq!(classify_surface(&cell_complex(2, &[(0, 0), (0, 1)], &[&[1]])), SurfaceClass::NotASurface);
        // a point
        assert_eq!(classify_surface(&cell_complex(1, &[], &[])), SurfaceClass::NotASurface);
    }

    #[test]
    fn lens_shells() {
        assert_eq!(recognize_lens_shell(&build_quotient(&gen_lens(7, 3).unwrap())), Some(7));
        assert_eq!(recognize_lens_shell(&build_quotient(&gen_lens(2, 1).unwrap())), None);
        assert_eq!(recognize_lens_shell(&build_quotient(&gen_platonic_space(PlatonicKind::Quaternion))), None);
        assert_eq!(recognize_lens_shell(&cell_complex(1, &[(0, 0)], &[&[-1, -1, -1]])), Some(3));
        assert_eq!(recognize_lens_shell(&cell_complex(1, &[(0, 0)], &[&[1, -1, 1]])), None);
    }
}
