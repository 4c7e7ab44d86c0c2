//! Deterministic generators for face-pairing schemes.
//!
//! Lens shells use the two-hemisphere model: `q` equator vertices and edges,
//! an upper and a lower `q`-gon, both listed along the equator in the same
//! direction, glued by a rotation through `p` steps. Platonic spaces use the
//! outward-oriented solids below with opposite faces glued by a fixed twist.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::complex::{BoundaryComplex, DirectedEdge, FacePairingScheme, Gluing, Provenance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GalleryError {
    #[error("lens shell needs coprime q > p >= 1, got q = {q}, p = {p}")]
    LensParameters { q: usize, p: usize },
    #[error("trivial sphere needs n >= 1, got {0}")]
    TrivialSphereSize(usize),
    #[error("base {base} has {faces} faces; an odd count cannot be paired")]
    OddFaceCount { base: Solid, faces: usize },
    #[error("unknown solid '{0}' (expected tetrahedron, cube, octahedron or dodecahedron)")]
    UnknownSolid(String),
    #[error("unknown platonic space '{0}' (expected quaternion or poincare)")]
    UnknownSpace(String),
}

/// What a scheme was generated from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GallerySpec {
    Lens { q: usize, p: usize },
    TrivialSphere { n: usize },
    PlatonicSpace { space: PlatonicKind },
    Random { base: Solid, seed: u64 },
}

impl GallerySpec {
    pub fn generate(&self) -> Result<FacePairingScheme, GalleryError> {
        match *self {
            GallerySpec::Lens { q, p } => gen_lens(q, p),
            GallerySpec::TrivialSphere { n } => gen_trivial_sphere(n),
            GallerySpec::PlatonicSpace { space } => Ok(gen_platonic_space(space)),
            GallerySpec::Random { base, seed } => gen_random(base, seed),
        }
    }
}

fn cycle_complex(n: usize) -> (Vec<String>, Vec<[usize; 2]>, Vec<DirectedEdge>) {
    let vertices = (0..n).map(|i| format!("v{i}")).collect();
    let edges = (0..n).map(|i| [i, (i + 1) % n]).collect();
    let walk = (0..n).map(DirectedEdge::forward).collect();
    (vertices, edges, walk)
}

fn provenance(generator: &str, parameters: &[(&str, serde_json::Value)]) -> Provenance {
    Provenance {
        generator: generator.to_string(),
        parameters: parameters.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<BTreeMap<_, _>>(),
    }
}

/// The lens shell for coprime `q > p >= 1`.
pub fn gen_lens(q: usize, p: usize) -> Result<FacePairingScheme, GalleryError> {
    if p < 1 || q <= p || q.gcd(&p) != 1 {
        return Err(GalleryError::LensParameters { q, p });
    }
    let (vertices, edges, walk) = cycle_complex(q);
    let complex = BoundaryComplex { vertices, edges, faces: vec![walk.clone(), walk] };
    let scheme = FacePairingScheme::new(complex, vec![Gluing { a: 0, b: 1, offset: p, reversed: false }])
        .expect("lens indices are in range");
    Ok(scheme.with_provenance(provenance("lens", &[("q", json!(q)), ("p", json!(p))])))
}

/// Two `n`-gons sharing their whole boundary, glued by the identity.
pub fn gen_trivial_sphere(n: usize) -> Result<FacePairingScheme, GalleryError> {
    if n < 1 {
        return Err(GalleryError::TrivialSphereSize(n));
    }
    let (vertices, edges, walk) = cycle_complex(n);
    let complex = BoundaryComplex { vertices, edges, faces: vec![walk.clone(), walk] };
    let scheme = FacePairingScheme::new(complex, vec![Gluing { a: 0, b: 1, offset: 0, reversed: false }])
        .expect("trivial sphere indices are in range");
    Ok(scheme.with_provenance(provenance("trivial_sphere", &[("n", json!(n))])))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Solid {
    Tetrahedron,
    Cube,
    Octahedron,
    Dodecahedron,
}

impl Solid {
    pub const ALL: [Solid; 4] = [Solid::Tetrahedron, Solid::Cube, Solid::Octahedron, Solid::Dodecahedron];

    pub fn name(self) -> &'static str {
        match self {
            Solid::Tetrahedron => "tetrahedron",
            Solid::Cube => "cube",
            Solid::Octahedron => "octahedron",
            Solid::Dodecahedron => "dodecahedron",
        }
    }

    /// Vertex count and outward-oriented face cycles.
    fn data(self) -> (usize, &'static [&'static [usize]]) {
        match self {
            Solid::Tetrahedron => (4, TETRAHEDRON),
            Solid::Cube => (8, CUBE),
            Solid::Octahedron => (6, OCTAHEDRON),
            Solid::Dodecahedron => (20, DODECAHEDRON),
        }
    }

    pub fn complex(self) -> BoundaryComplex {
        let (n, faces) = self.data();
        BoundaryComplex::from_vertex_cycles(n, faces)
    }
}

impl fmt::Display for Solid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Solid {
    type Err = GalleryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Solid::ALL.into_iter().find(|b| b.name() == s).ok_or_else(|| GalleryError::UnknownSolid(s.to_string()))
    }
}

const TETRAHEDRON: &[&[usize]] = &[&[0, 1, 2], &[0, 3, 1], &[0, 2, 3], &[1, 3, 2]];

const CUBE: &[&[usize]] = &[&[4, 6, 7, 5], &[2, 3, 7, 6], &[1, 5, 7, 3], &[0, 2, 6, 4], &[0, 4, 5, 1], &[0, 1, 3, 2]];

const OCTAHEDRON: &[&[usize]] =
    &[&[0, 2, 4], &[0, 5, 2], &[0, 4, 3], &[0, 3, 5], &[1, 4, 2], &[1, 2, 5], &[1, 3, 4], &[1, 5, 3]];

const DODECAHEDRON: &[&[usize]] = &[
    &[6, 18, 7, 19, 16],
    &[4, 16, 19, 5, 15],
    &[5, 19, 7, 17, 11],
    &[4, 8, 14, 6, 16],
    &[3, 17, 7, 18, 12],
    &[2, 12, 18, 6, 14],
    &[1, 9, 15, 5, 11],
    &[0, 8, 4, 15, 9],
    &[1, 11, 17, 3, 13],
    &[0, 10, 2, 14, 8],
    &[2, 10, 13, 3, 12],
    &[0, 9, 1, 13, 10],
];

/// Opposite faces of the cube, each glued with a quarter turn.
const QUATERNION_GLUINGS: &[(usize, usize, usize)] = &[(0, 5, 2), (1, 4, 2), (2, 3, 2)];

/// Opposite faces of the dodecahedron, each glued with a tenth turn.
const POINCARE_GLUINGS: &[(usize, usize, usize)] =
    &[(0, 11, 3), (1, 10, 4), (2, 9, 3), (3, 8, 4), (4, 7, 3), (5, 6, 4)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlatonicKind {
    Quaternion,
    Poincare,
}

impl FromStr for PlatonicKind {
    type Err = GalleryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quaternion" => Ok(PlatonicKind::Quaternion),
            "poincare" => Ok(PlatonicKind::Poincare),
            other => Err(GalleryError::UnknownSpace(other.to_string())),
        }
    }
}

/// The quaternion space (cube) or the Poincaré homology sphere (dodecahedron).
pub fn gen_platonic_space(kind: PlatonicKind) -> FacePairingScheme {
    let (solid, table, name) = match kind {
        PlatonicKind::Quaternion => (Solid::Cube, QUATERNION_GLUINGS, "quaternion"),
        PlatonicKind::Poincare => (Solid::Dodecahedron, POINCARE_GLUINGS, "poincare"),
    };
    let pairing = table.iter().map(|&(a, b, offset)| Gluing { a, b, offset, reversed: true }).collect();
    FacePairingScheme::new(solid.complex(), pairing)
        .expect("platonic tables are in range")
        .with_provenance(provenance("platonic_space", &[("space", json!(name))]))
}

/// A pseudo-random pairing of the faces of `base`: faces are shuffled and
/// paired consecutively, each pair getting a random offset and direction.
/// The output is a pure function of `(base, seed)`.
pub fn gen_random(base: Solid, seed: u64) -> Result<FacePairingScheme, GalleryError> {
    let complex = base.complex();
    let n = complex.faces.len();
    if n % 2 == 1 {
        return Err(GalleryError::OddFaceCount { base, faces: n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut pairing: Vec<Gluing> = order
        .chunks(2)
        .map(|pair| {
            let len = complex.faces[pair[0]].len();
            Gluing {
                a: pair[0].min(pair[1]),
                b: pair[0].max(pair[1]),
                offset: rng.gen_range(0..len),
                reversed: rng.gen_bool(0.5),
            }
        })
        .collect();
    pairing.sort_by_key(|g| g.a);
    Ok(FacePairingScheme::new(complex, pairing)
        .expect("random pairing indices are in range")
        .with_provenance(provenance("random", &[("base", json!(base.name())), ("seed", json!(seed))])))
}
