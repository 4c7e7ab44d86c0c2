//! Independent reference computations used to cross-check the library.
#![allow(dead_code)]

use facepair::complex::FacePairingScheme;
use facepair::gallery::{gen_lens, gen_platonic_space, gen_trivial_sphere, PlatonicKind};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

pub fn gallery() -> Vec<(String, FacePairingScheme)> {
    let mut out = Vec::new();
    for q in 2..=12 {
        for p in 1..q {
            if let Ok(s) = gen_lens(q, p) {
                out.push((format!("lens({q},{p})"), s));
            }
        }
    }
    for n in 1..=6 {
        out.push((format!("trivial_sphere({n})"), gen_trivial_sphere(n).unwrap()));
    }
    out.push(("quaternion".into(), gen_platonic_space(PlatonicKind::Quaternion)));
    out.push(("poincare".into(), gen_platonic_space(PlatonicKind::Poincare)));
    out
}

/// Label propagation to a fixed point: every linked pair takes the smaller
/// label until nothing changes. Returns the sorted class sizes and labels.
pub fn naive_classes(n: usize, links: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(a, b) in links {
            let m = label[a].min(label[b]);
            if label[a] != m || label[b] != m {
                label[a] = m;
                label[b] = m;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut sizes = std::collections::BTreeMap::new();
    for &l in &label {
        *sizes.entry(l).or_insert(0usize) += 1;
    }
    let mut s: Vec<usize> = sizes.into_values().collect();
    s.sort_unstable();
    (s, label)
}

/// Position and corner images read directly off the stored gluings.
fn position_image(n: usize, offset: usize, reversed: bool, i: usize) -> usize {
    if reversed {
        (offset + n - i % n) % n
    } else {
        (i + offset) % n
    }
}

fn corner_image(n: usize, offset: usize, reversed: bool, i: usize) -> usize {
    if reversed {
        (offset + 1 + n - i % n) % n
    } else {
        (i + offset) % n
    }
}

pub fn edge_links(s: &FacePairingScheme) -> Vec<(usize, usize)> {
    let faces = &s.complex.faces;
    let mut links = Vec::new();
    for g in &s.pairing {
        let n = faces[g.a].len();
        for i in 0..n {
            let j = position_image(n, g.offset, g.reversed, i);
            links.push((faces[g.a][i].edge, faces[g.b][j].edge));
        }
    }
    links
}

pub fn vertex_links(s: &FacePairingScheme) -> Vec<(usize, usize)> {
    let c = &s.complex;
    let mut links = Vec::new();
    for g in &s.pairing {
        let n = c.faces[g.a].len();
        for i in 0..n {
            let j = corner_image(n, g.offset, g.reversed, i);
            links.push((c.tail(c.faces[g.a][i]), c.tail(c.faces[g.b][j])));
        }
    }
    links
}

pub fn naive_edge_class_sizes(s: &FacePairingScheme) -> Vec<usize> {
    naive_classes(s.edge_count(), &edge_links(s)).0
}

pub fn naive_vertex_class_sizes(s: &FacePairingScheme) -> Vec<usize> {
    naive_classes(s.vertex_count(), &vertex_links(s)).0
}

/// Bareiss fraction-free determinant.
pub fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::from(1);
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = x / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Invariant factors of an integer matrix from determinantal divisors:
/// d_k = D_k / D_(k-1) with D_k the gcd of all k×k minors. Returns
/// (nonzero invariant factors, rank).
pub fn determinantal_factors(m: &[Vec<i64>], cols: usize) -> (Vec<BigInt>, usize) {
    let rows = m.len();
    let mut factors = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for r in subsets(rows, k) {
            for c in subsets(cols, k) {
                let minor: Vec<Vec<BigInt>> =
                    r.iter().map(|&i| c.iter().map(|&j| BigInt::from(m[i][j])).collect()).collect();
                g = g.gcd(&det(&minor));
            }
        }
        if g.is_zero() {
            return (factors, k - 1);
        }
        factors.push((&g / &prev).abs());
        prev = g;
    }
    let rank = factors.len();
    (factors, rank)
}

/// H1 text (`0`, `Z_5`, `Z ⊕ Z_2`, …) of ⟨generators | relators⟩ from the
/// exponent-sum matrix via determinantal divisors.
pub fn h1_oracle(generators: usize, relators: &[Vec<(usize, bool)>]) -> String {
    let m: Vec<Vec<i64>> = relators
        .iter()
        .map(|r| {
            let mut row = vec![0i64; generators];
            for &(g, inv) in r {
                row[g] += if inv { -1 } else { 1 };
            }
            row
        })
        .collect();
    let (factors, rank) = determinantal_factors(&m, generators);
    let mut parts = Vec::new();
    match generators - rank {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(factors.iter().filter(|d| **d > BigInt::from(1)).map(|d| format!("Z_{d}")));
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ⊕ ")
    }
}

fn h1_text(free: usize, factors: &[BigInt]) -> String {
    let mut parts = Vec::new();
    match free {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{r}")),
    }
    parts.extend(factors.iter().filter(|d| **d > BigInt::from(1)).map(|d| format!("Z_{d}")));
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" ⊕ ")
    }
}

/// H1 of a quotient from its cellular chain complex: free rank is
/// E − rank ∂1 − rank ∂2, torsion the invariant factors of ∂2.
pub fn h1_cellular(q: &facepair::QuotientComplex) -> String {
    let ne = q.edges.len();
    let d2: Vec<Vec<i64>> = q
        .cells
        .iter()
        .map(|c| {
            let mut row = vec![0i64; ne];
            for s in &c.word {
                row[s.edge] += if s.inverse { -1 } else { 1 };
            }
            row
        })
        .collect();
    let d1: Vec<Vec<i64>> = q
        .edges
        .iter()
        .map(|e| {
            let mut row = vec![0i64; q.vertices.len()];
            row[e.head] += 1;
            row[e.tail] -= 1;
            row
        })
        .collect();
    let (factors, r2) = determinantal_factors(&d2, ne);
    let (_, r1) = determinantal_factors(&d1, q.vertices.len());
    h1_text(ne - r1 - r2, &factors)
}

/// Flag ids in face-major order, with p0 and the edge reflections computed
/// straight from the gluing table.
pub struct FlagOracle {
    pub start: Vec<usize>,
    pub p0: Vec<usize>,
    /// Flag of the other side of the same sphere edge.
    pub across: Vec<usize>,
    pub edge_of: Vec<usize>,
}

impl FlagOracle {
    pub fn new(s: &FacePairingScheme) -> Self {
        let faces = &s.complex.faces;
        let mut start = Vec::new();
        let mut n = 0;
        for f in faces {
            start.push(n);
            n += f.len();
        }
        let mut p0 = vec![usize::MAX; n];
        for g in &s.pairing {
            let len = faces[g.a].len();
            for i in 0..len {
                let j = position_image(len, g.offset, g.reversed, i);
                p0[start[g.a] + i] = start[g.b] + j;
                p0[start[g.b] + j] = start[g.a] + i;
            }
        }
        let mut edge_of = vec![0; n];
        let mut sides: Vec<Vec<usize>> = vec![Vec::new(); s.edge_count()];
        for (f, face) in faces.iter().enumerate() {
            for (i, d) in face.iter().enumerate() {
                edge_of[start[f] + i] = d.edge;
                sides[d.edge].push(start[f] + i);
            }
        }
        let mut across = vec![usize::MAX; n];
        for pair in &sides {
            assert_eq!(pair.len(), 2, "every sphere edge has two sides");
            across[pair[0]] = pair[1];
            across[pair[1]] = pair[0];
        }
        FlagOracle { start, p0, across, edge_of }
    }

    /// Smallest m > 0 with (p0 ∘ p_α)^m the identity on the flags of the
    /// edges in `class`, found by iterating the permutation.
    pub fn order(&self, class: &[usize]) -> u64 {
        let flags: Vec<usize> = (0..self.p0.len()).filter(|x| class.contains(&self.edge_of[*x])).collect();
        let step = |x: usize| {
            let y = if class.contains(&self.edge_of[x]) { self.across[x] } else { x };
            self.p0[y]
        };
        let mut cur: Vec<usize> = flags.clone();
        for m in 1..=10_000u64 {
            cur = cur.into_iter().map(step).collect();
            if cur == flags {
                return m;
            }
        }
        panic!("order exceeds the search bound");
    }
}
