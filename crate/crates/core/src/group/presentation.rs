use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use super::GroupError;
use crate::quotient::{spanning_tree, DeformationRecord, QuotientComplex};
use crate::unionfind::UnionFind;

/// A generator or its inverse. Serialized as a signed 1-based index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(into = "i64")]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter { inverse: !self.inverse, ..self }
    }

    /// `+k` is generator `k-1`, `-k` its inverse.
    pub fn from_signed(x: i64) -> Self {
        assert!(x != 0, "letter index must be nonzero");
        Letter { generator: x.unsigned_abs() as usize - 1, inverse: x < 0 }
    }
}

impl From<Letter> for i64 {
    fn from(l: Letter) -> i64 {
        let k = l.generator as i64 + 1;
        if l.inverse {
            -k
        } else {
            k
        }
    }
}

pub type Word = Vec<Letter>;

pub fn word_from_signed(xs: &[i64]) -> Word {
    xs.iter().map(|&x| Letter::from_signed(x)).collect()
}

pub fn inverse(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inv()).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn cyclic_reduce(w: &[Letter]) -> Word {
    let w = free_reduce(w);
    let (mut i, mut j) = (0, w.len());
    while j - i >= 2 && w[i] == w[j - 1].inv() {
        i += 1;
        j -= 1;
    }
    w[i..j].to_vec()
}

/// Smallest rotation of the word or its inverse; equal for relators that
/// differ by conjugation and inversion.
pub fn canonical(w: &[Letter]) -> Word {
    let w = cyclic_reduce(w);
    let inv = inverse(&w);
    let mut best = w.clone();
    for base in [&w, &inv] {
        for r in 0..base.len() {
            let rot: Word = base[r..].iter().chain(&base[..r]).copied().collect();
            if rot < best {
                best = rot;
            }
        }
    }
    best
}

/// Link from a presentation to the complex it describes: the homotopy class
/// of each edge (closed up through the chosen basepoint paths) as a word, and
/// the cell each relator came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lineage {
    /// Fingerprint of the complex.
    pub complex: String,
    pub edge_words: Vec<Word>,
    pub relator_cells: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Presentation {
    pub generators: usize,
    pub relators: Vec<Word>,
    #[serde(skip)]
    pub origin: Option<Lineage>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Self {
        let p = Presentation { generators, relators: relators.iter().map(|r| free_reduce(r)).collect(), origin: None };
        assert!(p.is_well_formed(), "relator uses an unknown generator");
        p
    }

    pub fn is_well_formed(&self) -> bool {
        self.relators.iter().flatten().all(|l| l.generator < self.generators)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Vec::len).sum()
    }

    pub fn generator_name(i: usize) -> String {
        if i < 26 {
            char::from(b'a' + i as u8).to_string()
        } else {
            format!("x{i}")
        }
    }

    pub fn word_text(w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let mut runs: Vec<(usize, i64)> = Vec::new();
        for l in w {
            let step = if l.inverse { -1 } else { 1 };
            match runs.last_mut() {
                Some((g, k)) if *g == l.generator && (*k > 0) == (step > 0) => *k += step,
                _ => runs.push((l.generator, step)),
            }
        }
        runs.iter()
            .map(|&(g, k)| {
                let name = Self::generator_name(g);
                if k == 1 {
                    name
                } else {
                    format!("{name}^{k}")
                }
            })
            .collect::<Vec<_>>()
            .join("·")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.generators).map(Self::generator_name).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| Self::word_text(r)).collect();
        write!(f, "⟨{} | {}⟩", gens.join(", "), rels.join(", "))
    }
}

/// Edge-path presentation: generators are the edges outside the breadth-first
/// spanning tree, in edge order; each cell gives its attaching word with tree
/// edges erased.
pub fn fundamental_presentation(q: &QuotientComplex) -> Result<Presentation, GroupError> {
    let mut uf = UnionFind::new(q.vertices.len());
    for e in &q.edges {
        uf.union(e.tail, e.head);
    }
    if uf.labels().1 != 1 {
        return Err(GroupError::Disconnected);
    }
    let tree: HashSet<usize> = spanning_tree(q).into_iter().collect();
    let mut generators = 0;
    let edge_words: Vec<Word> = (0..q.edges.len())
        .map(|e| {
            if tree.contains(&e) {
                Vec::new()
            } else {
                generators += 1;
                vec![Letter::new(generators - 1, false)]
            }
        })
        .collect();
    let relators = q.cells.iter().map(|cell| path_word(&edge_words, &cell.word)).collect();
    Ok(Presentation {
        generators,
        relators,
        origin: Some(Lineage {
            complex: q.fingerprint(),
            edge_words,
            relator_cells: (0..q.cells.len()).map(Some).collect(),
        }),
    })
}

fn path_word(edge_words: &[Word], path: &[crate::quotient::EdgeSymbol]) -> Word {
    let mut w = Vec::new();
    for s in path {
        if s.inverse {
            w.extend(inverse(&edge_words[s.edge]));
        } else {
            w.extend_from_slice(&edge_words[s.edge]);
        }
    }
    free_reduce(&w)
}

/// Replaces generator `g` by `with` (a word in the other generators) and
/// renumbers the generators above it.
fn eliminate(relators: &mut [Word], g: usize, with: &[Letter]) {
    let with_inv = inverse(with);
    for r in relators.iter_mut() {
        let mut out = Vec::with_capacity(r.len());
        for &l in r.iter() {
            if l.generator == g {
                out.extend_from_slice(if l.inverse { &with_inv } else { with });
            } else {
                out.push(l);
            }
        }
        for l in &mut out {
            if l.generator > g {
                l.generator -= 1;
            }
        }
        *r = out;
    }
}

/// Repeats cyclic reduction, removal of empty and duplicate relators, and
/// elimination of generators through relators of length one or two until
/// nothing changes.
pub fn tietze_simplify(p: &Presentation) -> Presentation {
    let mut generators = p.generators;
    let mut relators = p.relators.clone();
    loop {
        let mut seen = HashSet::new();
        relators =
            relators.iter().map(|r| cyclic_reduce(r)).filter(|r| !r.is_empty() && seen.insert(canonical(r))).collect();

        if let Some(i) = relators.iter().position(|r| r.len() == 1) {
            let g = relators.remove(i)[0].generator;
            eliminate(&mut relators, g, &[]);
            generators -= 1;
            continue;
        }
        if let Some(i) = relators.iter().position(|r| r.len() == 2 && r[0].generator != r[1].generator) {
            let r = relators.remove(i);
            // drop the higher-numbered generator: lx·ly = 1 gives lx = ly⁻¹
            let (lx, ly) = if r[0].generator > r[1].generator { (r[0], r[1]) } else { (r[1], r[0]) };
            let x = if lx.inverse { ly } else { ly.inv() };
            eliminate(&mut relators, lx.generator, &[x]);
            generators -= 1;
            continue;
        }
        break;
    }
    Presentation { generators, relators, origin: None }
}

/// Presentation of the deformed complex derived from `p`.
///
/// Contractions do not change the fundamental group, so the presentation is
/// re-derived on `target`. A collapse keeps the generators, drops the
/// relators of removed cells and kills every loop of the collapsed
/// subcomplex: one relator per removed edge outside a spanning forest of the
/// removed edges, written through the basepoint paths of `p`. The result is
/// a quotient of `p`.
pub fn induced_presentation(
    p: &Presentation,
    record: &DeformationRecord,
    target: &QuotientComplex,
) -> Result<Presentation, GroupError> {
    let lineage = p.origin.as_ref().ok_or(GroupError::MissingLineage)?;
    if lineage.complex != record.source || lineage.edge_words.len() != record.edge_map.len() {
        return Err(GroupError::LineageMismatch);
    }
    if target.fingerprint() != record.target {
        return Err(GroupError::TargetMismatch);
    }
    if record.is_contraction() {
        return fundamental_presentation(target);
    }

    let ew = &lineage.edge_words;
    let n = record.vertex_map.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &e in &record.removed_edges {
        let [t, h] = record.edge_ends[e];
        incident[t].push(e);
        if h != t {
            incident[h].push(e);
        }
    }
    // correction[v]: word of a path inside the removed edges from the
    // representative of v's merged group to v
    let mut correction: Vec<Option<Word>> = vec![None; n];
    let mut forest = HashSet::new();
    for root in 0..n {
        if correction[root].is_some() {
            continue;
        }
        correction[root] = Some(Vec::new());
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let cv = correction[v].clone().expect("visited");
            for &e in &incident[v] {
                let [t, h] = record.edge_ends[e];
                let (w, step) = if t == v { (h, ew[e].clone()) } else { (t, inverse(&ew[e])) };
                if correction[w].is_none() {
                    correction[w] = Some(free_reduce(&[cv.as_slice(), &step].concat()));
                    forest.insert(e);
                    queue.push_back(w);
                }
            }
        }
    }
    let correction: Vec<Word> = correction.into_iter().map(|c| c.expect("all visited")).collect();
    let conjugated = |e: usize| {
        let [t, h] = record.edge_ends[e];
        free_reduce(&[correction[t].as_slice(), &ew[e], &inverse(&correction[h])].concat())
    };

    let mut relators = Vec::new();
    let mut relator_cells = Vec::new();
    for (r, cell) in p.relators.iter().zip(&lineage.relator_cells) {
        match cell {
            Some(k) if record.cell_map[*k].is_none() => {}
            _ => {
                relators.push(r.clone());
                relator_cells.push(cell.and_then(|k| record.cell_map[k]));
            }
        }
    }
    for &e in &record.removed_edges {
        if !forest.contains(&e) {
            relators.push(conjugated(e));
            relator_cells.push(None);
        }
    }
    let mut edge_words = vec![Vec::new(); target.edges.len()];
    for (e, image) in record.edge_map.iter().enumerate() {
        if let Some(new) = image {
            edge_words[*new] = conjugated(e);
        }
    }
    Ok(Presentation {
        generators: p.generators,
        relators,
        origin: Some(Lineage { complex: record.target.clone(), edge_words, relator_cells }),
    })
}
