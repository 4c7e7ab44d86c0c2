//! The pairing involution and the edge reflections, acting on flags.
//!
//! A flag is a (face, boundary position) incidence. The pairing sends each
//! flag to the flag it is glued onto; the reflection across an edge class
//! swaps the two face-sides of every edge in the class. The order of an
//! edge class is the order of their composite restricted to the flags of
//! that class, which counts how many face-sides wrap around the quotient
//! edge.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::complex::{edge_classes, ClassPartition, ElementKind, FacePairingScheme};
use crate::unionfind::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error("unknown edge class {class} (scheme has {count} classes)")]
    UnknownClass { class: usize, count: usize },
    #[error("face {face} carries several edges of order-2 class {class}; the face-level action is ambiguous, subdivide the face")]
    AmbiguousFaceAction { class: usize, face: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Flag {
    pub face: usize,
    pub position: usize,
}

/// Dense numbering of flags in (face, position) lexicographic order.
#[derive(Debug, Clone)]
pub struct FlagIndex {
    start: Vec<usize>,
    flags: Vec<Flag>,
}

impl FlagIndex {
    pub fn new(scheme: &FacePairingScheme) -> Self {
        let mut start = Vec::with_capacity(scheme.face_count());
        let mut flags = Vec::with_capacity(scheme.flag_count());
        for (f, face) in scheme.complex.faces.iter().enumerate() {
            start.push(flags.len());
            flags.extend((0..face.len()).map(|position| Flag { face: f, position }));
        }
        FlagIndex { start, flags }
    }

    pub fn id(&self, flag: Flag) -> usize {
        self.start[flag.face] + flag.position
    }

    pub fn flag(&self, id: usize) -> Flag {
        self.flags[id]
    }

    pub fn len(&self) -> usize {
        self.flags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }
}

/// A permutation of flag ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlagPermutation {
    map: Vec<usize>,
}

impl FlagPermutation {
    pub fn identity(n: usize) -> Self {
        FlagPermutation { map: (0..n).collect() }
    }

    pub fn from_map(map: Vec<usize>) -> Self {
        debug_assert!({
            let mut seen = vec![false; map.len()];
            map.iter().all(|&x| x < seen.len() && !std::mem::replace(&mut seen[x], true))
        });
        FlagPermutation { map }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FlagPermutation) -> FlagPermutation {
        FlagPermutation { map: other.map.iter().map(|&x| self.map[x]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.map.len()).filter(|&i| self.map[i] == i).collect()
    }

    /// Cycles through the given invariant subset, each started at its
    /// smallest element, in increasing order of that element.
    pub fn cycles_on(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut sorted = subset.to_vec();
        sorted.sort_unstable();
        let mut seen = vec![false; self.map.len()];
        let mut cycles = Vec::new();
        for &start in &sorted {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.map[start];
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.map[x];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let all: Vec<usize> = (0..self.map.len()).collect();
        self.cycles_on(&all)
    }

    /// Order of the permutation restricted to an invariant subset.
    pub fn order_on(&self, subset: &[usize]) -> u64 {
        self.cycles_on(subset).iter().fold(1u64, |acc, c| acc.lcm(&(c.len() as u64)))
    }
}

/// Flags grouped by the edge class of their underlying edge.
pub fn class_flags(scheme: &FacePairingScheme, classes: &ClassPartition) -> Vec<Vec<usize>> {
    let index = FlagIndex::new(scheme);
    let mut out = vec![Vec::new(); classes.len()];
    for id in 0..index.len() {
        let fl = index.flag(id);
        let e = scheme.complex.faces[fl.face][fl.position].edge;
        out[classes.class_of[e]].push(id);
    }
    out
}

/// The pairing involution on flags: a flag goes to the flag it is glued onto.
pub fn p0_flags(scheme: &FacePairingScheme) -> FlagPermutation {
    let index = FlagIndex::new(scheme);
    let map = (0..index.len())
        .map(|id| {
            let fl = index.flag(id);
            let img = scheme.image(fl.face, fl.position);
            index.id(Flag { face: img.face, position: img.position })
        })
        .collect();
    FlagPermutation::from_map(map)
}

/// Reflection across an edge class: swaps the two face-sides of every edge
/// of the class and fixes all other flags.
pub fn p_alpha_flags(scheme: &FacePairingScheme, class: usize) -> Result<FlagPermutation, ActionError> {
    let classes = edge_classes(scheme);
    p_alpha_with(scheme, &classes, class)
}

pub(crate) fn p_alpha_with(
    scheme: &FacePairingScheme,
    classes: &ClassPartition,
    class: usize,
) -> Result<FlagPermutation, ActionError> {
    if class >= classes.len() {
        return Err(ActionError::UnknownClass { class, count: classes.len() });
    }
    let index = FlagIndex::new(scheme);
    let mut map: Vec<usize> = (0..index.len()).collect();
    let sides = scheme.complex.edge_sides();
    for &e in &classes.classes[class] {
        if let [(f1, i1), (f2, i2)] = sides[e][..] {
            let (x, y) = (index.id(Flag { face: f1, position: i1 }), index.id(Flag { face: f2, position: i2 }));
            map[x] = y;
            map[y] = x;
        }
    }
    Ok(FlagPermutation::from_map(map))
}

/// Per-class data reported in analysis tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeClassInfo {
    pub class: usize,
    pub members: Vec<usize>,
    pub order: u64,
    pub collapsible: bool,
    pub flat: bool,
}

/// Everything about the flag actions of a scheme, computed once.
#[derive(Debug, Clone)]
pub struct PairingActions {
    pub classes: ClassPartition,
    pub p0: FlagPermutation,
    reflections: Vec<FlagPermutation>,
    flags_of_class: Vec<Vec<usize>>,
}

impl PairingActions {
    pub fn new(scheme: &FacePairingScheme) -> Self {
        let classes = edge_classes(scheme);
        let p0 = p0_flags(scheme);
        let reflections =
            (0..classes.len()).map(|k| p_alpha_with(scheme, &classes, k).expect("class index in range")).collect();
        let flags_of_class = class_flags(scheme, &classes);
        PairingActions { classes, p0, reflections, flags_of_class }
    }

    pub fn reflection(&self, class: usize) -> &FlagPermutation {
        &self.reflections[class]
    }

    pub fn flags_of(&self, class: usize) -> &[usize] {
        &self.flags_of_class[class]
    }

    pub fn order(&self, class: usize) -> u64 {
        self.p0.compose(&self.reflections[class]).order_on(&self.flags_of_class[class])
    }

    pub fn collapsible(&self, class: usize) -> bool {
        let r = &self.reflections[class];
        self.flags_of_class[class].iter().any(|&x| self.p0.apply(x) == r.apply(x))
    }

    pub fn class_table(&self) -> Vec<EdgeClassInfo> {
        (0..self.classes.len())
            .map(|k| {
                let order = self.order(k);
                EdgeClassInfo {
                    class: k,
                    members: self.classes.classes[k].clone(),
                    order,
                    collapsible: self.collapsible(k),
                    flat: order <= 2,
                }
            })
            .collect()
    }

    pub fn degree(&self) -> u64 {
        (0..self.classes.len()).map(|k| self.order(k)).max().unwrap_or(1)
    }
}

/// Smallest `m > 0` with `(p0 ∘ p_α)^m = 1` on the flags of class `α`.
pub fn edge_order(scheme: &FacePairingScheme, class: usize) -> Result<u64, ActionError> {
    let classes = edge_classes(scheme);
    let r = p_alpha_with(scheme, &classes, class)?;
    let flags = &class_flags(scheme, &classes)[class];
    Ok(p0_flags(scheme).compose(&r).order_on(flags))
}

pub fn degree_of_scheme(scheme: &FacePairingScheme) -> u64 {
    PairingActions::new(scheme).degree()
}

/// Degree at most 2. Degree 1 (everything collapsible) counts as flat.
pub fn is_flat(scheme: &FacePairingScheme) -> bool {
    degree_of_scheme(scheme) <= 2
}

/// Some edge of the class has its two sides glued directly onto each other
/// by the pairing.
pub fn is_collapsible(scheme: &FacePairingScheme, class: usize) -> Result<bool, ActionError> {
    let classes = edge_classes(scheme);
    let r = p_alpha_with(scheme, &classes, class)?;
    let p0 = p0_flags(scheme);
    Ok(class_flags(scheme, &classes)[class].iter().any(|&x| p0.apply(x) == r.apply(x)))
}

/// Orbits of faces under the face-level reflections of the order-2,
/// non-collapsible edge classes.
///
/// A class only generates when its face action is not itself a fold of
/// some face onto its peer (`p_α(p0(F)) = F` read on faces); such classes
/// are collapsible at face level and are skipped.
pub fn g2_orbits(scheme: &FacePairingScheme) -> Result<ClassPartition, ActionError> {
    g2_orbits_with(scheme, &PairingActions::new(scheme))
}

pub fn g2_orbits_with(scheme: &FacePairingScheme, actions: &PairingActions) -> Result<ClassPartition, ActionError> {
    let n = scheme.face_count();
    let index = FlagIndex::new(scheme);
    let mut uf = UnionFind::new(n);
    for k in 0..actions.classes.len() {
        if actions.order(k) != 2 || actions.collapsible(k) {
            continue;
        }
        let r = actions.reflection(k);
        // face -> faces across its edges of this class, plus the edges used
        let mut across: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        let mut edges_on: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &x in actions.flags_of(k) {
            let fl = index.flag(x);
            across[fl.face].insert(index.flag(r.apply(x)).face);
            edges_on[fl.face].insert(scheme.complex.faces[fl.face][fl.position].edge);
        }
        let face_collapsible = (0..n).any(|f| scheme.peer(f).is_some_and(|peer| across[peer].contains(&f)));
        if face_collapsible {
            continue;
        }
        if let Some(face) = (0..n).find(|&f| edges_on[f].len() > 1) {
            return Err(ActionError::AmbiguousFaceAction { class: k, face });
        }
        for (f, targets) in across.iter().enumerate() {
            for &t in targets {
                uf.union(f, t);
            }
        }
    }
    Ok(ClassPartition::from_union_find(ElementKind::Face, &mut uf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{gen_lens, gen_platonic_space, gen_trivial_sphere, PlatonicKind};

    fn flag(face: usize, position: usize) -> Flag {
        Flag { face, position }
    }

    #[test]
    fn lens_p0_shifts_by_offset() {
        let s = gen_lens(5, 2).unwrap();
        let index = FlagIndex::new(&s);
        let p0 = p0_flags(&s);
        assert_eq!(index.flag(p0.apply(index.id(flag(0, 0)))), flag(1, 2));
        assert!(p0.is_involution());
        assert!(p0.fixed_points().is_empty());
    }

    #[test]
    fn trivial_sphere_p0_is_identity_correspondence() {
        let s = gen_trivial_sphere(3).unwrap();
        let index = FlagIndex::new(&s);
        assert_eq!(index.flag(p0_flags(&s).apply(index.id(flag(0, 1)))), flag(1, 1));
    }

    #[test]
    fn lens_reflection_swaps_hemispheres() {
        let s = gen_lens(7, 3).unwrap();
        let index = FlagIndex::new(&s);
        let r = p_alpha_flags(&s, 0).unwrap();
        for i in 0..7 {
            assert_eq!(index.flag(r.apply(index.id(flag(0, i)))), flag(1, i));
        }
        assert!(r.is_involution());
    }

    #[test]
    fn single_edge_reflection_fixes_other_flags() {
        let s = gen_trivial_sphere(3).unwrap();
        let index = FlagIndex::new(&s);
        let r = p_alpha_flags(&s, 0).unwrap();
        assert_eq!(index.flag(r.apply(index.id(flag(0, 0)))), flag(1, 0));
        assert_eq!(r.fixed_points().len(), 4);
        assert_eq!(p_alpha_flags(&s, 3), Err(ActionError::UnknownClass { class: 3, count: 3 }));
    }

    #[test]
    fn orders_match_lens_parameter() {
        for (q, p) in [(3, 1), (5, 2), (7, 3), (2, 1)] {
            assert_eq!(edge_order(&gen_lens(q, p).unwrap(), 0).unwrap(), q as u64);
        }
        let t = gen_trivial_sphere(3).unwrap();
        for k in 0..3 {
            assert_eq!(edge_order(&t, k).unwrap(), 1);
        }
    }

    #[test]
    fn degrees_and_flatness() {
        assert_eq!(degree_of_scheme(&gen_lens(7, 3).unwrap()), 7);
        assert_eq!(degree_of_scheme(&gen_platonic_space(PlatonicKind::Quaternion)), 3);
        for n in 1..=6 {
            assert_eq!(degree_of_scheme(&gen_trivial_sphere(n).unwrap()), 1);
        }
        assert!(is_flat(&gen_lens(2, 1).unwrap()));
        assert!(!is_flat(&gen_lens(5, 2).unwrap()));
        assert!(is_flat(&gen_trivial_sphere(3).unwrap()));
    }

    #[test]
    fn collapsibility() {
        let t = gen_trivial_sphere(3).unwrap();
        assert!((0..3).all(|k| is_collapsible(&t, k).unwrap()));
        assert!(!is_collapsible(&gen_lens(5, 2).unwrap(), 0).unwrap());
        let poincare = gen_platonic_space(PlatonicKind::Poincare);
        assert!((0..10).all(|k| !is_collapsible(&poincare, k).unwrap()));
    }

    #[test]
    fn g2_orbits_on_gallery() {
        for s in [gen_lens(5, 2).unwrap(), gen_lens(2, 1).unwrap(), gen_trivial_sphere(3).unwrap()] {
            assert_eq!(g2_orbits(&s).unwrap().classes, vec![vec![0], vec![1]]);
        }
    }

    #[test]
    fn restricted_order_ignores_unrelated_cycles() {
        // unrestricted composite on the quaternion space has 2-cycles from
        // p0 on faces not touching the class
        let s = gen_platonic_space(PlatonicKind::Quaternion);
        let actions = PairingActions::new(&s);
        for k in 0..actions.classes.len() {
            let full = actions.p0.compose(actions.reflection(k));
            assert_eq!(actions.order(k), 3);
            assert_eq!(full.cycles().iter().fold(1u64, |a, c| a.lcm(&(c.len() as u64))), 6);
        }
    }
}
