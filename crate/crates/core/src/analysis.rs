//! Whole-scheme analysis: every invariant computed once, collected into a
//! deterministic report, with internal consistency checks.

use std::fmt::Write as _;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::actions::{g2_orbits_with, EdgeClassInfo, PairingActions};
use crate::complex::{validate, vertex_classes, FacePairingScheme, Provenance, ValidationReport};
use crate::group::{
    abelianization, fundamental_presentation, induced_presentation, tietze_simplify, triviality_status, AbelianGroup,
    GroupError, Presentation, Triviality,
};
use crate::quotient::{
    build_quotient_with, classify_surface, contract_edge, contract_tree, gamma_spanning_tree, has_circuit,
    nonflat_circles, recognize_lens_shell, verify_manifold, DeformError, DeformationRecord, GraphEdge, ManifoldReport,
    NonFlatGraph, QuotientComplex, SurfaceClass,
};

pub const TOOL_NAME: &str = "fq";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("invalid scheme: {}", .0.errors.join("; "))]
    Invalid(ValidationReport),
    #[error("internal postcondition failed: {}", .0.join("; "))]
    Postcondition(Vec<String>),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("edge {0} was already removed by an earlier contraction")]
    EdgeGone(usize),
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counts {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub flags: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuotientSummary {
    pub vertices: usize,
    pub edges: Vec<GraphEdge>,
    pub cells: Vec<String>,
    pub euler_characteristic: i64,
    pub fingerprint: String,
}

impl QuotientSummary {
    pub fn of(q: &QuotientComplex) -> Self {
        QuotientSummary {
            vertices: q.vertices.len(),
            edges: q
                .edges
                .iter()
                .enumerate()
                .map(|(id, e)| GraphEdge { id, tail: e.tail, head: e.head, order: e.order })
                .collect(),
            cells: q.cells.iter().map(|c| q.word_string(&c.word)).collect(),
            euler_characteristic: q.euler_characteristic(),
            fingerprint: q.fingerprint(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaSummary {
    pub graph: NonFlatGraph,
    pub has_circuit: bool,
    pub spanning_tree: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub presentation: String,
    pub generators: usize,
    pub relators: usize,
    pub simplified: String,
    pub simplified_generators: usize,
    pub h1: AbelianGroup,
    pub triviality: Triviality,
}

impl GroupSummary {
    pub fn of(p: &Presentation) -> Self {
        let s = tietze_simplify(p);
        GroupSummary {
            presentation: p.to_string(),
            generators: p.generators,
            relators: p.relators.len(),
            simplified: s.to_string(),
            simplified_generators: s.generators,
            h1: abelianization(p),
            triviality: triviality_status(p),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeformationLog {
    pub strategy: String,
    pub edges: Vec<usize>,
    pub steps: Vec<DeformationRecord>,
    pub result: QuotientSummary,
    pub nonflat_circles: usize,
    pub induced: GroupSummary,
    pub euler_preserved: bool,
    pub h1_preserved: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool: ToolInfo,
    pub scheme_sha256: String,
    pub provenance: Option<Provenance>,
    pub counts: Counts,
    pub validation: ValidationReport,
    pub vertex_classes: Vec<Vec<usize>>,
    pub edge_classes: Vec<EdgeClassInfo>,
    pub degree: u64,
    pub flat: bool,
    pub g2_orbits: Option<Vec<Vec<usize>>>,
    pub g2_error: Option<String>,
    pub quotient: QuotientSummary,
    pub manifold: ManifoldReport,
    pub gamma: GammaSummary,
    pub surface: SurfaceClass,
    pub lens_shell: Option<usize>,
    pub group: GroupSummary,
    pub notes: Vec<String>,
    pub deformation: Option<DeformationLog>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let w = &mut out;
        let _ = writeln!(w, "{} {}  scheme {}", self.tool.name, self.tool.version, &self.scheme_sha256[..16]);
        let c = &self.counts;
        let _ = writeln!(w, "sphere: {} vertices, {} edges, {} faces, {} flags", c.vertices, c.edges, c.faces, c.flags);
        for warning in &self.validation.warnings {
            let _ = writeln!(w, "warning: {warning}");
        }
        let _ = writeln!(w, "vertex classes: {}", self.vertex_classes.len());
        let _ = writeln!(w, "edge classes: {}", self.edge_classes.len());
        for e in &self.edge_classes {
            let _ = writeln!(
                w,
                "  class {}: {} edges, order {}{}{}",
                e.class,
                e.members.len(),
                e.order,
                if e.collapsible { ", collapsible" } else { "" },
                if e.flat { ", flat" } else { "" }
            );
        }
        let _ = writeln!(w, "degree: {}  flat: {}", self.degree, self.flat);
        let q = &self.quotient;
        let _ = writeln!(
            w,
            "quotient: {} vertices, {} edges, {} cells, euler characteristic {}",
            q.vertices,
            q.edges.len(),
            q.cells.len(),
            q.euler_characteristic
        );
        for (k, cell) in q.cells.iter().enumerate() {
            let _ = writeln!(w, "  cell {k}: {cell}");
        }
        let _ = writeln!(w, "manifold: {}", self.manifold.is_manifold);
        for d in &self.manifold.diagnostics {
            let _ = writeln!(w, "  {d}");
        }
        let g = &self.gamma;
        let _ = writeln!(
            w,
            "non-flat graph: {} vertices, {} edges, circuit: {}",
            g.graph.vertices.len(),
            g.graph.edges.len(),
            g.has_circuit
        );
        let _ = writeln!(w, "surface: {}", self.surface.name());
        if let Some(q) = self.lens_shell {
            let _ = writeln!(w, "lens shell: q = {q}");
        }
        let gr = &self.group;
        let _ = writeln!(w, "presentation: {}", gr.presentation);
        let _ = writeln!(w, "simplified: {}", gr.simplified);
        let _ = writeln!(w, "H1: {}", gr.h1);
        let _ = writeln!(w, "triviality: {}", triviality_name(gr.triviality));
        if let Some(d) = &self.deformation {
            let _ = writeln!(w, "deformation ({}): {} steps", d.strategy, d.steps.len());
            let _ = writeln!(
                w,
                "  result: {} vertices, {} edges, {} cells, euler characteristic {}",
                d.result.vertices,
                d.result.edges.len(),
                d.result.cells.len(),
                d.result.euler_characteristic
            );
            let _ = writeln!(w, "  non-flat circles: {}", d.nonflat_circles);
            let _ = writeln!(w, "  induced presentation: {}", d.induced.presentation);
            let _ = writeln!(w, "  induced H1: {}", d.induced.h1);
        }
        for n in &self.notes {
            let _ = writeln!(w, "note: {n}");
        }
        out
    }
}

fn triviality_name(t: Triviality) -> &'static str {
    match t {
        Triviality::Trivial => "trivial",
        Triviality::Nontrivial => "nontrivial",
        Triviality::Unknown => "unknown",
    }
}

pub fn scheme_sha256(scheme: &FacePairingScheme) -> String {
    hex::encode(Sha256::digest(scheme.to_json().as_bytes()))
}

/// Runs the full pipeline on a scheme. Hard validation errors stop early;
/// failed internal checks are reported as [`AnalysisError::Postcondition`].
pub fn analyze(scheme: &FacePairingScheme) -> Result<AnalysisReport, AnalysisError> {
    let validation = validate(scheme);
    if !validation.is_valid() {
        return Err(AnalysisError::Invalid(validation));
    }
    let actions = PairingActions::new(scheme);
    let q = build_quotient_with(scheme, &actions);
    let degree = actions.degree();
    let flat = degree <= 2;
    let (g2_orbits, g2_error) = match g2_orbits_with(scheme, &actions) {
        Ok(p) => (Some(p.classes), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let manifold = verify_manifold(scheme);
    let graph = NonFlatGraph::from_quotient(&q);
    let gamma = GammaSummary { has_circuit: has_circuit(&graph), spanning_tree: gamma_spanning_tree(&q), graph };
    let surface = classify_surface(&q);
    let lens_shell = recognize_lens_shell(&q);
    let presentation = fundamental_presentation(&q)?;
    let group = GroupSummary::of(&presentation);

    let chi = q.euler_characteristic();
    let mut notes = Vec::new();
    if let Some(n) = lens_shell {
        notes.push(format!("quotient is a lens shell with q = {n}"));
    }
    if manifold.is_manifold && chi != 1 {
        notes.push(format!("violation: manifold scheme with quotient euler characteristic {chi}"));
    }
    if flat && manifold.is_manifold && !matches!(surface, SurfaceClass::Disk | SurfaceClass::ProjectivePlane) {
        notes.push(format!("violation: flat manifold scheme whose quotient is a {}", surface.name()));
    }
    if degree > 2 && manifold.is_manifold && !gamma.has_circuit {
        notes.push("violation: non-flat manifold scheme whose non-flat graph has no circuit".to_string());
    }
    if flat && manifold.is_manifold && group.triviality == Triviality::Trivial {
        notes.push(
            "flat scheme with simply connected quotient: claimed 3-sphere (claim from the literature, not independently certified)"
                .to_string(),
        );
    }
    if group.triviality == Triviality::Unknown {
        notes.push(
            "H1 vanishes but the presentation does not simplify to the trivial group; triviality undecided".to_string(),
        );
    }

    let report = AnalysisReport {
        tool: ToolInfo { name: TOOL_NAME, version: TOOL_VERSION },
        scheme_sha256: scheme_sha256(scheme),
        provenance: scheme.provenance.clone(),
        counts: Counts {
            vertices: scheme.vertex_count(),
            edges: scheme.edge_count(),
            faces: scheme.face_count(),
            flags: scheme.flag_count(),
        },
        validation,
        vertex_classes: vertex_classes(scheme).classes,
        edge_classes: actions.class_table(),
        degree,
        flat,
        g2_orbits,
        g2_error,
        quotient: QuotientSummary::of(&q),
        manifold,
        gamma,
        surface,
        lens_shell,
        group,
        notes,
        deformation: None,
    };
    let failures = postconditions(scheme, &actions, &q, &presentation);
    if failures.is_empty() {
        Ok(report)
    } else {
        Err(AnalysisError::Postcondition(failures))
    }
}

fn postconditions(
    scheme: &FacePairingScheme,
    actions: &PairingActions,
    q: &QuotientComplex,
    presentation: &Presentation,
) -> Vec<String> {
    let mut failures = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    check(scheme.flag_count() == 2 * scheme.edge_count(), "face lengths do not sum to twice the edge count");
    check(
        actions.p0.is_involution() && actions.p0.fixed_points().is_empty(),
        "p0 is not a fixed-point-free involution",
    );
    for k in 0..actions.classes.len() {
        let r = actions.reflection(k);
        check(r.is_involution(), "a reflection is not an involution");
        check(
            r.fixed_points().len() == actions.p0.len() - actions.flags_of(k).len(),
            "a reflection moves foreign flags",
        );
    }
    if let Err(e) = q.check() {
        failures.push(format!("quotient: {e}"));
    }
    let mut check = |ok: bool, what: &str| {
        if !ok {
            failures.push(what.to_string());
        }
    };
    check(q.cells.len() * 2 == scheme.face_count(), "cell count is not half the face count");
    // a folded edge reads out and back, two symbols per boundary position
    let positions: usize = q
        .edge_incidences()
        .iter()
        .zip(&q.edges)
        .map(|(&n, e)| if q.vertices[e.head].members.is_empty() { n / 2 } else { n })
        .sum();
    check(positions * 2 == scheme.flag_count(), "word lengths do not match the flags");
    check(
        abelianization(presentation) == abelianization(&tietze_simplify(presentation)),
        "simplification changed the abelianization",
    );
    failures
}

/// How `contract` chooses what to shrink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractStrategy {
    /// The tree through all non-flat vertices preferring non-flat edges.
    GammaTree,
    /// Single-edge contractions in order, ids referring to the original
    /// quotient.
    Edges(Vec<usize>),
}

/// Analyzes the scheme, contracts its quotient, and logs the result
/// together with the induced presentation.
pub fn contract(scheme: &FacePairingScheme, strategy: &ContractStrategy) -> Result<AnalysisReport, AnalysisError> {
    let mut report = analyze(scheme)?;
    let q = build_quotient_with(scheme, &PairingActions::new(scheme));
    let mut p = fundamental_presentation(&q)?;
    let mut steps = Vec::new();
    let (name, edges, result) = match strategy {
        ContractStrategy::GammaTree => {
            let tree = gamma_spanning_tree(&q);
            let (c, rec) = contract_tree(&q, &tree)?;
            p = induced_presentation(&p, &rec, &c)?;
            steps.push(rec);
            ("gamma-tree", tree, c)
        }
        ContractStrategy::Edges(list) => {
            let mut cur = q.clone();
            let mut ids: Vec<Option<usize>> = (0..q.edges.len()).map(Some).collect();
            for &e in list {
                let id = ids.get(e).copied().ok_or(DeformError::UnknownEdge(e))?.ok_or(AnalysisError::EdgeGone(e))?;
                let (next, rec) = contract_edge(&cur, id)?;
                p = induced_presentation(&p, &rec, &next)?;
                ids = ids.iter().map(|x| x.and_then(|i| rec.edge_map[i])).collect();
                steps.push(rec);
                cur = next;
            }
            ("edges", list.clone(), cur)
        }
    };
    let induced = GroupSummary::of(&p);
    let log = DeformationLog {
        strategy: name.to_string(),
        edges,
        euler_preserved: result.euler_characteristic() == q.euler_characteristic(),
        h1_preserved: induced.h1 == report.group.h1,
        nonflat_circles: nonflat_circles(&result),
        result: QuotientSummary::of(&result),
        steps,
        induced,
    };
    let mut failures = Vec::new();
    if !log.euler_preserved {
        failures.push("contraction changed the euler characteristic".to_string());
    }
    if !log.h1_preserved {
        failures.push("contraction changed H1".to_string());
    }
    if !failures.is_empty() {
        return Err(AnalysisError::Postcondition(failures));
    }
    report.deformation = Some(log);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{gen_lens, gen_platonic_space, gen_trivial_sphere, PlatonicKind};

    #[test]
    fn lens_report() {
        let r = analyze(&gen_lens(5, 2).unwrap()).unwrap();
        assert_eq!(r.degree, 5);
        assert_eq!(r.quotient.euler_characteristic, 1);
        assert_eq!(r.group.h1.to_string(), "Z_5");
        assert_eq!(r.lens_shell, Some(5));
        assert_eq!(r.group.triviality, Triviality::Nontrivial);
        assert!(r.manifold.is_manifold);
        assert_eq!(r.validation.warnings.len(), 1);
    }

    #[test]
    fn triangle_report_claims_a_sphere() {
        let r = analyze(&gen_trivial_sphere(3).unwrap()).unwrap();
        assert!(r.flat);
        assert_eq!(r.surface, SurfaceClass::Disk);
        assert_eq!(r.group.triviality, Triviality::Trivial);
        assert!(r.notes.iter().any(|n| n.contains("claimed 3-sphere")));
    }

    #[test]
    fn reports_are_deterministic() {
        let s = gen_platonic_space(PlatonicKind::Poincare);
        assert_eq!(analyze(&s).unwrap().to_json(), analyze(&s).unwrap().to_json());
        assert!(analyze(&s).unwrap().to_text().contains("triviality: unknown"));
    }

    #[test]
    fn contraction_logs() {
        let r = contract(&gen_platonic_space(PlatonicKind::Quaternion), &ContractStrategy::GammaTree).unwrap();
        let d = r.deformation.unwrap();
        assert_eq!(d.nonflat_circles, 3);
        assert!(d.h1_preserved && d.euler_preserved);

        let r = contract(&gen_lens(5, 2).unwrap(), &ContractStrategy::GammaTree).unwrap();
        let d = r.deformation.unwrap();
        assert_eq!((d.nonflat_circles, d.steps[0].removed_edges.len()), (1, 0));

        let err = contract(&gen_lens(5, 2).unwrap(), &ContractStrategy::Edges(vec![0])).unwrap_err();
        assert!(matches!(err, AnalysisError::Deform(DeformError::LoopContraction(0))));

        let r = contract(&gen_trivial_sphere(4).unwrap(), &ContractStrategy::Edges(vec![0, 1])).unwrap();
        assert_eq!(r.deformation.unwrap().result.vertices, 2);
        let err = contract(&gen_trivial_sphere(4).unwrap(), &ContractStrategy::Edges(vec![0, 0])).unwrap_err();
        assert!(matches!(err, AnalysisError::EdgeGone(0)));
    }
}
