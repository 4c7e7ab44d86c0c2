//! Random-gluing campaigns checking the structural claims on many schemes.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::actions::PairingActions;
use crate::analysis::{ToolInfo, TOOL_NAME, TOOL_VERSION};
use crate::complex::{validate, FacePairingScheme};
use crate::gallery::{gen_random, Solid};
use crate::quotient::{
    build_quotient_with, classify_surface, has_circuit, verify_manifold, NonFlatGraph, SurfaceClass,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// A manifold scheme whose quotient has euler characteristic other than 1.
    ManifoldEuler,
    /// A flat manifold scheme whose quotient is neither a disk nor a
    /// projective plane.
    FlatSurface,
    /// A non-flat manifold scheme without a circuit of non-flat edges.
    #[serde(rename = "nonflat_circuit")]
    NonFlatCircuit,
}

impl ViolationKind {
    pub fn name(self) -> &'static str {
        match self {
            ViolationKind::ManifoldEuler => "manifold_euler",
            ViolationKind::FlatSurface => "flat_surface",
            ViolationKind::NonFlatCircuit => "nonflat_circuit",
        }
    }
}

/// One row of the campaign table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub seed: u64,
    pub valid: bool,
    pub manifold: bool,
    pub euler_characteristic: i64,
    pub degree: u64,
    pub flat: bool,
    pub circuit: bool,
    pub surface: String,
    pub violations: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub seed: u64,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub tool: ToolInfo,
    pub base: Solid,
    pub seed0: u64,
    pub count: u64,
    pub manifolds: u64,
    pub manifold_rate: f64,
    pub flat_manifolds: u64,
    pub euler_histogram: BTreeMap<i64, u64>,
    pub violation_counts: BTreeMap<&'static str, u64>,
    pub violations: Vec<Violation>,
    pub errors: Vec<(u64, String)>,
}

#[derive(Debug, Clone)]
pub struct FuzzOutcome {
    pub summary: FuzzSummary,
    pub runs: Vec<RunRecord>,
    /// Schemes of violating seeds, for inspection.
    pub witnesses: Vec<(Violation, FacePairingScheme)>,
}

impl FuzzOutcome {
    pub fn total_violations(&self) -> usize {
        self.summary.violations.len()
    }

    pub fn count(&self, kind: ViolationKind) -> u64 {
        self.summary.violation_counts.get(kind.name()).copied().unwrap_or(0)
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary serialization cannot fail");
        s.push('\n');
        s
    }

    pub fn runs_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.runs {
            w.serialize(r).expect("csv rows serialize");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}

/// Checks one scheme. Returns the row and the violated claims.
pub fn check_scheme(seed: u64, scheme: &FacePairingScheme) -> (RunRecord, Vec<ViolationKind>) {
    let report = validate(scheme);
    if !report.is_valid() {
        let row = RunRecord {
            seed,
            valid: false,
            manifold: false,
            euler_characteristic: 0,
            degree: 0,
            flat: false,
            circuit: false,
            surface: String::new(),
            violations: String::new(),
            error: report.errors.join("; "),
        };
        return (row, Vec::new());
    }
    let actions = PairingActions::new(scheme);
    let q = build_quotient_with(scheme, &actions);
    let degree = actions.degree();
    let flat = degree <= 2;
    let manifold = verify_manifold(scheme).is_manifold;
    let circuit = has_circuit(&NonFlatGraph::from_quotient(&q));
    let surface = classify_surface(&q);
    let chi = q.euler_characteristic();

    let mut violations = Vec::new();
    if manifold && chi != 1 {
        violations.push(ViolationKind::ManifoldEuler);
    }
    if manifold && flat && !matches!(surface, SurfaceClass::Disk | SurfaceClass::ProjectivePlane) {
        violations.push(ViolationKind::FlatSurface);
    }
    if manifold && degree > 2 && !circuit {
        violations.push(ViolationKind::NonFlatCircuit);
    }
    let row = RunRecord {
        seed,
        valid: true,
        manifold,
        euler_characteristic: chi,
        degree,
        flat,
        circuit,
        surface: surface.name().to_string(),
        violations: violations.iter().map(|v| v.name()).collect::<Vec<_>>().join("|"),
        error: String::new(),
    };
    (row, violations)
}

/// Runs seeds `seed0 .. seed0 + count` on `base`. Results are sorted by
/// seed, so parallel and sequential runs produce identical output.
pub fn run_campaign(base: Solid, seed0: u64, count: u64, parallel: bool) -> FuzzOutcome {
    let one = |seed: u64| match gen_random(base, seed) {
        Ok(scheme) => {
            let (row, v) = check_scheme(seed, &scheme);
            (row, v, Some(scheme))
        }
        Err(e) => {
            let row = RunRecord {
                seed,
                valid: false,
                manifold: false,
                euler_characteristic: 0,
                degree: 0,
                flat: false,
                circuit: false,
                surface: String::new(),
                violations: String::new(),
                error: e.to_string(),
            };
            (row, Vec::new(), None)
        }
    };
    let seeds: Vec<u64> = (0..count).map(|i| seed0.wrapping_add(i)).collect();
    let mut results: Vec<_> =
        if parallel { seeds.par_iter().map(|&s| one(s)).collect() } else { seeds.iter().map(|&s| one(s)).collect() };
    results.sort_by_key(|(row, _, _)| row.seed);

    let mut euler_histogram = BTreeMap::new();
    let mut violation_counts: BTreeMap<&'static str, u64> =
        [ViolationKind::ManifoldEuler, ViolationKind::FlatSurface, ViolationKind::NonFlatCircuit]
            .iter()
            .map(|k| (k.name(), 0))
            .collect();
    let (mut manifolds, mut flat_manifolds) = (0, 0);
    let mut violations = Vec::new();
    let mut errors = Vec::new();
    let mut witnesses = Vec::new();
    let mut runs = Vec::with_capacity(results.len());
    for (row, kinds, scheme) in results {
        if !row.error.is_empty() {
            errors.push((row.seed, row.error.clone()));
        }
        if row.manifold {
            manifolds += 1;
            flat_manifolds += u64::from(row.flat);
            *euler_histogram.entry(row.euler_characteristic).or_insert(0) += 1;
        }
        for kind in kinds {
            *violation_counts.entry(kind.name()).or_insert(0) += 1;
            let v = Violation { seed: row.seed, kind };
            if let Some(s) = &scheme {
                witnesses.push((v.clone(), s.clone()));
            }
            violations.push(v);
        }
        runs.push(row);
    }
    let summary = FuzzSummary {
        tool: ToolInfo { name: TOOL_NAME, version: TOOL_VERSION },
        base,
        seed0,
        count,
        manifolds,
        manifold_rate: if count == 0 { 0.0 } else { manifolds as f64 / count as f64 },
        flat_manifolds,
        euler_histogram,
        violation_counts,
        violations,
        errors,
    };
    FuzzOutcome { summary, runs, witnesses }
}
