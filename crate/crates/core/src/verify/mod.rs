//! Theorem-check suites: seeded parameter sweeps over the constructions and
//! random starts, reported case by case.
//!
//! Reports are a pure function of `(id, grid, seed)`; wall-clock time is
//! left to the caller so that reports stay byte-identical across runs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use core::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{classify, Classification, EPS_MATCH};
use crate::geom::Point2;
use crate::sim::TrajectoryState;
use crate::tiling::{EdgeGeom, EdgeRef, LineSpec, Tiling, TilingSpec};

mod lines;
mod scan;
mod triangles;
mod trihex;

pub use scan::{scan, OrbitEntry, ScanGrid, ScanReport};

/// Every suite id, in a stable order.
pub const THEOREM_IDS: &[&str] = &[
    "mf_regular_tilings",
    "ek_two_lines",
    "ek_three_lines",
    "odd_lines_2n",
    "even_lines_condition",
    "spiral_odd_perturbation",
    "iso_classification",
    "iso_period_bounds",
    "right_bisect_escape",
    "right_drift_pi_over_2n",
    "triangle_period10_region",
    "trihex_lemma_turner",
    "trihex_lemma_quadrilateral",
    "trihex_lemma_quad_triangle",
    "trihex_lemma_pentagon",
    "trihex_period6",
    "trihex_period12",
    "trihex_period24",
    "trihex_drift_6n",
    "trihex_drift_12n_minus_6",
    "dense_spacing",
];

/// Overrides for a suite's sample count and trace length.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_steps: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseOutcome {
    pub index: usize,
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<TilingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<TrajectoryState>,
    pub expected: String,
    pub observed: String,
    pub residuals: BTreeMap<String, f64>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub seed: u64,
    /// The resolved grid (defaults filled in).
    pub samples: usize,
    pub max_steps: usize,
    pub cases: Vec<CaseOutcome>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseOutcome> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Human-readable rendering: one line per case plus a verdict.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let passed = self.cases.iter().filter(|c| c.pass).count();
        let _ = writeln!(
            s,
            "theorem {}  seed {}  samples {}  max_steps {}",
            self.theorem, self.seed, self.samples, self.max_steps
        );
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        for c in &self.cases {
            let _ = write!(
                s,
                "  [{}] #{:<4} {}  expected {}  observed {}",
                if c.pass { "ok" } else { "FAIL" },
                c.index,
                c.label,
                c.expected,
                c.observed
            );
            for (k, v) in &c.residuals {
                let _ = write!(s, "  {k}={v:.3e}");
            }
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "{}: {passed}/{} cases passed",
            if self.pass { "PASS" } else { "FAIL" },
            self.cases.len()
        );
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    UnknownTheorem(String),
}

impl core::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            VerifyError::UnknownTheorem(id) => write!(f, "unknown theorem id `{id}`"),
        }
    }
}

/// Run one suite.
pub fn verify_theorem(id: &str, grid: GridConfig, seed: u64) -> Result<VerificationReport, VerifyError> {
    let (samples, max_steps) = defaults(id).ok_or_else(|| VerifyError::UnknownTheorem(id.to_string()))?;
    let mut s = Suite {
        rng: ChaCha8Rng::seed_from_u64(seed),
        samples: grid.samples.unwrap_or(samples),
        max_steps: grid.max_steps.unwrap_or(max_steps),
        cases: Vec::new(),
        notes: Vec::new(),
    };
    match id {
        "mf_regular_tilings" => triangles::mf_regular(&mut s),
        "ek_two_lines" => lines::two_lines(&mut s),
        "ek_three_lines" => lines::three_lines(&mut s),
        "odd_lines_2n" => lines::odd_lines(&mut s),
        "even_lines_condition" => lines::even_lines(&mut s),
        "spiral_odd_perturbation" => lines::spiral(&mut s),
        "iso_classification" => triangles::iso_classification(&mut s),
        "iso_period_bounds" => triangles::iso_bounds(&mut s),
        "right_bisect_escape" => triangles::right_bisect(&mut s),
        "right_drift_pi_over_2n" => triangles::right_drift(&mut s),
        "triangle_period10_region" => triangles::period10(&mut s),
        "trihex_lemma_turner" => trihex::lemma(&mut s, trihex::Lemma::Turner),
        "trihex_lemma_quadrilateral" => trihex::lemma(&mut s, trihex::Lemma::Quadrilateral),
        "trihex_lemma_quad_triangle" => trihex::lemma(&mut s, trihex::Lemma::QuadTriangle),
        "trihex_lemma_pentagon" => trihex::lemma(&mut s, trihex::Lemma::Pentagon),
        "trihex_period6" => trihex::period6(&mut s),
        "trihex_period12" => trihex::period12(&mut s),
        "trihex_period24" => trihex::period24(&mut s),
        "trihex_drift_6n" => trihex::drift_6n(&mut s),
        "trihex_drift_12n_minus_6" => trihex::drift_12n_minus_6(&mut s),
        "dense_spacing" => trihex::dense_spacing(&mut s),
        _ => unreachable!(),
    }
    let pass = !s.cases.is_empty() && s.cases.iter().all(|c| c.pass);
    Ok(VerificationReport {
        theorem: id.to_string(),
        seed,
        samples: s.samples,
        max_steps: s.max_steps,
        cases: s.cases,
        notes: s.notes,
        pass,
    })
}

/// Default `(samples, max_steps)` per suite.
fn defaults(id: &str) -> Option<(usize, usize)> {
    Some(match id {
        "mf_regular_tilings" | "iso_classification" | "iso_period_bounds" => (100, 100_000),
        "ek_two_lines" | "even_lines_condition" => (50, 10_000),
        "ek_three_lines" | "odd_lines_2n" => (10, 10_000),
        "spiral_odd_perturbation" => (5, 10_000),
        "right_bisect_escape" => (20, 10_000),
        "right_drift_pi_over_2n" => (3, 100_000),
        "triangle_period10_region" => (20, 10_000),
        "trihex_lemma_turner" | "trihex_lemma_quadrilateral" | "trihex_lemma_quad_triangle" | "trihex_lemma_pentagon" => {
            (1000, 8)
        }
        "trihex_period6" | "trihex_period12" => (10, 10_000),
        "trihex_period24" | "trihex_drift_6n" | "trihex_drift_12n_minus_6" | "dense_spacing" => (0, 10_000),
        _ => return None,
    })
}

pub(crate) struct Suite {
    pub rng: ChaCha8Rng,
    pub samples: usize,
    pub max_steps: usize,
    pub cases: Vec<CaseOutcome>,
    pub notes: Vec<String>,
}

impl Suite {
    pub fn case(&mut self, c: Case) {
        let index = self.cases.len();
        self.cases.push(CaseOutcome {
            index,
            label: c.label,
            spec: c.spec,
            start: c.start,
            expected: c.expected,
            observed: c.observed,
            residuals: c.residuals.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            pass: c.pass,
        });
    }

    pub fn classify(&self, t: &Tiling, start: TrajectoryState) -> Classification {
        classify(t, start, self.max_steps, EPS_MATCH)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.rng.random::<f64>()
    }

    /// A random start on one of the cell-(0,0) edges of a lattice tiling.
    pub fn lattice_start(&mut self, t: &Tiling) -> TrajectoryState {
        let n = t.lattice().expect("lattice tiling").edge_count();
        loop {
            let slot = self.rng.random_range(0..n);
            let pos = self.uniform(0.02, 0.98);
            let dir = self.uniform(0.0, TAU);
            if let Ok(s) = TrajectoryState::new(t, EdgeRef::cell([0, 0], slot), pos, dir) {
                return s;
            }
        }
    }

    /// `parts` positive numbers summing to `total`, none tiny.
    pub fn partition(&mut self, total: f64, parts: usize) -> Vec<f64> {
        let w: Vec<f64> = (0..parts).map(|_| 0.25 + self.rng.random::<f64>()).collect();
        let sum: f64 = w.iter().sum();
        w.into_iter().map(|x| total * x / sum).collect()
    }

    /// Random arrangement of `n` lines in general position with the given
    /// consecutive gaps (random gaps when `None`).
    pub fn arrangement(&mut self, n: usize, gaps: Option<&[f64]>) -> (TilingSpec, Tiling) {
        loop {
            let gaps: Vec<f64> = match gaps {
                Some(g) => g.to_vec(),
                None => self.partition(PI, n),
            };
            let phi0 = self.uniform(0.0, PI);
            let mut phi = phi0;
            let mut lines = Vec::with_capacity(n);
            for g in gaps.iter().take(n) {
                let p = Point2::new(self.uniform(-1.0, 1.0), self.uniform(-1.0, 1.0));
                lines.push(LineSpec {
                    angle: phi,
                    point: [p.x, p.y],
                });
                phi += g;
            }
            let spec = TilingSpec::LineArrangement { lines };
            if let Ok(t) = Tiling::new(&spec) {
                return (spec, t);
            }
        }
    }
}

pub(crate) struct Case {
    pub label: String,
    pub spec: Option<TilingSpec>,
    pub start: Option<TrajectoryState>,
    pub expected: String,
    pub observed: String,
    pub residuals: Vec<(&'static str, f64)>,
    pub pass: bool,
}

impl Case {
    pub fn new(label: impl Into<String>, expected: impl Into<String>) -> Case {
        Case {
            label: label.into(),
            spec: None,
            start: None,
            expected: expected.into(),
            observed: String::new(),
            residuals: Vec::new(),
            pass: false,
        }
    }

    pub fn replay(mut self, spec: &TilingSpec, start: TrajectoryState) -> Case {
        self.spec = Some(spec.clone());
        self.start = Some(start);
        self
    }

    pub fn observed(mut self, o: impl Into<String>) -> Case {
        self.observed = o.into();
        self
    }

    pub fn residual(mut self, k: &'static str, v: f64) -> Case {
        self.residuals.push((k, v));
        self
    }

    pub fn pass(mut self, p: bool) -> Case {
        self.pass = p;
        self
    }
}

/// Endpoints of a bounded edge.
pub(crate) fn segment(t: &Tiling, e: &EdgeRef) -> Option<(Point2, Point2)> {
    match t.edge_geom(e).ok()? {
        EdgeGeom::Segment { a, b } => Some((a, b)),
        EdgeGeom::Ray { .. } => None,
    }
}

/// Whether edge `e` is the segment `pq` (either orientation).
pub(crate) fn is_segment(t: &Tiling, e: &EdgeRef, p: Point2, q: Point2) -> bool {
    segment(t, e).is_some_and(|(a, b)| {
        (a.dist(p) < 1e-9 && b.dist(q) < 1e-9) || (a.dist(q) < 1e-9 && b.dist(p) < 1e-9)
    })
}

pub(crate) fn fmt_f(x: f64) -> String {
    format!("{x:.6}")
}
