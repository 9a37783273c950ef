//! Closed-form start conditions for the explicit orbits: line
//! arrangements, triangle tilings and the trihexagonal tiling.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};
use core::fmt;

use libm::{atan, cos, sin};
use serde::{Deserialize, Serialize};

use crate::classify::Kind;
use crate::geom::{normalize_dir, normalize_line_angle, refract_direction, Line, Point2};
use crate::sim::{trace, StartError, TrajectoryState};
use crate::tiling::{EdgeGeom, EdgeRef, LineSpec, Tiling, TilingSpec};

/// What tracing a construction is expected to show.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    Periodic { period: usize },
    /// `period` is `None` where no closed form is known.
    DriftPeriodic { period: Option<usize> },
    /// Escapes (arrangements) or carries an unboundedness certificate.
    Escaped,
    /// Any unbounded outcome: escaped, drift-periodic or spiraling.
    Unbounded,
}

impl Expected {
    /// Label in the style of [`Kind::label`].
    pub fn label(&self) -> String {
        match self {
            Expected::Periodic { period } => format!("periodic({period})"),
            Expected::DriftPeriodic { period: Some(p) } => format!("drift_periodic({p})"),
            Expected::DriftPeriodic { period: None } => "drift_periodic".into(),
            Expected::Escaped => "escaped".into(),
            Expected::Unbounded => "unbounded".into(),
        }
    }

    pub fn matches(&self, k: &Kind) -> bool {
        match (self, k) {
            (Expected::Periodic { period }, Kind::Periodic { period: p }) => period == p,
            (Expected::DriftPeriodic { period }, Kind::DriftPeriodic { period: p, .. }) => {
                period.map_or(true, |q| q == *p)
            }
            (Expected::Escaped, Kind::Escaped) => true,
            (Expected::Unbounded, k) => matches!(k, Kind::Escaped | Kind::DriftPeriodic { .. } | Kind::Spiraling { .. }),
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub name: String,
    pub spec: TilingSpec,
    pub start: TrajectoryState,
    pub expected: Expected,
    /// The parameter window the start was chosen from, in words.
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ConstructionError {
    Infeasible(String),
    InvalidParams(String),
}

impl fmt::Display for ConstructionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionError::Infeasible(m) => write!(f, "infeasible construction: {m}"),
            ConstructionError::InvalidParams(m) => write!(f, "invalid parameters: {m}"),
        }
    }
}

impl From<StartError> for ConstructionError {
    fn from(e: StartError) -> Self {
        ConstructionError::InvalidParams(e.to_string())
    }
}

fn infeasible<T>(m: impl Into<String>) -> Result<T, ConstructionError> {
    Err(ConstructionError::Infeasible(m.into()))
}

fn invalid<T>(m: impl Into<String>) -> Result<T, ConstructionError> {
    Err(ConstructionError::InvalidParams(m.into()))
}

fn tiling(spec: &TilingSpec) -> Result<Tiling, ConstructionError> {
    Tiling::new(spec).map_err(|e| ConstructionError::InvalidParams(e.to_string()))
}

// ---------------------------------------------------------------------------
// Line arrangements

/// Start on `l_0`, far outside the central zone, making angle `theta` with
/// the line on the side facing the zone, and heading across `l_1` next.
pub fn arrangement_start(t: &Tiling, theta: f64) -> Result<TrajectoryState, ConstructionError> {
    arrangement_start_at(t, theta, 20.0)
}

/// As [`arrangement_start`], at `scale` zone diameters from the zone.
pub fn arrangement_start_at(t: &Tiling, theta: f64, scale: f64) -> Result<TrajectoryState, ConstructionError> {
    let arr = t
        .arrangement()
        .ok_or_else(|| ConstructionError::InvalidParams("not a line arrangement".into()))?;
    if !(theta > 0.0 && theta < PI) {
        return invalid("initial angle must be in (0, π)");
    }
    let zone = arr.central_zone();
    let c = zone.iter().fold(Point2::ORIGIN, |s, p| s + *p) * (1.0 / zone.len() as f64);
    let diam = zone
        .iter()
        .flat_map(|p| zone.iter().map(move |q| p.dist(*q)))
        .fold(1.0, f64::max);
    let l0 = &arr.lines()[0];
    let e0 = l0.direction();
    let start = l0.project(c) + e0 * (scale * diam);
    let dir = normalize_dir(e0.angle() + PI - theta);
    Ok(TrajectoryState::from_point(t, start, dir)?)
}

/// `α_1 + α_3 + … + α_{n−2}`, the periodic initial angle for odd n.
pub fn odd_condition_angle(alphas: &[f64]) -> f64 {
    alphas.iter().skip(1).step_by(2).take(alphas.len() / 2).sum()
}

/// Alternating-sum condition `0 = α_0 − α_1 + α_2 − …` for even n.
pub fn even_lines_condition(alphas: &[f64]) -> bool {
    if alphas.len() < 2 || alphas.len() % 2 == 1 {
        return false;
    }
    let s: f64 = alphas
        .iter()
        .enumerate()
        .map(|(k, a)| if k % 2 == 0 { *a } else { -*a })
        .sum();
    s.abs() < 1e-9
}

fn check_gap_angles(angles: &[f64]) -> Result<(), ConstructionError> {
    if angles.iter().any(|a| !(*a > 0.0 && *a < PI)) {
        return invalid("every gap angle must lie in (0, π)");
    }
    if (angles.iter().sum::<f64>() - PI).abs() > 1e-9 {
        return invalid("gap angles must sum to π");
    }
    Ok(())
}

/// Odd number of concurrent lines with the given gaps: period 2n.
pub fn odd_lines_periodic(angles: &[f64]) -> Result<ConstructionResult, ConstructionError> {
    if angles.len() < 3 || angles.len() % 2 == 0 {
        return invalid("need an odd number (≥ 3) of lines");
    }
    check_gap_angles(angles)?;
    let spec = TilingSpec::ConcurrentLines {
        angles: angles.to_vec(),
    };
    odd_arrangement_periodic(&spec)
}

/// Odd arrangement (concurrent or simple): start at the odd-condition angle.
pub fn odd_arrangement_periodic(spec: &TilingSpec) -> Result<ConstructionResult, ConstructionError> {
    let t = tiling(spec)?;
    let arr = t
        .arrangement()
        .ok_or_else(|| ConstructionError::InvalidParams("not a line arrangement".into()))?;
    let n = arr.len();
    if n % 2 == 0 {
        return invalid("need an odd number of lines");
    }
    let theta = odd_condition_angle(arr.alphas());
    Ok(ConstructionResult {
        name: "odd_lines_periodic".into(),
        spec: spec.clone(),
        start: arrangement_start(&t, theta)?,
        expected: Expected::Periodic { period: 2 * n },
        notes: format!("initial angle θ = α_1 + α_3 + … = {theta:.12}"),
    })
}

/// Same start as [`odd_arrangement_periodic`] with the angle perturbed by `eps`.
pub fn odd_arrangement_perturbed(spec: &TilingSpec, eps: f64) -> Result<ConstructionResult, ConstructionError> {
    let mut r = odd_arrangement_periodic(spec)?;
    let t = tiling(spec)?;
    let theta = odd_condition_angle(t.arrangement().map(|a| a.alphas()).unwrap_or(&[])) + eps;
    r.start = arrangement_start(&t, theta)?;
    r.name = "odd_lines_perturbed".into();
    // concurrent lines compose to a rotation, so the orbit still closes
    if !matches!(spec, TilingSpec::ConcurrentLines { .. }) {
        r.expected = Expected::Unbounded;
    }
    r.notes = format!("odd-condition angle perturbed by {eps:e}");
    Ok(r)
}

/// Three concurrent lines with gaps α, β, γ, started at angle β.
pub fn three_lines_periodic(alpha: f64, beta: f64, gamma: f64) -> Result<ConstructionResult, ConstructionError> {
    let mut r = odd_lines_periodic(&[alpha, beta, gamma])?;
    r.name = "three_lines_periodic".into();
    Ok(r)
}

/// Two lines crossing at `alpha`, started at angle `theta` into the α wedge.
pub fn two_lines(alpha: f64, theta: f64) -> Result<ConstructionResult, ConstructionError> {
    if !(alpha > 0.0 && alpha < PI) {
        return invalid("crossing angle must be in (0, π)");
    }
    let spec = TilingSpec::ConcurrentLines {
        angles: vec![alpha, PI - alpha],
    };
    let t = tiling(&spec)?;
    let perpendicular = (alpha - FRAC_PI_2).abs() < 1e-12;
    Ok(ConstructionResult {
        name: "two_lines".into(),
        spec,
        start: arrangement_start(&t, theta)?,
        expected: if perpendicular {
            Expected::Periodic { period: 4 }
        } else {
            Expected::Escaped
        },
        notes: format!("return angle changes by 4α − 2π = {:.12} per revolution", 4.0 * alpha - 2.0 * PI),
    })
}

// ---------------------------------------------------------------------------
// Triangle tilings

/// Distinct line directions (mod π) of the edges meeting at `v`, with the
/// shortest edge length along each of their two rays.
fn star_at(t: &Tiling, v: Point2) -> Vec<(f64, f64)> {
    let lt = t.lattice().expect("lattice tiling");
    let mut rays: Vec<(f64, f64)> = Vec::new();
    for cell in lt.cells_covering(v - Point2::new(1.0, 1.0), v + Point2::new(1.0, 1.0)) {
        for slot in 0..lt.edge_count() {
            let (a, b) = lt.edge_segment(cell, slot);
            let other = if a.dist(v) < 1e-9 {
                b
            } else if b.dist(v) < 1e-9 {
                a
            } else {
                continue;
            };
            rays.push(((other - v).angle(), a.dist(b)));
        }
    }
    rays
}

/// Period-6 orbit circling the lattice vertex of cell `vertex`.
pub fn triangle_period6(spec: &TilingSpec, vertex: [i64; 2]) -> Result<ConstructionResult, ConstructionError> {
    if !matches!(
        spec,
        TilingSpec::Triangle { .. }
            | TilingSpec::IsoscelesTriangle { .. }
            | TilingSpec::EquilateralTriangle
            | TilingSpec::RightTriangle { .. }
    ) {
        return invalid("not a triangle tiling");
    }
    let t = tiling(spec)?;
    let lt = t.lattice().expect("lattice");
    let v = lt.cell_origin(vertex);
    let rays = star_at(&t, v);
    if rays.len() != 6 {
        return invalid("vertex is not six-valent");
    }
    let mut phis: Vec<f64> = rays.iter().map(|r| normalize_line_angle(r.0)).collect();
    phis.sort_by(f64::total_cmp);
    phis.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    if phis.len() != 3 {
        return invalid("vertex is not the meeting point of three lines");
    }
    let gaps = [phis[1] - phis[0], phis[2] - phis[1], phis[0] + PI - phis[2]];
    let theta = gaps[1];
    // orbit around three concurrent lines through the origin, unit start
    let local = Tiling::new(&TilingSpec::ConcurrentLines { angles: gaps.to_vec() }).expect("valid gaps");
    let s0 = TrajectoryState::from_point(&local, Point2::new(1.0, 0.0), PI - theta)?;
    let tr = trace(&local, s0, 6);
    if tr.records.len() < 7 {
        return infeasible("orbit around the vertex does not close");
    }
    // keep every crossing within half of the edge it lies on
    let mut r = f64::MAX;
    for rec in &tr.records {
        let p = rec.point.rotate(phis[0]);
        let ang = p.angle();
        let len = rays
            .iter()
            .filter(|(a, _)| crate::geom::circular_distance(*a, ang) < 1e-6)
            .map(|(_, l)| *l)
            .fold(f64::MAX, f64::min);
        r = r.min(0.5 * len / p.norm());
    }
    let e0 = Point2::from_angle(phis[0]);
    let start = TrajectoryState::from_point(&t, v + e0 * r, normalize_dir(phis[0] + PI - theta))?;
    Ok(ConstructionResult {
        name: "triangle_period6".into(),
        spec: spec.clone(),
        start,
        expected: Expected::Periodic { period: 6 },
        notes: format!("vertex {:?}, start distance {r:.6}, angle {theta:.12}", vertex),
    })
}

/// θ window `(lo, hi)` for the two-vertex period-10 orbit.
pub fn period10_theta_interval(alpha: f64, beta: f64) -> (f64, f64) {
    let lo = [0.0, beta - 2.0 * alpha, 2.0 * beta + 2.0 * alpha - PI, alpha]
        .into_iter()
        .fold(f64::MIN, f64::max);
    let hi = [PI, PI - 2.0 * alpha, 2.0 * beta - alpha, beta + 2.0 * alpha]
        .into_iter()
        .fold(f64::MAX, f64::min);
    (lo, hi)
}

/// Whether `(α, β)` lies strictly inside the period-10 region.
pub fn period10_region(alpha: f64, beta: f64) -> bool {
    PI > beta + 2.0 * alpha && FRAC_PI_3 > alpha && beta > alpha && alpha > 0.0
}

/// Edges crossed by the two-vertex orbit, relative to the start cell:
/// (slot name, cell).
const PERIOD10_PATTERN: [(&str, [i64; 2]); 10] = [
    ("side", [0, 0]),
    ("base", [-1, 1]),
    ("diag", [-1, 1]),
    ("side", [0, 1]),
    ("base", [0, 1]),
    ("side", [1, 0]),
    ("base", [1, 0]),
    ("diag", [1, -1]),
    ("side", [1, -1]),
    ("base", [0, 0]),
];

/// Window of `l` (distance of the start from the β vertex along the unit
/// base) for which the two-vertex period-10 orbit exists at angle θ.
///
/// The crossing positions along the fixed edge pattern are affine in `l`,
/// so the window is the intersection of the constraints
/// `0 < position < 1` over the ten crossings. Returns `None` when empty.
pub fn period10_l_interval(alpha: f64, beta: f64, theta: f64) -> Option<(f64, f64)> {
    let t = Tiling::new(&TilingSpec::Triangle { alpha, beta }).ok()?;
    let lt = t.lattice()?;
    let edges: Vec<EdgeGeom> = PERIOD10_PATTERN
        .iter()
        .map(|(name, cell)| {
            let (a, b) = lt.edge_segment(*cell, lt.slot_by_name(name).expect("slot"));
            EdgeGeom::Segment { a, b }
        })
        .collect();
    // crossing positions and ray lengths along the pattern for a given l
    let walk = |l: f64| -> Option<Vec<(f64, f64)>> {
        let mut p = Point2::new(1.0 - l, 0.0);
        let mut dir = PI - theta;
        let mut out = Vec::with_capacity(10);
        for g in &edges {
            let line: Line = g.line();
            let d = Point2::from_angle(dir);
            let denom = line.normal.dot(d);
            if denom.abs() < 1e-15 {
                return None;
            }
            let lam = -line.signed_distance(p) / denom;
            p = p + d * lam;
            out.push((g.param(p), lam));
            dir = refract_direction(dir, &line);
        }
        Some(out)
    };
    let (w0, w1) = (walk(0.0)?, walk(1.0)?);
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    // a + b l must lie in (0, 1) for positions, (0, ∞) for ray lengths
    let mut clip = |a: f64, b: f64, upper: Option<f64>| {
        for (bound, above) in [(Some(0.0), true), (upper, false)] {
            let Some(c) = bound else { continue };
            if b.abs() < 1e-15 {
                let ok = if above { a > c } else { a < c };
                if !ok {
                    hi = lo;
                }
                continue;
            }
            let x = (c - a) / b;
            if (b > 0.0) == above {
                lo = lo.max(x);
            } else {
                hi = hi.min(x);
            }
        }
    };
    for k in 0..10 {
        let (m0, l0) = w0[k];
        let (m1, l1) = w1[k];
        clip(m0, m1 - m0, Some(1.0));
        clip(l0, l1 - l0, None);
    }
    (hi - lo > 1e-12).then_some((lo, hi))
}

/// The two-vertex period-10 orbit on the triangle tiling with angles α at
/// A and β at B, starting at distance `l` from B on the unit base and making
/// angle θ with the base on the α side.
pub fn triangle_period10(alpha: f64, beta: f64, theta: f64, l: f64) -> Result<ConstructionResult, ConstructionError> {
    if !(alpha > 0.0 && beta > 0.0 && alpha + beta < PI) {
        return invalid("triangle angles must be positive with α + β < π");
    }
    if !period10_region(alpha, beta) {
        return infeasible(format!(
            "(α, β) = ({alpha:.6}, {beta:.6}) is outside the region π > β + 2α, π/3 > α, β > α"
        ));
    }
    let (tlo, thi) = period10_theta_interval(alpha, beta);
    if !(theta > tlo && theta < thi) {
        return infeasible(format!("θ = {theta:.6} outside ({tlo:.6}, {thi:.6})"));
    }
    let Some((llo, lhi)) = period10_l_interval(alpha, beta, theta) else {
        return infeasible(format!("no admissible l for θ = {theta:.6}"));
    };
    if !(l > llo && l < lhi) {
        return infeasible(format!("l = {l:.6} outside ({llo:.6}, {lhi:.6})"));
    }
    let spec = TilingSpec::Triangle { alpha, beta };
    let t = tiling(&spec)?;
    let base = t.slot_by_name("base").expect("slot");
    let start = TrajectoryState::new(&t, EdgeRef::cell([0, 0], base), 1.0 - l, PI - theta)?;
    Ok(ConstructionResult {
        name: "triangle_period10".into(),
        spec,
        start,
        expected: Expected::Periodic { period: 10 },
        notes: format!("θ ∈ ({tlo:.6}, {thi:.6}), l ∈ ({llo:.6}, {lhi:.6})"),
    })
}

/// Search the labelings of a triangle's angles for one inside the period-10
/// region; used to decide whether a tiling admits the orbit at all.
pub fn period10_labeling(angles: [f64; 3]) -> Option<(f64, f64)> {
    let mut out = None;
    for i in 0..3 {
        for j in 0..3 {
            if i != j && period10_region(angles[i], angles[j]) {
                out = out.or(Some((angles[i], angles[j])));
            }
        }
    }
    out
}

/// Start at the midpoint of the hypotenuse of cell `(0,0)`, heading into
/// the upper triangle away from the perpendicular.
pub fn right_triangle_bisecting_escape(alpha: f64) -> Result<ConstructionResult, ConstructionError> {
    let spec = TilingSpec::RightTriangle { alpha };
    let t = tiling(&spec)?;
    let hyp = t.slot_by_name("hypotenuse").expect("slot");
    let (w, h) = (sin(alpha), cos(alpha));
    let normal = Point2::new(h, w).angle();
    let start = TrajectoryState::new(&t, EdgeRef::cell([0, 0], hyp), 0.5, normal + PI / 9.0)?;
    Ok(ConstructionResult {
        name: "right_triangle_bisecting_escape".into(),
        spec,
        start,
        expected: Expected::Unbounded,
        notes: "hypotenuse midpoint; every later hypotenuse is bisected".into(),
    })
}

/// α = π/(2n): perpendicular bisector of the short (horizontal) leg.
pub fn right_triangle_drift(n: u32) -> Result<ConstructionResult, ConstructionError> {
    if n < 2 {
        return invalid("n must be at least 2");
    }
    let alpha = PI / (2.0 * n as f64);
    let spec = TilingSpec::RightTriangle { alpha };
    let t = tiling(&spec)?;
    let leg = t.slot_by_name("horizontal").expect("slot");
    let start = TrajectoryState::new(&t, EdgeRef::cell([0, 0], leg), 0.5, FRAC_PI_2)?;
    Ok(ConstructionResult {
        name: "right_triangle_drift".into(),
        spec,
        start,
        expected: Expected::DriftPeriodic { period: None },
        notes: format!("α = π/{}", 2 * n),
    })
}

// ---------------------------------------------------------------------------
// Trihexagonal tiling

const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Start on the top edge of the hexagon at the origin (the base of the up
/// triangle above it), at distance `x1` from the edge's right vertex,
/// heading into the triangle at interior angle `alpha` with that vertex.
pub fn trihex_start(x1: f64, alpha: f64) -> Result<TrajectoryState, ConstructionError> {
    let t = tiling(&TilingSpec::Trihexagonal)?;
    let p = Point2::new(0.5 - x1, SQRT3 / 2.0);
    Ok(TrajectoryState::from_point(&t, p, alpha)?)
}

fn trihex_result(
    name: &str,
    x1: f64,
    alpha: f64,
    expected: Expected,
    notes: String,
) -> Result<ConstructionResult, ConstructionError> {
    Ok(ConstructionResult {
        name: name.into(),
        spec: TilingSpec::Trihexagonal,
        start: trihex_start(x1, alpha)?,
        expected,
        notes,
    })
}

pub fn trihex_period6(x1: f64) -> Result<ConstructionResult, ConstructionError> {
    if !(x1 > 0.0 && x1 < 1.0) {
        return infeasible("x_1 must lie in (0, 1)");
    }
    trihex_result(
        "trihex_period6",
        x1,
        FRAC_PI_3,
        Expected::Periodic { period: 6 },
        "α = π/3, any x_1 ∈ (0, 1)".into(),
    )
}

pub fn trihex_period12(x1: f64) -> Result<ConstructionResult, ConstructionError> {
    if !(x1 > 0.0 && x1 < 0.5) {
        return infeasible("x_1 must lie in (0, 1/2)");
    }
    trihex_result(
        "trihex_period12",
        x1,
        FRAC_PI_2,
        Expected::Periodic { period: 12 },
        "α = π/2, x_1 ∈ (0, 1/2)".into(),
    )
}

/// Initial angle of the period-24 orbit, π − tan⁻¹(2√3).
pub fn trihex_period24_angle() -> f64 {
    PI - atan(2.0 * SQRT3)
}

pub fn trihex_period24() -> Result<ConstructionResult, ConstructionError> {
    trihex_result(
        "trihex_period24",
        0.125,
        trihex_period24_angle(),
        Expected::Periodic { period: 24 },
        "α = π − tan⁻¹(2√3), x_1 = 1/8 (midpoint of (0, 1/4))".into(),
    )
}

/// π − tan⁻¹(3n√3/(3n−2)).
pub fn trihex_drift_6n_angle(n: u32) -> f64 {
    let n = n as f64;
    PI - atan(3.0 * n * SQRT3 / (3.0 * n - 2.0))
}

pub fn trihex_drift_6n(n: u32) -> Result<ConstructionResult, ConstructionError> {
    if n < 1 {
        return invalid("n must be at least 1");
    }
    let x1 = 1.0 / (6.0 * n as f64);
    trihex_result(
        "trihex_drift_6n",
        x1,
        trihex_drift_6n_angle(n),
        Expected::DriftPeriodic {
            period: Some(6 * n as usize),
        },
        format!("x_1 = 1/{} (midpoint of (0, 1/{}))", 6 * n, 3 * n),
    )
}

/// tan⁻¹((6n−3)√3).
pub fn trihex_drift_12n_minus_6_angle(n: u32) -> f64 {
    atan((6.0 * n as f64 - 3.0) * SQRT3)
}

pub fn trihex_drift_12n_minus_6(n: u32) -> Result<ConstructionResult, ConstructionError> {
    if n < 2 {
        return invalid("n must be at least 2");
    }
    let m = 6.0 * n as f64 - 3.0;
    let x1 = 0.5 + 1.0 / m;
    trihex_result(
        "trihex_drift_12n_minus_6",
        x1,
        trihex_drift_12n_minus_6_angle(n),
        Expected::DriftPeriodic {
            period: Some(12 * n as usize - 6),
        },
        format!(
            "x_1 = 1/2 + 1/{m} (midpoint of (1/2 + 1/{}, 1/2 + 3/{})); same-edge spacing 1/{}",
            2.0 * m,
            2.0 * m,
            2 * n - 1
        ),
    )
}

// ---------------------------------------------------------------------------
// Name-based dispatch

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Num(f64),
    List(Vec<f64>),
}

pub type Params = BTreeMap<String, ParamValue>;

pub const NAMES: &[&str] = &[
    "two_lines",
    "three_lines_periodic",
    "odd_lines_periodic",
    "triangle_period6",
    "triangle_period10",
    "right_triangle_bisecting_escape",
    "right_triangle_drift",
    "trihex_period6",
    "trihex_period12",
    "trihex_period24",
    "trihex_drift_6n",
    "trihex_drift_12n_minus_6",
];

fn num(p: &Params, key: &str) -> Result<f64, ConstructionError> {
    match p.get(key) {
        Some(ParamValue::Num(x)) => Ok(*x),
        _ => invalid(format!("missing numeric parameter `{key}`")),
    }
}

fn num_or(p: &Params, key: &str, default: f64) -> Result<f64, ConstructionError> {
    match p.get(key) {
        None => Ok(default),
        Some(ParamValue::Num(x)) => Ok(*x),
        Some(_) => invalid(format!("parameter `{key}` must be a number")),
    }
}

fn int(p: &Params, key: &str, default: Option<u32>) -> Result<u32, ConstructionError> {
    let x = match (p.get(key), default) {
        (None, Some(d)) => return Ok(d),
        _ => num(p, key)?,
    };
    if x >= 0.0 && x == libm::floor(x) && x < 1e6 {
        Ok(x as u32)
    } else {
        invalid(format!("parameter `{key}` must be a non-negative integer"))
    }
}

/// Build a construction from its name and parameters.
pub fn construct(name: &str, p: &Params) -> Result<ConstructionResult, ConstructionError> {
    match name {
        "two_lines" => two_lines(num(p, "alpha")?, num(p, "theta")?),
        "three_lines_periodic" => three_lines_periodic(num(p, "alpha")?, num(p, "beta")?, num(p, "gamma")?),
        "odd_lines_periodic" => match p.get("angles") {
            Some(ParamValue::List(a)) => {
                let mut r = odd_lines_periodic(a)?;
                if let Some(ParamValue::Num(eps)) = p.get("eps") {
                    r = odd_arrangement_perturbed(&r.spec, *eps)?;
                }
                Ok(r)
            }
            _ => invalid("missing list parameter `angles`"),
        },
        "triangle_period6" => {
            let spec = TilingSpec::Triangle {
                alpha: num(p, "alpha")?,
                beta: num(p, "beta")?,
            };
            triangle_period6(&spec, [int(p, "i", Some(0))? as i64, int(p, "j", Some(0))? as i64])
        }
        "triangle_period10" => triangle_period10(num(p, "alpha")?, num(p, "beta")?, num(p, "theta")?, num(p, "l")?),
        "right_triangle_bisecting_escape" => right_triangle_bisecting_escape(num(p, "alpha")?),
        "right_triangle_drift" => right_triangle_drift(int(p, "n", None)?),
        "trihex_period6" => trihex_period6(num_or(p, "x1", 0.5)?),
        "trihex_period12" => trihex_period12(num_or(p, "x1", 0.25)?),
        "trihex_period24" => trihex_period24(),
        "trihex_drift_6n" => trihex_drift_6n(int(p, "n", None)?),
        "trihex_drift_12n_minus_6" => trihex_drift_12n_minus_6(int(p, "n", None)?),
        _ => invalid(format!("unknown construction `{name}`")),
    }
}

/// Lines spec from `(angle, point)` pairs.
pub fn line_specs(lines: &[(f64, Point2)]) -> Vec<LineSpec> {
    lines
        .iter()
        .map(|&(angle, p)| LineSpec {
            angle,
            point: [p.x, p.y],
        })
        .collect()
}
