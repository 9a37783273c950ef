//! Trihexagonal suites: the local lemmas against independent closed forms,
//! and the explicit periodic and drift-periodic orbits.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use libm::{cos, sin, tan};

use super::{fmt_f, is_segment, segment, Case, Suite};
use crate::classify::Kind;
use crate::construct::{
    trihex_drift_12n_minus_6, trihex_drift_12n_minus_6_angle, trihex_drift_6n, trihex_drift_6n_angle,
    trihex_period12, trihex_period24, trihex_period24_angle, trihex_period6, trihex_start, ConstructionResult,
};
use crate::geom::{angle_between, Point2};
use crate::sim::{shared_vertex, trace, vertex_view, CrossingRecord, TrajectoryState};
use crate::tiling::{Tiling, TilingSpec};

const SQRT3: f64 = 1.732_050_807_568_877_2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lemma {
    Turner,
    Quadrilateral,
    QuadTriangle,
    Pentagon,
}

/// Hexagon `ABCDEF` of cell (0,0), labeled from the top edge `AB`.
fn hexagon() -> [Point2; 6] {
    let v = |k: f64| Point2::new(cos(k * PI / 3.0), sin(k * PI / 3.0));
    // A, B on top; C, D, E, F following B around the hexagon
    [v(2.0), v(1.0), v(0.0), v(5.0), v(4.0), v(3.0)]
}

fn cot(x: f64) -> f64 {
    1.0 / tan(x)
}

/// One sample of a lemma: `Some((x_pred, x_obs, a_pred, a_obs))` when the
/// lemma's crossing pattern occurs for this `(x_1, α)`.
fn lemma_sample(t: &Tiling, lemma: Lemma, x1: f64, alpha: f64) -> Option<(f64, f64, f64, f64)> {
    let [a, b, c, d, e, _] = hexagon();
    match lemma {
        Lemma::Turner => {
            // triangle → hexagon → triangle starting from the top edge
            let st = trihex_start(x1, alpha).ok()?;
            let tr = trace(t, st, 3);
            let r = &tr.records;
            // the hexagon chord p_2 p_3 must join adjacent hexagon edges
            if r.len() < 4 || shared_vertex(t, &r[1].state.edge, &r[2].state.edge).is_none() {
                return None;
            }
            let view = |i: usize, j: usize| -> Option<(f64, f64)> {
                let v = shared_vertex(t, &r[i].state.edge, &r[j].state.edge)?;
                let w = vertex_view(r[i].point, r[i].state.dir, v);
                Some((w.x, w.alpha))
            };
            let (x_1, a_1) = view(0, 1)?;
            let (x_4, a_4) = view(3, 2)?;
            Some((x_1, x_4, PI - a_1, a_4))
        }
        _ => {
            // p_1 on AB at distance x_1 from B; angle α with the ray to A
            let p1 = b.lerp(a, x1);
            let dir = (a - p1).angle() + alpha;
            let st = TrajectoryState::from_point(t, p1, dir).ok()?;
            let tr = trace(t, st, 2);
            let r = &tr.records;
            if r.len() < 3 {
                return None;
            }
            let look = |rec: &CrossingRecord, v: Point2| (rec.point.dist(v), angle_between(v - rec.point, Point2::from_angle(rec.state.dir)));
            match lemma {
                Lemma::Quadrilateral if is_segment(t, &r[1].state.edge, c, d) => {
                    let (x, ang) = look(&r[1], c);
                    let pred = (sin(alpha) * (2.0 * x1 + 1.0) + SQRT3 * cos(alpha)) / (2.0 * sin(alpha - PI / 3.0));
                    Some((pred, x, alpha - PI / 3.0, ang))
                }
                Lemma::QuadTriangle if is_segment(t, &r[1].state.edge, c, d) && is_segment(t, &r[2].state.edge, c, c + d) => {
                    let (x, ang) = look(&r[2], c);
                    Some((0.5 + x1 + SQRT3 / 2.0 * cot(alpha), x, PI - alpha, ang))
                }
                Lemma::Pentagon if is_segment(t, &r[1].state.edge, d, e) => {
                    let (x, ang) = look(&r[1], d);
                    Some((x1 + SQRT3 * cot(alpha), x, alpha, ang))
                }
                _ => None,
            }
        }
    }
}

pub fn lemma(s: &mut Suite, lemma: Lemma) {
    let spec = TilingSpec::Trihexagonal;
    let t = Tiling::new(&spec).expect("valid spec");
    let mut attempts = 0usize;
    let mut worst_x = 0.0f64;
    let mut worst_a = 0.0f64;
    let mut valid = 0usize;
    let mut failures = Vec::new();
    while valid < s.samples && attempts < 200 * s.samples.max(1) {
        attempts += 1;
        let x1 = s.uniform(0.0, 1.0);
        let alpha = s.uniform(0.0, PI);
        let Some((xp, xo, ap, ao)) = lemma_sample(&t, lemma, x1, alpha) else {
            continue;
        };
        valid += 1;
        let (ex, ea) = ((xp - xo).abs(), (ap - ao).abs());
        worst_x = worst_x.max(ex);
        worst_a = worst_a.max(ea);
        if (ex >= 1e-9 || ea >= 1e-9) && failures.len() < 5 {
            failures.push((x1, alpha, xp, xo, ap, ao));
        }
    }
    s.notes.push(format!("{valid} valid samples out of {attempts} draws"));
    s.case(
        Case::new(format!("{lemma:?}: {valid} samples"), "closed forms within 1e-9")
            .observed(format!("{} mismatches", failures.len()))
            .residual("x", worst_x)
            .residual("alpha", worst_a)
            .pass(valid == s.samples && failures.is_empty()),
    );
    for (x1, alpha, xp, xo, ap, ao) in failures {
        let start = trihex_start(x1, alpha).ok();
        let mut c = Case::new(
            format!("{lemma:?}: x1={} alpha={}", fmt_f(x1), fmt_f(alpha)),
            format!("x={} alpha={}", fmt_f(xp), fmt_f(ap)),
        )
        .observed(format!("x={} alpha={}", fmt_f(xo), fmt_f(ao)));
        if let Some(st) = start {
            c = c.replay(&spec, st);
        }
        s.case(c);
    }
}

fn run(s: &mut Suite, label: &str, r: &ConstructionResult) -> Kind {
    let t = Tiling::new(&r.spec).expect("valid spec");
    let c = s.classify(&t, r.start);
    s.case(
        Case::new(label, r.expected.label())
            .replay(&r.spec, r.start)
            .observed(c.kind.label())
            .residual("return", c.witness.residual.unwrap_or(f64::MAX))
            .pass(r.expected.matches(&c.kind) && c.witness.residual.is_some_and(|x| x < 1e-7)),
    );
    c.kind
}

pub fn period6(s: &mut Suite) {
    let mut xs = Vec::from([0.5, 0.1, 0.9]);
    for _ in 0..s.samples {
        xs.push(s.uniform(0.01, 0.99));
    }
    for x in xs {
        run(s, &format!("x1={}", fmt_f(x)), &trihex_period6(x).expect("feasible"));
    }
}

pub fn period12(s: &mut Suite) {
    let mut xs = Vec::from([0.25, 0.1, 0.4]);
    for _ in 0..s.samples {
        xs.push(s.uniform(0.01, 0.49));
    }
    for x in xs {
        run(s, &format!("x1={}", fmt_f(x)), &trihex_period12(x).expect("feasible"));
    }
}

pub fn period24(s: &mut Suite) {
    let r = trihex_period24().expect("feasible");
    run(s, "canonical start", &r);
    let t = Tiling::new(&r.spec).expect("valid spec");
    let mut rev = r.clone();
    rev.start = r.start.retraced(&t).expect("valid edge");
    run(s, "time-reversed orbit", &rev);
    for eps in [1e-3, -1e-3] {
        let Ok(st) = trihex_start(0.125, trihex_period24_angle() + eps) else {
            continue;
        };
        let c = s.classify(&t, st);
        s.case(
            Case::new(format!("angle perturbed by {eps:e}"), "not periodic(24)")
                .replay(&r.spec, st)
                .observed(c.kind.label())
                .pass(c.kind != Kind::Periodic { period: 24 }),
        );
    }
}

pub fn drift_6n(s: &mut Suite) {
    for n in [1u32, 2, 3, 4] {
        run(s, &format!("n={n}"), &trihex_drift_6n(n).expect("feasible"));
    }
    let lower = PI - libm::atan(3.0 * SQRT3);
    let angles: Vec<f64> = (1..=12).map(trihex_drift_6n_angle).collect();
    let monotone = angles.windows(2).all(|w| w[1] > w[0]);
    let inside = angles.iter().all(|&a| a >= lower - 1e-15 && a < 2.0 * PI / 3.0);
    s.case(
        Case::new("initial angles n=1..12", "increasing in [pi - atan(3 sqrt 3), 2pi/3)")
            .observed(format!("n=1: {}pi", fmt_f(angles[0] / PI)))
            .residual("n1_vs_0.56pi", (angles[0] / PI - 0.56).abs())
            .residual("limit_gap_n1e6", (2.0 * PI / 3.0 - trihex_drift_6n_angle(1_000_000)).abs())
            .pass(monotone && inside && (angles[0] - lower).abs() < 1e-15),
    );
}

/// Distances between crossings 12k and 12k+12, which share an edge.
fn spacings(t: &Tiling, r: &ConstructionResult, n: u32) -> (Vec<f64>, bool) {
    let tr = trace(t, r.start, 12 * n as usize);
    let rec = &tr.records;
    let mut same_edge = true;
    let mut gaps = Vec::new();
    for k in 0..(n as usize - 1) {
        let (a, b) = (&rec[12 * k], &rec[12 * k + 12]);
        same_edge &= a.state.edge == b.state.edge && segment(t, &a.state.edge).is_some();
        gaps.push(a.point.dist(b.point));
    }
    (gaps, same_edge)
}

pub fn drift_12n_minus_6(s: &mut Suite) {
    for n in [2u32, 3, 4] {
        let r = trihex_drift_12n_minus_6(n).expect("feasible");
        run(s, &format!("n={n}"), &r);
        spacing_case(s, &r, n);
    }
    let angles: Vec<f64> = (2..=12).map(trihex_drift_12n_minus_6_angle).collect();
    let monotone = angles.windows(2).all(|w| w[1] > w[0] && w[1] < FRAC_PI_2);
    s.case(
        Case::new("initial angles n=2..12", "increasing towards pi/2")
            .observed(format!("n=12: {}", fmt_f(angles[angles.len() - 1])))
            .residual("limit_gap_n1e6", FRAC_PI_2 - trihex_drift_12n_minus_6_angle(1_000_000))
            .pass(monotone),
    );
}

fn spacing_case(s: &mut Suite, r: &ConstructionResult, n: u32) {
    let t = Tiling::new(&r.spec).expect("valid spec");
    let (gaps, same_edge) = spacings(&t, r, n);
    let target = 1.0 / (2 * n - 1) as f64;
    let worst = gaps.iter().map(|g| (g - target).abs()).fold(0.0, f64::max);
    s.case(
        Case::new(format!("n={n} same-edge spacing"), format!("1/{} = {}", 2 * n - 1, fmt_f(target)))
            .replay(&r.spec, r.start)
            .observed(format!("{} gaps on a common edge: {same_edge}", gaps.len()))
            .residual("spacing", worst)
            .pass(same_edge && worst < 1e-9),
    );
}

pub fn dense_spacing(s: &mut Suite) {
    for n in 2u32..=8 {
        let r = trihex_drift_12n_minus_6(n).expect("feasible");
        spacing_case(s, &r, n);
    }
}
