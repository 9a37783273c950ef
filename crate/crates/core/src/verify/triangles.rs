//! Suites over the lattice tilings: regular tilings, isosceles and right
//! triangles, and the two-vertex period-10 orbit.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use super::{fmt_f, Case, Suite};
use crate::classify::{escape_certificate_right_triangle, is_leg, Kind};
use crate::construct::{
    period10_l_interval, period10_labeling, period10_region, period10_theta_interval, right_triangle_bisecting_escape,
    right_triangle_drift, triangle_period10, ConstructionError,
};
use crate::geom::Point2;
use crate::sim::{edge_angle, trace, Termination, TrajectoryState};
use crate::tiling::{EdgeRef, Tiling, TilingSpec};

pub fn mf_regular(s: &mut Suite) {
    type Accept = fn(&Kind) -> bool;
    let suites: [(TilingSpec, &str, Accept); 4] = [
        (TilingSpec::EquilateralTriangle, "periodic(6)", |k| *k == Kind::Periodic { period: 6 }),
        (TilingSpec::Square, "periodic(4) | drift_periodic(2)", |k| {
            *k == Kind::Periodic { period: 4 } || (k.is_drift() && k.period() == Some(2))
        }),
        (TilingSpec::RegularHexagon, "periodic(6) | drift_periodic(2)", |k| {
            *k == Kind::Periodic { period: 6 } || (k.is_drift() && k.period() == Some(2))
        }),
        (TilingSpec::Kaleidoscope, "periodic(4|6|12)", |k| {
            k.is_periodic() && matches!(k.period(), Some(4 | 6 | 12))
        }),
    ];
    for (spec, expected, accept) in suites {
        let t = Tiling::new(&spec).expect("valid spec");
        for k in 0..s.samples {
            let st = s.lattice_start(&t);
            let c = s.classify(&t, st);
            s.case(
                Case::new(format!("{} start {k}", spec.name()), expected)
                    .replay(&spec, st)
                    .observed(c.kind.label())
                    .pass(accept(&c.kind)),
            );
        }
    }
}

const ISO_ANGLES: [f64; 3] = [PI / 5.0, PI / 7.0, 0.4];

pub fn iso_classification(s: &mut Suite) {
    for alpha in ISO_ANGLES {
        let spec = TilingSpec::IsoscelesTriangle { alpha };
        let t = Tiling::new(&spec).expect("valid spec");
        for k in 0..s.samples {
            let st = s.lattice_start(&t);
            let c = s.classify(&t, st);
            s.case(
                Case::new(format!("vertex={} start {k}", fmt_f(alpha)), "periodic | drift_periodic")
                    .replay(&spec, st)
                    .observed(c.kind.label())
                    .pass(c.kind.is_periodic() || c.kind.is_drift()),
            );
        }
    }
}

/// Smallest angle the orbit makes with a leg, and the `n` with
/// `π − α ≤ θ + nα < π`.
pub fn iso_leg_angle(t: &Tiling, start: TrajectoryState, steps: usize, alpha: f64) -> Option<(f64, u32)> {
    let base = t.slot_by_name("base")?;
    let tr = trace(t, start, steps);
    let theta = tr
        .records
        .iter()
        .filter(|r| r.state.edge.slot() != Some(base))
        .map(|r| {
            let a = edge_angle(t, &r.state);
            a.min(PI - a)
        })
        .fold(f64::INFINITY, f64::min);
    if !theta.is_finite() {
        return None;
    }
    let mut n = 0u32;
    while theta + (n as f64) * alpha < PI - alpha - 1e-12 {
        n += 1;
    }
    Some((theta, n))
}

pub fn iso_bounds(s: &mut Suite) {
    for alpha in ISO_ANGLES {
        let spec = TilingSpec::IsoscelesTriangle { alpha };
        let t = Tiling::new(&spec).expect("valid spec");
        for k in 0..s.samples {
            let st = s.lattice_start(&t);
            let c = s.classify(&t, st);
            let Some(period) = c.kind.period() else {
                s.case(
                    Case::new(format!("vertex={} start {k}", fmt_f(alpha)), "periodic | drift_periodic")
                        .replay(&spec, st)
                        .observed(c.kind.label()),
                );
                continue;
            };
            let (theta, n) = iso_leg_angle(&t, st, period, alpha).unwrap_or((0.0, 0));
            let even = n % 2 == 0;
            let bound = match (c.kind.is_drift(), even) {
                (true, true) | (false, false) => 2 * n as usize + 4,
                _ => 2 * n as usize + 2,
            };
            s.case(
                Case::new(
                    format!("vertex={} start {k} theta={} n={n}", fmt_f(alpha), fmt_f(theta)),
                    format!("period <= {bound}"),
                )
                .replay(&spec, st)
                .observed(c.kind.label())
                .pass(period <= bound),
            );
        }
    }
}

/// Hypotenuse-crossing positions, and whether the below/above-midpoint side
/// changes exactly at leg-leg double crossings.
/// Worst `|t − 1/2|` over hypotenuse crossings, the same scaled by the sine
/// of the crossing angle (rounding is amplified by near-grazing crossings),
/// and whether the side of the midpoint flips exactly at leg-leg doubles.
fn midpoint_pattern(t: &Tiling, records: &[crate::sim::CrossingRecord]) -> (f64, f64, bool) {
    let mut worst = 0.0f64;
    let mut scaled = 0.0f64;
    let mut side: Option<bool> = None;
    let mut double = false;
    let mut consistent = true;
    let mut prev_leg = false;
    for r in records {
        let leg = is_leg(t, &r.state.edge);
        if leg {
            double |= prev_leg;
        } else {
            let e = (r.state.t - 0.5).abs();
            worst = worst.max(e);
            scaled = scaled.max(e * libm::sin(edge_angle(t, &r.state)));
            let below = r.state.t < 0.5;
            if let Some(was) = side {
                consistent &= (was != below) == double;
            }
            side = Some(below);
            double = false;
        }
        prev_leg = leg;
    }
    (worst, scaled, consistent)
}

pub fn right_bisect(s: &mut Suite) {
    let mut alphas = Vec::from([PI / 8.0, 0.3, 1.0]);
    for _ in 0..5 {
        alphas.push(s.uniform(0.05, FRAC_PI_2 - 0.05));
    }
    for alpha in alphas {
        let r = right_triangle_bisecting_escape(alpha).expect("valid angle");
        let t = Tiling::new(&r.spec).expect("valid spec");
        let tr = trace(&t, r.start, s.max_steps);
        let cert = escape_certificate_right_triangle(&t, &tr);
        let (worst, scaled, _) = midpoint_pattern(&t, &tr.records);
        let full = tr.termination == Termination::MaxSteps;
        s.case(
            Case::new(format!("alpha={} midpoint start", fmt_f(alpha)), "certificate, all hypotenuses bisected")
                .replay(&r.spec, r.start)
                .observed(format!(
                    "certificate={cert} steps={} termination={}",
                    tr.records.len() - 1,
                    tr.termination
                ))
                .residual("midpoint", worst)
                .residual("midpoint_x_sin", scaled)
                .pass(cert && full && worst < 1e-9),
        );
    }
    // off-midpoint starts: the side of the midpoint flips exactly at
    // leg-leg double crossings
    for k in 0..s.samples {
        let alpha = s.uniform(0.05, FRAC_PI_2 - 0.05);
        let spec = TilingSpec::RightTriangle { alpha };
        let t = Tiling::new(&spec).expect("valid spec");
        let hyp = t.slot_by_name("hypotenuse").expect("slot");
        let pos = s.uniform(0.02, 0.98);
        let dir = s.uniform(0.0, 2.0 * PI);
        let Ok(st) = TrajectoryState::new(&t, EdgeRef::cell([0, 0], hyp), pos, dir) else {
            continue;
        };
        let tr = trace(&t, st, 2000);
        let (_, _, consistent) = midpoint_pattern(&t, &tr.records);
        s.case(
            Case::new(
                format!("alpha={} t={} off-midpoint {k}", fmt_f(alpha), fmt_f(pos)),
                "side flips only at leg-leg",
            )
            .replay(&spec, st)
            .observed(if consistent { "consistent" } else { "violated" })
            .pass(consistent),
        );
    }
}

pub fn right_drift(s: &mut Suite) {
    for n in [2u32, 3, 4, 5, 6] {
        let r = right_triangle_drift(n).expect("valid n");
        let t = Tiling::new(&r.spec).expect("valid spec");
        let c = s.classify(&t, r.start);
        let mut case = Case::new(format!("n={n}"), "drift_periodic")
            .replay(&r.spec, r.start)
            .observed(c.kind.label());
        if let Kind::DriftPeriodic { period, drift, .. } = c.kind {
            let tr = trace(&t, r.start, (s.samples.max(2) + 1) * period);
            let d = Point2::new(drift[0], drift[1]);
            let worst = (0..tr.records.len().saturating_sub(period))
                .map(|i| (tr.records[i + period].point - tr.records[i].point - d).norm())
                .fold(0.0, f64::max);
            case = case.residual("drift", worst).pass(worst < 1e-9);
        }
        s.case(case);
    }
}

pub fn period10(s: &mut Suite) {
    // the worked example
    let ex = triangle_period10(PI / 5.0, 0.3 * PI, 0.3 * PI, 0.19);
    let mut case = Case::new("alpha=pi/5 beta=3pi/10 theta=3pi/10 l=0.19", "periodic(10)");
    match ex {
        Ok(r) => {
            let t = Tiling::new(&r.spec).expect("valid spec");
            let c = s.classify(&t, r.start);
            case = case
                .replay(&r.spec, r.start)
                .observed(c.kind.label())
                .residual("return", c.witness.residual.unwrap_or(f64::MAX))
                .pass(r.expected.matches(&c.kind));
        }
        Err(e) => case = case.observed(format!("{e}")),
    }
    s.case(case);

    // tilings that admit no labeling inside the region
    let infeasible: [(&str, [f64; 3]); 4] = [
        ("equilateral", [FRAC_PI_3; 3]),
        ("isosceles vertex=pi/3+0.1", iso(FRAC_PI_3 + 0.1)),
        ("isosceles vertex=1.5", iso(1.5)),
        ("isosceles vertex=2.2", iso(2.2)),
    ];
    for (name, angles) in infeasible {
        let mut errs = 0;
        let mut total = 0;
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                total += 1;
                let (a, b) = (angles[i], angles[j]);
                let (lo, hi) = period10_theta_interval(a, b);
                let theta = if hi > lo { 0.5 * (lo + hi) } else { a };
                if matches!(triangle_period10(a, b, theta, 0.1), Err(ConstructionError::Infeasible(_))) {
                    errs += 1;
                }
            }
        }
        s.case(
            Case::new(format!("{name}: every labeling"), "infeasible")
                .observed(format!(
                    "{errs}/{total} infeasible; labeling in region: {}",
                    period10_labeling(angles).is_some()
                ))
                .pass(errs == total && period10_labeling(angles).is_none()),
        );
    }

    // random points of the region: some θ in the printed window admits an
    // orbit of the pattern, and tracing it closes after ten crossings
    for k in 0..s.samples {
        let (alpha, beta) = loop {
            let a = s.uniform(0.02, FRAC_PI_3 - 0.02);
            let b = s.uniform(a, PI - 2.0 * a);
            let (lo, hi) = period10_theta_interval(a, b);
            if period10_region(a, b) && hi - lo > 1e-3 {
                break (a, b);
            }
        };
        let (lo, hi) = period10_theta_interval(alpha, beta);
        const GRID: usize = 64;
        let mut feasible = Vec::new();
        for g in 0..GRID {
            let theta = lo + (hi - lo) * (g as f64 + 0.5) / GRID as f64;
            if let Some(iv) = period10_l_interval(alpha, beta, theta) {
                feasible.push((theta, iv));
            }
        }
        let frac = feasible.len() as f64 / GRID as f64;
        let mut case = Case::new(
            format!("region alpha={} beta={} {k}", fmt_f(alpha), fmt_f(beta)),
            "periodic(10) for some theta",
        )
        .residual("feasible_theta_fraction", frac);
        if let Some(&(theta, (l0, l1))) = feasible.get(feasible.len() / 2) {
            let r = triangle_period10(alpha, beta, theta, 0.5 * (l0 + l1)).expect("feasible");
            let t = Tiling::new(&r.spec).expect("valid spec");
            let c = s.classify(&t, r.start);
            case = case
                .replay(&r.spec, r.start)
                .observed(format!("{} at theta={}", c.kind.label(), fmt_f(theta)))
                .pass(r.expected.matches(&c.kind));
        } else {
            case = case.observed(String::from("no admissible (theta, l) on the grid"));
        }
        s.case(case);
    }
}

fn iso(vertex: f64) -> [f64; 3] {
    let b = (PI - vertex) / 2.0;
    [vertex, b, b]
}
