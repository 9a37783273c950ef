//! Suites over line arrangements.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use super::{fmt_f, Case, Suite};
use crate::classify::{theta_sequence, Kind};
use crate::construct::{arrangement_start_at, odd_arrangement_periodic, odd_condition_angle};
use crate::geom::{compose_reflections, IsometryKind};
use crate::sim::{trace, TrajectoryState};
use crate::tiling::{Tiling, TilingSpec};

/// θ sequence of a trace whose first 2n crossings are good, else `None`.
fn good_thetas(t: &Tiling, start: TrajectoryState, max_steps: usize) -> Option<Vec<f64>> {
    let n = t.arrangement()?.len();
    let th = theta_sequence(t, &trace(t, start, max_steps)).ok()?;
    (th.len() > 2 * n).then_some(th)
}

/// Resample initial angles and start distances until the start is good.
fn good_start(s: &mut Suite, t: &Tiling, discarded: &mut usize) -> Option<(TrajectoryState, f64)> {
    let n = t.arrangement()?.len();
    for _ in 0..1000 {
        let theta = s.uniform(0.01, PI - 0.01);
        let scale = s.uniform(5.0, 40.0);
        if let Ok(st) = arrangement_start_at(t, theta, scale) {
            if good_thetas(t, st, 2 * n).is_some() {
                return Some((st, theta));
            }
        }
        *discarded += 1;
    }
    None
}

/// Right angle plus random crossing angles: periodic exactly when perpendicular,
/// otherwise every return turns the angle by 4α − 2π.
pub fn two_lines(s: &mut Suite) {
    let mut alphas = Vec::from([FRAC_PI_2, 88f64.to_radians()]);
    while alphas.len() < 22 {
        let a = s.uniform(10.0, 170.0);
        if (a - 90.0).abs() > 0.5 {
            alphas.push(a.to_radians());
        }
    }
    let mut discarded = 0;
    for alpha in alphas {
        let spec = TilingSpec::ConcurrentLines {
            angles: Vec::from([alpha, PI - alpha]),
        };
        let t = Tiling::new(&spec).expect("valid spec");
        let right = alpha == FRAC_PI_2;
        let expect_delta = 4.0 * alpha - 2.0 * PI;
        for _ in 0..s.samples {
            let Some((st, theta)) = good_start(s, &t, &mut discarded) else {
                // one return turns by more than π: no start sees 2n crossings
                s.notes.push(format!("alpha={}: no good start found", fmt_f(alpha)));
                break;
            };
            let c = s.classify(&t, st);
            let label = format!("alpha={} theta={}", fmt_f(alpha), fmt_f(theta));
            let mut case = Case::new(label, if right { "periodic(4)" } else { "not periodic" })
                .replay(&spec, st)
                .observed(c.kind.label());
            if right {
                case = case.pass(c.kind == Kind::Periodic { period: 4 });
                if let Some(r) = c.witness.residual {
                    case = case.residual("return", r);
                }
            } else {
                let th = good_thetas(&t, st, s.max_steps).unwrap_or_default();
                let worst = th
                    .iter()
                    .step_by(4)
                    .zip(th.iter().skip(4).step_by(4))
                    .map(|(a, b)| (b - a - expect_delta).abs())
                    .fold(0.0, f64::max);
                case = case
                    .residual("per_return_delta", worst)
                    .pass(!c.kind.is_periodic() && worst < 1e-9);
            }
            s.case(case);
        }
    }
    s.notes.push(format!("{discarded} non-good starts discarded"));
}

/// Three concurrent lines: the construction angle, and random angles,
/// all close up after six crossings.
pub fn three_lines(s: &mut Suite) {
    let mut discarded = 0;
    for _ in 0..s.samples {
        let gaps = s.partition(PI, 3);
        let r = crate::construct::three_lines_periodic(gaps[0], gaps[1], gaps[2]).expect("valid gaps");
        let t = Tiling::new(&r.spec).expect("valid spec");
        let c = s.classify(&t, r.start);
        s.case(
            Case::new(format!("gaps={:.6},{:.6},{:.6} construction", gaps[0], gaps[1], gaps[2]), "periodic(6)")
                .replay(&r.spec, r.start)
                .observed(c.kind.label())
                .residual("return", c.witness.residual.unwrap_or(f64::MAX))
                .pass(r.expected.matches(&c.kind)),
        );
        if let Some((st, theta)) = good_start(s, &t, &mut discarded) {
            let c = s.classify(&t, st);
            s.case(
                Case::new(format!("gaps={:.6},{:.6},{:.6} theta={}", gaps[0], gaps[1], gaps[2], fmt_f(theta)), "periodic(6)")
                    .replay(&r.spec, st)
                    .observed(c.kind.label())
                    .pass(c.kind == Kind::Periodic { period: 6 }),
            );
        }
    }
    s.notes.push(format!("{discarded} non-good starts discarded"));
}

/// Odd simple arrangements started at the odd-condition angle.
pub fn odd_lines(s: &mut Suite) {
    for n in [3, 5, 7] {
        for k in 0..s.samples {
            let (spec, t) = s.arrangement(n, None);
            let r = odd_arrangement_periodic(&spec).expect("odd arrangement");
            let c = s.classify(&t, r.start);
            let residual = c.witness.residual.unwrap_or(f64::MAX);
            s.case(
                Case::new(format!("n={n} arrangement {k}"), format!("periodic({})", 2 * n))
                    .replay(&spec, r.start)
                    .observed(c.kind.label())
                    .residual("return", residual)
                    .pass(r.expected.matches(&c.kind) && residual < 1e-7),
            );
        }
    }
}

/// Even arrangements with and without the alternating-sum condition.
pub fn even_lines(s: &mut Suite) {
    let mut discarded = 0;
    for (k, n) in [4usize, 6, 4, 6, 4, 6, 4, 6, 4, 6].into_iter().enumerate() {
        for satisfying in [true, false] {
            let gaps: Vec<f64> = if satisfying {
                let even = s.partition(FRAC_PI_2, n / 2);
                let odd = s.partition(FRAC_PI_2, n / 2);
                (0..n).map(|i| if i % 2 == 0 { even[i / 2] } else { odd[i / 2] }).collect()
            } else {
                loop {
                    let g = s.partition(PI, n);
                    if !crate::construct::even_lines_condition(&g) {
                        break g;
                    }
                }
            };
            let (spec, t) = s.arrangement(n, Some(&gaps));
            let arr = t.arrangement().expect("arrangement");
            // T = reflections in l_0 … l_{n−1}; T² is the identity exactly
            // when the condition holds
            let lines: Vec<_> = arr.lines().iter().chain(arr.lines()).copied().collect();
            let t2 = compose_reflections(&lines).expect("lines");
            let (t2_ok, t2_label) = match t2.kind {
                IsometryKind::Identity => (satisfying, "identity".into()),
                IsometryKind::Rotation { angle, .. } => (!satisfying, format!("rotation({})", fmt_f(angle))),
                other => (false, format!("{other:?}")),
            };
            let tag = if satisfying { "satisfying" } else { "violating" };
            s.case(
                Case::new(
                    format!("n={n} {tag} arrangement {k}: T^2"),
                    if satisfying { "identity" } else { "nontrivial rotation" },
                )
                .observed(t2_label)
                .pass(t2_ok),
            );
            let mut periodic = 0usize;
            let mut sampled = 0usize;
            let mut first_bad = None;
            for _ in 0..s.samples {
                let Some((st, _)) = good_start(s, &t, &mut discarded) else {
                    break;
                };
                sampled += 1;
                let c = s.classify(&t, st);
                let ok = if satisfying {
                    c.kind == Kind::Periodic { period: 2 * n }
                } else {
                    !c.kind.is_periodic()
                };
                periodic += c.kind.is_periodic() as usize;
                if !ok && first_bad.is_none() {
                    first_bad = Some((st, c.kind.label()));
                }
            }
            let mut case = Case::new(
                format!("n={n} {tag} arrangement {k}: {sampled} good starts"),
                if satisfying {
                    format!("all periodic({})", 2 * n)
                } else {
                    "none periodic".into()
                },
            )
            .observed(format!("{periodic}/{sampled} periodic"))
            .pass(first_bad.is_none() && sampled == s.samples);
            if let Some((st, label)) = first_bad {
                case = case.replay(&spec, st).observed(format!("{periodic}/{sampled} periodic; e.g. {label}"));
            }
            s.case(case);
        }
    }
    s.notes.push(format!("{discarded} non-good starts discarded"));
}

/// Three-line periodic starts perturbed by ±ε: θ_3 − θ_0 = −2ε, and the
/// first block of every revolution turns by the same amount.
pub fn spiral(s: &mut Suite) {
    for k in 0..s.samples {
        let (spec, t) = s.arrangement(3, None);
        let base = odd_condition_angle(t.arrangement().expect("arrangement").alphas());
        for eps in [1e-3, -1e-3, 1e-5, -1e-5] {
            let Ok(st) = arrangement_start_at(&t, base + eps, 20.0) else {
                continue;
            };
            let th = good_thetas(&t, st, s.max_steps).unwrap_or_default();
            let cycles = th.len().saturating_sub(1) / 6;
            let worst = (0..cycles.min(50))
                .map(|c| (th[6 * c + 3] - th[6 * c] + 2.0 * eps).abs())
                .fold(0.0, f64::max);
            let c = s.classify(&t, st);
            let spiraling = matches!(c.kind, Kind::Spiraling { .. } | Kind::Escaped);
            s.case(
                Case::new(format!("arrangement {k} eps={eps:e}"), format!("theta_3-theta_0={:e}", -2.0 * eps))
                    .replay(&spec, st)
                    .observed(format!(
                        "{} cycles, {}",
                        cycles,
                        c.kind.label()
                    ))
                    .residual("block_delta", if cycles > 0 { worst } else { f64::MAX })
                    .pass(cycles >= 5 && worst < 1e-9 && spiraling),
            );
        }
    }
}
