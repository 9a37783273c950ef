use std::f64::consts::{FRAC_PI_2, PI, TAU};

use proptest::prelude::*;
use tilebill_core::classify::{classify, is_leg, Kind, EPS_MATCH};
use tilebill_core::construct::right_triangle_bisecting_escape;
use tilebill_core::geom::{circular_distance, Point2};
use tilebill_core::sim::{trace, TrajectoryState};
use tilebill_core::tiling::{EdgeRef, Tiling, TilingSpec};

fn lattice_specs() -> Vec<TilingSpec> {
    vec![
        TilingSpec::Square,
        TilingSpec::RegularHexagon,
        TilingSpec::EquilateralTriangle,
        TilingSpec::Kaleidoscope,
        TilingSpec::IsoscelesTriangle { alpha: PI / 5.0 },
        TilingSpec::IsoscelesTriangle { alpha: 0.4 },
        TilingSpec::RightTriangle { alpha: PI / 6.0 },
        TilingSpec::Trihexagonal,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// Periodic verdicts repeat again one period later; drift vectors are
    /// the actual displacements and lie in the translation lattice.
    #[test]
    fn witnesses_replay(k in 0usize..8, slot in 0usize..9, t0 in 0.05..0.95f64, dir in 0.0..TAU) {
        let spec = &lattice_specs()[k];
        let t = Tiling::new(spec).unwrap();
        let slot = slot % t.lattice().unwrap().edge_count();
        let Ok(st) = TrajectoryState::new(&t, EdgeRef::cell([0, 0], slot), t0, dir) else { return Ok(()) };
        let c = classify(&t, st, 2000, EPS_MATCH);
        match c.kind {
            Kind::Periodic { period } => {
                let tr = trace(&t, st, 3 * period);
                prop_assert_eq!(tr.records.len(), 3 * period + 1);
                for m in [period, 2 * period, 3 * period] {
                    let (a, b) = (&tr.records[0].state, &tr.records[m].state);
                    prop_assert_eq!(a.edge, b.edge);
                    prop_assert!((a.t - b.t).abs() < EPS_MATCH && circular_distance(a.dir, b.dir) < EPS_MATCH);
                }
            }
            Kind::DriftPeriodic { period, drift, cells } => {
                let tr = trace(&t, st, 2 * period);
                let d = Point2::new(drift[0], drift[1]);
                for i in 0..=period {
                    let moved = tr.records[i + period].point - tr.records[i].point;
                    prop_assert!((moved - d).norm() < 1e-9, "{moved:?} vs {d:?}");
                }
                let (a, b) = t.translation_lattice().unwrap();
                prop_assert!((a * cells[0] as f64 + b * cells[1] as f64 - d).norm() < 1e-9);
                prop_assert!(cells != [0, 0]);
            }
            _ => {}
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hypotenuse_midpoints_stay_midpoints(alpha in 0.05..(FRAC_PI_2 - 0.05)) {
        let r = right_triangle_bisecting_escape(alpha).unwrap();
        let t = Tiling::new(&r.spec).unwrap();
        let tr = trace(&t, r.start, 10_000);
        for rec in tr.records.iter().filter(|r| !is_leg(&t, &r.state.edge)) {
            prop_assert!((rec.state.t - 0.5).abs() < 1e-9, "step {}: t = {}", rec.step, rec.state.t);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Off the midpoint, the side of the midpoint at successive hypotenuse
    /// crossings flips exactly when two legs were crossed in a row between them.
    #[test]
    fn midpoint_side_flips_only_at_double_leg_crossings(
        alpha in 0.05..(FRAC_PI_2 - 0.05), t0 in 0.02..0.98f64, dir in 0.0..TAU,
    ) {
        let spec = TilingSpec::RightTriangle { alpha };
        let t = Tiling::new(&spec).unwrap();
        let hyp = t.slot_by_name("hypotenuse").unwrap();
        let Ok(st) = TrajectoryState::new(&t, EdgeRef::cell([0, 0], hyp), t0, dir) else { return Ok(()) };
        let tr = trace(&t, st, 2000);
        let mut last: Option<(bool, usize)> = None;
        let mut legs_in_a_row = 0;
        let mut double = false;
        for rec in &tr.records {
            if is_leg(&t, &rec.state.edge) {
                legs_in_a_row += 1;
                double |= legs_in_a_row >= 2;
                continue;
            }
            let below = rec.state.t < 0.5;
            if let Some((was, at)) = last {
                prop_assert_eq!(was != below, double, "between steps {} and {}", at, rec.step);
            }
            last = Some((below, rec.step));
            legs_in_a_row = 0;
            double = false;
        }
    }
}

#[test]
fn regular_tiling_examples() {
    let t = Tiling::new(&TilingSpec::Square).unwrap();
    let bottom = t.slot_by_name("bottom").unwrap();
    // just short of vertical: the direction alternates, so two crossings per period
    let st = TrajectoryState::new(&t, EdgeRef::cell([0, 0], bottom), 0.5, 1.5707963).unwrap();
    assert_eq!(classify(&t, st, 100, EPS_MATCH).kind.label(), "drift_periodic(2)");
    // exactly vertical repeats after every crossing
    let st = TrajectoryState::new(&t, EdgeRef::cell([0, 0], bottom), 0.5, FRAC_PI_2).unwrap();
    assert_eq!(classify(&t, st, 100, EPS_MATCH).kind.label(), "drift_periodic(1)");

    let t = Tiling::new(&TilingSpec::EquilateralTriangle).unwrap();
    let st = TrajectoryState::new(&t, EdgeRef::cell([0, 0], 0), 0.37, 1.0).unwrap();
    assert_eq!(classify(&t, st, 100, EPS_MATCH).kind, Kind::Periodic { period: 6 });
}
