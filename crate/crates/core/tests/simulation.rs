use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use tilebill_core::construct::arrangement_start_at;
use tilebill_core::geom::{angle_between, Point2};
use tilebill_core::sim::{shared_vertex, step_with_point, trace, Termination, TrajectoryState};
use tilebill_core::tiling::{EdgeGeom, LineSpec, Tiling, TilingSpec};

fn specs() -> Vec<TilingSpec> {
    vec![
        TilingSpec::Square,
        TilingSpec::RegularHexagon,
        TilingSpec::EquilateralTriangle,
        TilingSpec::Kaleidoscope,
        TilingSpec::Trihexagonal,
        TilingSpec::Triangle { alpha: 0.7, beta: 1.1 },
        TilingSpec::IsoscelesTriangle { alpha: 0.4 },
        TilingSpec::RightTriangle { alpha: 1.0 },
        TilingSpec::ConcurrentLines {
            angles: vec![0.9, 0.8, PI - 1.7],
        },
        TilingSpec::LineArrangement {
            lines: vec![
                LineSpec { angle: 0.0, point: [0.0, 0.0] },
                LineSpec { angle: 1.2, point: [0.5, 0.0] },
                LineSpec { angle: 2.3, point: [0.0, 0.7] },
                LineSpec { angle: 0.5, point: [-1.0, 0.4] },
                LineSpec { angle: 1.9, point: [0.2, -0.9] },
            ],
        },
    ]
}

/// A start on some edge of the tile containing `(x, y)`.
fn start_near(t: &Tiling, x: f64, y: f64, s: f64, dir: f64) -> Option<TrajectoryState> {
    let tile = t.locate(Point2::new(x, y)).ok()?;
    let sides = t.tile_boundary(&tile).ok()?;
    let (e, g) = sides[(s * 7.0) as usize % sides.len()];
    let pos = match g {
        EdgeGeom::Segment { .. } => s,
        EdgeGeom::Ray { .. } => 0.2 + 2.0 * s,
    };
    TrajectoryState::new(t, e, pos, dir).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn reversed_traces_retrace_the_same_points(
        k in 0usize..10, x in -3.0..3.0f64, y in -3.0..3.0f64, s in 0.05..0.95f64, dir in 0.0..TAU,
        steps in 1usize..40,
    ) {
        let t = Tiling::new(&specs()[k]).unwrap();
        let Some(st) = start_near(&t, x, y, s, dir) else { return Ok(()) };
        let fwd = trace(&t, st, steps);
        let last = fwd.records.last().unwrap();
        let back = trace(&t, last.state.retraced(&t).unwrap(), fwd.records.len() - 1);
        prop_assert_eq!(back.records.len(), fwd.records.len());
        for (a, b) in fwd.records.iter().rev().zip(&back.records) {
            // 1e-9 per coordinate, relative once far from the origin
            let tol = 1e-9 * a.point.x.abs().max(a.point.y.abs()).max(1.0);
            prop_assert!((a.point.x - b.point.x).abs() < tol && (a.point.y - b.point.y).abs() < tol,
                "{:?} vs {:?}", a.point, b.point);
            prop_assert_eq!(a.state.edge, b.state.edge);
        }
    }

    #[test]
    fn crossings_lie_on_their_edges_and_follow_the_ray(
        k in 0usize..10, x in -3.0..3.0f64, y in -3.0..3.0f64, s in 0.05..0.95f64, dir in 0.0..TAU,
    ) {
        let t = Tiling::new(&specs()[k]).unwrap();
        let Some(st) = start_near(&t, x, y, s, dir) else { return Ok(()) };
        let tr = trace(&t, st, 50);
        for w in tr.records.windows(2) {
            let g = t.edge_geom(&w[1].state.edge).unwrap();
            prop_assert!(g.point(w[1].state.t).dist(w[1].point) < 1e-9);
            let chord = w[1].point - w[0].point;
            let d = Point2::from_angle(w[0].state.dir);
            prop_assert!(chord.cross(d).abs() < 1e-9 * chord.norm().max(1.0));
            prop_assert!(chord.dot(d) > 0.0);
            // the single-step API agrees with the iterator
            let (next, p) = step_with_point(&t, &w[0].state).unwrap();
            prop_assert_eq!(next.edge, w[1].state.edge);
            prop_assert!(p.dist(w[1].point) < 1e-9);
        }
    }

    #[test]
    fn angles_add_around_a_vertex_in_triangle_tilings(
        alpha in 0.2..1.3f64, beta in 0.2..1.3f64, s in 0.05..0.95f64, dir in 0.0..TAU,
    ) {
        let t = Tiling::new(&TilingSpec::Triangle { alpha, beta }).unwrap();
        let Some(st) = start_near(&t, 0.3, 0.1, s, dir) else { return Ok(()) };
        let tr = trace(&t, st, 60);
        for w in tr.records.windows(2) {
            let Some(v) = shared_vertex(&t, &w[0].state.edge, &w[1].state.edge) else { continue };
            // tile angle at v, from the tiling's own edge geometry
            let far = |e| {
                let g = t.edge_geom(e).unwrap();
                if g.start().dist(v) < 1e-9 { g.point(1.0) } else { g.start() }
            };
            let gamma = angle_between(far(&w[0].state.edge) - v, far(&w[1].state.edge) - v);
            let d = Point2::from_angle(w[0].state.dir);
            let theta = angle_between(v - w[0].point, d);
            let next = angle_between(v - w[1].point, d);
            prop_assert!((next - (theta + gamma)).abs() < 1e-9, "θ={theta} γ={gamma} next={next}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    /// Good arrangement trajectories meet the lines in cyclic order.
    #[test]
    fn good_arrangement_trajectories_cross_lines_in_order(
        lines in prop::collection::vec((0.0..PI, -1.0..1.0f64, -1.0..1.0f64), 3..7),
        theta in 0.05..(PI - 0.05),
    ) {
        let spec = TilingSpec::LineArrangement {
            lines: lines.iter().map(|&(angle, x, y)| LineSpec { angle, point: [x, y] }).collect(),
        };
        let Ok(t) = Tiling::new(&spec) else { return Ok(()) };
        let n = t.arrangement().unwrap().len();
        let Ok(st) = arrangement_start_at(&t, theta, 50.0) else { return Ok(()) };
        let tr = trace(&t, st, 2 * n);
        // good: 2n crossings, none inside the central zone
        let zone = t.central_zone().unwrap();
        let good = tr.records.len() == 2 * n + 1
            && tr.records.iter().all(|r| !tilebill_core::tiling::arrangement::in_convex(&zone, r.point, 1e-9));
        if !good {
            return Ok(());
        }
        let idx: Vec<usize> = tr.records.iter().map(|r| r.state.edge.line_index().unwrap()).collect();
        let step = (idx[1] + n - idx[0]) % n;
        prop_assert!(step == 1 || step == n - 1, "{idx:?}");
        for w in idx.windows(2) {
            prop_assert_eq!((w[1] + n - w[0]) % n, step, "{:?}", idx);
        }
    }
}

#[test]
fn traces_stop_at_corners_and_escapes() {
    let t = Tiling::new(&TilingSpec::Square).unwrap();
    // aimed exactly at the far corner of the unit square
    let st = TrajectoryState::new(&t, tilebill_core::tiling::EdgeRef::cell([0, 0], 1), 0.5, (2.0f64).atan()).unwrap();
    assert_eq!(trace(&t, st, 10).termination, Termination::CornerHit);

    let t = Tiling::new(&TilingSpec::ConcurrentLines {
        angles: vec![1.0, PI - 1.0],
    })
    .unwrap();
    let st = arrangement_start_at(&t, 0.3, 10.0).unwrap();
    assert_eq!(trace(&t, st, 1000).termination, Termination::EscapedArrangement);
}
