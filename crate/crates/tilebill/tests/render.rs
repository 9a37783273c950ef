use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::path::PathBuf;

use proptest::prelude::*;
use tilebill::render::{fmt6, polylines, render_svg, RenderError, Style, Viewport};
use tilebill_core::construct::{construct, right_triangle_drift, trihex_period24, Params};
use tilebill_core::geom::Point2;
use tilebill_core::sim::{trace, Trajectory, TrajectoryState};
use tilebill_core::tiling::{EdgeRef, LineSpec, Tiling, TilingSpec};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Compare with the stored file; `UPDATE_GOLDEN=1` rewrites it.
fn check_golden(name: &str, svg: &str) {
    let path = golden_dir().join(format!("{name}.svg"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).unwrap();
        std::fs::write(&path, svg).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; run with UPDATE_GOLDEN=1", path.display()));
    assert!(want == svg, "{name}.svg differs from the golden file");
}

fn golden_cases() -> Vec<(&'static str, Tiling, Vec<Trajectory>, Option<Viewport>)> {
    let mut out = Vec::new();

    let t = Tiling::new(&TilingSpec::EquilateralTriangle).unwrap();
    let st = TrajectoryState::new(&t, EdgeRef::cell([0, 0], 0), 0.37, 1.0).unwrap();
    let tr = trace(&t, st, 6);
    out.push(("equilateral_period6", t, vec![tr], None));

    let r = trihex_period24().unwrap();
    let t = Tiling::new(&r.spec).unwrap();
    let tr = trace(&t, r.start, 24);
    out.push(("trihex_period24", t, vec![tr], None));

    let r = right_triangle_drift(3).unwrap();
    let t = Tiling::new(&r.spec).unwrap();
    let tr = trace(&t, r.start, 40);
    out.push(("right_drift_n3", t, vec![tr], None));

    let t = Tiling::new(&TilingSpec::RegularHexagon).unwrap();
    let st = TrajectoryState::new(&t, EdgeRef::cell([0, 0], 0), 0.3, 0.4).unwrap();
    let tr = trace(&t, st, 30);
    out.push(("hexagon_unshaded", t, vec![tr], None));

    let t = Tiling::new(&TilingSpec::Square).unwrap();
    let a = trace(&t, TrajectoryState::new(&t, EdgeRef::cell([0, 0], 1), 0.3, 1.1).unwrap(), 8);
    let b = trace(&t, TrajectoryState::new(&t, EdgeRef::cell([0, 0], 0), 0.6, 0.2).unwrap(), 8);
    out.push(("square_two_trajectories", t, vec![a, b], Some(Viewport::new(-1.5, -1.5, 2.5, 2.5))));

    let mut p = Params::new();
    p.insert("alpha".into(), tilebill_core::construct::ParamValue::Num(88f64.to_radians()));
    p.insert("theta".into(), tilebill_core::construct::ParamValue::Num(1.55));
    let r = construct("two_lines", &p).unwrap();
    let t = Tiling::new(&r.spec).unwrap();
    let tr = trace(&t, r.start, 200);
    out.push(("two_lines_88deg", t, vec![tr], None));

    let spec = TilingSpec::LineArrangement {
        lines: vec![
            LineSpec { angle: 0.1, point: [0.0, 0.0] },
            LineSpec { angle: 1.2, point: [0.4, 0.1] },
            LineSpec { angle: 2.3, point: [-0.3, 0.5] },
            LineSpec { angle: 0.7, point: [0.2, -0.6] },
        ],
    };
    let t = Tiling::new(&spec).unwrap();
    out.push(("four_lines_tiling_only", t, vec![], Some(Viewport::new(-3.0, -2.0, 3.0, 2.0))));
    out
}

#[test]
fn golden_files_are_stable() {
    for (name, t, trs, vp) in golden_cases() {
        let svg = render_svg(&t, &trs, vp, &Style::default()).unwrap();
        let again = render_svg(&t, &trs, vp, &Style::default()).unwrap();
        assert_eq!(svg, again, "{name} is not deterministic");
        check_golden(name, &svg);
    }
}

#[test]
fn periodic_orbits_draw_closed_polylines() {
    for (name, _, trs, _) in golden_cases().into_iter().filter(|c| c.0.contains("period")) {
        let t = &trs[0];
        let svg = render_svg(&Tiling::new(&TilingSpec::Square).unwrap(), &trs, None, &Style::default()).unwrap();
        let line = &polylines(&svg)[0];
        assert_eq!(line.len(), t.records.len(), "{name}");
        assert_eq!(line.first(), line.last(), "{name} is not closed");
    }
}

#[test]
fn drift_draws_a_staircase_over_several_cells() {
    let r = right_triangle_drift(3).unwrap();
    let t = Tiling::new(&r.spec).unwrap();
    let tr = trace(&t, r.start, 40);
    let svg = render_svg(&t, std::slice::from_ref(&tr), None, &Style::default()).unwrap();
    let l = t.lattice().unwrap();
    let cells: BTreeSet<(i64, i64)> = polylines(&svg)[0]
        .iter()
        .map(|&(x, y)| {
            let (u, w) = l.frac(Point2::new(x, y));
            (u.floor() as i64, w.floor() as i64)
        })
        .collect();
    assert!(cells.len() >= 3, "{cells:?}");
}

#[test]
fn shading_follows_two_colourability() {
    let style = Style::default();
    for (spec, shaded) in [
        (TilingSpec::Square, true),
        (TilingSpec::Trihexagonal, true),
        (TilingSpec::RightTriangle { alpha: 0.4 }, true),
        (TilingSpec::RegularHexagon, false),
    ] {
        let t = Tiling::new(&spec).unwrap();
        let svg = render_svg(&t, &[], Some(Viewport::new(-2.0, -2.0, 2.0, 2.0)), &style).unwrap();
        assert_eq!(svg.contains("<polygon"), shaded, "{spec:?}");
        assert_eq!(svg.contains(&style.fills[0]), shaded);
        assert!(svg.contains("<line "));
    }
}

#[test]
fn arrangement_faces_take_their_tile_colour() {
    let spec = TilingSpec::LineArrangement {
        lines: vec![
            LineSpec { angle: 0.1, point: [0.0, 0.0] },
            LineSpec { angle: 1.2, point: [0.4, 0.1] },
            LineSpec { angle: 2.3, point: [-0.3, 0.5] },
        ],
    };
    let t = Tiling::new(&spec).unwrap();
    let svg = render_svg(&t, &[], Some(Viewport::new(-3.0, -3.0, 3.0, 3.0)), &Style::default()).unwrap();
    let mut colour = None;
    let mut faces = 0;
    for line in svg.lines() {
        if let Some(rest) = line.strip_prefix("<g class=\"tiles-") {
            colour = rest[..1].parse::<u8>().ok();
        }
        if let Some(rest) = line.strip_prefix("<polygon points=\"") {
            let pts: Vec<Point2> = rest
                .trim_end_matches("\"/>")
                .split(' ')
                .map(|xy| {
                    let (x, y) = xy.split_once(',').unwrap();
                    Point2::new(x.parse().unwrap(), y.parse().unwrap())
                })
                .collect();
            let n = pts.len() as f64;
            let c = pts.iter().fold(Point2::new(0.0, 0.0), |a, &p| a + p) * (1.0 / n);
            let tile = t.locate(c).unwrap();
            assert_eq!(t.tile_color(&tile), colour);
            faces += 1;
        }
    }
    // three lines in general position cut the plane into 7 faces, all visible here
    assert_eq!(faces, 7);
}

#[test]
fn empty_viewports_are_rejected() {
    let t = Tiling::new(&TilingSpec::Square).unwrap();
    let style = Style::default();
    for vp in [
        Viewport::new(0.0, 0.0, 0.0, 1.0),
        Viewport::new(0.0, 1.0, 1.0, 0.0),
        Viewport::new(f64::NAN, 0.0, 1.0, 1.0),
    ] {
        assert!(matches!(render_svg(&t, &[], Some(vp), &style), Err(RenderError::EmptyViewport(_))));
    }
}

#[test]
fn style_defaults_fill_missing_fields() {
    let s: Style = serde_json::from_str(r##"{"edge_color":"#000000"}"##).unwrap();
    assert_eq!(s.edge_color, "#000000");
    assert_eq!(s.width_px, Style::default().width_px);
}

#[test]
fn auto_fit_pads_by_two_edge_lengths() {
    let t = Tiling::new(&TilingSpec::Square).unwrap();
    let tr = trace(&t, TrajectoryState::new(&t, EdgeRef::cell([0, 0], 1), 0.3, 1.1).unwrap(), 4);
    let svg = render_svg(&t, std::slice::from_ref(&tr), None, &Style::default()).unwrap();
    let (xs, ys): (Vec<f64>, Vec<f64>) = tr.points().map(|p| (p.x, p.y)).unzip();
    let min_x = xs.iter().cloned().fold(f64::INFINITY, f64::min) - 2.0;
    let max_y = ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 2.0;
    assert!(svg.contains(&format!("viewBox=\"{} {} ", fmt6(min_x), fmt6(-max_y))), "{}", &svg[..300]);
}

fn specs() -> Vec<TilingSpec> {
    vec![
        TilingSpec::Square,
        TilingSpec::EquilateralTriangle,
        TilingSpec::Kaleidoscope,
        TilingSpec::Trihexagonal,
        TilingSpec::Triangle { alpha: 0.7, beta: 1.0 },
        TilingSpec::IsoscelesTriangle { alpha: 0.5 },
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polyline_vertices_are_the_crossing_points(k in 0usize..6, slot in 0usize..9, s in 0.05..0.95f64, dir in 0.0..TAU, steps in 1usize..60) {
        let t = Tiling::new(&specs()[k]).unwrap();
        let slot = slot % t.lattice().unwrap().edge_count();
        let Ok(st) = TrajectoryState::new(&t, EdgeRef::cell([0, 0], slot), s, dir) else { return Ok(()) };
        let tr = trace(&t, st, steps);
        let svg = render_svg(&t, std::slice::from_ref(&tr), None, &Style::default()).unwrap();
        let line = &polylines(&svg)[0];
        prop_assert_eq!(line.len(), tr.records.len());
        for (r, &(x, y)) in tr.records.iter().zip(line) {
            prop_assert_eq!(fmt6(x), fmt6(r.point.x));
            prop_assert_eq!(fmt6(y), fmt6(r.point.y));
            prop_assert!((x - r.point.x).abs() <= 5e-7 + 1e-12 && (y - r.point.y).abs() <= 5e-7 + 1e-12);
        }
    }

    #[test]
    fn viewport_scaling_keeps_edges_inside(w in 0.5..20.0f64, h in 0.5..20.0f64, x0 in -5.0..5.0f64, y0 in -5.0..5.0f64, a in 0.1..(PI - 0.1)) {
        let t = Tiling::new(&TilingSpec::Triangle { alpha: a / 3.0, beta: a / 3.0 + 0.2 }).unwrap();
        let vp = Viewport::new(x0, y0, x0 + w, y0 + h);
        let svg = render_svg(&t, &[], Some(vp), &Style::default()).unwrap();
        for line in svg.lines().filter(|l| l.starts_with("<line ")) {
            let nums: Vec<f64> = line
                .split('"')
                .filter_map(|s| s.parse::<f64>().ok())
                .collect();
            prop_assert_eq!(nums.len(), 4);
            for (i, v) in nums.iter().enumerate() {
                let (lo, hi) = if i % 2 == 0 { (vp.min_x, vp.max_x) } else { (vp.min_y, vp.max_y) };
                prop_assert!(*v >= lo - 1e-6 && *v <= hi + 1e-6);
            }
        }
    }
}
