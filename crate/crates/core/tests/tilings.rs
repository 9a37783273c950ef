use std::collections::{BTreeMap, VecDeque};
use std::f64::consts::PI;

use proptest::prelude::*;
use tilebill_core::geom::Point2;
use tilebill_core::tiling::{EdgeGeom, LineSpec, TileRef, Tiling, TilingSpec};

fn all_specs() -> Vec<TilingSpec> {
    vec![
        TilingSpec::Square,
        TilingSpec::RegularHexagon,
        TilingSpec::EquilateralTriangle,
        TilingSpec::Kaleidoscope,
        TilingSpec::Trihexagonal,
        TilingSpec::Triangle { alpha: 0.9, beta: 1.2 },
        TilingSpec::Triangle {
            alpha: 8f64.to_radians(),
            beta: 79f64.to_radians(),
        },
        TilingSpec::IsoscelesTriangle { alpha: PI / 7.0 },
        TilingSpec::RightTriangle { alpha: 0.3 },
        TilingSpec::ConcurrentLines {
            angles: vec![0.5, 1.1, PI - 1.6],
        },
        TilingSpec::LineArrangement {
            lines: vec![
                LineSpec { angle: 0.0, point: [0.0, 0.0] },
                LineSpec { angle: 1.0, point: [0.3, -0.2] },
                LineSpec { angle: 2.2, point: [-0.4, 0.5] },
                LineSpec { angle: 0.4, point: [1.0, 1.0] },
            ],
        },
    ]
}

/// Strictly inside: on the tile's own side of every boundary edge.
fn inside(t: &Tiling, tile: &TileRef, p: Point2) -> bool {
    t.tile_boundary(tile).unwrap().iter().all(|(e, g)| {
        let [left, _] = t.edge_tiles(e).unwrap();
        let s = g.tangent().cross(p - g.start());
        if left == *tile {
            s > 0.0
        } else {
            s < 0.0
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn located_tile_contains_the_point(k in 0usize..11, x in -6.0..6.0f64, y in -6.0..6.0f64) {
        let spec = &all_specs()[k];
        let t = Tiling::new(spec).unwrap();
        let p = Point2::new(x, y);
        if let Ok(tile) = t.locate(p) {
            prop_assert!(inside(&t, &tile, p), "{spec:?}: {p:?} not inside {tile:?}");
        }
    }

    #[test]
    fn both_sides_of_an_edge_agree(k in 0usize..11, x in -4.0..4.0f64, y in -4.0..4.0f64, s in 0.05..0.95f64) {
        let spec = &all_specs()[k];
        let t = Tiling::new(spec).unwrap();
        let Ok(tile) = t.locate(Point2::new(x, y)) else { return Ok(()) };
        let sides = t.tile_boundary(&tile).unwrap();
        let (e, g) = sides[(s * sides.len() as f64) as usize % sides.len()];
        let pos = match g {
            EdgeGeom::Segment { .. } => s,
            EdgeGeom::Ray { .. } => 0.5 + 3.0 * s,
        };
        let on = g.point(pos);
        let n = g.tangent().perp() * 1e-7;
        let (a, b) = (t.locate(on + n).unwrap(), t.locate(on - n).unwrap());
        prop_assert_ne!(a, b);
        prop_assert_eq!(t.edge_tiles(&e).unwrap(), [a, b]);
        for side in [a, b] {
            let shared = t.tile_boundary(&side).unwrap().iter().filter(|(f, _)| *f == e).count();
            prop_assert_eq!(shared, 1, "{:?} does not list {} once", side, e);
        }
        let (found, at) = t.edge_at(on).unwrap();
        prop_assert_eq!(found, e);
        prop_assert!((at - pos).abs() < 1e-9);
    }

    #[test]
    fn arrangement_gaps_sum_to_pi(
        lines in prop::collection::vec((0.0..PI, -3.0..3.0f64, -3.0..3.0f64), 2..9),
    ) {
        let spec = TilingSpec::LineArrangement {
            lines: lines.iter().map(|&(angle, x, y)| LineSpec { angle, point: [x, y] }).collect(),
        };
        let Ok(t) = Tiling::new(&spec) else { return Ok(()) };
        let sum: f64 = t.arrangement().unwrap().alphas().iter().sum();
        prop_assert!((sum - PI).abs() < 1e-12);
    }
}

/// Breadth-first 2-colouring over face adjacency; `None` on an odd cycle.
fn bfs_colouring(t: &Tiling, start: TileRef) -> Option<BTreeMap<u64, u8>> {
    let key = |f: &TileRef| match f {
        TileRef::Face { face } => *face,
        _ => unreachable!(),
    };
    let mut colour = BTreeMap::from([(key(&start), 0u8)]);
    let mut queue = VecDeque::from([start]);
    while let Some(f) = queue.pop_front() {
        let c = colour[&key(&f)];
        for (e, _) in t.tile_boundary(&f).unwrap() {
            for g in t.edge_tiles(&e).unwrap() {
                if g == f {
                    continue;
                }
                match colour.get(&key(&g)) {
                    Some(&d) if d == c => return None,
                    Some(_) => {}
                    None => {
                        colour.insert(key(&g), 1 - c);
                        queue.push_back(g);
                    }
                }
            }
        }
    }
    Some(colour)
}

#[test]
fn line_arrangements_are_two_colourable() {
    for n in 2..=9usize {
        let lines = (0..n)
            .map(|k| LineSpec {
                angle: k as f64 * PI / n as f64 + 0.01 * k as f64,
                point: [(k as f64 * 0.7).sin(), (k as f64 * 1.3).cos()],
            })
            .collect();
        let t = Tiling::new(&TilingSpec::LineArrangement { lines }).unwrap();
        let start = t.locate(Point2::new(0.123, 0.456)).unwrap();
        let colours = bfs_colouring(&t, start).expect("odd cycle");
        // n lines in general position have 1 + n + n(n−1)/2 faces
        assert_eq!(colours.len(), 1 + n + n * (n - 1) / 2, "n={n}");
        let base = t.tile_color(&start).unwrap();
        for (face, c) in colours {
            assert_eq!(t.tile_color(&TileRef::Face { face }), Some(base ^ c));
        }
    }
}

#[test]
fn lattice_colouring_alternates_across_edges() {
    for spec in all_specs() {
        let t = Tiling::new(&spec).unwrap();
        let Some(l) = t.lattice() else { continue };
        // three hexagons meet at every vertex
        assert_eq!(t.is_two_colorable(), spec != TilingSpec::RegularHexagon, "{spec:?}");
        if !t.is_two_colorable() {
            continue;
        }
        for cell in [[0, 0], [1, -2], [-3, 5]] {
            for slot in 0..l.edge_count() {
                let [a, b] = l.edge_tiles(cell, slot);
                assert_ne!(t.tile_color(&a), t.tile_color(&b), "{spec:?} edge {slot}");
            }
        }
    }
}
