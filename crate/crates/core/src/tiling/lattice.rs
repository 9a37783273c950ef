//! Periodic tilings described by prototiles in one lattice cell.
//!
//! Every periodic tiling here is a finite set of convex prototiles inside a
//! fundamental cell spanned by two generators. Edges are derived from the
//! prototile sides and reduced modulo the lattice, so an edge is named by
//! the cell it belongs to plus a slot index.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use libm::floor;

use crate::dd::{Dd, DdPoint};
use crate::geom::Point2;

use super::{EdgeRef, TileRef, TilingError, EPS_CORNER};

/// Which prototile and cell offset sits on one side of an edge slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Incidence {
    pub tile: usize,
    pub offset: [i64; 2],
}

#[derive(Clone, Debug)]
pub struct LatticeTiling {
    pub a: Point2,
    pub b: Point2,
    inv: [f64; 4],
    tiles: Vec<Vec<Point2>>,
    tile_names: Vec<String>,
    /// per tile, per polygon side k (v_k → v_{k+1}): edge slot and cell offset
    tile_sides: Vec<Vec<(usize, [i64; 2])>>,
    edges: Vec<[Point2; 2]>,
    /// direction angle of each canonical edge, to double-double precision
    edge_phis: Vec<Dd>,
    edge_names: Vec<String>,
    /// `[left, right]` of the canonical orientation
    edge_tiles: Vec<[Incidence; 2]>,
    colors: Option<Vec<u8>>,
}

impl LatticeTiling {
    /// Build from prototiles given CCW in cell (0,0).
    ///
    /// `edge_names` may name the edge slots in order of first appearance
    /// while walking the tiles; missing names default to `e<k>`.
    pub fn new(
        a: Point2,
        b: Point2,
        tiles: Vec<Vec<Point2>>,
        tile_names: &[&str],
        edge_names: &[&str],
        colors: Option<Vec<u8>>,
    ) -> LatticeTiling {
        let det = a.x * b.y - a.y * b.x;
        let inv = [b.y / det, -b.x / det, -a.y / det, a.x / det];
        let mut lt = LatticeTiling {
            a,
            b,
            inv,
            tiles: Vec::new(),
            tile_names: tile_names.iter().map(|s| String::from(*s)).collect(),
            tile_sides: Vec::new(),
            edges: Vec::new(),
            edge_phis: Vec::new(),
            edge_names: Vec::new(),
            edge_tiles: Vec::new(),
            colors,
        };
        let mut sides_tmp: Vec<Vec<(usize, [i64; 2])>> = Vec::new();
        let mut incid: Vec<[Option<Incidence>; 2]> = Vec::new();
        for (ti, poly) in tiles.iter().enumerate() {
            let mut sides = Vec::with_capacity(poly.len());
            for k in 0..poly.len() {
                let p = poly[k];
                let q = poly[(k + 1) % poly.len()];
                let (lo, hi, forward) = if p.lex_less(q) { (p, q, true) } else { (q, p, false) };
                let found = lt.edges.iter().enumerate().find_map(|(s, e)| {
                    let off = lt.round_lattice(lo - e[0])?;
                    let shift = lt.cell_origin(off);
                    ((e[1] + shift).dist(hi) < 1e-9).then_some((s, off))
                });
                let (slot, off) = match found {
                    Some(x) => x,
                    None => {
                        lt.edges.push([lo, hi]);
                        incid.push([None, None]);
                        (lt.edges.len() - 1, [0, 0])
                    }
                };
                // tile interior is on the left of p → q
                let side = if forward { 0 } else { 1 };
                let inc = Incidence {
                    tile: ti,
                    offset: [-off[0], -off[1]],
                };
                assert!(incid[slot][side].is_none(), "edge side claimed twice");
                incid[slot][side] = Some(inc);
                sides.push((slot, off));
            }
            sides_tmp.push(sides);
        }
        lt.tiles = tiles;
        lt.tile_sides = sides_tmp;
        lt.edge_tiles = incid
            .into_iter()
            .map(|[l, r]| [l.expect("unmatched edge"), r.expect("unmatched edge")])
            .collect();
        lt.edge_phis = lt
            .edges
            .iter()
            .map(|[p, q]| crate::dd::atan2(q.y - p.y, q.x - p.x))
            .collect();
        lt.edge_names = (0..lt.edges.len())
            .map(|k| match edge_names.get(k) {
                Some(n) => String::from(*n),
                None => format!("e{k}"),
            })
            .collect();
        lt
    }

    fn round_lattice(&self, v: Point2) -> Option<[i64; 2]> {
        let (u, w) = self.frac(v);
        let (ru, rw) = (libm::round(u), libm::round(w));
        ((u - ru).abs() < 1e-7 && (w - rw).abs() < 1e-7).then_some([ru as i64, rw as i64])
    }

    #[inline]
    pub fn frac(&self, p: Point2) -> (f64, f64) {
        (
            self.inv[0] * p.x + self.inv[1] * p.y,
            self.inv[2] * p.x + self.inv[3] * p.y,
        )
    }

    #[inline]
    pub fn cell_origin(&self, c: [i64; 2]) -> Point2 {
        self.a * c[0] as f64 + self.b * c[1] as f64
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn edge_names(&self) -> &[String] {
        &self.edge_names
    }

    pub fn tile_names(&self) -> &[String] {
        &self.tile_names
    }

    pub fn slot_by_name(&self, name: &str) -> Option<usize> {
        self.edge_names.iter().position(|n| n == name)
    }

    pub fn edge_segment(&self, cell: [i64; 2], slot: usize) -> (Point2, Point2) {
        let o = self.cell_origin(cell);
        (self.edges[slot][0] + o, self.edges[slot][1] + o)
    }

    pub fn tile_polygon(&self, cell: [i64; 2], slot: usize) -> Vec<Point2> {
        let o = self.cell_origin(cell);
        self.tiles[slot].iter().map(|&v| v + o).collect()
    }

    /// Edge refs of a tile's sides, aligned with [`Self::tile_polygon`].
    pub fn tile_sides(&self, cell: [i64; 2], slot: usize) -> Vec<EdgeRef> {
        self.tile_sides[slot]
            .iter()
            .map(|&(s, off)| EdgeRef::cell([cell[0] + off[0], cell[1] + off[1]], s))
            .collect()
    }

    pub(crate) fn side_refs(&self, slot: usize) -> &[(usize, [i64; 2])] {
        &self.tile_sides[slot]
    }

    /// Cell origin to double-double precision.
    pub(crate) fn cell_origin_dd(&self, c: [i64; 2]) -> DdPoint {
        let (i, j) = (c[0] as f64, c[1] as f64);
        DdPoint {
            x: Dd::new(self.a.x).mul_f(i).add(Dd::new(self.b.x).mul_f(j)),
            y: Dd::new(self.a.y).mul_f(i).add(Dd::new(self.b.y).mul_f(j)),
        }
    }

    pub(crate) fn edge_segment_dd(&self, cell: [i64; 2], slot: usize) -> (DdPoint, DdPoint) {
        let o = self.cell_origin_dd(cell);
        let [p, q] = self.edges[slot];
        (o.add(DdPoint::from_f64(p.x, p.y)), o.add(DdPoint::from_f64(q.x, q.y)))
    }

    pub(crate) fn edge_phi(&self, slot: usize) -> Dd {
        self.edge_phis[slot]
    }

    pub(crate) fn prototile(&self, slot: usize) -> &[Point2] {
        &self.tiles[slot]
    }

    /// `[left, right]` tiles of a canonical edge.
    pub fn edge_tiles(&self, cell: [i64; 2], slot: usize) -> [TileRef; 2] {
        let f = |i: &Incidence| TileRef::cell([cell[0] + i.offset[0], cell[1] + i.offset[1]], i.tile);
        let [l, r] = &self.edge_tiles[slot];
        [f(l), f(r)]
    }

    pub fn tile_color(&self, slot: usize) -> Option<u8> {
        self.colors.as_ref().map(|c| c[slot])
    }

    pub fn is_two_colorable(&self) -> bool {
        self.colors.is_some()
    }

    pub fn locate(&self, p: Point2) -> Result<TileRef, TilingError> {
        let (u, w) = self.frac(p);
        let base = [floor(u) as i64, floor(w) as i64];
        let mut boundary = false;
        for di in -2..=2 {
            for dj in -2..=2 {
                let cell = [base[0] + di, base[1] + dj];
                let o = self.cell_origin(cell);
                let q = p - o;
                for (slot, poly) in self.tiles.iter().enumerate() {
                    let m = min_side_distance(poly, q);
                    if m > EPS_CORNER {
                        return Ok(TileRef::cell(cell, slot));
                    }
                    if m >= -EPS_CORNER {
                        boundary = true;
                    }
                }
            }
        }
        if boundary {
            Err(TilingError::OnBoundary)
        } else {
            Err(TilingError::NotFound)
        }
    }

    /// The edge passing within `EPS_CORNER` of `p`, with the fraction of `p`.
    pub fn edge_at(&self, p: Point2) -> Option<(EdgeRef, f64)> {
        let (u, w) = self.frac(p);
        let base = [floor(u) as i64, floor(w) as i64];
        let mut best: Option<(f64, EdgeRef, f64)> = None;
        for di in -2..=2 {
            for dj in -2..=2 {
                let cell = [base[0] + di, base[1] + dj];
                for slot in 0..self.edges.len() {
                    let (s, e) = self.edge_segment(cell, slot);
                    let d = e - s;
                    let t = (p - s).dot(d) / d.dot(d);
                    if !(-1e-12..=1.0 + 1e-12).contains(&t) {
                        continue;
                    }
                    let dist = (s + d * t).dist(p);
                    if dist < EPS_CORNER && best.as_ref().map_or(true, |b| dist < b.0) {
                        best = Some((dist, EdgeRef::cell(cell, slot), t));
                    }
                }
            }
        }
        best.map(|(_, e, t)| (e, t))
    }

    /// All tiles whose cell intersects the box, roughly; callers clip.
    pub fn cells_covering(&self, lo: Point2, hi: Point2) -> Vec<[i64; 2]> {
        let corners = [lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
        let (mut umin, mut umax, mut wmin, mut wmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for c in corners {
            let (u, w) = self.frac(c);
            umin = umin.min(u);
            umax = umax.max(u);
            wmin = wmin.min(w);
            wmax = wmax.max(w);
        }
        let mut out = vec![];
        for j in (floor(wmin) as i64 - 2)..=(floor(wmax) as i64 + 2) {
            for i in (floor(umin) as i64 - 2)..=(floor(umax) as i64 + 2) {
                out.push([i, j]);
            }
        }
        out
    }

    /// Length of the shortest edge; used as a scale for padding and tolerances.
    pub fn min_edge_length(&self) -> f64 {
        self.edges
            .iter()
            .map(|e| e[0].dist(e[1]))
            .fold(f64::MAX, f64::min)
    }
}

/// Minimum signed distance from `q` to the sides of a CCW convex polygon;
/// positive inside.
pub(crate) fn min_side_distance(poly: &[Point2], q: Point2) -> f64 {
    let mut m = f64::MAX;
    for k in 0..poly.len() {
        let p0 = poly[k];
        let p1 = poly[(k + 1) % poly.len()];
        let d = p1 - p0;
        let s = d.cross(q - p0) / d.norm();
        m = m.min(s);
    }
    m
}

const SQ3: f64 = 1.732_050_807_568_877_2;

fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

pub fn square() -> LatticeTiling {
    // start at the top-left corner so the first two sides walked are the
    // cell's own left and bottom edges
    let tiles = vec![vec![p(0.0, 1.0), p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0)]];
    LatticeTiling::new(
        p(1.0, 0.0),
        p(0.0, 1.0),
        tiles,
        &["square"],
        &["left", "bottom"],
        Some(vec![0]),
    )
}

impl LatticeTiling {
    /// Colour of a tile in a two-colourable tiling.
    pub fn cell_color(&self, cell: [i64; 2], slot: usize) -> Option<u8> {
        let base = self.tile_color(slot)?;
        if self.tiles.len() == 1 {
            // single prototile: checkerboard by cell parity
            Some(((cell[0] + cell[1]).rem_euclid(2) as u8) ^ base)
        } else {
            Some(base)
        }
    }
}

/// Triangle tiling with angles α at A=(0,0), β at B=(1,0); C above the base.
pub fn triangle(alpha: f64, beta: f64) -> LatticeTiling {
    let ac = libm::sin(beta) / libm::sin(alpha + beta);
    let c = Point2::from_angle(alpha) * ac;
    let a = p(1.0, 0.0);
    let tiles = vec![vec![p(0.0, 0.0), a, c], vec![a, c + a, c]];
    LatticeTiling::new(
        a,
        c,
        tiles,
        &["lower", "upper"],
        &["base", "diag", "side"],
        Some(vec![0, 1]),
    )
}

/// Right triangle tiling with unit hypotenuse and small angle α opposite
/// the horizontal leg; hypotenuses are the negative diagonals.
pub fn right_triangle(alpha: f64) -> LatticeTiling {
    let (w, h) = (libm::sin(alpha), libm::cos(alpha));
    let tiles = vec![
        vec![p(0.0, 0.0), p(w, 0.0), p(0.0, h)],
        vec![p(w, 0.0), p(w, h), p(0.0, h)],
    ];
    LatticeTiling::new(
        p(w, 0.0),
        p(0.0, h),
        tiles,
        &["lower", "upper"],
        &["horizontal", "hypotenuse", "vertical"],
        Some(vec![0, 1]),
    )
}

/// Pointy-top regular hexagons with unit edge.
pub fn hexagon() -> LatticeTiling {
    let tiles = vec![(0..6)
        .map(|k| Point2::from_angle(core::f64::consts::PI / 6.0 + k as f64 * core::f64::consts::PI / 3.0))
        .collect()];
    LatticeTiling::new(
        p(SQ3, 0.0),
        p(SQ3 / 2.0, 1.5),
        tiles,
        &["hexagon"],
        &[],
        None,
    )
}

/// Unit-edge trihexagonal tiling: one hexagon and two triangles per cell.
pub fn trihexagonal() -> LatticeTiling {
    let h = SQ3 / 2.0;
    let hex = vec![
        p(1.0, 0.0),
        p(0.5, h),
        p(-0.5, h),
        p(-1.0, 0.0),
        p(-0.5, -h),
        p(0.5, -h),
    ];
    let down = vec![p(1.0, 0.0), p(1.5, h), p(0.5, h)];
    let up = vec![p(-0.5, h), p(0.5, h), p(0.0, SQ3)];
    LatticeTiling::new(
        p(2.0, 0.0),
        p(1.0, SQ3),
        vec![hex, down, up],
        &["hexagon", "down", "up"],
        &[],
        Some(vec![0, 1, 1]),
    )
}

/// Barycentric subdivision of the unit equilateral tiling: twelve
/// 30-60-90 triangles per cell, meeting 4, 6 or 12 at a vertex.
pub fn kaleidoscope() -> LatticeTiling {
    let h = SQ3 / 2.0;
    let up = [p(0.0, 0.0), p(1.0, 0.0), p(0.5, h)];
    let down = [p(1.0, 0.0), p(1.5, h), p(0.5, h)];
    let mut tiles = Vec::new();
    let mut colors = Vec::new();
    let mut names = Vec::new();
    for (name, tri) in [("up", up), ("down", down)] {
        let g = (tri[0] + tri[1] + tri[2]) * (1.0 / 3.0);
        for k in 0..3 {
            let v = tri[k];
            let w = tri[(k + 1) % 3];
            let m = (v + w) * 0.5;
            tiles.push(vec![v, m, g]);
            tiles.push(vec![m, w, g]);
            colors.push(0);
            colors.push(1);
            names.push(format!("{name}{}a", k));
            names.push(format!("{name}{}b", k));
        }
    }
    let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    LatticeTiling::new(p(1.0, 0.0), p(0.5, h), tiles, &names, &[], Some(colors))
}

/// Equilateral tiling scaled to unit edge.
pub fn equilateral() -> LatticeTiling {
    triangle(core::f64::consts::FRAC_PI_3, core::f64::consts::FRAC_PI_3)
}
