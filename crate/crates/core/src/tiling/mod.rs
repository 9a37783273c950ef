//! Tilings: declarative specs, compiled geometry, point location and
//! edge/face bookkeeping.

pub mod arrangement;
pub mod lattice;

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::geom::{Line, Point2};

pub use arrangement::Arrangement;
pub use lattice::LatticeTiling;

/// Distance below which a point counts as lying on an edge or vertex.
pub const EPS_CORNER: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub angle: f64,
    pub point: [f64; 2],
}

impl LineSpec {
    pub fn to_line(&self) -> Line {
        Line::through(Point2::new(self.point[0], self.point[1]), self.angle)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum TilingSpec {
    LineArrangement { lines: Vec<LineSpec> },
    /// Lines through the origin separated by the CCW gaps `α_0..α_{n−1}`.
    ConcurrentLines { angles: Vec<f64> },
    Triangle { alpha: f64, beta: f64 },
    /// Vertex angle α; the base edges are horizontal.
    IsoscelesTriangle { alpha: f64 },
    RightTriangle { alpha: f64 },
    Square,
    RegularHexagon,
    EquilateralTriangle,
    #[serde(rename = "kaleidoscope_30_60_90")]
    Kaleidoscope,
    Trihexagonal,
}

impl TilingSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TilingSpec::LineArrangement { .. } => "line_arrangement",
            TilingSpec::ConcurrentLines { .. } => "concurrent_lines",
            TilingSpec::Triangle { .. } => "triangle",
            TilingSpec::IsoscelesTriangle { .. } => "isosceles_triangle",
            TilingSpec::RightTriangle { .. } => "right_triangle",
            TilingSpec::Square => "square",
            TilingSpec::RegularHexagon => "regular_hexagon",
            TilingSpec::EquilateralTriangle => "equilateral_triangle",
            TilingSpec::Kaleidoscope => "kaleidoscope_30_60_90",
            TilingSpec::Trihexagonal => "trihexagonal",
        }
    }

    /// Angles of the tiling triangle at A and B for triangle variants.
    pub fn triangle_angles(&self) -> Option<(f64, f64)> {
        match *self {
            TilingSpec::Triangle { alpha, beta } => Some((alpha, beta)),
            TilingSpec::IsoscelesTriangle { alpha } => Some(((PI - alpha) / 2.0, (PI - alpha) / 2.0)),
            TilingSpec::EquilateralTriangle => Some((PI / 3.0, PI / 3.0)),
            _ => None,
        }
    }

    pub fn is_line_arrangement(&self) -> bool {
        matches!(self, TilingSpec::LineArrangement { .. } | TilingSpec::ConcurrentLines { .. })
    }

    pub fn lines(angles_and_points: &[(f64, Point2)]) -> TilingSpec {
        TilingSpec::LineArrangement {
            lines: angles_and_points
                .iter()
                .map(|&(angle, p)| LineSpec {
                    angle,
                    point: [p.x, p.y],
                })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EdgeRef {
    Cell { cell: [i64; 2], slot: u32 },
    Line { line: u32, interval: u32 },
}

impl EdgeRef {
    pub fn cell(cell: [i64; 2], slot: usize) -> EdgeRef {
        EdgeRef::Cell {
            cell,
            slot: slot as u32,
        }
    }

    /// Same edge translated into cell (0,0), with the removed offset.
    pub fn reduced(&self) -> (EdgeRef, [i64; 2]) {
        match *self {
            EdgeRef::Cell { cell, slot } => (EdgeRef::Cell { cell: [0, 0], slot }, cell),
            e @ EdgeRef::Line { .. } => (e, [0, 0]),
        }
    }

    pub fn line_index(&self) -> Option<usize> {
        match *self {
            EdgeRef::Line { line, .. } => Some(line as usize),
            EdgeRef::Cell { .. } => None,
        }
    }

    pub fn slot(&self) -> Option<usize> {
        match *self {
            EdgeRef::Cell { slot, .. } => Some(slot as usize),
            EdgeRef::Line { .. } => None,
        }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeRef::Cell { cell, slot } => write!(f, "({},{})#{}", cell[0], cell[1], slot),
            EdgeRef::Line { line, interval } => write!(f, "l{}[{}]", line, interval),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TileRef {
    Cell { cell: [i64; 2], slot: u32 },
    Face { face: u64 },
}

impl TileRef {
    pub fn cell(cell: [i64; 2], slot: usize) -> TileRef {
        TileRef::Cell {
            cell,
            slot: slot as u32,
        }
    }
}

/// Geometry of an edge in its canonical orientation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum EdgeGeom {
    Segment { a: Point2, b: Point2 },
    /// Unbounded side of an arrangement face; `t` is distance from `origin`.
    Ray { origin: Point2, dir: Point2 },
}

impl EdgeGeom {
    pub fn point(&self, t: f64) -> Point2 {
        match *self {
            EdgeGeom::Segment { a, b } => a.lerp(b, t),
            EdgeGeom::Ray { origin, dir } => origin + dir * t,
        }
    }

    /// Unit vector of the canonical orientation.
    pub fn tangent(&self) -> Point2 {
        match *self {
            EdgeGeom::Segment { a, b } => (b - a).normalized(),
            EdgeGeom::Ray { dir, .. } => dir,
        }
    }

    pub fn start(&self) -> Point2 {
        match *self {
            EdgeGeom::Segment { a, .. } => a,
            EdgeGeom::Ray { origin, .. } => origin,
        }
    }

    /// Length, infinite for rays.
    pub fn length(&self) -> f64 {
        match *self {
            EdgeGeom::Segment { a, b } => a.dist(b),
            EdgeGeom::Ray { .. } => f64::INFINITY,
        }
    }

    /// Position parameter of the projection of `p`.
    pub fn param(&self, p: Point2) -> f64 {
        match *self {
            EdgeGeom::Segment { a, b } => {
                let d = b - a;
                (p - a).dot(d) / d.dot(d)
            }
            EdgeGeom::Ray { origin, dir } => (p - origin).dot(dir),
        }
    }

    /// Distance along the edge from `t` to the nearest vertex.
    pub fn vertex_clearance(&self, t: f64) -> f64 {
        match *self {
            EdgeGeom::Segment { a, b } => {
                let l = a.dist(b);
                (t * l).min((1.0 - t) * l)
            }
            EdgeGeom::Ray { .. } => t,
        }
    }

    pub fn line(&self) -> Line {
        Line::through(self.start(), self.tangent().angle())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum TilingError {
    InvalidSpec(&'static str),
    OnBoundary,
    NotFound,
    CornerHit,
    UnknownEdge(String),
}

impl fmt::Display for TilingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TilingError::InvalidSpec(m) => write!(f, "invalid tiling spec: {m}"),
            TilingError::OnBoundary => f.write_str("point lies on an edge"),
            TilingError::NotFound => f.write_str("no tile contains the point"),
            TilingError::CornerHit => f.write_str("position is at a vertex"),
            TilingError::UnknownEdge(e) => write!(f, "unknown edge: {e}"),
        }
    }
}

/// A compiled tiling ready for queries.
#[derive(Clone, Debug)]
pub struct Tiling {
    spec: TilingSpec,
    kind: Kind,
}

#[derive(Clone, Debug)]
pub(crate) enum Kind {
    Lattice(LatticeTiling),
    Lines(Arrangement),
}

fn check_angle(a: f64) -> Result<(), TilingError> {
    if a.is_finite() && a > 0.0 && a < PI {
        Ok(())
    } else {
        Err(TilingError::InvalidSpec("angle out of range"))
    }
}

impl Tiling {
    pub fn new(spec: &TilingSpec) -> Result<Tiling, TilingError> {
        let kind = match spec {
            TilingSpec::LineArrangement { lines } => {
                if lines.iter().any(|l| !l.angle.is_finite() || !l.point.iter().all(|c| c.is_finite())) {
                    return Err(TilingError::InvalidSpec("non-finite line"));
                }
                let ls: Vec<Line> = lines.iter().map(LineSpec::to_line).collect();
                Kind::Lines(Arrangement::new(&ls, true)?)
            }
            TilingSpec::ConcurrentLines { angles } => {
                if angles.len() < 2 {
                    return Err(TilingError::InvalidSpec("need at least two lines"));
                }
                for &a in angles {
                    check_angle(a)?;
                }
                if (angles.iter().sum::<f64>() - PI).abs() > 1e-9 {
                    return Err(TilingError::InvalidSpec("gap angles must sum to π"));
                }
                let mut phi = 0.0;
                let mut ls = Vec::with_capacity(angles.len());
                for &a in angles {
                    ls.push(Line::through(Point2::ORIGIN, phi));
                    phi += a;
                }
                Kind::Lines(Arrangement::new(&ls, false)?)
            }
            TilingSpec::Triangle { alpha, beta } => {
                check_angle(*alpha)?;
                check_angle(*beta)?;
                if alpha + beta >= PI {
                    return Err(TilingError::InvalidSpec("α + β must be below π"));
                }
                Kind::Lattice(lattice::triangle(*alpha, *beta))
            }
            TilingSpec::IsoscelesTriangle { alpha } => {
                check_angle(*alpha)?;
                let base = (PI - alpha) / 2.0;
                Kind::Lattice(lattice::triangle(base, base))
            }
            TilingSpec::RightTriangle { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0 && *alpha < FRAC_PI_2) {
                    return Err(TilingError::InvalidSpec("right-triangle angle must be in (0, π/2)"));
                }
                Kind::Lattice(lattice::right_triangle(*alpha))
            }
            TilingSpec::Square => Kind::Lattice(lattice::square()),
            TilingSpec::RegularHexagon => Kind::Lattice(lattice::hexagon()),
            TilingSpec::EquilateralTriangle => Kind::Lattice(lattice::equilateral()),
            TilingSpec::Kaleidoscope => Kind::Lattice(lattice::kaleidoscope()),
            TilingSpec::Trihexagonal => Kind::Lattice(lattice::trihexagonal()),
        };
        Ok(Tiling {
            spec: spec.clone(),
            kind,
        })
    }

    pub fn spec(&self) -> &TilingSpec {
        &self.spec
    }

    pub fn lattice(&self) -> Option<&LatticeTiling> {
        match &self.kind {
            Kind::Lattice(l) => Some(l),
            Kind::Lines(_) => None,
        }
    }

    pub fn arrangement(&self) -> Option<&Arrangement> {
        match &self.kind {
            Kind::Lines(a) => Some(a),
            Kind::Lattice(_) => None,
        }
    }

    pub fn locate(&self, p: Point2) -> Result<TileRef, TilingError> {
        match &self.kind {
            Kind::Lattice(l) => l.locate(p),
            Kind::Lines(a) => a.locate(p),
        }
    }

    pub fn edge_geom(&self, e: &EdgeRef) -> Result<EdgeGeom, TilingError> {
        match (&self.kind, *e) {
            (Kind::Lattice(l), EdgeRef::Cell { cell, slot }) if (slot as usize) < l.edge_count() => {
                let (a, b) = l.edge_segment(cell, slot as usize);
                Ok(EdgeGeom::Segment { a, b })
            }
            (Kind::Lines(a), EdgeRef::Line { line, interval })
                if (line as usize) < a.len() && (interval as usize) <= a.vertex_params(line as usize).len() =>
            {
                Ok(a.edge_geom(line as usize, interval as usize))
            }
            _ => Err(TilingError::UnknownEdge(alloc::format!("{e}"))),
        }
    }

    /// `[left, right]` faces of an edge relative to its canonical orientation.
    pub fn edge_tiles(&self, e: &EdgeRef) -> Result<[TileRef; 2], TilingError> {
        let g = self.edge_geom(e)?;
        match (&self.kind, *e) {
            (Kind::Lattice(l), EdgeRef::Cell { cell, slot }) => Ok(l.edge_tiles(cell, slot as usize)),
            (Kind::Lines(a), EdgeRef::Line { line, .. }) => {
                // probe just off the middle of the edge
                let t = match g {
                    EdgeGeom::Segment { .. } => 0.5,
                    EdgeGeom::Ray { .. } => 1.0,
                };
                let p = g.point(t);
                let n = g.tangent().perp() * 1e-6;
                let mut left = a.face_of(p + n)?;
                let mut right = a.face_of(p - n)?;
                // the probes sit on the edge's line; fix its bit exactly
                let bit = 1u64 << line;
                let l = &a.lines()[line as usize];
                if l.normal.dot(n) > 0.0 {
                    left |= bit;
                    right &= !bit;
                } else {
                    left &= !bit;
                    right |= bit;
                }
                Ok([TileRef::Face { face: left }, TileRef::Face { face: right }])
            }
            _ => Err(TilingError::UnknownEdge(alloc::format!("{e}"))),
        }
    }

    /// CCW boundary of a tile.
    pub fn tile_boundary(&self, t: &TileRef) -> Result<Vec<(EdgeRef, EdgeGeom)>, TilingError> {
        match (&self.kind, *t) {
            (Kind::Lattice(l), TileRef::Cell { cell, slot }) if (slot as usize) < l.tile_count() => {
                let poly = l.tile_polygon(cell, slot as usize);
                let sides = l.tile_sides(cell, slot as usize);
                Ok(sides
                    .into_iter()
                    .enumerate()
                    .map(|(k, e)| {
                        let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
                        let g = if a.lex_less(b) {
                            EdgeGeom::Segment { a, b }
                        } else {
                            EdgeGeom::Segment { a: b, b: a }
                        };
                        (e, g)
                    })
                    .collect())
            }
            (Kind::Lines(a), TileRef::Face { face }) if a.face_exists(face) => Ok(a.tile_boundary(face)),
            _ => Err(TilingError::InvalidSpec("unknown tile")),
        }
    }

    /// The edge containing `p` (within `EPS_CORNER`) and the position on it.
    pub fn edge_at(&self, p: Point2) -> Option<(EdgeRef, f64)> {
        match &self.kind {
            Kind::Lattice(l) => l.edge_at(p),
            Kind::Lines(a) => {
                let j = (0..a.len()).find(|&j| a.lines()[j].signed_distance(p).abs() < EPS_CORNER)?;
                let s = a.param_of(j, p);
                let e = EdgeRef::Line {
                    line: j as u32,
                    interval: a.interval_of(j, s) as u32,
                };
                let t = a.edge_geom(j, a.interval_of(j, s)).param(p);
                Some((e, t))
            }
        }
    }

    pub fn translation_lattice(&self) -> Option<(Point2, Point2)> {
        self.lattice().map(|l| (l.a, l.b))
    }

    pub fn central_zone(&self) -> Option<Vec<Point2>> {
        self.arrangement().map(Arrangement::central_zone)
    }

    /// Typical edge length: every tiling here is built at unit scale.
    pub fn edge_scale(&self) -> f64 {
        1.0
    }

    /// Fill colour class of a tile, when the tiling is two-colourable.
    pub fn tile_color(&self, t: &TileRef) -> Option<u8> {
        match (&self.kind, *t) {
            (Kind::Lattice(l), TileRef::Cell { cell, slot }) => l.cell_color(cell, slot as usize),
            (Kind::Lines(_), TileRef::Face { face }) => Some((face.count_ones() % 2) as u8),
            _ => None,
        }
    }

    pub fn is_two_colorable(&self) -> bool {
        match &self.kind {
            Kind::Lattice(l) => l.is_two_colorable(),
            Kind::Lines(_) => true,
        }
    }

    /// Slot index for a human-readable edge name (lattice tilings only).
    pub fn slot_by_name(&self, name: &str) -> Option<usize> {
        self.lattice().and_then(|l| {
            l.slot_by_name(name)
                .or_else(|| name.parse::<usize>().ok().filter(|&s| s < l.edge_count()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_json_shapes() {
        // round trip through the serde data model via the derive
        let s = TilingSpec::Square;
        assert_eq!(s.name(), "square");
        let k = TilingSpec::Kaleidoscope;
        assert_eq!(k.name(), "kaleidoscope_30_60_90");
    }

    #[test]
    fn square_locate_and_boundary() {
        let t = Tiling::new(&TilingSpec::Square).unwrap();
        assert_eq!(t.locate(Point2::new(0.5, 0.5)).unwrap(), TileRef::cell([0, 0], 0));
        assert_eq!(t.locate(Point2::new(-0.5, 3.5)).unwrap(), TileRef::cell([-1, 3], 0));
        assert_eq!(t.locate(Point2::new(1.0, 0.5)), Err(TilingError::OnBoundary));
        let b = t.tile_boundary(&TileRef::cell([0, 0], 0)).unwrap();
        assert_eq!(b.len(), 4);
    }

    #[test]
    fn trihex_hexagon_center() {
        let t = Tiling::new(&TilingSpec::Trihexagonal).unwrap();
        let r = t.locate(Point2::new(4.0, 0.0)).unwrap();
        assert_eq!(r, TileRef::cell([2, 0], 0));
        let b = t.tile_boundary(&r).unwrap();
        assert_eq!(b.len(), 6);
        for (_, g) in b {
            assert!((g.length() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lower_right_triangle_sides() {
        let t = Tiling::new(&TilingSpec::RightTriangle { alpha: 0.4 }).unwrap();
        let b = t.tile_boundary(&TileRef::cell([0, 0], 0)).unwrap();
        let l = t.lattice().unwrap();
        let names: Vec<&str> = b.iter().map(|(e, _)| l.edge_names()[e.slot().unwrap()].as_str()).collect();
        assert_eq!(names, ["horizontal", "hypotenuse", "vertical"]);
        // hypotenuse runs down to the right
        let EdgeGeom::Segment { a, b: q } = b[1].1 else { panic!() };
        assert!(a.x < q.x && a.y > q.y);
        assert!((a.dist(q) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(Tiling::new(&TilingSpec::Triangle { alpha: 2.0, beta: 1.5 }).is_err());
        assert!(Tiling::new(&TilingSpec::ConcurrentLines { angles: alloc::vec![1.0, 1.0] }).is_err());
        assert!(Tiling::new(&TilingSpec::RightTriangle { alpha: 1.6 }).is_err());
    }
}
