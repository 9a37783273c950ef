//! Finite arrangements of lines.
//!
//! Faces are identified by their sign vector (bit `j` set when the face lies
//! on the positive side of line `j`), edges by line index plus the index of
//! the interval between consecutive intersection points on that line.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dd::Dd;
use crate::geom::{normalize_line_angle, Line, Point2};

use super::{EdgeGeom, EdgeRef, TileRef, TilingError, EPS_CORNER};

#[derive(Clone, Debug)]
pub struct Arrangement {
    lines: Vec<Line>,
    /// direction angle of each line in [0, π), measured from the input
    phis: Vec<f64>,
    /// direction of each line vector, to double-double precision
    line_phis: Vec<Dd>,
    /// sorted distinct intersection parameters along each line
    verts: Vec<Vec<f64>>,
    /// CCW angle from `l_i` to `l_{i+1}`; the last wraps through π
    alphas: Vec<f64>,
    /// mean intersection parameter per line (where the central zone sits)
    centers: Vec<f64>,
}

impl Arrangement {
    /// Index the lines so that `l_0` is the first input line and the others
    /// follow by increasing CCW angle from it.
    pub fn new(input: &[Line], require_simple: bool) -> Result<Arrangement, TilingError> {
        if input.len() < 2 || input.len() > 64 {
            return Err(TilingError::InvalidSpec("a line arrangement needs 2 to 64 lines"));
        }
        if input.iter().any(|l| !l.is_valid()) {
            return Err(TilingError::InvalidSpec("non-finite line"));
        }
        let phi0 = input[0].angle();
        let mut order: Vec<(f64, usize)> = input
            .iter()
            .enumerate()
            .map(|(k, l)| (if k == 0 { 0.0 } else { normalize_line_angle(l.angle() - phi0) }, k))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        // every line gets the direction phi0 + rel so that directions increase
        let lines: Vec<Line> = order
            .iter()
            .map(|&(rel, k)| {
                let l = input[k];
                Line::through(l.foot(), phi0 + rel)
            })
            .collect();
        let phis: Vec<f64> = order.iter().map(|&(rel, _)| phi0 + rel).collect();
        for k in 1..phis.len() {
            if phis[k] - phis[k - 1] < 1e-12 {
                return Err(TilingError::InvalidSpec("parallel lines"));
            }
        }
        if PI - (phis[phis.len() - 1] - phis[0]) < 1e-12 {
            return Err(TilingError::InvalidSpec("parallel lines"));
        }
        let n = lines.len();
        let mut raw: Vec<Vec<f64>> = vec![Vec::new(); n];
        let mut pts: Vec<Point2> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let p = lines[i].intersect(&lines[j]).ok_or(TilingError::InvalidSpec("parallel lines"))?;
                raw[i].push(param(&lines[i], p));
                raw[j].push(param(&lines[j], p));
                pts.push(p);
            }
        }
        if require_simple {
            for (a, p) in pts.iter().enumerate() {
                for q in pts.iter().skip(a + 1) {
                    if p.dist(*q) < 1e-9 {
                        return Err(TilingError::InvalidSpec("three lines meet at a point"));
                    }
                }
            }
        }
        let centers = raw.iter().map(|v| v.iter().sum::<f64>() / v.len() as f64).collect();
        let verts = raw
            .into_iter()
            .map(|mut v| {
                v.sort_by(f64::total_cmp);
                v.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
                v
            })
            .collect();
        let mut alphas: Vec<f64> = (0..n - 1).map(|i| phis[i + 1] - phis[i]).collect();
        alphas.push(phis[0] + PI - phis[n - 1]);
        let line_phis = lines
            .iter()
            .map(|l| {
                let u = l.direction();
                crate::dd::atan2(u.y, u.x)
            })
            .collect();
        Ok(Arrangement {
            line_phis,
            lines,
            phis,
            verts,
            alphas,
            centers,
        })
    }

    pub(crate) fn line_phi(&self, j: usize) -> Dd {
        self.line_phis[j]
    }

    pub fn lines(&self) -> &[Line] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    /// Direction of each line, increasing from `l_0`.
    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn vertex_params(&self, line: usize) -> &[f64] {
        &self.verts[line]
    }

    /// Unit vector along `line` pointing from `p` toward the central zone.
    pub fn inward(&self, line: usize, p: Point2) -> Point2 {
        let u = self.lines[line].direction();
        if param(&self.lines[line], p) > self.centers[line] {
            -u
        } else {
            u
        }
    }

    pub fn point_at(&self, line: usize, s: f64) -> Point2 {
        self.lines[line].foot() + self.lines[line].direction() * s
    }

    pub fn param_of(&self, line: usize, p: Point2) -> f64 {
        param(&self.lines[line], p)
    }

    pub fn interval_of(&self, line: usize, s: f64) -> usize {
        self.verts[line].iter().filter(|&&v| v < s).count()
    }

    /// Distance from the parameter to the nearest vertex on the line.
    pub fn vertex_clearance(&self, line: usize, s: f64) -> f64 {
        self.verts[line]
            .iter()
            .map(|v| (v - s).abs())
            .fold(f64::MAX, f64::min)
    }

    pub fn edge_geom(&self, line: usize, interval: usize) -> EdgeGeom {
        let v = &self.verts[line];
        let u = self.lines[line].direction();
        if interval == 0 {
            EdgeGeom::Ray {
                origin: self.point_at(line, v[0]),
                dir: -u,
            }
        } else if interval == v.len() {
            EdgeGeom::Ray {
                origin: self.point_at(line, v[v.len() - 1]),
                dir: u,
            }
        } else {
            let p = self.point_at(line, v[interval - 1]);
            let q = self.point_at(line, v[interval]);
            if p.lex_less(q) {
                EdgeGeom::Segment { a: p, b: q }
            } else {
                EdgeGeom::Segment { a: q, b: p }
            }
        }
    }

    pub fn face_of(&self, p: Point2) -> Result<u64, TilingError> {
        let mut mask = 0u64;
        for (j, l) in self.lines.iter().enumerate() {
            let s = l.signed_distance(p);
            if s.abs() < EPS_CORNER {
                return Err(TilingError::OnBoundary);
            }
            if s > 0.0 {
                mask |= 1 << j;
            }
        }
        Ok(mask)
    }

    pub fn locate(&self, p: Point2) -> Result<TileRef, TilingError> {
        self.face_of(p).map(|face| TileRef::Face { face })
    }

    /// Range of line `j` lying on the sides of every other line given by `mask`.
    fn face_range_on(&self, mask: u64, j: usize) -> Option<(f64, f64)> {
        let lj = &self.lines[j];
        let (base, u) = (lj.foot(), lj.direction());
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for (k, lk) in self.lines.iter().enumerate() {
            if k == j {
                continue;
            }
            let positive = mask & (1 << k) != 0;
            // signed distance along the line: a + b s
            let a = lk.signed_distance(base);
            let b = lk.normal.dot(u);
            let (a, b) = if positive { (a, b) } else { (-a, -b) };
            // need a + b s > 0
            if b.abs() < 1e-15 {
                if a <= 0.0 {
                    return None;
                }
            } else if b > 0.0 {
                lo = lo.max(-a / b);
            } else {
                hi = hi.min(-a / b);
            }
        }
        (hi - lo > 1e-12).then_some((lo, hi))
    }

    /// Whether a sign vector names a nonempty face.
    pub fn face_exists(&self, mask: u64) -> bool {
        (0..self.lines.len()).any(|j| self.face_range_on(mask, j).is_some())
    }

    /// Boundary of a face, CCW; unbounded faces start after the opening.
    pub fn tile_boundary(&self, mask: u64) -> Vec<(EdgeRef, EdgeGeom)> {
        let mut sides: Vec<(f64, EdgeRef, EdgeGeom)> = Vec::new();
        for j in 0..self.lines.len() {
            let Some((lo, hi)) = self.face_range_on(mask, j) else { continue };
            let mid = if lo.is_finite() && hi.is_finite() {
                0.5 * (lo + hi)
            } else if lo.is_finite() {
                lo + 1.0
            } else if hi.is_finite() {
                hi - 1.0
            } else {
                0.0
            };
            let interval = self.interval_of(j, mid);
            let outward = if mask & (1 << j) != 0 {
                -self.lines[j].normal
            } else {
                self.lines[j].normal
            };
            sides.push((
                outward.angle(),
                EdgeRef::Line {
                    line: j as u32,
                    interval: interval as u32,
                },
                self.edge_geom(j, interval),
            ));
        }
        sides.sort_by(|a, b| a.0.total_cmp(&b.0));
        // for unbounded faces the boundary opens at the largest angular gap
        let bounded = sides.iter().all(|s| matches!(s.2, EdgeGeom::Segment { .. }));
        if !bounded && sides.len() > 1 {
            let m = sides.len();
            let gap = |k: usize| {
                let next = if k + 1 == m { sides[0].0 + 2.0 * PI } else { sides[k + 1].0 };
                next - sides[k].0
            };
            let widest = (0..m).max_by(|&x, &y| gap(x).total_cmp(&gap(y))).unwrap_or(0);
            sides.rotate_left((widest + 1) % m);
        }
        sides.into_iter().map(|(_, e, g)| (e, g)).collect()
    }

    /// Convex hull of all pairwise intersection points, CCW.
    pub fn central_zone(&self) -> Vec<Point2> {
        let mut pts = Vec::new();
        for i in 0..self.lines.len() {
            for j in (i + 1)..self.lines.len() {
                if let Some(p) = self.lines[i].intersect(&self.lines[j]) {
                    pts.push(p);
                }
            }
        }
        convex_hull(pts)
    }
}

fn param(l: &Line, p: Point2) -> f64 {
    (p - l.foot()).dot(l.direction())
}

/// Andrew's monotone chain; collinear points dropped, CCW output.
pub fn convex_hull(mut pts: Vec<Point2>) -> Vec<Point2> {
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|a, b| a.dist(*b) < 1e-12);
    if pts.len() < 3 {
        return pts;
    }
    let half = |it: &mut dyn Iterator<Item = Point2>| {
        let mut h: Vec<Point2> = Vec::new();
        for p in it {
            while h.len() >= 2 && (h[h.len() - 1] - h[h.len() - 2]).cross(p - h[h.len() - 2]) <= 1e-14 {
                h.pop();
            }
            h.push(p);
        }
        h.pop();
        h
    };
    let mut hull = half(&mut pts.iter().copied());
    hull.extend(half(&mut pts.iter().rev().copied()));
    hull
}

/// Whether `p` lies inside or within `eps` of a CCW convex polygon.
pub fn in_convex(poly: &[Point2], p: Point2, eps: f64) -> bool {
    match poly.len() {
        0 => false,
        1 => poly[0].dist(p) <= eps,
        2 => {
            let d = poly[1] - poly[0];
            let t = ((p - poly[0]).dot(d) / d.dot(d)).clamp(0.0, 1.0);
            (poly[0] + d * t).dist(p) <= eps
        }
        _ => super::lattice::min_side_distance(poly, p) >= -eps,
    }
}
