//! Trajectory iteration: walk a ray through tiles, refracting with
//! coefficient −1 at every crossed edge.

use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::dd::{self, Dd, DdPoint};
use crate::geom::{angle_between, Point2};
use crate::tiling::{EdgeGeom, EdgeRef, TileRef, Tiling, TilingError, EPS_CORNER};

/// Smallest accepted forward ray parameter when searching for the exit edge.
pub const EPS_RAY: f64 = 1e-12;

/// Which face of the edge (relative to its canonical orientation) the ray enters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

/// A ray sitting on an edge, about to travel in direction `dir`.
///
/// `t` is the fraction along the canonical orientation of a bounded edge;
/// on the unbounded sides of arrangement faces it is the distance from the
/// finite endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryState {
    pub edge: EdgeRef,
    pub t: f64,
    pub dir: f64,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StartError {
    Tiling(TilingError),
    /// Too close to a vertex.
    CornerHit,
    /// Direction parallel to the edge.
    Parallel,
    NotOnEdge,
}

impl fmt::Display for StartError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StartError::Tiling(e) => write!(f, "{e}"),
            StartError::CornerHit => f.write_str("start position is at a vertex"),
            StartError::Parallel => f.write_str("start direction is parallel to the edge"),
            StartError::NotOnEdge => f.write_str("start point is not on an edge"),
        }
    }
}

impl From<TilingError> for StartError {
    fn from(e: TilingError) -> Self {
        StartError::Tiling(e)
    }
}

fn side_of(g: &EdgeGeom, dir: f64) -> Option<Side> {
    let c = g.tangent().cross(Point2::from_angle(dir));
    if c.abs() < 1e-12 {
        None
    } else if c > 0.0 {
        Some(Side::Left)
    } else {
        Some(Side::Right)
    }
}

impl TrajectoryState {
    pub fn new(tiling: &Tiling, edge: EdgeRef, t: f64, dir: f64) -> Result<Self, StartError> {
        let g = tiling.edge_geom(&edge)?;
        if !t.is_finite() || !dir.is_finite() {
            return Err(StartError::NotOnEdge);
        }
        let inside = match g {
            EdgeGeom::Segment { .. } => (0.0..=1.0).contains(&t),
            EdgeGeom::Ray { .. } => t >= 0.0,
        };
        if !inside {
            return Err(StartError::NotOnEdge);
        }
        if g.vertex_clearance(t) < EPS_CORNER {
            return Err(StartError::CornerHit);
        }
        let dir = crate::geom::normalize_dir(dir);
        let side = side_of(&g, dir).ok_or(StartError::Parallel)?;
        Ok(TrajectoryState { edge, t, dir, side })
    }

    pub fn from_point(tiling: &Tiling, p: Point2, dir: f64) -> Result<Self, StartError> {
        let (edge, t) = tiling.edge_at(p).ok_or(StartError::NotOnEdge)?;
        TrajectoryState::new(tiling, edge, t, dir)
    }

    pub fn point(&self, tiling: &Tiling) -> Point2 {
        tiling
            .edge_geom(&self.edge)
            .map(|g| g.point(self.t))
            .unwrap_or(Point2::new(f64::NAN, f64::NAN))
    }

    /// The tile the ray is entering.
    pub fn entering(&self, tiling: &Tiling) -> Result<TileRef, TilingError> {
        let [l, r] = tiling.edge_tiles(&self.edge)?;
        Ok(match self.side {
            Side::Left => l,
            Side::Right => r,
        })
    }

    /// Same state with the direction reversed (entering the other face).
    pub fn reversed(&self) -> TrajectoryState {
        TrajectoryState {
            dir: crate::geom::normalize_dir(self.dir + core::f64::consts::PI),
            side: match self.side {
                Side::Left => Side::Right,
                Side::Right => Side::Left,
            },
            ..*self
        }
    }

    /// The state that runs the arriving chord backwards: the same crossing
    /// seen by the time-reversed trajectory.
    pub fn retraced(&self, tiling: &Tiling) -> Result<TrajectoryState, TilingError> {
        let line = tiling.edge_geom(&self.edge)?.line();
        let incoming = crate::geom::refract_direction(self.dir, &line);
        Ok(TrajectoryState {
            dir: crate::geom::normalize_dir(incoming + core::f64::consts::PI),
            ..self.reversed()
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepError {
    /// The exit point lies within `EPS_CORNER` of a vertex.
    CornerHit { point: Point2 },
    /// Unbounded face and nothing ahead.
    Escaped,
    /// No exit found; only possible through numerical breakdown.
    Lost,
    Tiling(TilingError),
}

impl From<TilingError> for StepError {
    fn from(e: TilingError) -> Self {
        StepError::Tiling(e)
    }
}

/// Advance to the next crossing; returns the new state and its point.
pub fn step_with_point(tiling: &Tiling, s: &TrajectoryState) -> Result<(TrajectoryState, Point2), StepError> {
    advance(tiling, s, Low::default()).map(|(s, p, _)| (s, p))
}

/// Low words of a state's direction and edge parameter (see [`crate::dd`]).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
struct Low {
    dir: f64,
    t: f64,
}

fn advance(tiling: &Tiling, s: &TrajectoryState, low: Low) -> Result<(TrajectoryState, Point2, Low), StepError> {
    let d = Point2::from_angle(s.dir);
    let incoming = Dd { hi: s.dir, lo: low.dir };
    if let Some(arr) = tiling.arrangement() {
        let pos = tiling.edge_geom(&s.edge)?.point(s.t);
        let from = s.edge.line_index().unwrap_or(usize::MAX);
        let mut best: Option<(f64, usize)> = None;
        for (j, l) in arr.lines().iter().enumerate() {
            if j == from {
                continue;
            }
            let denom = l.normal.dot(d);
            if denom.abs() < 1e-15 {
                continue;
            }
            let lam = -l.signed_distance(pos) / denom;
            if lam > EPS_RAY && best.map_or(true, |b| lam < b.0) {
                best = Some((lam, j));
            }
        }
        let (lam, j) = best.ok_or(StepError::Escaped)?;
        let q = pos + d * lam;
        let sj = arr.param_of(j, q);
        if arr.vertex_clearance(j, sj) < EPS_CORNER {
            return Err(StepError::CornerHit { point: q });
        }
        let interval = arr.interval_of(j, sj);
        let edge = EdgeRef::Line {
            line: j as u32,
            interval: interval as u32,
        };
        let eg = arr.edge_geom(j, interval);
        let out = dd::refract(incoming, arr.line_phi(j));
        let side = side_of(&eg, out.hi).ok_or(StepError::Lost)?;
        let state = TrajectoryState {
            edge,
            t: eg.param(q),
            dir: out.hi,
            side,
        };
        return Ok((state, q, Low { dir: out.lo, t: 0.0 }));
    }

    let lt = tiling.lattice().ok_or(StepError::Lost)?;
    let TileRef::Cell { cell, slot } = s.entering(tiling)? else {
        return Err(StepError::Lost);
    };
    // work relative to the entered cell so that rounding does not grow with
    // the distance travelled
    let origin = lt.cell_origin(cell);
    let (cur_cell, cur_slot) = match s.edge {
        EdgeRef::Cell { cell: c, slot } => ([c[0] - cell[0], c[1] - cell[1]], slot as usize),
        EdgeRef::Line { .. } => return Err(StepError::Lost),
    };
    let (a0, b0) = lt.edge_segment_dd(cur_cell, cur_slot);
    let t0 = Dd { hi: s.t, lo: low.t };
    let pos_dd = a0.add(b0.sub(a0).scale(t0));
    let pos = Point2::new(pos_dd.x.hi, pos_dd.y.hi);
    let poly = lt.prototile(slot as usize);
    let sides = lt.side_refs(slot as usize);
    let n = poly.len();
    // pick the exit side in f64 ...
    let mut best: Option<(f64, usize)> = None;
    for k in 0..n {
        let (es, off) = sides[k];
        if EdgeRef::cell([cell[0] + off[0], cell[1] + off[1]], es) == s.edge {
            continue;
        }
        let p0 = poly[k];
        let e = poly[(k + 1) % n] - p0;
        let denom = d.cross(e);
        if denom.abs() < 1e-15 {
            continue;
        }
        let w = p0 - pos;
        let lam = w.cross(e) / denom;
        let mu = w.cross(d) / denom;
        if lam > EPS_RAY && (-1e-9..=1.0 + 1e-9).contains(&mu) && best.map_or(true, |b| lam < b.0) {
            best = Some((lam, k));
        }
    }
    let (_, k) = best.ok_or(StepError::Lost)?;
    // ... then place the crossing in double-double
    let (sn, cs) = dd::sincos(incoming);
    let dv = DdPoint { x: cs, y: sn };
    let p0 = DdPoint::from_f64(poly[k].x, poly[k].y);
    let p1 = poly[(k + 1) % n];
    let e = DdPoint::from_f64(p1.x, p1.y).sub(p0);
    let lam = p0.sub(pos_dd).cross(e).div(dv.cross(e));
    let q = pos_dd.add(dv.scale(lam));
    let (es, off) = sides[k];
    let edge = EdgeRef::cell([cell[0] + off[0], cell[1] + off[1]], es);
    let (a, b) = lt.edge_segment_dd(off, es);
    let ab = b.sub(a);
    let t = q.sub(a).dot(ab).div(ab.dot(ab));
    let qf = Point2::new(q.x.hi, q.y.hi);
    let eg = EdgeGeom::Segment {
        a: Point2::new(a.x.hi, a.y.hi),
        b: Point2::new(b.x.hi, b.y.hi),
    };
    if eg.vertex_clearance(t.hi) < EPS_CORNER {
        return Err(StepError::CornerHit { point: qf + origin });
    }
    let out = dd::refract(incoming, lt.edge_phi(es));
    let side = side_of(&eg, out.hi).ok_or(StepError::Lost)?;
    let state = TrajectoryState {
        edge,
        t: t.hi,
        dir: out.hi,
        side,
    };
    Ok((state, qf + origin, Low { dir: out.lo, t: t.lo }))
}

pub fn step(tiling: &Tiling, s: &TrajectoryState) -> Result<TrajectoryState, StepError> {
    step_with_point(tiling, s).map(|(s, _)| s)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CrossingRecord {
    pub state: TrajectoryState,
    pub point: Point2,
    pub step: usize,
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    edge: EdgeRef,
    t: f64,
    dir: f64,
    side: Side,
    x: f64,
    y: f64,
}

impl Serialize for CrossingRecord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RecordJson {
            edge: self.state.edge,
            t: self.state.t,
            dir: self.state.dir,
            side: self.state.side,
            x: self.point.x,
            y: self.point.y,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CrossingRecord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = RecordJson::deserialize(d)?;
        Ok(CrossingRecord {
            state: TrajectoryState {
                edge: r.edge,
                t: r.t,
                dir: r.dir,
                side: r.side,
            },
            point: Point2::new(r.x, r.y),
            step: 0,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxSteps,
    CornerHit,
    EscapedArrangement,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::MaxSteps => "max_steps",
            Termination::CornerHit => "corner_hit",
            Termination::EscapedArrangement => "escaped_arrangement",
        })
    }
}

/// Crossing records (the start is record 0) plus why the trace stopped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub records: Vec<CrossingRecord>,
    pub termination: Termination,
}

impl Trajectory {
    pub fn points(&self) -> impl Iterator<Item = Point2> + '_ {
        self.records.iter().map(|r| r.point)
    }

    /// Renumber steps after deserialization.
    pub fn renumber(&mut self) {
        for (k, r) in self.records.iter_mut().enumerate() {
            r.step = k;
        }
    }
}

/// Iterator over successive crossings, starting with the start state.
pub struct Walker<'a> {
    tiling: &'a Tiling,
    next: Option<CrossingRecord>,
    /// low words of the next record's state
    low: Low,
    pub stop: Option<Termination>,
}

impl<'a> Walker<'a> {
    pub fn new(tiling: &'a Tiling, start: TrajectoryState) -> Self {
        Walker {
            tiling,
            next: Some(CrossingRecord {
                state: start,
                point: start.point(tiling),
                step: 0,
            }),
            low: Low::default(),
            stop: None,
        }
    }
}

impl Iterator for Walker<'_> {
    type Item = CrossingRecord;

    fn next(&mut self) -> Option<CrossingRecord> {
        let cur = self.next.take()?;
        match advance(self.tiling, &cur.state, self.low) {
            Ok((state, point, low)) => {
                self.low = low;
                self.next = Some(CrossingRecord {
                    state,
                    point,
                    step: cur.step + 1,
                })
            }
            Err(StepError::Escaped) => self.stop = Some(Termination::EscapedArrangement),
            Err(_) => self.stop = Some(Termination::CornerHit),
        }
        Some(cur)
    }
}

/// Run until `max_steps` crossings after the start, a corner, or escape.
pub fn trace(tiling: &Tiling, start: TrajectoryState, max_steps: usize) -> Trajectory {
    let mut w = Walker::new(tiling, start);
    let records: Vec<CrossingRecord> = w.by_ref().take(max_steps + 1).collect();
    let termination = if records.len() == max_steps + 1 {
        Termination::MaxSteps
    } else {
        w.stop.unwrap_or(Termination::MaxSteps)
    };
    Trajectory { records, termination }
}

/// Angle in (0, π) between the direction of travel and the edge's canonical
/// orientation.
pub fn edge_angle(tiling: &Tiling, s: &TrajectoryState) -> f64 {
    match tiling.edge_geom(&s.edge) {
        Ok(g) => angle_between(g.tangent(), Point2::from_angle(s.dir)),
        Err(_) => f64::NAN,
    }
}

/// A crossing seen from a tiling vertex `vertex` on the crossed edge:
/// `x = |p V|` and `alpha` is the angle at `p` between `V − p` and the
/// outgoing direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexView {
    pub x: f64,
    pub alpha: f64,
    pub vertex: Point2,
}

pub fn vertex_view(p: Point2, dir: f64, vertex: Point2) -> VertexView {
    VertexView {
        x: p.dist(vertex),
        alpha: angle_between(vertex - p, Point2::from_angle(dir)),
        vertex,
    }
}

/// Common endpoint of two edges, if any.
pub fn shared_vertex(tiling: &Tiling, a: &EdgeRef, b: &EdgeRef) -> Option<Point2> {
    if let (Some(arr), Some(i), Some(j)) = (tiling.arrangement(), a.line_index(), b.line_index()) {
        return arr.lines()[i].intersect(&arr.lines()[j]);
    }
    let (EdgeGeom::Segment { a: a0, b: a1 }, EdgeGeom::Segment { a: b0, b: b1 }) =
        (tiling.edge_geom(a).ok()?, tiling.edge_geom(b).ok()?)
    else {
        return None;
    };
    [a0, a1]
        .into_iter()
        .find(|p| p.dist(b0) < 1e-9 || p.dist(b1) < 1e-9)
}

/// Views of each crossing from the vertex it shares with the next crossed
/// edge (the last record has none).
pub fn forward_views(tiling: &Tiling, traj: &Trajectory) -> Vec<Option<VertexView>> {
    let r = &traj.records;
    (0..r.len())
        .map(|i| {
            let next = r.get(i + 1)?;
            let v = shared_vertex(tiling, &r[i].state.edge, &next.state.edge)?;
            Some(vertex_view(r[i].point, r[i].state.dir, v))
        })
        .collect()
}

/// Trihexagonal views: each crossing is paired with the crossing on the
/// other side of the adjacent triangle tile (the next one when the ray
/// enters a triangle, the previous one when it enters a hexagon) and seen
/// from the vertex those two edges share.
pub fn trihex_views(tiling: &Tiling, traj: &Trajectory) -> Vec<Option<VertexView>> {
    let r = &traj.records;
    (0..r.len())
        .map(|i| {
            let into_triangle = matches!(
                r[i].state.entering(tiling).ok()?,
                TileRef::Cell { slot, .. } if slot != 0
            );
            let partner = if into_triangle { r.get(i + 1)? } else { r.get(i.checked_sub(1)?)? };
            let v = shared_vertex(tiling, &r[i].state.edge, &partner.state.edge)?;
            Some(vertex_view(r[i].point, r[i].state.dir, v))
        })
        .collect()
}
