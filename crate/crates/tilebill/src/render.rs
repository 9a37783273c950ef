//! Deterministic SVG rendering of a tiling with trajectories drawn over it.
//!
//! World coordinates are written as-is (y up) inside a group flipped by
//! `scale(1,-1)`, so every polyline vertex is the crossing point itself,
//! printed with six decimals.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use tilebill_core::geom::Point2;
use tilebill_core::sim::Trajectory;
use tilebill_core::tiling::{Tiling, TileRef};

/// Axis-aligned window in world coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Viewport {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl Viewport {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Viewport {
        Viewport { min_x, min_y, max_x, max_y }
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    fn is_valid(&self) -> bool {
        [self.min_x, self.min_y, self.max_x, self.max_y].iter().all(|v| v.is_finite())
            && self.width() > 0.0
            && self.height() > 0.0
    }

    fn corners(&self) -> Vec<Point2> {
        vec![
            Point2::new(self.min_x, self.min_y),
            Point2::new(self.max_x, self.min_y),
            Point2::new(self.max_x, self.max_y),
            Point2::new(self.min_x, self.max_y),
        ]
    }

    /// Bounding box of `points` padded by `pad` on every side; a square of
    /// half-width `pad` around the origin when there are no points.
    pub fn fit(points: impl IntoIterator<Item = Point2>, pad: f64) -> Viewport {
        let mut v = Viewport::new(f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points.into_iter().filter(|p| p.is_finite()) {
            v.min_x = v.min_x.min(p.x);
            v.min_y = v.min_y.min(p.y);
            v.max_x = v.max_x.max(p.x);
            v.max_y = v.max_y.max(p.y);
        }
        if v.min_x > v.max_x {
            v = Viewport::new(0.0, 0.0, 0.0, 0.0);
        }
        Viewport::new(v.min_x - pad, v.min_y - pad, v.max_x + pad, v.max_y + pad)
    }
}

/// Colours and stroke widths. Widths are in output pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Style {
    /// Output width in pixels; the height follows the viewport's aspect.
    pub width_px: f64,
    pub background: String,
    /// The two tones of a two-colourable tiling (colour 0, colour 1).
    pub fills: [String; 2],
    pub edge_color: String,
    pub edge_width_px: f64,
    /// Trajectory colours, cycled.
    pub palette: Vec<String>,
    pub trajectory_width_px: f64,
    /// Radius of the dot marking each trajectory's start; 0 disables it.
    pub start_marker_px: f64,
}

impl Default for Style {
    fn default() -> Style {
        Style {
            width_px: 800.0,
            background: "#ffffff".into(),
            fills: ["#e8eef6".into(), "#f7f1e3".into()],
            edge_color: "#6b6b6b".into(),
            edge_width_px: 0.75,
            palette: vec!["#c0392b".into(), "#1f5fa8".into(), "#2e8b57".into(), "#8e44ad".into()],
            trajectory_width_px: 2.5,
            start_marker_px: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RenderError {
    EmptyViewport(Viewport),
    BadStyle(&'static str),
}

impl fmt::Display for RenderError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenderError::EmptyViewport(v) => write!(f, "viewport has no area: {v:?}"),
            RenderError::BadStyle(m) => write!(f, "invalid style: {m}"),
        }
    }
}

impl std::error::Error for RenderError {}

/// Fixed six-decimal formatting without negative zero.
pub fn fmt6(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// The auto-fit viewport: trajectory points padded by two edge lengths.
pub fn auto_viewport(tiling: &Tiling, trajectories: &[Trajectory]) -> Viewport {
    let pad = 2.0 * tiling.lattice().map_or(tiling.edge_scale(), |l| l.min_edge_length());
    Viewport::fit(trajectories.iter().flat_map(|t| t.points()), pad)
}

pub fn render_svg(
    tiling: &Tiling,
    trajectories: &[Trajectory],
    viewport: Option<Viewport>,
    style: &Style,
) -> Result<String, RenderError> {
    let vp = viewport.unwrap_or_else(|| auto_viewport(tiling, trajectories));
    if !vp.is_valid() {
        return Err(RenderError::EmptyViewport(vp));
    }
    if !(style.width_px > 0.0 && style.width_px.is_finite()) {
        return Err(RenderError::BadStyle("width_px must be positive"));
    }
    let px = vp.width() / style.width_px; // world units per pixel
    let height_px = vp.height() / px;

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        fmt6(style.width_px),
        fmt6(height_px),
        fmt6(vp.min_x),
        fmt6(-vp.max_y),
        fmt6(vp.width()),
        fmt6(vp.height())
    );
    let _ = writeln!(
        s,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
        fmt6(vp.min_x),
        fmt6(-vp.max_y),
        fmt6(vp.width()),
        fmt6(vp.height()),
        style.background
    );
    s.push_str("<g transform=\"scale(1,-1)\">\n");

    let (faces, edges) = tiling_geometry(tiling, &vp);
    if tiling.is_two_colorable() {
        for colour in 0..2u8 {
            let _ = writeln!(s, "<g class=\"tiles-{colour}\" fill=\"{}\" stroke=\"none\">", style.fills[colour as usize]);
            for (poly, _) in faces.iter().filter(|(_, c)| *c == colour) {
                let _ = writeln!(s, "<polygon points=\"{}\"/>", points_attr(poly));
            }
            s.push_str("</g>\n");
        }
    }
    let _ = writeln!(
        s,
        "<g class=\"edges\" stroke=\"{}\" stroke-width=\"{}\" stroke-linecap=\"round\">",
        style.edge_color,
        fmt6(style.edge_width_px * px)
    );
    for (a, b) in &edges {
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            fmt6(a.x),
            fmt6(a.y),
            fmt6(b.x),
            fmt6(b.y)
        );
    }
    s.push_str("</g>\n");

    for (k, tr) in trajectories.iter().enumerate() {
        let colour = if style.palette.is_empty() {
            "#000000"
        } else {
            &style.palette[k % style.palette.len()]
        };
        let pts: Vec<Point2> = tr.points().collect();
        let _ = writeln!(
            s,
            "<polyline class=\"trajectory\" fill=\"none\" stroke=\"{colour}\" stroke-width=\"{}\" stroke-linejoin=\"round\" points=\"{}\"/>",
            fmt6(style.trajectory_width_px * px),
            points_attr(&pts)
        );
        if let (Some(p), true) = (pts.first(), style.start_marker_px > 0.0) {
            let _ = writeln!(
                s,
                "<circle class=\"start\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{colour}\"/>",
                fmt6(p.x),
                fmt6(p.y),
                fmt6(style.start_marker_px * px)
            );
        }
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}

fn points_attr(pts: &[Point2]) -> String {
    let mut out = String::with_capacity(pts.len() * 22);
    for (i, p) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&fmt6(p.x));
        out.push(',');
        out.push_str(&fmt6(p.y));
    }
    out
}

/// Parses the `points` attribute of every trajectory polyline in `svg`.
pub fn polylines(svg: &str) -> Vec<Vec<(f64, f64)>> {
    svg.lines()
        .filter(|l| l.starts_with("<polyline"))
        .filter_map(|l| {
            let start = l.find("points=\"")? + 8;
            let body = &l[start..start + l[start..].find('"')?];
            body.split(' ')
                .map(|xy| {
                    let (x, y) = xy.split_once(',')?;
                    Some((x.parse().ok()?, y.parse().ok()?))
                })
                .collect()
        })
        .collect()
}

type Faces = Vec<(Vec<Point2>, u8)>;
type Segments = Vec<(Point2, Point2)>;

/// Tile polygons (with colour) and edge segments, clipped to the viewport.
fn tiling_geometry(tiling: &Tiling, vp: &Viewport) -> (Faces, Segments) {
    let mut faces = Vec::new();
    let mut edges = Vec::new();
    if let Some(l) = tiling.lattice() {
        let cells = l.cells_covering(Point2::new(vp.min_x, vp.min_y), Point2::new(vp.max_x, vp.max_y));
        for &cell in &cells {
            for slot in 0..l.tile_count() {
                let poly = clip_polygon(&l.tile_polygon(cell, slot), vp);
                if poly.len() >= 3 {
                    if let Some(c) = l.cell_color(cell, slot) {
                        faces.push((poly, c));
                    }
                }
            }
            for slot in 0..l.edge_count() {
                let (a, b) = l.edge_segment(cell, slot);
                if let Some(seg) = clip_segment(a, b, vp) {
                    edges.push(seg);
                }
            }
        }
    } else if let Some(arr) = tiling.arrangement() {
        let reach = 4.0 * (vp.width() + vp.height());
        let mut pieces = vec![vp.corners()];
        for line in arr.lines() {
            let foot = line.foot();
            let d = line.direction();
            if let Some(seg) = clip_segment(foot - d * reach, foot + d * reach, vp) {
                edges.push(seg);
            }
            pieces = pieces
                .into_iter()
                .flat_map(|p| {
                    let inside = |q: Point2| line.signed_distance(q);
                    let neg = |q: Point2| -line.signed_distance(q);
                    [clip_half_plane(&p, inside), clip_half_plane(&p, neg)]
                })
                .filter(|p| p.len() >= 3 && area(p).abs() > 1e-12)
                .collect();
        }
        for p in pieces {
            let c = centroid(&p);
            if let Some(colour) = tiling.locate(c).ok().and_then(|f: TileRef| tiling.tile_color(&f)) {
                faces.push((p, colour));
            }
        }
    }
    (faces, edges)
}

fn area(p: &[Point2]) -> f64 {
    (0..p.len()).map(|i| p[i].cross(p[(i + 1) % p.len()])).sum::<f64>() / 2.0
}

fn centroid(p: &[Point2]) -> Point2 {
    let n = p.len() as f64;
    let sum = p.iter().fold(Point2::new(0.0, 0.0), |acc, &q| acc + q);
    Point2::new(sum.x / n, sum.y / n)
}

/// Part of a convex polygon where `f >= 0` (f affine).
fn clip_half_plane(poly: &[Point2], f: impl Fn(Point2) -> f64) -> Vec<Point2> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let (fa, fb) = (f(a), f(b));
        if fa >= 0.0 {
            out.push(a);
        }
        if (fa >= 0.0) != (fb >= 0.0) {
            out.push(a.lerp(b, fa / (fa - fb)));
        }
    }
    out
}

/// Sutherland–Hodgman against the four viewport sides.
fn clip_polygon(poly: &[Point2], vp: &Viewport) -> Vec<Point2> {
    let p = clip_half_plane(poly, |q| q.x - vp.min_x);
    let p = clip_half_plane(&p, |q| vp.max_x - q.x);
    let p = clip_half_plane(&p, |q| q.y - vp.min_y);
    clip_half_plane(&p, |q| vp.max_y - q.y)
}

/// Liang–Barsky segment clipping.
fn clip_segment(a: Point2, b: Point2, vp: &Viewport) -> Option<(Point2, Point2)> {
    let d = b - a;
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for (p, q) in [
        (-d.x, a.x - vp.min_x),
        (d.x, vp.max_x - a.x),
        (-d.y, a.y - vp.min_y),
        (d.y, vp.max_y - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    (t0 < t1).then(|| (a.lerp(b, t0), a.lerp(b, t1)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_zero_is_normalised() {
        assert_eq!(fmt6(-0.0), "0.000000");
        assert_eq!(fmt6(-1e-9), "0.000000");
        assert_eq!(fmt6(-0.5), "-0.500000");
    }

    #[test]
    fn segments_clip_to_the_box() {
        let vp = Viewport::new(0.0, 0.0, 1.0, 1.0);
        let (a, b) = clip_segment(Point2::new(-1.0, 0.5), Point2::new(2.0, 0.5), &vp).unwrap();
        assert_eq!((a.x, b.x), (0.0, 1.0));
        assert!(clip_segment(Point2::new(-1.0, 2.0), Point2::new(2.0, 2.0), &vp).is_none());
    }

    #[test]
    fn polygons_clip_to_the_box() {
        let vp = Viewport::new(0.0, 0.0, 1.0, 1.0);
        let tri = [Point2::new(-1.0, -1.0), Point2::new(3.0, -1.0), Point2::new(-1.0, 3.0)];
        let p = clip_polygon(&tri, &vp);
        assert!((area(&p) - 1.0).abs() < 1e-12);
    }
}
