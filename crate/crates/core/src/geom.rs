//! Planar primitives: points, angles, lines, reflections and isometries.

use core::f64::consts::{PI, TAU};
use core::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Tolerance for deciding the kind of an isometry from its matrix entries.
pub const ISOMETRY_EPS: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    /// Unit vector pointing at angle `a`.
    #[inline]
    pub fn from_angle(a: f64) -> Self {
        Point2::new(libm::cos(a), libm::sin(a))
    }

    #[inline]
    pub fn dot(self, o: Point2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3-d cross product.
    #[inline]
    pub fn cross(self, o: Point2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    #[inline]
    pub fn dist(self, o: Point2) -> f64 {
        (self - o).norm()
    }

    pub fn normalized(self) -> Point2 {
        let n = self.norm();
        Point2::new(self.x / n, self.y / n)
    }

    /// Rotation by +90°.
    #[inline]
    pub fn perp(self) -> Point2 {
        Point2::new(-self.y, self.x)
    }

    pub fn rotate(self, a: f64) -> Point2 {
        let (s, c) = (libm::sin(a), libm::cos(a));
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Direction angle in [0, 2π).
    pub fn angle(self) -> f64 {
        normalize_dir(libm::atan2(self.y, self.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn lerp(self, o: Point2, t: f64) -> Point2 {
        self + (o - self) * t
    }

    /// Lexicographic order with a tolerance on the first coordinate.
    pub fn lex_less(self, o: Point2) -> bool {
        if (self.x - o.x).abs() > 1e-12 {
            self.x < o.x
        } else {
            self.y < o.y
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Normalize a direction angle into [0, 2π).
pub fn normalize_dir(a: f64) -> f64 {
    let r = a % TAU;
    let r = if r < 0.0 { r + TAU } else { r };
    // `r` can round up to exactly TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Normalize an undirected line angle into [0, π).
pub fn normalize_line_angle(a: f64) -> f64 {
    let r = a % PI;
    let r = if r < 0.0 { r + PI } else { r };
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Circular distance between two directions, in [0, π].
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = normalize_dir(a - b);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

/// Unsigned angle between two vectors, in [0, π].
pub fn angle_between(u: Point2, v: Point2) -> f64 {
    libm::atan2(u.cross(v).abs(), u.dot(v))
}

/// A line in normal form `n·p = d` with `‖n‖ = 1`.
///
/// The direction of the line is `n` rotated by −90°, so a line built with
/// [`Line::through`] at angle φ has normal `(−sin φ, cos φ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub normal: Point2,
    pub offset: f64,
}

impl Line {
    pub fn through(p: Point2, angle: f64) -> Line {
        let normal = Point2::new(-libm::sin(angle), libm::cos(angle));
        Line {
            normal,
            offset: normal.dot(p),
        }
    }

    pub fn from_points(p: Point2, q: Point2) -> Line {
        Line::through(p, (q - p).angle())
    }

    /// Unit direction vector.
    #[inline]
    pub fn direction(&self) -> Point2 {
        Point2::new(self.normal.y, -self.normal.x)
    }

    /// Undirected angle in [0, π).
    pub fn angle(&self) -> f64 {
        normalize_line_angle(self.direction().angle())
    }

    #[inline]
    pub fn signed_distance(&self, p: Point2) -> f64 {
        self.normal.dot(p) - self.offset
    }

    /// Point of the line closest to the origin.
    pub fn foot(&self) -> Point2 {
        self.normal * self.offset
    }

    pub fn project(&self, p: Point2) -> Point2 {
        p - self.normal * self.signed_distance(p)
    }

    pub fn intersect(&self, o: &Line) -> Option<Point2> {
        let det = self.normal.cross(o.normal);
        if det.abs() < 1e-15 {
            return None;
        }
        let x = (self.offset * o.normal.y - o.offset * self.normal.y) / det;
        let y = (self.normal.x * o.offset - o.normal.x * self.offset) / det;
        Some(Point2::new(x, y))
    }

    pub fn is_valid(&self) -> bool {
        (self.normal.norm() - 1.0).abs() < 1e-12 && self.offset.is_finite()
    }
}

pub fn reflect_point(p: Point2, l: &Line) -> Point2 {
    p - l.normal * (2.0 * l.signed_distance(p))
}

fn reflect_vector(v: Point2, l: &Line) -> Point2 {
    v - l.normal * (2.0 * l.normal.dot(v))
}

/// Mirror a direction across a line (the normal component flips).
pub fn reflect_direction(d: f64, l: &Line) -> f64 {
    reflect_vector(Point2::from_angle(d), l).angle()
}

/// Direction after crossing a boundary with refraction coefficient −1.
///
/// The outgoing ray is the mirror image of the incoming one, so the
/// tangential component flips and the ray keeps crossing. This is
/// [`reflect_direction`] followed by a half turn.
pub fn refract_direction(d: f64, l: &Line) -> f64 {
    let v = Point2::from_angle(d);
    let u = l.direction();
    (v - u * (2.0 * u.dot(v))).angle()
}

/// Affine map `p ↦ M p + t` stored row-major as `[a, b, c, d, tx, ty]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub m: [f64; 4],
    pub t: [f64; 2],
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        m: [1.0, 0.0, 0.0, 1.0],
        t: [0.0, 0.0],
    };

    pub fn reflection(l: &Line) -> Affine {
        let n = l.normal;
        Affine {
            m: [
                1.0 - 2.0 * n.x * n.x,
                -2.0 * n.x * n.y,
                -2.0 * n.x * n.y,
                1.0 - 2.0 * n.y * n.y,
            ],
            t: [2.0 * l.offset * n.x, 2.0 * l.offset * n.y],
        }
    }

    pub fn translation(v: Point2) -> Affine {
        Affine {
            m: [1.0, 0.0, 0.0, 1.0],
            t: [v.x, v.y],
        }
    }

    pub fn rotation(center: Point2, angle: f64) -> Affine {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        let m = [c, -s, s, c];
        let mc = Point2::new(c * center.x - s * center.y, s * center.x + c * center.y);
        Affine {
            m,
            t: [center.x - mc.x, center.y - mc.y],
        }
    }

    pub fn apply(&self, p: Point2) -> Point2 {
        let [a, b, c, d] = self.m;
        Point2::new(a * p.x + b * p.y + self.t[0], c * p.x + d * p.y + self.t[1])
    }

    /// `self ∘ other`: apply `other` first.
    pub fn after(&self, other: &Affine) -> Affine {
        let [a, b, c, d] = self.m;
        let [e, f, g, h] = other.m;
        let t = self.apply(Point2::new(other.t[0], other.t[1]));
        Affine {
            m: [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h],
            t: [t.x, t.y],
        }
    }

    pub fn det(&self) -> f64 {
        self.m[0] * self.m[3] - self.m[1] * self.m[2]
    }

    pub fn max_abs_diff(&self, o: &Affine) -> f64 {
        let mut worst = 0.0f64;
        for k in 0..4 {
            worst = worst.max((self.m[k] - o.m[k]).abs());
        }
        for k in 0..2 {
            worst = worst.max((self.t[k] - o.t[k]).abs());
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsometryKind {
    Identity,
    Rotation { center: Point2, angle: f64 },
    Translation { vector: Point2 },
    Reflection { line: Line },
    Glide { line: Line, shift: f64 },
}

impl IsometryKind {
    /// Direction of the family of invariant parallel lines, when there is one.
    pub fn fixed_direction(&self) -> Option<f64> {
        match self {
            IsometryKind::Translation { vector } => Some(normalize_line_angle(vector.angle())),
            IsometryKind::Reflection { line } | IsometryKind::Glide { line, .. } => {
                Some(line.angle())
            }
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Isometry {
    pub kind: IsometryKind,
    pub raw: Affine,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GeomError {
    /// The linear part is not orthogonal.
    Degenerate,
    EmptyInput,
}

impl core::fmt::Display for GeomError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GeomError::Degenerate => f.write_str("matrix is not an isometry"),
            GeomError::EmptyInput => f.write_str("no lines given"),
        }
    }
}

pub fn classify_isometry(raw: &Affine) -> Result<IsometryKind, GeomError> {
    let [a, b, c, d] = raw.m;
    // MᵀM = I
    let o = [a * a + c * c - 1.0, a * b + c * d, b * b + d * d - 1.0];
    if o.iter().any(|e| !e.is_finite() || e.abs() > ISOMETRY_EPS) {
        return Err(GeomError::Degenerate);
    }
    let t = Point2::new(raw.t[0], raw.t[1]);
    if raw.det() > 0.0 {
        let angle = libm::atan2(c, a);
        if angle.abs() < ISOMETRY_EPS {
            if t.norm() < ISOMETRY_EPS {
                Ok(IsometryKind::Identity)
            } else {
                Ok(IsometryKind::Translation { vector: t })
            }
        } else {
            // (I − M) center = t
            let (p, q, r, s) = (1.0 - a, -b, -c, 1.0 - d);
            let det = p * s - q * r;
            let center = Point2::new((s * t.x - q * t.y) / det, (p * t.y - r * t.x) / det);
            Ok(IsometryKind::Rotation {
                center,
                angle: normalize_dir(angle),
            })
        }
    } else {
        // M = [[cos 2φ, sin 2φ], [sin 2φ, −cos 2φ]]
        let phi = libm::atan2(c, a) / 2.0;
        let u = Point2::from_angle(phi);
        let n = u.perp();
        let shift = t.dot(u);
        let line = Line {
            normal: n,
            offset: t.dot(n) / 2.0,
        };
        if shift.abs() > ISOMETRY_EPS {
            Ok(IsometryKind::Glide { line, shift })
        } else {
            Ok(IsometryKind::Reflection { line })
        }
    }
}

impl Isometry {
    pub fn from_affine(raw: Affine) -> Result<Isometry, GeomError> {
        Ok(Isometry {
            kind: classify_isometry(&raw)?,
            raw,
        })
    }

    pub fn then(&self, next: &Isometry) -> Result<Isometry, GeomError> {
        Isometry::from_affine(next.raw.after(&self.raw))
    }
}

/// Reflect across `lines[0]` first, then `lines[1]`, and so on.
pub fn compose_reflections(lines: &[Line]) -> Result<Isometry, GeomError> {
    if lines.is_empty() {
        return Err(GeomError::EmptyInput);
    }
    let raw = lines.iter().fold(Affine::IDENTITY, |acc, l| {
        Affine::reflection(l).after(&acc)
    });
    Isometry::from_affine(raw)
}
