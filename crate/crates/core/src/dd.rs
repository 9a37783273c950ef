//! Double-double arithmetic for long traces.
//!
//! Directions along a trajectory are updated by `d ↦ 2φ + π − d` thousands
//! of times, and positions are re-derived from the edge parameter at every
//! crossing. In plain `f64` the rounding of both is biased along
//! quasi-periodic orbits, so the error grows linearly with the step count
//! and is then amplified by near-grazing crossings. Carrying a hidden low
//! word keeps both at the last bit of the stored values.

use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const PI_LO: f64 = 1.224_646_799_147_353_2e-16;
const FRAC_PI_2_LO: f64 = 6.123_233_995_736_766e-17;
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

pub const PI_DD: Dd = Dd { hi: PI, lo: PI_LO };
pub const TAU_DD: Dd = Dd { hi: TAU, lo: TAU_LO };
const FRAC_PI_2_DD: Dd = Dd {
    hi: FRAC_PI_2,
    lo: FRAC_PI_2_LO,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, libm::fma(a, b, -p))
}

impl Dd {
    pub const fn new(hi: f64) -> Dd {
        Dd { hi, lo: 0.0 }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }

    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, o.hi);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f(self, k: f64) -> Dd {
        let (p, e) = two_prod(self.hi, k);
        let (hi, lo) = quick_two_sum(p, e + self.lo * k);
        Dd { hi, lo }
    }

    pub fn div_f(self, k: f64) -> Dd {
        let q = self.hi / k;
        let (p, e) = two_prod(q, k);
        let r = (self.hi - p - e + self.lo) / k;
        let (hi, lo) = quick_two_sum(q, r);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f(q2));
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo }.add(Dd::new(q3))
    }

    /// Reduce into `[0, 2π)`, judged on the high word.
    pub fn normalize_dir(self) -> Dd {
        let mut d = self;
        if !d.hi.is_finite() {
            return d;
        }
        let k = libm::floor(d.hi / TAU);
        if k != 0.0 {
            d = d.sub(TAU_DD.mul_f(k));
        }
        while d.hi < 0.0 {
            d = d.add(TAU_DD);
        }
        while d.hi >= TAU {
            d = d.sub(TAU_DD);
        }
        d
    }
}

/// A point with double-double coordinates.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DdPoint {
    pub x: Dd,
    pub y: Dd,
}

impl DdPoint {
    pub fn from_f64(x: f64, y: f64) -> DdPoint {
        DdPoint {
            x: Dd::new(x),
            y: Dd::new(y),
        }
    }

    pub fn add(self, o: DdPoint) -> DdPoint {
        DdPoint {
            x: self.x.add(o.x),
            y: self.y.add(o.y),
        }
    }

    pub fn sub(self, o: DdPoint) -> DdPoint {
        DdPoint {
            x: self.x.sub(o.x),
            y: self.y.sub(o.y),
        }
    }

    pub fn scale(self, k: Dd) -> DdPoint {
        DdPoint {
            x: self.x.mul(k),
            y: self.y.mul(k),
        }
    }

    pub fn dot(self, o: DdPoint) -> Dd {
        self.x.mul(o.x).add(self.y.mul(o.y))
    }

    pub fn cross(self, o: DdPoint) -> Dd {
        self.x.mul(o.y).sub(self.y.mul(o.x))
    }
}

/// `(sin r, cos r)` for `|r| ≤ π/4` by Taylor series.
fn sincos_small(r: Dd) -> (Dd, Dd) {
    let r2 = r.mul(r);
    let (mut s, mut c) = (r, Dd::new(1.0));
    let (mut ts, mut tc) = (r, Dd::new(1.0));
    for i in 1..=14 {
        let k = (2 * i) as f64;
        ts = ts.mul(r2).div_f(-(k * (k + 1.0)));
        tc = tc.mul(r2).div_f(-(k * (k - 1.0)));
        s = s.add(ts);
        c = c.add(tc);
    }
    (s, c)
}

pub fn sincos(x: Dd) -> (Dd, Dd) {
    let k = libm::round(x.hi / FRAC_PI_2);
    let r = x.sub(FRAC_PI_2_DD.mul_f(k));
    let (s, c) = sincos_small(r);
    match (k as i64).rem_euclid(4) {
        0 => (s, c),
        1 => (c, s.neg()),
        2 => (s.neg(), c.neg()),
        _ => (c.neg(), s),
    }
}

/// Direction angle of the vector `(x, y)` to double-double precision.
pub fn atan2(y: f64, x: f64) -> Dd {
    let a = libm::atan2(y, x);
    let (s, c) = sincos(Dd::new(a));
    // a + δ with tan δ = (y cos a − x sin a) / (x cos a + y sin a)
    let num = c.mul_f(y).sub(s.mul_f(x));
    let den = x * c.hi + y * s.hi;
    Dd::new(a).add(num.div_f(den))
}

/// Outgoing direction `2φ + π − d` after crossing a line of direction `φ`.
pub fn refract(d: Dd, phi: Dd) -> Dd {
    phi.add(phi).add(PI_DD).sub(d).normalize_dir()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atan2_matches_f64_and_is_self_consistent() {
        for &(y, x) in &[(1.0, 0.0), (0.5403023058681398, -0.8414709848078965), (-3.0, -4.0), (1e-3, 1.0)] {
            let a = atan2(y, x);
            assert!((a.hi - libm::atan2(y, x)).abs() <= 2.0 * f64::EPSILON * a.hi.abs().max(1.0));
            assert!(a.lo.abs() <= f64::EPSILON * a.hi.abs().max(1e-3));
        }
        // π/4 exactly, to double-double precision
        let q = atan2(1.0, 1.0).sub(PI_DD.div_f(4.0));
        assert!(q.hi.abs() < 1e-31);
    }

    #[test]
    fn division_and_sincos() {
        let third = Dd::new(1.0).div(Dd::new(3.0));
        assert!(third.mul_f(3.0).sub(Dd::new(1.0)).hi.abs() < 1e-31);
        let (s, c) = sincos(PI_DD.div_f(6.0));
        assert!(s.sub(Dd::new(0.5)).hi.abs() < 1e-31);
        assert!(s.mul(s).add(c.mul(c)).sub(Dd::new(1.0)).hi.abs() < 1e-31);
    }

    #[test]
    fn refract_twice_is_identity() {
        let phi = atan2(0.3, 0.7);
        let d = Dd::new(1.2345);
        let back = refract(refract(d, phi), phi);
        assert!(back.sub(d).hi.abs() < 1e-30);
    }
}
