//! Closed intervals with binary64 endpoints and outward rounding.
//!
//! Every operation returns an interval that contains the exact image of its
//! operands. Empty results (disjoint intersections, square roots of negative
//! intervals) are reported as `None`, never encoded in the endpoints.

mod dd;
mod elementary;
mod parse;
pub mod round;

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use thiserror::Error;

pub use parse::{enclose_rational, parse_rational};

use round::*;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntervalError {
    #[error("invalid numeric literal `{0}`")]
    Literal(String),
    #[error("invalid endpoints [{0}, {1}]")]
    Endpoints(f64, f64),
    #[error("cannot bisect [{0}, {1}]")]
    Bisect(f64, f64),
}

#[derive(Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = f.precision() {
            write!(f, "[{:.*}, {:.*}]", p, self.lo, p, self.hi)
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl Interval {
    pub const ENTIRE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };
    pub const NON_NEGATIVE: Interval = Interval { lo: 0.0, hi: f64::INFINITY };

    /// Panics on NaN endpoints, `lo > hi`, or endpoints that make the
    /// interval contain no real number.
    pub fn new(lo: f64, hi: f64) -> Self {
        Self::try_new(lo, hi).expect("valid interval endpoints")
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            Err(IntervalError::Endpoints(lo, hi))
        } else {
            // normalize signed zeros so that hi/lo comparisons stay simple
            Ok(Interval { lo: lo + 0.0, hi: hi + 0.0 })
        }
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// Narrowest enclosure of a decimal (`"0.1"`, `"2.5e-3"`) or rational
    /// (`"1/3"`) literal.
    pub fn from_point(literal: &str) -> Result<Self, IntervalError> {
        parse::from_literal(literal)
    }

    /// Enclosure of `1/n`.
    pub fn recip_of(n: u64) -> Self {
        Interval::ONE / Interval::point(n as f64)
    }

    #[inline]
    pub fn lo(self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(self) -> f64 {
        self.hi
    }

    /// Upper bound on `hi - lo`.
    pub fn width(self) -> f64 {
        sub_up(self.hi, self.lo)
    }

    /// A double inside the interval, close to its center.
    pub fn mid(self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        if self.lo.is_infinite() || self.hi.is_infinite() {
            return match (self.lo.is_infinite(), self.hi.is_infinite()) {
                (true, true) => 0.0,
                (true, false) => self.hi.min(0.0) - 1.0,
                _ => self.lo.max(0.0) + 1.0,
            };
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    pub fn mag(self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn contains(self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Exact test of whether the decimal or rational `literal` lies inside.
    pub fn contains_literal(self, literal: &str) -> Result<bool, IntervalError> {
        Ok(self.contains_rational(&parse_rational(literal)?))
    }

    pub fn contains_rational(self, q: &BigRational) -> bool {
        parse::le_rational(self.lo, q, true) && parse::le_rational(self.hi, q, false)
    }

    pub fn contains_zero(self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(self, other: Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn overlaps(self, other: Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Strictly positive over the whole interval.
    pub fn is_positive(self) -> bool {
        self.lo > 0.0
    }

    /// Strictly negative over the whole interval.
    pub fn is_negative(self) -> bool {
        self.hi < 0.0
    }

    pub fn is_point(self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Strictly less than `other` everywhere.
    pub fn certainly_lt(self, other: Interval) -> bool {
        self.hi < other.lo
    }

    pub fn intersect(self, other: Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        if lo <= hi {
            Some(Interval { lo, hi })
        } else {
            None
        }
    }

    pub fn hull(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    /// Retains the part of `self` inside `[0, inf)`.
    pub fn clip_non_negative(self) -> Option<Interval> {
        self.intersect(Interval::NON_NEGATIVE)
    }

    pub fn sqr(self) -> Interval {
        if self.lo >= 0.0 {
            Interval { lo: mul_down(self.lo, self.lo), hi: mul_up(self.hi, self.hi) }
        } else if self.hi <= 0.0 {
            Interval { lo: mul_down(self.hi, self.hi), hi: mul_up(self.lo, self.lo) }
        } else {
            let m = self.mag();
            Interval { lo: 0.0, hi: mul_up(m, m) }
        }
    }

    /// Square root of the non-negative part; `None` when the interval lies
    /// entirely below zero.
    pub fn sqrt(self) -> Option<Interval> {
        let c = self.clip_non_negative()?;
        Some(Interval { lo: sqrt_down(c.lo), hi: sqrt_up(c.hi) })
    }

    pub fn cbrt(self) -> Interval {
        Interval { lo: elementary::cbrt_down(self.lo), hi: elementary::cbrt_up(self.hi) }
    }

    pub fn atan(self) -> Interval {
        let lo = elementary::atan_bounds(self.lo).0;
        let hi = elementary::atan_bounds(self.hi).1;
        Interval { lo, hi }
    }

    pub fn recip(self) -> Interval {
        Interval::ONE / self
    }

    pub fn abs(self) -> Interval {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Interval { lo: 0.0, hi: self.mag() }
        }
    }

    pub fn powi(self, n: u32) -> Interval {
        if n == 0 {
            return Interval::ONE;
        }
        if self.lo >= 0.0 {
            Interval { lo: powi_down(self.lo, n), hi: powi_up(self.hi, n) }
        } else if self.hi <= 0.0 {
            let pos = (-self).powi(n);
            if n.is_multiple_of(2) {
                pos
            } else {
                -pos
            }
        } else if n.is_multiple_of(2) {
            Interval { lo: 0.0, hi: powi_up(self.mag(), n) }
        } else {
            Interval { lo: -powi_up(-self.lo, n), hi: powi_up(self.hi, n) }
        }
    }

    pub fn max(self, other: Interval) -> Interval {
        Interval { lo: self.lo.max(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn min(self, other: Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.min(other.hi) }
    }

    /// Splits at a representable interior point. Both halves are strictly
    /// narrower than `self` and their union is `self`.
    pub fn bisect(self) -> Result<(Interval, Interval), IntervalError> {
        if !self.is_bounded() || self.lo >= self.hi {
            return Err(IntervalError::Bisect(self.lo, self.hi));
        }
        let m = self.mid();
        if m <= self.lo || m >= self.hi {
            // adjacent doubles: no interior point
            return Err(IntervalError::Bisect(self.lo, self.hi));
        }
        Ok((Interval { lo: self.lo, hi: m }, Interval { lo: m, hi: self.hi }))
    }

    /// Whether `bisect` would succeed.
    pub fn is_splittable(self) -> bool {
        self.is_bounded() && self.lo < self.hi && self.lo.next_up() < self.hi
    }

    pub fn pi() -> Interval {
        Interval { lo: std::f64::consts::PI, hi: std::f64::consts::PI.next_up() }
    }

    pub fn half_pi() -> Interval {
        Interval { lo: std::f64::consts::FRAC_PI_2, hi: std::f64::consts::FRAC_PI_2.next_up() }
    }

    pub fn two_pi() -> Interval {
        Interval { lo: std::f64::consts::TAU, hi: std::f64::consts::TAU.next_up() }
    }
}

impl From<f64> for Interval {
    fn from(x: f64) -> Self {
        Interval::point(x)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval { lo: add_down(self.lo, rhs.lo), hi: add_up(self.hi, rhs.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval { lo: sub_down(self.lo, rhs.hi), hi: sub_up(self.hi, rhs.lo) }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if a >= 0.0 && c >= 0.0 {
            return Interval { lo: mul_down(a, c), hi: mul_up(b, d) };
        }
        if b <= 0.0 && d <= 0.0 {
            return Interval { lo: mul_down(b, d), hi: mul_up(a, c) };
        }
        if a >= 0.0 && d <= 0.0 {
            return Interval { lo: mul_down(b, c), hi: mul_up(a, d) };
        }
        if b <= 0.0 && c >= 0.0 {
            return Interval { lo: mul_down(a, d), hi: mul_up(b, c) };
        }
        let lo = mul_down(a, c).min(mul_down(a, d)).min(mul_down(b, c)).min(mul_down(b, d));
        let hi = mul_up(a, c).max(mul_up(a, d)).max(mul_up(b, c)).max(mul_up(b, d));
        Interval { lo, hi }
    }
}

impl Div for Interval {
    type Output = Interval;
    /// Division by an interval containing zero yields the entire line.
    fn div(self, rhs: Interval) -> Interval {
        if rhs.contains_zero() {
            return Interval::ENTIRE;
        }
        let (a, b, c, d) = (self.lo, self.hi, rhs.lo, rhs.hi);
        if c > 0.0 {
            if a >= 0.0 {
                Interval { lo: div_down(a, d), hi: div_up(b, c) }
            } else if b <= 0.0 {
                Interval { lo: div_down(a, c), hi: div_up(b, d) }
            } else {
                Interval { lo: div_down(a, c), hi: div_up(b, c) }
            }
        } else if a >= 0.0 {
            Interval { lo: div_down(b, d), hi: div_up(a, c) }
        } else if b <= 0.0 {
            Interval { lo: div_down(b, c), hi: div_up(a, d) }
        } else {
            Interval { lo: div_down(b, d), hi: div_up(a, d) }
        }
    }
}

macro_rules! scalar_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for Interval {
            type Output = Interval;
            fn $m(self, rhs: f64) -> Interval {
                self.$m(Interval::point(rhs))
            }
        }
        impl $tr<Interval> for f64 {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval {
                Interval::point(self).$m(rhs)
            }
        }
    )*};
}

scalar_ops!(Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    #[test]
    fn from_point_literals() {
        assert_eq!(Interval::from_point("0.5").unwrap(), Interval::point(0.5));
        let third = Interval::from_point("1/3").unwrap();
        // the nearest double to 1/3 lies below it
        assert_eq!(third.lo(), 1.0 / 3.0);
        assert_eq!(third.lo().next_up(), third.hi());
        let tenth = Interval::from_point("0.1").unwrap();
        assert!(tenth.contains(0.1));
        assert_eq!(tenth.lo().next_up(), tenth.hi());
        assert!(Interval::from_point("abc").is_err());
        assert!(Interval::from_point("1/0").is_err());
        assert!(Interval::from_point("1e400").is_err());
        assert_eq!(Interval::from_point("-2.5e1").unwrap(), Interval::point(-25.0));
    }

    #[test]
    fn sqrt2_minus_one() {
        let r = Interval::point(2.0).sqrt().unwrap() - 1.0;
        // sqrt(2)-1 = 0.41421356237309504880168872...
        assert!(r.lo() <= 0.414_213_562_373_095_04 && 0.414_213_562_373_095_05 <= r.hi());
        // one ulp of sqrt(2), carried exactly through the subtraction
        assert!(r.width() <= 2.3e-16);
    }

    #[test]
    fn dependency_examples() {
        let x = iv(1.0, 2.0);
        let y = iv(-3.0, -2.0);
        let first = x * y + 3.0 * x + 2.0 * y;
        assert!(iv(-9.0, 0.0).is_subset_of(first));
        let second = (x + 2.0) * (y + 3.0) - 6.0;
        assert!(iv(-6.0, -2.0).is_subset_of(second));
        assert!(second.is_subset_of(iv(-6.001, -1.999)));
        let a = Interval::point(0.1234);
        assert_eq!(a + Interval::ZERO, a);
    }

    #[test]
    fn division_by_zero_straddle() {
        assert_eq!(iv(1.0, 2.0) / iv(-1.0, 1.0), Interval::ENTIRE);
        let q = iv(1.0, 2.0) / iv(4.0, 8.0);
        assert_eq!(q, iv(0.125, 0.5));
        let q = iv(-2.0, 3.0) / iv(-4.0, -1.0);
        assert_eq!(q, iv(-3.0, 2.0));
    }

    #[test]
    fn sqrt_cases() {
        assert_eq!(iv(4.0, 9.0).sqrt().unwrap(), iv(2.0, 3.0));
        assert_eq!(iv(-1.0, 4.0).sqrt().unwrap(), iv(0.0, 2.0));
        assert!(iv(-2.0, -1.0).sqrt().is_none());
        let s = Interval::point(2.0).sqrt().unwrap();
        assert!(s.contains(std::f64::consts::SQRT_2));
    }

    #[test]
    fn atan_cases() {
        let q = Interval::ONE.atan();
        assert!(q.contains(std::f64::consts::FRAC_PI_4));
        assert!(q.hi() <= q.lo().next_up().next_up());
        assert_eq!(Interval::ZERO.atan(), Interval::ZERO);
        let all = Interval::ENTIRE.atan();
        let lim = std::f64::consts::FRAC_PI_2;
        assert!(all.lo() >= -lim.next_up().next_up() && all.hi() <= lim.next_up().next_up());
        assert!(all.lo() <= -lim && all.hi() >= lim);
    }

    #[test]
    fn intersections() {
        assert_eq!(iv(0.0, 2.0).intersect(iv(1.0, 3.0)), Some(iv(1.0, 2.0)));
        assert_eq!(iv(0.0, 1.0).intersect(iv(2.0, 3.0)), None);
        assert_eq!(iv(-1.0, -0.5).intersect(Interval::NON_NEGATIVE), None);
    }

    #[test]
    fn bisection() {
        let (a, b) = iv(0.0, 1.0).bisect().unwrap();
        assert_eq!((a, b), (iv(0.0, 0.5), iv(0.5, 1.0)));
        let r = Interval::point(2.0).sqrt().unwrap() - 1.0;
        let whole = iv(2.0, (2.0 + 2.0 * r).hi());
        let (a, b) = whole.bisect().unwrap();
        assert_eq!(a.hull(b), whole);
        assert_eq!(a.hi(), b.lo());

        // exactly one double lies strictly between 1 and 1 + 2^-51
        let top = 1.0 + f64::EPSILON * 2.0;
        let interior: Vec<f64> = std::iter::successors(Some(1.0f64.next_up()), |x| Some(x.next_up()))
            .take_while(|&x| x < top)
            .collect();
        assert_eq!(interior.len(), 1);
        let (a, b) = iv(1.0, top).bisect().unwrap();
        assert_eq!(a.hi(), interior[0]);
        assert_eq!(b.lo(), interior[0]);

        // adjacent doubles and degenerate or unbounded inputs are rejected
        assert!(iv(1.0, 1.0 + f64::EPSILON).bisect().is_err());
        assert!(iv(1.0, 1.0).bisect().is_err());
        assert!(iv(0.0, f64::INFINITY).bisect().is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(iv(-2.0, 3.0).powi(2), iv(0.0, 9.0));
        assert_eq!(iv(-2.0, 3.0).powi(3), iv(-8.0, 27.0));
        assert_eq!(iv(-3.0, -2.0).powi(3), iv(-27.0, -8.0));
        assert_eq!(iv(-3.0, -2.0).powi(2), iv(4.0, 9.0));
        assert_eq!(iv(-3.0, 2.0).sqr(), iv(0.0, 9.0));
    }

    #[test]
    fn cube_root() {
        let c = Interval::point(8.0).cbrt();
        assert_eq!(c, Interval::point(2.0));
        let c = Interval::point(2.0).cbrt();
        assert!(c.contains(1.259_921_049_894_873_2));
    }
}
