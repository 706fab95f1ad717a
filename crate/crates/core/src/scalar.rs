//! Numeric carriers shared by the geometric formulas.
//!
//! The formulas are written once, generically over [`Scalar`], and run either
//! on plain intervals or on [`DualInterval`]s that also enclose the six
//! partial derivatives with respect to the edge lengths.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::interval::Interval;

pub const N_EDGES: usize = 6;

pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<Interval, Output = Self>
    + Sub<Interval, Output = Self>
    + Mul<Interval, Output = Self>
    + Div<Interval, Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn constant(v: Interval) -> Self;

    /// A quantity known only to lie in `range`, with unknown derivatives.
    fn unknown(range: Interval) -> Self;

    fn value(&self) -> Interval;

    /// Replaces the value enclosure, keeping the derivatives. Only sound when
    /// `v` is another enclosure of the same function.
    fn with_value(self, v: Interval) -> Self;

    fn sqr(self) -> Self;

    /// Square root over the non-negative part of the value.
    fn sqrt(self) -> Option<Self>;

    fn atan(self) -> Self;

    fn powi(self, n: i32) -> Self;

    /// Narrows the value to its intersection with `range`.
    fn restrict(self, range: Interval) -> Option<Self> {
        let v = self.value().intersect(range)?;
        Some(self.with_value(v))
    }
}

impl Scalar for Interval {
    fn constant(v: Interval) -> Self {
        v
    }

    fn unknown(range: Interval) -> Self {
        range
    }

    fn value(&self) -> Interval {
        *self
    }

    fn with_value(self, v: Interval) -> Self {
        v
    }

    fn sqr(self) -> Self {
        Interval::sqr(self)
    }

    fn sqrt(self) -> Option<Self> {
        Interval::sqrt(self)
    }

    fn atan(self) -> Self {
        Interval::atan(self)
    }

    fn powi(self, n: i32) -> Self {
        if n >= 0 {
            Interval::powi(self, n as u32)
        } else {
            Interval::powi(self, n.unsigned_abs()).recip()
        }
    }
}

/// Value and gradient enclosures with respect to the six edges.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DualInterval {
    pub value: Interval,
    pub partials: [Interval; N_EDGES],
}

impl DualInterval {
    /// The `index`-th independent variable ranging over `value`.
    pub fn variable(value: Interval, index: usize) -> Self {
        let mut partials = [Interval::ZERO; N_EDGES];
        partials[index] = Interval::ONE;
        DualInterval { value, partials }
    }

    pub fn variables(values: [Interval; N_EDGES]) -> [Self; N_EDGES] {
        std::array::from_fn(|i| Self::variable(values[i], i))
    }

    fn chain(self, value: Interval, deriv: Interval) -> Self {
        DualInterval { value, partials: self.partials.map(|d| d * deriv) }
    }
}

impl Neg for DualInterval {
    type Output = Self;
    fn neg(self) -> Self {
        DualInterval { value: -self.value, partials: self.partials.map(|d| -d) }
    }
}

impl Add for DualInterval {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        DualInterval {
            value: self.value + rhs.value,
            partials: std::array::from_fn(|i| self.partials[i] + rhs.partials[i]),
        }
    }
}

impl Sub for DualInterval {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        DualInterval {
            value: self.value - rhs.value,
            partials: std::array::from_fn(|i| self.partials[i] - rhs.partials[i]),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for DualInterval {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        DualInterval {
            value: self.value * rhs.value,
            partials: std::array::from_fn(|i| self.value * rhs.partials[i] + rhs.value * self.partials[i]),
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for DualInterval {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let q = self.value / rhs.value;
        // (u/v)' = (u' - (u/v) v') / v
        DualInterval {
            value: q,
            partials: std::array::from_fn(|i| (self.partials[i] - q * rhs.partials[i]) / rhs.value),
        }
    }
}

impl Add<Interval> for DualInterval {
    type Output = Self;
    fn add(self, rhs: Interval) -> Self {
        DualInterval { value: self.value + rhs, partials: self.partials }
    }
}

impl Sub<Interval> for DualInterval {
    type Output = Self;
    fn sub(self, rhs: Interval) -> Self {
        DualInterval { value: self.value - rhs, partials: self.partials }
    }
}

impl Mul<Interval> for DualInterval {
    type Output = Self;
    fn mul(self, rhs: Interval) -> Self {
        DualInterval { value: self.value * rhs, partials: self.partials.map(|d| d * rhs) }
    }
}

impl Div<Interval> for DualInterval {
    type Output = Self;
    fn div(self, rhs: Interval) -> Self {
        DualInterval { value: self.value / rhs, partials: self.partials.map(|d| d / rhs) }
    }
}

macro_rules! float_rhs {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<f64> for DualInterval {
            type Output = Self;
            fn $m(self, rhs: f64) -> Self {
                self.$m(Interval::point(rhs))
            }
        }
    )*};
}

float_rhs!(Add add, Sub sub, Mul mul, Div div);

impl Scalar for DualInterval {
    fn constant(v: Interval) -> Self {
        DualInterval { value: v, partials: [Interval::ZERO; N_EDGES] }
    }

    fn unknown(range: Interval) -> Self {
        DualInterval { value: range, partials: [Interval::ENTIRE; N_EDGES] }
    }

    fn value(&self) -> Interval {
        self.value
    }

    fn with_value(self, v: Interval) -> Self {
        DualInterval { value: v, partials: self.partials }
    }

    fn sqr(self) -> Self {
        self.chain(self.value.sqr(), self.value * 2.0)
    }

    fn sqrt(self) -> Option<Self> {
        let s = self.value.sqrt()?;
        Some(self.chain(s, Interval::ONE / (s * 2.0)))
    }

    fn atan(self) -> Self {
        self.chain(self.value.atan(), Interval::ONE / (self.value.sqr() + 1.0))
    }

    fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::constant(Interval::ONE);
        }
        let v = Scalar::powi(self.value, n);
        let d = Scalar::powi(self.value, n - 1) * n as f64;
        self.chain(v, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval<S: Scalar>(x: S, y: S) -> S {
        (x.sqr() * y + x / y).sqrt().unwrap().atan() + y.powi(-2)
    }

    #[test]
    fn derivatives_match_closed_form() {
        let (x0, y0) = (1.3, 0.7);
        let x = DualInterval::variable(Interval::point(x0), 0);
        let y = DualInterval::variable(Interval::point(y0), 1);
        let f = eval(x, y);
        let g = eval(Interval::point(x0), Interval::point(y0));
        assert_eq!(f.value, g);

        // u = x^2 y + x/y, f = atan(sqrt u) + y^-2
        let u: f64 = x0 * x0 * y0 + x0 / y0;
        let outer = 1.0 / (1.0 + u) / (2.0 * u.sqrt());
        let dx = outer * (2.0 * x0 * y0 + 1.0 / y0);
        let dy = outer * (x0 * x0 - x0 / (y0 * y0)) - 2.0 / (y0 * y0 * y0);
        assert!((f.partials[0].mid() - dx).abs() < 1e-13);
        assert!((f.partials[1].mid() - dy).abs() < 1e-13);
        assert_eq!(f.partials[2], Interval::ZERO);
    }

    #[test]
    fn unknown_poisons_derivatives() {
        let a = DualInterval::variable(Interval::point(2.0), 3);
        let b = a * DualInterval::unknown(Interval::new(0.0, 1.0));
        assert_eq!(b.partials[3], Interval::ENTIRE);
    }
}
