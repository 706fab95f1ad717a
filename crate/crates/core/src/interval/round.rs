//! Directed rounding on top of the default round-to-nearest mode.
//!
//! Every primitive computes the nearest result, recovers the exact rounding
//! error with an error-free transformation and moves one ulp outward only when
//! the nearest result is on the wrong side. Outside the range where the
//! transformations are exact we fall back to an unconditional one-ulp step,
//! which is always sound.

const SPLITTER: f64 = 134_217_729.0; // 2^27 + 1
const SAFE_MAX: f64 = 1.0e295;
const SAFE_MIN: f64 = 1.0e-270;

#[inline]
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn split(a: f64) -> (f64, f64) {
    let c = SPLITTER * a;
    let hi = c - (c - a);
    (hi, a - hi)
}

/// Dekker's exact product. Valid when no intermediate overflows or underflows.
#[inline]
pub(crate) fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, err)
}

#[inline]
fn in_safe_range(x: f64) -> bool {
    let m = x.abs();
    m == 0.0 || (SAFE_MIN..SAFE_MAX).contains(&m)
}

#[inline]
fn down_by(s: f64, err: f64) -> f64 {
    if err < 0.0 {
        s.next_down()
    } else {
        s
    }
}

#[inline]
fn up_by(s: f64, err: f64) -> f64 {
    if err > 0.0 {
        s.next_up()
    } else {
        s
    }
}

/// Handles results that overflowed from finite operands. Returns `None` when
/// the nearest result is usable as-is.
#[inline]
fn overflow_down(s: f64, finite_inputs: bool) -> Option<f64> {
    if s.is_infinite() && finite_inputs {
        Some(if s > 0.0 { f64::MAX } else { f64::NEG_INFINITY })
    } else if !s.is_finite() {
        Some(s)
    } else {
        None
    }
}

#[inline]
fn overflow_up(s: f64, finite_inputs: bool) -> Option<f64> {
    if s.is_infinite() && finite_inputs {
        Some(if s < 0.0 { f64::MIN } else { f64::INFINITY })
    } else if !s.is_finite() {
        Some(s)
    } else {
        None
    }
}

pub fn add_down(a: f64, b: f64) -> f64 {
    let (s, err) = two_sum(a, b);
    if let Some(v) = overflow_down(s, a.is_finite() && b.is_finite()) {
        return v;
    }
    down_by(s, err)
}

pub fn add_up(a: f64, b: f64) -> f64 {
    let (s, err) = two_sum(a, b);
    if let Some(v) = overflow_up(s, a.is_finite() && b.is_finite()) {
        return v;
    }
    up_by(s, err)
}

#[inline]
pub fn sub_down(a: f64, b: f64) -> f64 {
    add_down(a, -b)
}

#[inline]
pub fn sub_up(a: f64, b: f64) -> f64 {
    add_up(a, -b)
}

/// Product with the IEEE `0 * inf` case mapped to `0`, which is the correct
/// convention for interval endpoints.
#[inline]
fn raw_mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        0.0
    } else {
        a * b
    }
}

pub fn mul_down(a: f64, b: f64) -> f64 {
    let p = raw_mul(a, b);
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if let Some(v) = overflow_down(p, a.is_finite() && b.is_finite()) {
        return v;
    }
    if in_safe_range(a) && in_safe_range(b) && in_safe_range(p) && p != 0.0 {
        let (_, err) = two_prod(a, b);
        down_by(p, err)
    } else if p == 0.0 && (a > 0.0) == (b > 0.0) {
        0.0
    } else {
        p.next_down()
    }
}

pub fn mul_up(a: f64, b: f64) -> f64 {
    let p = raw_mul(a, b);
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    if let Some(v) = overflow_up(p, a.is_finite() && b.is_finite()) {
        return v;
    }
    if in_safe_range(a) && in_safe_range(b) && in_safe_range(p) && p != 0.0 {
        let (_, err) = two_prod(a, b);
        up_by(p, err)
    } else if p == 0.0 && (a > 0.0) != (b > 0.0) {
        0.0
    } else {
        p.next_up()
    }
}

/// Sign of the exact remainder `a - q*b`, where `q` is the rounded quotient.
#[inline]
fn div_residual(a: f64, b: f64, q: f64) -> f64 {
    let (p, e) = two_prod(q, b);
    (a - p) - e
}

fn div_dir(a: f64, b: f64, upward: bool) -> f64 {
    if a == 0.0 && b != 0.0 {
        return 0.0;
    }
    let q = a / b;
    if q.is_nan() {
        return q;
    }
    if q.is_infinite() || a.is_infinite() || b.is_infinite() {
        if b.is_infinite() && a.is_finite() {
            // Quotient is an exact signed zero or underflowed toward it.
            return if upward {
                if (a > 0.0) == (b > 0.0) {
                    f64::MIN_POSITIVE * f64::EPSILON
                } else {
                    0.0
                }
            } else if (a > 0.0) == (b > 0.0) {
                0.0
            } else {
                -f64::MIN_POSITIVE * f64::EPSILON
            };
        }
        let finite = a.is_finite() && b.is_finite();
        return if upward {
            overflow_up(q, finite).unwrap_or(q)
        } else {
            overflow_down(q, finite).unwrap_or(q)
        };
    }
    if in_safe_range(a) && in_safe_range(b) && in_safe_range(q) && q != 0.0 {
        let r = div_residual(a, b, q);
        // true quotient is q + r/b
        let dir = if b > 0.0 { r } else { -r };
        if upward {
            up_by(q, dir)
        } else {
            down_by(q, dir)
        }
    } else if upward {
        q.next_up()
    } else {
        q.next_down()
    }
}

#[inline]
pub fn div_down(a: f64, b: f64) -> f64 {
    div_dir(a, b, false)
}

#[inline]
pub fn div_up(a: f64, b: f64) -> f64 {
    div_dir(a, b, true)
}

fn sqrt_dir(x: f64, upward: bool) -> f64 {
    debug_assert!(x >= 0.0);
    let s = x.sqrt();
    if x == 0.0 || x.is_infinite() {
        return s;
    }
    if in_safe_range(x) {
        let (p, e) = two_prod(s, s);
        let r = (x - p) - e;
        if upward {
            up_by(s, r)
        } else {
            down_by(s, r)
        }
    } else if upward {
        s.next_up()
    } else {
        s.next_down().max(0.0)
    }
}

#[inline]
pub fn sqrt_down(x: f64) -> f64 {
    sqrt_dir(x, false)
}

#[inline]
pub fn sqrt_up(x: f64) -> f64 {
    sqrt_dir(x, true)
}

/// `x^n` rounded down, for `x >= 0`.
pub fn powi_down(x: f64, n: u32) -> f64 {
    pow_pos(x, n, mul_down)
}

/// `x^n` rounded up, for `x >= 0`.
pub fn powi_up(x: f64, n: u32) -> f64 {
    pow_pos(x, n, mul_up)
}

fn pow_pos(x: f64, mut n: u32, mul: fn(f64, f64) -> f64) -> f64 {
    debug_assert!(x >= 0.0);
    let mut acc = 1.0;
    let mut base = x;
    while n > 0 {
        if n & 1 == 1 {
            acc = mul(acc, base);
        }
        n >>= 1;
        if n > 0 {
            base = mul(base, base);
        }
    }
    acc
}
