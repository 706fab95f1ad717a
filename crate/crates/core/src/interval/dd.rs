//! Minimal double-double arithmetic used to evaluate elementary functions
//! far below one ulp of error before rounding the result outward.
//!
//! Relative error of each operation is a small multiple of 2^-106 (in the
//! absence of underflow). Callers account for the accumulated error with an
//! explicit bound.

use super::round::two_sum;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn exact_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn new(hi: f64, lo: f64) -> Self {
        Dd { hi, lo }
    }

    pub const fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn add(self, b: Dd) -> Dd {
        let (s, t) = two_sum(self.hi, b.hi);
        let (u, v) = two_sum(self.lo, b.lo);
        let (s, t) = fast_two_sum(s, t + u);
        let (s, t) = fast_two_sum(s, t + v);
        Dd::new(s, t)
    }

    pub fn neg(self) -> Dd {
        Dd::new(-self.hi, -self.lo)
    }

    pub fn sub(self, b: Dd) -> Dd {
        self.add(b.neg())
    }

    pub fn mul(self, b: Dd) -> Dd {
        let (p, e) = exact_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (p, e) = fast_two_sum(p, e);
        Dd::new(p, e)
    }

    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul(Dd::from_f64(q1)));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul(Dd::from_f64(q2)));
        let q3 = r.hi / b.hi;
        let (q, e) = fast_two_sum(q1, q2);
        Dd::new(q, e).add(Dd::from_f64(q3))
    }
}

/// Rounds `v ± err` outward to a pair of doubles, where `err` is a non-negative
/// bound on the absolute error of `v` (assumed much smaller than one ulp).
pub(crate) fn enclose(v: Dd, err: f64) -> (f64, f64) {
    if err == 0.0 && v.lo == 0.0 {
        return (v.hi, v.hi);
    }
    // Inflate so that the rounded `lo -/+ err` below cannot cross the exact value.
    let err = err * (1.0 + f64::EPSILON * 4.0) + v.lo.abs() * f64::EPSILON * 4.0 + f64::MIN_POSITIVE;
    // lower: largest double <= hi + lo - err
    let mut lo = v.hi;
    loop {
        // hi + lo - err - cand >= 0 ?  (hi - cand) is exact when cand is near hi
        let gap = (v.hi - lo) + (v.lo - err);
        if gap >= 0.0 {
            break;
        }
        lo = lo.next_down();
    }
    let mut hi = v.hi;
    loop {
        let gap = (hi - v.hi) - (v.lo + err);
        if gap >= 0.0 {
            break;
        }
        hi = hi.next_up();
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_is_accurate() {
        let t = Dd::from_f64(1.0).div(Dd::from_f64(3.0));
        let back = t.mul(Dd::from_f64(3.0)).sub(Dd::from_f64(1.0));
        assert!((back.hi + back.lo).abs() < 1e-31);
    }

    #[test]
    fn enclose_brackets() {
        let (lo, hi) = enclose(Dd::new(1.0, 1e-20), 1e-25);
        assert_eq!(lo, 1.0);
        assert_eq!(hi, 1.0f64.next_up());
        let (lo, hi) = enclose(Dd::new(1.0, 0.0), 0.0);
        assert_eq!((lo, hi), (1.0, 1.0));
        let (lo, hi) = enclose(Dd::new(1.0, -1e-20), 1e-25);
        assert_eq!(lo, 1.0f64.next_down());
        assert_eq!(hi, 1.0);
    }
}
