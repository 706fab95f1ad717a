//! Certified enclosures of the elementary functions the kernel needs.

use super::dd::{enclose, Dd};
use super::round::{mul_down, mul_up};

/// atan(k/8) for k = 0..=8 as double-double constants (error below 2^-106).
const ATAN_TABLE: [(f64, f64); 9] = [
    (0.0, 0.0),
    (0.12435499454676144, -3.1253241424539383e-18),
    (0.24497866312686414, 1.0698755618734451e-17),
    (0.35877067027057225, -2.4623815582638635e-17),
    (0.4636476090008061, 2.2698777452961687e-17),
    (0.5585993153435624, -5.4556305485916264e-18),
    (0.6435011087932844, 1.5834785051444286e-17),
    (0.7188299996216245, -2.1478388444456983e-17),
    (std::f64::consts::FRAC_PI_4, 3.061616997868383e-17),
];

const HALF_PI: Dd = Dd::new(std::f64::consts::FRAC_PI_2, 6.123233995736766e-17);

const SERIES_TERMS: usize = 20;
const TWO_POW_M27: f64 = 7.450580596923828e-9;
const TWO_POW_53: f64 = 9007199254740992.0;
/// Relative error bound of the double-double evaluation (far below 2^-53).
const REL_ERR: f64 = 3.2311742677852644e-27; // 2^-88

fn atan_series(u: Dd) -> (Dd, f64) {
    let u2 = u.mul(u);
    let n = SERIES_TERMS;
    let mut s = Dd::from_f64(1.0).div(Dd::from_f64((2 * n - 1) as f64));
    for k in (0..n - 1).rev() {
        let coef = Dd::from_f64(1.0).div(Dd::from_f64((2 * k + 1) as f64));
        s = coef.sub(u2.mul(s));
    }
    let a = u.hi.abs() * (1.0 + 1e-15);
    let trunc = a.powi(2 * n as i32 + 1) / (2 * n + 1) as f64;
    (u.mul(s), trunc)
}

/// Enclosure of atan(x) for finite x > 0.
fn atan_positive(x: f64) -> (f64, f64) {
    debug_assert!(x > 0.0);
    if x < TWO_POW_M27 {
        // x - x^3/3 < atan(x) < x, and x^3/3 is below half an ulp of x
        return (x.next_down(), x);
    }
    if x > TWO_POW_53 {
        // pi/2 - 1/x < atan(x) < pi/2, with 1/x below one ulp of pi/2
        return (HALF_PI.hi.next_down(), HALF_PI.hi.next_up());
    }
    let invert = x > 1.0;
    let t = if invert {
        Dd::from_f64(1.0).div(Dd::from_f64(x))
    } else {
        Dd::from_f64(x)
    };
    let k = ((t.hi * 8.0).floor() as usize).min(8);
    let c = k as f64 / 8.0;
    let u = if k == 0 {
        t
    } else {
        let num = t.sub(Dd::from_f64(c));
        let den = Dd::from_f64(1.0).add(t.mul(Dd::from_f64(c)));
        num.div(den)
    };
    let (series, trunc) = atan_series(u);
    let (ch, cl) = ATAN_TABLE[k];
    let mut v = Dd::new(ch, cl).add(series);
    if invert {
        v = HALF_PI.sub(v);
    }
    let err = v.hi.abs() * REL_ERR + trunc;
    enclose(v, err)
}

/// Returns `(lo, hi)` with `lo <= atan(x) <= hi`.
pub(crate) fn atan_bounds(x: f64) -> (f64, f64) {
    if x == 0.0 {
        (0.0, 0.0)
    } else if x == f64::INFINITY {
        (HALF_PI.hi, HALF_PI.hi.next_up())
    } else if x == f64::NEG_INFINITY {
        (-HALF_PI.hi.next_up(), -HALF_PI.hi)
    } else if x > 0.0 {
        atan_positive(x)
    } else {
        let (lo, hi) = atan_positive(-x);
        (-hi, -lo)
    }
}

fn cube_up(c: f64) -> f64 {
    if c >= 0.0 {
        mul_up(mul_up(c, c), c)
    } else {
        -mul_down(mul_down(-c, -c), -c)
    }
}

fn cube_down(c: f64) -> f64 {
    if c >= 0.0 {
        mul_down(mul_down(c, c), c)
    } else {
        -mul_up(mul_up(-c, -c), -c)
    }
}

/// Largest double whose certified cube does not exceed `x`.
pub(crate) fn cbrt_down(x: f64) -> f64 {
    if x == 0.0 || x.is_infinite() {
        return x;
    }
    let mut c = x.cbrt();
    while cube_up(c) > x {
        c = c.next_down();
    }
    c
}

/// Smallest double whose certified cube is at least `x`.
pub(crate) fn cbrt_up(x: f64) -> f64 {
    if x == 0.0 || x.is_infinite() {
        return x;
    }
    let mut c = x.cbrt();
    while cube_down(c) < x {
        c = c.next_up();
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_top_is_quarter_pi() {
        assert_eq!(ATAN_TABLE[8].0, std::f64::consts::FRAC_PI_4);
    }

    #[test]
    fn atan_one() {
        let (lo, hi) = atan_bounds(1.0);
        assert!(lo <= std::f64::consts::FRAC_PI_4 && std::f64::consts::FRAC_PI_4 <= hi);
        assert!(hi.next_down() <= lo.next_up());
    }

    #[test]
    fn atan_is_odd_and_monotone() {
        let mut prev = f64::NEG_INFINITY;
        for i in -400..=400 {
            let x = i as f64 * 0.0371;
            let (lo, hi) = atan_bounds(x);
            let (nlo, nhi) = atan_bounds(-x);
            assert_eq!((lo, hi), (-nhi, -nlo));
            assert!(lo <= hi);
            assert!(hi >= prev);
            prev = lo;
            let approx = x.atan();
            assert!((approx - lo).abs() < 1e-15 && (hi - approx).abs() < 1e-15);
        }
    }

    #[test]
    fn cbrt_brackets() {
        for &x in &[2.0, 27.0, 0.001, 1.2830, 1e-10, 12345.678] {
            let lo = cbrt_down(x);
            let hi = cbrt_up(x);
            assert!(lo <= hi);
            assert!(cube_up(lo) <= x);
            assert!(cube_down(hi) >= x);
            assert!(hi.next_down().next_down() <= lo);
        }
        assert_eq!(cbrt_down(27.0), 3.0);
        assert_eq!(cbrt_up(27.0), 3.0);
    }
}
