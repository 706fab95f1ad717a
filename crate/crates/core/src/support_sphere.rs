//! The sphere externally tangent to the four spheres of a tetrahedron.
//!
//! With A at the origin and b, c, d the vectors to the other vertices, the
//! tangency conditions |O − X|² = (r_X + R)² reduce, after subtracting the
//! one at A, to the linear system Vᵀ O = α + β R with V = [b c d]. Writing
//! G = VᵀV (computable from edge lengths alone) and H = adj(G), the last
//! condition |O|² = (r_A + R)² becomes
//!
//!   (α + βR)ᵀ H (α + βR) = det(G) · (r_A + R)²,
//!
//! a quadratic in R whose coefficients are assembled below.

use crate::geometry::{cayley_menger, small_radius, squares, EdgeLengths, Edges, Radii, Validity};
use crate::interval::Interval;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadCoeffs<S = Interval> {
    pub a: S,
    pub b: S,
    pub c: S,
}

impl<S: Scalar> QuadCoeffs<S> {
    pub fn eval(&self, r: S) -> S {
        (self.a * r + self.b) * r + self.c
    }

    pub fn values(&self) -> QuadCoeffs<Interval> {
        QuadCoeffs { a: self.a.value(), b: self.b.value(), c: self.c.value() }
    }
}

/// Coefficients of P(R) = aR² + bR + c from the edge lengths.
pub fn quad_coeffs<S: Scalar>(e: &Edges<S>, radii: &Radii) -> QuadCoeffs<S> {
    let x = squares(e);
    let [x0, x1, x2, x3, x4, x5] = x;
    let g11 = x0;
    let g22 = x1;
    let g33 = x2;
    let g12 = (x0 + x1 - x3) / 2.0;
    let g13 = (x0 + x2 - x4) / 2.0;
    let g23 = (x1 + x2 - x5) / 2.0;

    let h11 = g22 * g33 - g23.sqr();
    let h22 = g11 * g33 - g13.sqr();
    let h33 = g11 * g22 - g12.sqr();
    let h12 = g13 * g23 - g12 * g33;
    let h13 = g12 * g23 - g13 * g22;
    let h23 = g12 * g13 - g11 * g23;
    // det G = 36 vol² = CM / 8
    let det = cayley_menger(&x) / 8.0;

    let [ra, rb, rc, rd] = radii.0;
    let ra2 = ra.sqr();
    let alpha = [(x0 + (ra2 - rb.sqr())) / 2.0, (x1 + (ra2 - rc.sqr())) / 2.0, (x2 + (ra2 - rd.sqr())) / 2.0];
    let beta = [ra - rb, ra - rc, ra - rd];

    let h = [[h11, h12, h13], [h12, h22, h23], [h13, h23, h33]];
    // H β, skipping the zero entries of β (all of them for equal radii)
    let hb: [S; 3] = std::array::from_fn(|i| {
        let mut acc = S::constant(Interval::ZERO);
        for (j, bj) in beta.iter().enumerate() {
            if *bj != Interval::ZERO {
                acc = acc + h[i][j] * *bj;
            }
        }
        acc
    });
    let beta_h_beta = hb[0] * beta[0] + hb[1] * beta[1] + hb[2] * beta[2];
    let alpha_h_beta = alpha[0] * hb[0] + alpha[1] * hb[1] + alpha[2] * hb[2];
    let ha0 = h11 * alpha[0] + h12 * alpha[1] + h13 * alpha[2];
    let ha1 = h12 * alpha[0] + h22 * alpha[1] + h23 * alpha[2];
    let ha2 = h13 * alpha[0] + h23 * alpha[1] + h33 * alpha[2];
    let alpha_h_alpha = alpha[0] * ha0 + alpha[1] * ha1 + alpha[2] * ha2;

    QuadCoeffs {
        a: beta_h_beta - det,
        b: alpha_h_beta * 2.0 - det * (ra * 2.0),
        c: alpha_h_alpha - det * ra2,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootResult {
    /// Encloses the root of smaller magnitude.
    pub x1: Interval,
    /// Lower bound on the positive values of the other root; +∞ when it is
    /// never positive.
    pub x2_pos_lb: f64,
}

/// The factor 2/(1 + √(1 − x)) with x restricted to (−∞, 1].
fn root_factor<S: Scalar>(x: S) -> Option<S> {
    let x = x.restrict(Interval::new(f64::NEG_INFINITY, 1.0))?;
    let s = (-x + 1.0).sqrt()?;
    Some(S::constant(Interval::point(2.0)) / (s + 1.0))
}

/// B normalized positive, the three coefficients and the factor f(4AC/B²).
fn normalized<S: Scalar>(q: &QuadCoeffs<S>) -> Option<(S, S, S, S)> {
    let (a, b, c) = if q.b.value().is_negative() { (-q.a, -q.b, -q.c) } else { (q.a, q.b, q.c) };
    let x = a * c * 4.0 / b.sqr();
    Some((a, b, c, root_factor(x)?))
}

/// Certified roots of a quadratic with interval coefficients.
///
/// Returns `None` when the discriminant is provably negative.
pub fn solve_quadratic(q: &QuadCoeffs) -> Option<RootResult> {
    let disc = q.b.sqr() - q.a * q.c * 4.0;
    disc.clip_non_negative()?;
    if q.b.contains_zero() {
        return Some(RootResult { x1: Interval::ENTIRE, x2_pos_lb: 0.0 });
    }
    let Some((a, b, c, f)) = normalized(q) else {
        // 4AC/B² > 1 everywhere means a negative discriminant
        return None;
    };
    let x1 = -(c / b) * f;
    let inv_x2 = -(a / b) * f;
    let x2_pos_lb = if inv_x2.hi() > 0.0 { round_down_recip(inv_x2.hi()) } else { f64::INFINITY };
    Some(RootResult { x1, x2_pos_lb })
}

fn round_down_recip(x: f64) -> f64 {
    (Interval::ONE / Interval::point(x)).lo()
}

/// Enclosure of the other root −(B/A)/f when 0 ∉ A.
fn second_root(q: &QuadCoeffs) -> Option<Interval> {
    let (a, b, _, f) = normalized(q)?;
    Some(-(b / a) / f)
}

/// Classical formula for the roots when B may vanish but A does not.
fn classical_roots(q: &QuadCoeffs) -> Option<(Interval, Interval)> {
    let disc = (q.b.sqr() - q.a * q.c * 4.0).clip_non_negative()?;
    let s = disc.sqrt()?;
    let den = q.a * 2.0;
    Some(((-q.b - s) / den, (-q.b + s) / den))
}

/// Smallest positive root over a family of quadratics, given enclosures of
/// both roots.
fn smallest_positive(r1: Interval, r2: Interval) -> Option<Interval> {
    let pos = |r: Interval| r.clip_non_negative().filter(|p| p.hi() > 0.0);
    match (pos(r1), pos(r2)) {
        (None, None) => None,
        (Some(p), None) | (None, Some(p)) => Some(p),
        (Some(p1), Some(p2)) => {
            // a root that is positive for every member caps the smallest one
            let hi = match (r1.is_positive(), r2.is_positive()) {
                (true, true) => p1.hi().min(p2.hi()),
                (true, false) => p1.hi(),
                (false, true) => p2.hi(),
                (false, false) => p1.hi().max(p2.hi()),
            };
            Some(Interval::new(p1.lo().min(p2.lo()), hi))
        }
    }
}

/// Radius of the support sphere from the quadratic coefficients.
pub fn radius_from_coeffs(q: &QuadCoeffs) -> Option<Interval> {
    solve_quadratic(q)?;
    if !q.a.contains_zero() {
        let (minus, plus) = classical_roots(q)?;
        if q.b.contains_zero() {
            return smallest_positive(minus, plus);
        }
        // (−B + √Δ)/2A is the root of smaller magnitude when B > 0
        let (small, large) = if q.b.is_positive() { (plus, minus) } else { (minus, plus) };
        let RootResult { x1, .. } = solve_quadratic(q)?;
        let x2 = second_root(q)?;
        let r1 = x1.intersect(small).expect("root enclosures must overlap");
        let r2 = x2.intersect(large).expect("root enclosures must overlap");
        return smallest_positive(r1, r2);
    }
    if q.b.contains_zero() {
        return Some(Interval::NON_NEGATIVE);
    }
    // 0 ∈ A: the second root escapes to infinity as A → 0, so only its
    // positive lower bound is known.
    let RootResult { x1, x2_pos_lb } = solve_quadratic(q)?;
    let tail = if x2_pos_lb.is_finite() {
        Interval::new(x2_pos_lb.max(0.0), f64::INFINITY)
    } else {
        // never positive
        Interval::point(-1.0)
    };
    smallest_positive(x1, tail)
}

/// Enclosure of the support-sphere radius of every tetrahedron in the block;
/// `None` when no member has a positive real root.
pub fn support_radius(e: &EdgeLengths, radii: &Radii) -> Option<Interval> {
    radius_from_coeffs(&quad_coeffs(e, radii))
}

/// Support radius as a generic scalar.
///
/// Derivatives flow through the closed formula for the smaller root when A
/// keeps its sign, and through R' = −P_e / P_R otherwise. When that root is
/// not provably the smallest positive one, the derivatives are unknown.
pub fn support_radius_of<S: Scalar>(e: &Edges<S>, radii: &Radii) -> Option<S> {
    let q = quad_coeffs(e, radii);
    let qv = q.values();
    let target = radius_from_coeffs(&qv)?;
    if qv.b.contains_zero() {
        return Some(S::unknown(target));
    }
    let RootResult { x1, x2_pos_lb } = solve_quadratic(&qv)?;
    if !(x1.is_positive() && x1.hi() < x2_pos_lb) {
        return Some(S::unknown(target));
    }
    let r = x1.intersect(target).unwrap_or(x1);
    if qv.a.contains_zero() {
        return Some(implicit_radius(&q, r));
    }
    let (_, b, c, f) = normalized(&q)?;
    let x1 = -(c / b) * f;
    Some(x1.restrict(r).unwrap_or(x1))
}

/// Derivatives by the implicit function theorem, R held in `r`.
fn implicit_radius<S: Scalar>(q: &QuadCoeffs<S>, r: Interval) -> S {
    let dp_dr = q.a.value() * r * 2.0 + q.b.value();
    if dp_dr.contains_zero() {
        return S::unknown(r);
    }
    // with R constant, the partials of P are P_e
    (q.eval(S::constant(r)) / (-dp_dr)).with_value(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FmVerdict {
    NotFm,
    PossiblyFm,
    Unknown,
}

/// Classification against the conditions on FM-tetrahedra with small
/// radius √2 − 1.
pub fn is_fm_block(e: &EdgeLengths, radii: &Radii) -> FmVerdict {
    is_fm_block_with(e, radii, small_radius())
}

/// Same, for an arbitrary bound `r` on the support radius.
pub fn is_fm_block_with(e: &EdgeLengths, radii: &Radii, r: Interval) -> FmVerdict {
    let validity = crate::geometry::is_tetrahedron(e);
    if validity == Validity::No {
        return FmVerdict::NotFm;
    }
    let q = quad_coeffs(e, radii);
    let Some(radius) = radius_from_coeffs(&q) else {
        return FmVerdict::NotFm;
    };
    if radius.lo() > r.hi() {
        return FmVerdict::NotFm;
    }
    if validity == Validity::Yes && radius.hi() < r.lo() {
        FmVerdict::PossiblyFm
    } else {
        FmVerdict::Unknown
    }
}
