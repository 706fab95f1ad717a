//! Certified neighbourhoods of the five locally optimal tetrahedra.
//!
//! Around a tight optimum every edge can only grow, so a strictly negative
//! density gradient on T* + [0, ε]⁶ shows that T* is the densest point of
//! the box. Around a stretched optimum the stretched edges may also shrink,
//! and the certificate is a strictly positive gradient of
//! f = R − α·δ, where R is the support radius and
//! α(T) = R(T*)/δ(T*) · Π (e*_i / e_i)^k_i.

use std::fmt;

use num_rational::BigRational;

use crate::geometry::{density, density_of, small_radius, EdgeLengths, Edges, Radii, TypeTag};
use crate::interval::{enclose_rational, Interval};
use crate::scalar::{DualInterval, Scalar};
use crate::support_sphere::{support_radius, support_radius_of};

/// A locally optimal tetrahedron, expressed in the vertex frame used by
/// its certificate.
#[derive(Clone, Copy, Debug)]
pub struct OptimalTetra {
    pub tag: TypeTag,
    pub radii: Radii,
    pub edges: EdgeLengths,
    /// Edges that are longer than the sum of their radii.
    pub stretched: [bool; 6],
    pub delta: Interval,
}

/// Length of the stretched edge between two unit spheres: 4√(2r/(1+2r)).
pub fn stretched_111r_edge(r: Interval) -> Interval {
    ((r * 2.0) / (r * 2.0 + 1.0)).sqrt().expect("positive") * 4.0
}

/// Length of the two stretched edges of the small optimum: r√(2√6+6).
pub fn stretched_rrrr_edge(r: Interval) -> Interval {
    let s6 = Interval::point(6.0).sqrt().expect("positive");
    (s6 * 2.0 + 6.0).sqrt().expect("positive") * r
}

impl OptimalTetra {
    pub fn of(tag: TypeTag) -> OptimalTetra {
        let r = small_radius();
        let (radii, stretched) = match tag {
            // the stretched edge cd joins two unit spheres; B is the small one
            TypeTag::T111r => (Radii::from_pattern([true, false, true, true]), [false, false, false, false, false, true]),
            TypeTag::Trrrr => (Radii::of_type(tag), [false, false, false, false, true, true]),
            _ => (Radii::of_type(tag), [false; 6]),
        };
        let mut edges = radii.edge_sums();
        for (i, s) in stretched.iter().enumerate() {
            if *s {
                edges[i] = match tag {
                    TypeTag::T111r => stretched_111r_edge(r),
                    _ => stretched_rrrr_edge(r),
                };
            }
        }
        let delta = density(&edges, &radii);
        OptimalTetra { tag, radii, edges, stretched, delta }
    }

    pub fn is_tight(&self) -> bool {
        !self.stretched.iter().any(|&s| s)
    }

    /// T* + B_ε: tight edges may grow by ε, stretched edges move by ±ε.
    pub fn neighbourhood(&self, eps: Interval) -> EdgeLengths {
        std::array::from_fn(|i| {
            let lo = if self.stretched[i] { -eps.hi() } else { 0.0 };
            self.edges[i] + Interval::new(lo, eps.hi())
        })
    }

    /// Support radius at T*.
    pub fn radius(&self) -> Interval {
        support_radius(&self.edges, &self.radii).expect("optimum has a support sphere")
    }
}

/// Published neighbourhood sizes and exponent vectors.
pub fn published_epsilon(tag: TypeTag) -> (u64, Option<[i32; 6]>) {
    match tag {
        TypeTag::T1111 => (46, None),
        TypeTag::T11rr => (203, None),
        TypeTag::T1rrr => (148, None),
        TypeTag::Trrrr => (173, Some([35, 35, 58, 40, 35, 35])),
        TypeTag::T111r => (445, Some([20, 80, 80, 40, 40, 160])),
    }
}

#[derive(Clone, Debug)]
pub struct LocalCertificate {
    pub tag: TypeTag,
    pub epsilon: BigRational,
    pub k: Option<[i32; 6]>,
    /// Enclosures of the partial derivatives over the whole box.
    pub gradient: [Interval; 6],
    /// Number of sub-boxes evaluated.
    pub boxes: u64,
    pub verdict: bool,
}

impl fmt::Display for LocalCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type={} epsilon={}", self.tag, self.epsilon)?;
        if let Some(k) = self.k {
            let ks: Vec<String> = k.iter().map(|x| x.to_string()).collect();
            write!(f, " k={}", ks.join(","))?;
        }
        write!(f, " boxes={} {}", self.boxes, if self.verdict { "certified" } else { "failed" })
    }
}

/// α(T) = R*/δ* · Π (e*_i/e_i)^k_i.
pub fn alpha<S: Scalar>(e: &Edges<S>, opt: &OptimalTetra, k: &[i32; 6]) -> S {
    let base = opt.radius() / opt.delta;
    let mut acc = S::constant(base);
    for i in 0..6 {
        if k[i] != 0 {
            let ratio = S::constant(opt.edges[i]) / e[i];
            acc = acc * ratio.powi(k[i]);
        }
    }
    acc
}

/// f = R − α·δ over `e`.
pub fn stretched_objective<S: Scalar>(e: &Edges<S>, opt: &OptimalTetra, k: &[i32; 6]) -> Option<S> {
    let radius = support_radius_of(e, &opt.radii)?;
    let dens = density_of(e, &opt.radii)?;
    Some(radius - alpha(e, opt, k) * dens)
}

fn unknown_gradient() -> [Interval; 6] {
    [Interval::ENTIRE; 6]
}

/// Maximum bisection depth when a single evaluation over the whole box is
/// not conclusive.
pub const MAX_SPLIT_DEPTH: u32 = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sign {
    Negative,
    Positive,
}

impl Sign {
    fn holds(self, g: Interval) -> bool {
        match self {
            Sign::Negative => g.is_negative(),
            Sign::Positive => g.is_positive(),
        }
    }

    /// The opposite sign (or zero) is proven, so no subdivision can help.
    fn refuted(self, g: Interval) -> bool {
        match self {
            Sign::Negative => g.lo() >= 0.0,
            Sign::Positive => g.hi() <= 0.0,
        }
    }
}

struct BoxCheck {
    ok: bool,
    gradient: [Interval; 6],
    boxes: u64,
}

/// Checks that every partial of `grad` has the sign `sign` over `region`,
/// bisecting the widest edge when an evaluation is inconclusive.
fn check_region<F>(region: EdgeLengths, sign: Sign, depth: u32, grad: &F) -> BoxCheck
where
    F: Fn(&EdgeLengths) -> [Interval; 6],
{
    let g = grad(&region);
    if g.iter().all(|&p| sign.holds(p)) {
        return BoxCheck { ok: true, gradient: g, boxes: 1 };
    }
    if depth == 0 || g.iter().any(|&p| sign.refuted(p)) {
        return BoxCheck { ok: false, gradient: g, boxes: 1 };
    }
    let widest = (0..6)
        .filter(|&i| region[i].is_splittable())
        .max_by(|&i, &j| region[i].width().total_cmp(&region[j].width()).then(j.cmp(&i)));
    let Some(i) = widest else {
        return BoxCheck { ok: false, gradient: g, boxes: 1 };
    };
    let (lo, hi) = region[i].bisect().expect("splittable");
    let mut left = region;
    left[i] = lo;
    let first = check_region(left, sign, depth - 1, grad);
    if !first.ok {
        return first;
    }
    let mut right = region;
    right[i] = hi;
    let second = check_region(right, sign, depth - 1, grad);
    BoxCheck {
        ok: second.ok,
        gradient: std::array::from_fn(|k| first.gradient[k].hull(second.gradient[k])),
        boxes: first.boxes + second.boxes,
    }
}

/// Negative density gradient on T* + [0, ε]⁶.
pub fn certify_tight(tag: TypeTag, eps: &BigRational) -> LocalCertificate {
    let opt = OptimalTetra::of(tag);
    assert!(opt.is_tight(), "{tag} has no tight optimum");
    let e = enclose_rational(eps).expect("finite epsilon");
    let grad = |region: &EdgeLengths| {
        density_of(&DualInterval::variables(*region), &opt.radii)
            .map(|d| d.partials)
            .unwrap_or_else(unknown_gradient)
    };
    let check = check_region(opt.neighbourhood(e), Sign::Negative, MAX_SPLIT_DEPTH, &grad);
    LocalCertificate { tag, epsilon: eps.clone(), k: None, gradient: check.gradient, boxes: check.boxes, verdict: check.ok }
}

/// Positive gradient of R − α·δ on the stretched neighbourhood.
pub fn certify_stretched(tag: TypeTag, eps: &BigRational, k: [i32; 6]) -> LocalCertificate {
    let opt = OptimalTetra::of(tag);
    assert!(!opt.is_tight(), "{tag} has no stretched optimum");
    let e = enclose_rational(eps).expect("finite epsilon");
    let region = opt.neighbourhood(e);
    let grad = |region: &EdgeLengths| {
        stretched_objective(&DualInterval::variables(*region), &opt, &k)
            .map(|f| f.partials)
            .unwrap_or_else(unknown_gradient)
    };
    let check = check_region(region, Sign::Positive, MAX_SPLIT_DEPTH, &grad);
    let at_optimum = stretched_objective(&opt.edges, &opt, &k).is_some_and(|f| f.contains_zero());
    let alpha_positive = alpha(&region, &opt, &k).is_positive();
    let verdict = at_optimum && alpha_positive && check.ok;
    LocalCertificate { tag, epsilon: eps.clone(), k: Some(k), gradient: check.gradient, boxes: check.boxes, verdict }
}

/// The published certificate for `tag`.
pub fn certify_published(tag: TypeTag) -> LocalCertificate {
    let (n, k) = published_epsilon(tag);
    let eps = crate::interval::parse_rational(&format!("1/{n}")).expect("valid literal");
    match k {
        None => certify_tight(tag, &eps),
        Some(k) => certify_stretched(tag, &eps, k),
    }
}

/// Certificate for `tag` at `eps`, with exponents `k` for stretched types.
pub fn certify(tag: TypeTag, eps: &BigRational, k: Option<[i32; 6]>) -> LocalCertificate {
    if OptimalTetra::of(tag).is_tight() {
        certify_tight(tag, eps)
    } else {
        certify_stretched(tag, eps, k.unwrap_or([0; 6]))
    }
}

/// Gradient of R − α·δ at the optimum itself. A provably negative
/// component rules out every neighbourhood, whatever its size.
pub fn gradient_at_optimum(tag: TypeTag, k: [i32; 6]) -> [Interval; 6] {
    let opt = OptimalTetra::of(tag);
    stretched_objective(&DualInterval::variables(opt.edges), &opt, &k)
        .map(|f| f.partials)
        .unwrap_or_else(unknown_gradient)
}

/// Smallest n ≤ max_n for which the neighbourhood of size 1/n is certified.
pub fn search_epsilon(tag: TypeTag, k: Option<[i32; 6]>, max_n: u64) -> Option<u64> {
    (1..=max_n).find(|&n| {
        let eps = BigRational::new(1.into(), n.into());
        certify(tag, &eps, k).verdict
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recip(n: u64) -> BigRational {
        BigRational::new(1.into(), n.into())
    }

    #[test]
    fn certified_constants() {
        let r = small_radius();
        let a = stretched_111r_edge(r);
        let b = stretched_rrrr_edge(r);
        assert!(a.contains_literal("2.692454164726219715632").unwrap());
        assert!(b.contains_literal("1.367468188906385366868").unwrap());
        assert!(a.width() < 1e-10 && b.width() < 1e-10);
    }

    #[test]
    fn optimal_densities() {
        let expected = [
            (TypeTag::T1111, "0.7796355700442529378"),
            (TypeTag::T111r, "0.8125420278108348669436005288833522203"),
            (TypeTag::T11rr, "0.8104660328320722321"),
            (TypeTag::T1rrr, "0.8065033181948107140"),
            (TypeTag::Trrrr, "0.7846884540452187572"),
        ];
        for (tag, lit) in expected {
            let d = OptimalTetra::of(tag).delta;
            assert!(d.contains_literal(lit).unwrap(), "{tag}: {d:?}");
            assert!(d.width() < 1e-9);
        }
    }

    #[test]
    fn stretched_optima_touch_radius_bound() {
        for tag in [TypeTag::T111r, TypeTag::Trrrr] {
            let opt = OptimalTetra::of(tag);
            assert!(opt.radius().overlaps(small_radius()), "{tag}");
        }
    }

    #[test]
    fn alpha_examples() {
        let opt = OptimalTetra::of(TypeTag::T111r);
        let base = opt.radius() / opt.delta;
        let k = [20, 80, 80, 40, 40, 160];
        assert!(alpha(&opt.edges, &opt, &k).overlaps(base));
        assert!(alpha(&opt.edges, &opt, &[0; 6]).overlaps(base));
        let mut e = opt.edges;
        e[0] = e[0] * 1.01;
        let scaled = alpha(&e, &opt, &k);
        let expected = base * Interval::point(1.01).powi(20).recip();
        assert!(scaled.overlaps(expected));
    }

    #[test]
    fn tight_certificates() {
        assert!(certify_tight(TypeTag::T1111, &recip(46)).verdict);
        assert!(certify_tight(TypeTag::T11rr, &recip(203)).verdict);
        assert!(certify_tight(TypeTag::T1rrr, &recip(148)).verdict);
        // too coarse: one evaluation straddles zero and bounded bisection
        // does not recover
        let coarse = certify_tight(TypeTag::T1111, &recip(2));
        assert!(!coarse.verdict);
        let opt = OptimalTetra::of(TypeTag::T1111);
        let whole = opt.neighbourhood(Interval::point(0.5));
        let g = density_of(&DualInterval::variables(whole), &opt.radii).unwrap().partials;
        assert!(g.iter().any(|p| p.contains_zero()));
    }

    #[test]
    fn stretched_certificates() {
        assert!(certify_stretched(TypeTag::Trrrr, &recip(173), [35, 35, 58, 40, 35, 35]).verdict);
        assert!(certify_stretched(TypeTag::T111r, &recip(445), [20, 80, 80, 40, 40, 160]).verdict);
        assert!(certify_stretched(TypeTag::Trrrr, &recip(2963), [0; 6]).verdict);
    }

    #[test]
    fn smaller_neighbourhoods_stay_certified() {
        for n in [47, 60, 100] {
            assert!(certify_tight(TypeTag::T1111, &recip(n)).verdict);
        }
        for n in [446, 500, 1000] {
            assert!(certify_stretched(TypeTag::T111r, &recip(n), [20, 80, 80, 40, 40, 160]).verdict);
        }
    }

    #[test]
    fn constant_alpha_fails_for_111r() {
        let g = gradient_at_optimum(TypeTag::T111r, [0; 6]);
        assert!(g.iter().any(|p| p.is_negative()), "{g:?}");
    }
}
