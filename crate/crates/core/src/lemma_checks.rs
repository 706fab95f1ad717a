//! Certified checks of the auxiliary inequalities and identities used in
//! reducing the search to one-contact tetrahedra.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geometry::{small_radius, TypeTag};
use crate::interval::Interval;
use crate::local_opt::OptimalTetra;
use crate::support_sphere::{radius_from_coeffs, QuadCoeffs};

#[derive(Clone, Copy, Debug)]
pub struct SlidingInstance {
    pub ra: Interval,
    pub rb: Interval,
    pub rc: Interval,
    pub delta: Interval,
}

impl SlidingInstance {
    /// d with δ·d³ = 1.
    pub fn d(&self) -> Interval {
        self.delta.cbrt().recip()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SlidingResult {
    pub lhs: Interval,
    pub rhs: Interval,
    /// lower(lhs) > upper(rhs)
    pub holds: bool,
}

/// (r_B+r_C)(r_A+(1−d)max(r_B,r_C))² / (12(1+r)) against
/// d·min(r_B,r_C)(d−1)²(r_B+r_C)² / (2 min(r_A,r_B,r_C)).
pub fn check_sliding(inst: &SlidingInstance) -> SlidingResult {
    let r = small_radius();
    let d = inst.d();
    let SlidingInstance { ra, rb, rc, .. } = *inst;
    let sum = rb + rc;
    let lhs = sum * (ra + (-d + 1.0) * rb.max(rc)).sqr() / ((r + 1.0) * 12.0);
    let rhs = d * rb.min(rc) * (d - 1.0).sqr() * sum.sqr() / (ra.min(rb).min(rc) * 2.0);
    SlidingResult { lhs, rhs, holds: lhs.lo() > rhs.hi() }
}

#[derive(Clone, Copy, Debug)]
pub struct SlidingRow {
    pub tag: TypeTag,
    /// Large (true) or small radius at the slid vertex A and at B, C.
    pub pattern: [bool; 3],
    /// Whether a face of a tetrahedron of this type carries these radii.
    pub occurs_in_type: bool,
    pub result: SlidingResult,
}

impl fmt::Display for SlidingRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: String = self.pattern.iter().map(|&l| if l { '1' } else { 'r' }).collect();
        write!(
            f,
            "type={} radii={} lhs={:.6e} rhs={:.6e} occurs={} {}",
            self.tag,
            p,
            self.result.lhs.mid(),
            self.result.rhs.mid(),
            self.occurs_in_type,
            if self.result.holds { "pass" } else { "FAIL" }
        )
    }
}

/// Every radius pattern in {1, r}³ against every optimal density.
pub fn sliding_table() -> Vec<SlidingRow> {
    let r = small_radius();
    let mut rows = Vec::new();
    for tag in TypeTag::ALL {
        let delta = OptimalTetra::of(tag).delta;
        for mask in 0..8u32 {
            let pattern = [mask & 4 == 0, mask & 2 == 0, mask & 1 == 0];
            let radius = |large: bool| if large { Interval::ONE } else { r };
            let inst = SlidingInstance { ra: radius(pattern[0]), rb: radius(pattern[1]), rc: radius(pattern[2]), delta };
            let large = pattern.iter().filter(|&&l| l).count();
            let occurs_in_type = large <= tag.large_count() && 3 - large <= 4 - tag.large_count();
            rows.push(SlidingRow { tag, pattern, occurs_in_type, result: check_sliding(&inst) });
        }
    }
    rows
}

/// Quadratic in R for a sphere tangent to three spheres on a triangle,
/// its centre at height z above the plane of the triangle.
#[derive(Clone, Copy, Debug)]
pub struct TriangleSupportPoly {
    pub a: Interval,
    pub b: Interval,
    pub c: Interval,
    /// Terms c₀..c₄ whose sum is c(0).
    pub c_terms: [Interval; 5],
    /// 4·area² of the triangle, the Gram determinant of AB and AC.
    pub gram_det: Interval,
}

impl TriangleSupportPoly {
    pub fn coeffs(&self) -> QuadCoeffs {
        QuadCoeffs { a: self.a, b: self.b, c: self.c }
    }

    /// Smallest positive root.
    pub fn radius(&self) -> Option<Interval> {
        radius_from_coeffs(&self.coeffs())
    }

    /// e in Δ(z) = e·z² + Δ(0).
    pub fn e(&self) -> Interval {
        self.a * self.gram_det * 16.0
    }
}

/// Edges (ab, ac, bc), radii (r_A, r_B, r_C).
///
/// With A at the origin and the centre O = p + z·n, the tangency conditions
/// at B and C are linear in p and R, and |O|² = (r_A+R)² gives
/// (α+βR)ᵀ adj(G)(α+βR) + det(G)(z² − (r_A+R)²) = 0 for the 2×2 Gram
/// matrix G of AB and AC. The polynomial is scaled by −4.
pub fn triangle_support_poly(edges: [Interval; 3], radii: [Interval; 3], z: Interval) -> TriangleSupportPoly {
    let [ab, ac, bc] = edges;
    let [ra, rb, rc] = radii;
    let (x_ab, x_ac, x_bc) = (ab.sqr(), ac.sqr(), bc.sqr());
    let g12 = (x_ab + x_ac - x_bc) / 2.0;
    // adj(G) = [[x_ac, −g12], [−g12, x_ab]]
    let det = x_ab * x_ac - g12.sqr();
    let ra2 = ra.sqr();
    let alpha = [(x_ab + ra2 - rb.sqr()) / 2.0, (x_ac + ra2 - rc.sqr()) / 2.0];
    let beta = [ra - rb, ra - rc];
    let form = |u: [Interval; 2], v: [Interval; 2]| u[0] * v[0] * x_ac - (u[0] * v[1] + u[1] * v[0]) * g12 + u[1] * v[1] * x_ab;
    let k = Interval::point(-4.0);
    let a = (form(beta, beta) - det) * k;
    let b = (form(alpha, beta) * 2.0 - det * ra * 2.0) * k;
    let c = (form(alpha, alpha) + det * (z.sqr() - ra2)) * k;

    let (ra4, rb2, rc2) = (ra2.sqr(), rb.sqr(), rc.sqr());
    let c0 = (ra2 + rb2 - x_ab) * (ra2 + rc2 - x_ac) * (rb2 + rc2 - x_bc);
    let c1 = ra2 * (-x_bc.sqr() + x_bc * rb2 * 2.0 - rb2.sqr() + x_bc * rc2 * 2.0 - rc2.sqr());
    let c2 = rb2 * (-x_ac.sqr() + x_ac * rc2 * 2.0 - rc2.sqr() + x_ac * ra2 * 2.0 - ra4);
    let c3 = rc2 * (-x_ab.sqr() + x_ab * ra2 * 2.0 - ra4 + x_ab * rb2 * 2.0 - rb2.sqr());
    let c4 = ra2 * rb2 * rc2 * -2.0;
    TriangleSupportPoly { a, b, c, c_terms: [c0, c1, c2, c3, c4], gram_det: det }
}

/// The two factors of Δ(0)/(−4): the triangle factor with its last term
/// written as (ac + bc − ab), which makes it non-negative, and the sphere
/// factor.
pub fn delta0_factors(edges: [Interval; 3], radii: [Interval; 3]) -> (Interval, Interval) {
    let [ab, ac, bc] = edges;
    let [ra, rb, rc] = radii;
    let tri = (ab + ac + bc) * (ab + ac - bc) * (ab - ac + bc) * (ac + bc - ab);
    let sph = (ab + ra - rb) * (ab - ra + rb) * (ac + ra - rc) * (ac - ra + rc) * (bc + rb - rc) * (bc - rb + rc);
    (tri, sph)
}

#[derive(Clone, Debug, Default)]
pub struct FaceLemmaReport {
    pub samples: usize,
    pub c_negative: usize,
    pub delta0_nonnegative: usize,
    pub decomposition: usize,
    /// Pairs z < z' with a positive root at z' that were checked.
    pub monotone_checked: usize,
    pub monotone: usize,
    /// Of those, pairs where the increase is certified strict.
    pub strictly_increasing: usize,
    pub e_positive: usize,
    pub e_negative: usize,
    pub failures: Vec<String>,
}

impl FaceLemmaReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
            && self.c_negative == self.samples
            && self.delta0_nonnegative == self.samples
            && self.decomposition == self.samples
            && self.monotone == self.monotone_checked
    }

    pub fn both_e_signs(&self) -> bool {
        self.e_positive > 0 && self.e_negative > 0
    }
}

impl fmt::Display for FaceLemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "samples={} c_negative={} delta0_nonnegative={} decomposition={} monotone={}/{} strict_increase={} e_positive={} e_negative={} failures={}",
            self.samples,
            self.c_negative,
            self.delta0_nonnegative,
            self.decomposition,
            self.monotone,
            self.monotone_checked,
            self.strictly_increasing,
            self.e_positive,
            self.e_negative,
            self.failures.len()
        )
    }
}

/// A random triangle of spheres: radii in {1, r}, each edge in
/// [r_X + r_Y, r_X + r_Y + 3], triangle inequalities strict.
pub fn random_triangle(rng: &mut impl Rng) -> ([Interval; 3], [Interval; 3]) {
    let r = small_radius();
    loop {
        let radii: [Interval; 3] = std::array::from_fn(|_| if rng.gen_bool(0.5) { Interval::ONE } else { r });
        let pairs = [(0, 1), (0, 2), (1, 2)];
        let edges: [Interval; 3] = pairs.map(|(i, j)| {
            let s = (radii[i] + radii[j]).hi();
            Interval::point(s + rng.gen_range(0.0..3.0))
        });
        let [ab, ac, bc] = edges.map(|e| e.lo());
        if ab < ac + bc && ac < ab + bc && bc < ab + ac {
            return (edges, radii);
        }
    }
}

/// Randomized check of the sign claims and identities behind the face
/// lemma, on `samples` instances drawn from `seed`.
pub fn check_face_lemmas(samples: usize, seed: u64) -> FaceLemmaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = FaceLemmaReport { samples, ..Default::default() };
    for n in 0..samples {
        let (edges, radii) = random_triangle(&mut rng);
        let z = Interval::point(rng.gen_range(0.0..2.0));
        let z2 = Interval::point(z.lo() + rng.gen_range(0.0..0.5));
        let p = triangle_support_poly(edges, radii, z);
        let p0 = triangle_support_poly(edges, radii, Interval::ZERO);
        let tag = |what: &str| format!("sample {n}: {what} fails for edges {edges:?} radii {radii:?} z={}", z.lo());

        if p.c.is_negative() {
            rep.c_negative += 1;
        } else {
            rep.failures.push(tag("c(z) < 0"));
        }

        let (tri, sph) = delta0_factors(edges, radii);
        let disc0 = p0.b.sqr() - p0.a * p0.c * 4.0;
        if tri.lo() >= 0.0 && sph.is_positive() && disc0.overlaps(tri * sph * 4.0) {
            rep.delta0_nonnegative += 1;
        } else {
            rep.failures.push(tag("Δ(0) ≥ 0"));
        }

        let sum = p0.c_terms.iter().fold(Interval::ZERO, |acc, t| acc + *t);
        if sum.overlaps(p0.c) && sum.overlaps(p.c - z.sqr() * p.gram_det * -4.0) {
            rep.decomposition += 1;
        } else {
            rep.failures.push(tag("c₀+…+c₄ = c(0)"));
        }

        let e = p.e();
        if e.is_positive() {
            rep.e_positive += 1;
        } else if e.is_negative() {
            rep.e_negative += 1;
        }

        let high = triangle_support_poly(edges, radii, z2);
        if let (Some(r_hi), Some(r_lo)) = (high.radius(), p.radius()) {
            rep.monotone_checked += 1;
            if r_hi.hi() >= r_lo.lo() {
                rep.monotone += 1;
                if r_hi.lo() > r_lo.hi() {
                    rep.strictly_increasing += 1;
                }
            } else {
                rep.failures.push(tag("R₊ non-decreasing"));
            }
        }
    }
    rep
}
