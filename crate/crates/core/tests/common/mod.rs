//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use fmtetra::geometry::{volume, EdgeLengths, Radii, EDGE_VERTICES};
use fmtetra::interval::Interval;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type P3 = [f64; 3];

pub fn sub(a: P3, b: P3) -> P3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn dot(a: P3, b: P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross(a: P3, b: P3) -> P3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Integer-coordinate tetrahedron with non-zero volume; returns the points
/// and 6·signed volume exactly.
pub fn random_tetra(rng: &mut ChaCha8Rng) -> ([[i64; 3]; 4], i64) {
    loop {
        let p: [[i64; 3]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-6..=6)));
        let d = |i: usize| [p[i][0] - p[0][0], p[i][1] - p[0][1], p[i][2] - p[0][2]];
        let (a, b, c) = (d(1), d(2), d(3));
        let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
        if det != 0 {
            return (p, det);
        }
    }
}

pub fn as_f64(p: &[[i64; 3]; 4]) -> [P3; 4] {
    p.map(|q| q.map(|x| x as f64))
}

/// Edge enclosures of √(integer squared length).
pub fn edges_of(p: &[[i64; 3]; 4]) -> EdgeLengths {
    EDGE_VERTICES.map(|(i, j)| {
        let s: i64 = (0..3).map(|k| (p[i][k] - p[j][k]).pow(2)).sum();
        Interval::point(s as f64).sqrt().expect("non-negative")
    })
}

/// Girard: Ω = φ₁ + φ₂ + φ₃ − π over the dihedral angles along the three
/// edges at the vertex.
pub fn girard_solid_angle(pts: &[P3; 4], v: usize) -> f64 {
    let others: Vec<usize> = (0..4).filter(|&i| i != v).collect();
    let mut sum = 0.0;
    for k in 0..3 {
        let p = others[k];
        let q = others[(k + 1) % 3];
        let s = others[(k + 2) % 3];
        let axis = sub(pts[p], pts[v]);
        let n1 = cross(axis, sub(pts[q], pts[v]));
        let n2 = cross(axis, sub(pts[s], pts[v]));
        let c = dot(n1, n2) / (dot(n1, n1) * dot(n2, n2)).sqrt();
        sum += c.clamp(-1.0, 1.0).acos();
    }
    sum - std::f64::consts::PI
}

/// Smallest positive R with |O − P_i| = r_i + R, by eliminating O in
/// coordinates and polishing the root with Newton steps.
pub fn coordinate_support_radius(pts: &[P3; 4], radii: &[f64; 4]) -> Option<f64> {
    let p0 = pts[0];
    let rows: Vec<P3> = (1..4).map(|i| sub(pts[i], p0).map(|x| 2.0 * x)).collect();
    let u: Vec<f64> = (1..4).map(|i| dot(pts[i], pts[i]) - dot(p0, p0) + radii[0].powi(2) - radii[i].powi(2)).collect();
    let v: Vec<f64> = (1..4).map(|i| 2.0 * (radii[0] - radii[i])).collect();
    // Cramer's rule for M·o = u and M·w = v
    let det = dot(rows[0], cross(rows[1], rows[2]));
    let solve = |b: &[f64]| -> P3 {
        let col = |k: usize| [rows[0][k], rows[1][k], rows[2][k]];
        let bb = [b[0], b[1], b[2]];
        let (c0, c1, c2) = (col(0), col(1), col(2));
        [dot(bb, cross(c1, c2)) / det, dot(c0, cross(bb, c2)) / det, dot(c0, cross(c1, bb)) / det]
    };
    let o = sub(solve(&u), p0);
    let w = solve(&v);
    let a = dot(w, w) - 1.0;
    let b = 2.0 * (dot(w, o) - radii[0]);
    let c = dot(o, o) - radii[0].powi(2);
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let q = -0.5 * (b + b.signum() * s);
    let mut roots = vec![q / a, c / q];
    roots.retain(|x| x.is_finite() && *x > 0.0);
    let mut x = roots.into_iter().fold(f64::INFINITY, f64::min);
    if !x.is_finite() {
        return None;
    }
    for _ in 0..3 {
        let f = (a * x + b) * x + c;
        let df = 2.0 * a * x + b;
        if df != 0.0 {
            x -= f / df;
        }
    }
    Some(x)
}

/// A random point tetrahedron near a type's tight configuration, with every
/// edge stretched by up to 60%.
pub fn random_edges(rng: &mut ChaCha8Rng, radii: &Radii) -> EdgeLengths {
    loop {
        let e: EdgeLengths = radii.edge_sums().map(|s| Interval::point(s.mid() * rng.gen_range(1.0..1.6)));
        if volume(&e).is_some_and(|v| v.lo() > 1e-2) {
            return e;
        }
    }
}

pub fn perturbed(e: &EdgeLengths, i: usize, h: f64) -> EdgeLengths {
    let mut out = *e;
    out[i] = Interval::point(e[i].mid() + h);
    out
}

/// Central difference with one Richardson step, so the error is O(h⁴) and
/// stays small near flat tetrahedra.
pub fn central_difference(f: impl Fn(&EdgeLengths) -> Option<f64>, e: &EdgeLengths, i: usize) -> Option<f64> {
    let step = |h: f64| Some((f(&perturbed(e, i, h))? - f(&perturbed(e, i, -h))?) / (2.0 * h));
    let h = 1e-5 * e[i].mid();
    Some((4.0 * step(h / 2.0)? - step(h)?) / 3.0)
}

pub fn agrees(dual: Interval, fd: f64) -> bool {
    (dual.mid() - fd).abs() <= 1e-5 * (1.0 + fd.abs()) && dual.width() <= 1e-6 * (1.0 + fd.abs())
}

/// Smallest positive root of one member, in f64.
pub fn member_smallest_positive(a: f64, b: f64, c: f64) -> Option<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let qq = -0.5 * (b + if b >= 0.0 { s } else { -s });
    let mut roots = Vec::new();
    if a != 0.0 {
        roots.push(qq / a);
    }
    if qq != 0.0 {
        roots.push(c / qq);
    }
    roots.into_iter().filter(|x| *x > 0.0 && x.is_finite()).fold(None, |m: Option<f64>, x| Some(m.map_or(x, |m| m.min(x))))
}


pub fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

/// Exact value of a·x² + b·x + c at the double `x`.
pub fn poly_at(a: f64, b: f64, c: f64, x: f64) -> BigRational {
    let x = rat(x);
    rat(a) * &x * &x + rat(b) * &x + rat(c)
}

/// Whether [lo, hi] brackets a root of the member polynomial.
pub fn brackets(a: f64, b: f64, c: f64, lo: f64, hi: f64) -> bool {
    let (pl, ph) = (poly_at(a, b, c, lo), poly_at(a, b, c, hi));
    pl.is_zero() || ph.is_zero() || (pl.is_positive() != ph.is_positive())
}
