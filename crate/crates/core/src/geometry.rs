//! Metric quantities of a tetrahedron given its six edge lengths.
//!
//! Vertices are A, B, C, D and edges are always ordered
//! (ab, ac, ad, bc, bd, cd). Most formulas work on squared edge lengths.

use std::fmt;
use std::str::FromStr;

use crate::interval::Interval;
use crate::scalar::{DualInterval, Scalar};

pub type Edges<S> = [S; 6];
pub type EdgeLengths = Edges<Interval>;

pub const EDGE_NAMES: [&str; 6] = ["ab", "ac", "ad", "bc", "bd", "cd"];
pub const EDGE_VERTICES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the edge joining vertices `i` and `j`.
pub fn edge_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    EDGE_VERTICES.iter().position(|&e| e == (i, j)).expect("distinct vertices")
}

/// Faces as edge triples.
const FACES: [[usize; 3]; 4] = [[0, 1, 3], [0, 2, 4], [1, 2, 5], [3, 4, 5]];

/// Per vertex: the three incident edges p, q, s, then the edges opposite
/// to the pairs (p,q), (p,s), (q,s).
const VERTEX_EDGES: [[usize; 6]; 4] = [
    [0, 1, 2, 3, 4, 5],
    [0, 3, 4, 1, 2, 5],
    [1, 3, 5, 0, 2, 4],
    [2, 4, 5, 0, 1, 3],
];

/// The small radius √2 − 1.
pub fn small_radius() -> Interval {
    Interval::point(2.0).sqrt().expect("positive") - 1.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeTag {
    T1111,
    T111r,
    T11rr,
    T1rrr,
    Trrrr,
}

impl TypeTag {
    pub const ALL: [TypeTag; 5] = [TypeTag::T1111, TypeTag::T111r, TypeTag::T11rr, TypeTag::T1rrr, TypeTag::Trrrr];

    pub fn large_count(self) -> usize {
        match self {
            TypeTag::T1111 => 4,
            TypeTag::T111r => 3,
            TypeTag::T11rr => 2,
            TypeTag::T1rrr => 1,
            TypeTag::Trrrr => 0,
        }
    }

    pub fn from_large_count(n: usize) -> Option<TypeTag> {
        TypeTag::ALL.into_iter().find(|t| t.large_count() == n)
    }

    pub fn name(self) -> &'static str {
        match self {
            TypeTag::T1111 => "1111",
            TypeTag::T111r => "111r",
            TypeTag::T11rr => "11rr",
            TypeTag::T1rrr => "1rrr",
            TypeTag::Trrrr => "rrrr",
        }
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TypeTag {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TypeTag::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown tetrahedron type `{s}`"))
    }
}

/// Sphere radii at A, B, C, D.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Radii(pub [Interval; 4]);

impl Radii {
    /// Radii in non-increasing order for the given type.
    pub fn of_type(tag: TypeTag) -> Radii {
        Self::of_type_with(tag, small_radius())
    }

    /// Same, with an arbitrary small radius.
    pub fn of_type_with(tag: TypeTag, small: Interval) -> Radii {
        let n = tag.large_count();
        Radii(std::array::from_fn(|i| if i < n { Interval::ONE } else { small }))
    }

    /// Radii from a large/small pattern.
    pub fn from_pattern(large: [bool; 4]) -> Radii {
        let r = small_radius();
        Radii(large.map(|l| if l { Interval::ONE } else { r }))
    }

    pub fn tag(&self) -> Option<TypeTag> {
        let n = self.0.iter().filter(|&&x| x == Interval::ONE).count();
        TypeTag::from_large_count(n)
    }

    /// Sum of the radii at the ends of each edge.
    pub fn edge_sums(&self) -> EdgeLengths {
        EDGE_VERTICES.map(|(i, j)| self.0[i] + self.0[j])
    }

    pub fn scaled(&self, k: Interval) -> Radii {
        Radii(self.0.map(|x| x * k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validity {
    Yes,
    No,
    Unknown,
}

pub fn squares<S: Scalar>(e: &Edges<S>) -> Edges<S> {
    e.map(|x| x.sqr())
}

/// 288·vol², from squared edge lengths, in a form with few occurrences of
/// each variable.
pub fn cayley_menger<S: Scalar>(x: &Edges<S>) -> S {
    let [x0, x1, x2, x3, x4, x5] = *x;
    let n1 = x0 + x1 - x3;
    let n2 = x0 + x2 - x4;
    let x04 = x0 * 4.0;
    let t = n1 * n2 - x0 * (x1 + x2 - x5) * 2.0;
    ((n1.sqr() - x04 * x1) * (n2.sqr() - x04 * x2) - t.sqr()) / (x0 * 2.0)
}

pub fn is_tetrahedron(e: &EdgeLengths) -> Validity {
    let mut all_strict = true;
    for face in FACES {
        for k in 0..3 {
            let long = e[face[k]];
            let a = e[face[(k + 1) % 3]];
            let b = e[face[(k + 2) % 3]];
            let slack = a + b - long;
            if slack.is_negative() {
                return Validity::No;
            }
            if !slack.is_positive() {
                all_strict = false;
            }
        }
    }
    let cm = cayley_menger(&squares(e));
    if cm.is_negative() {
        return Validity::No;
    }
    if all_strict && cm.is_positive() {
        Validity::Yes
    } else {
        Validity::Unknown
    }
}

fn volume_from_cm<S: Scalar>(cm: S) -> Option<S> {
    (cm.restrict(Interval::NON_NEGATIVE)? / 288.0).sqrt()
}

/// Volume by direct evaluation; `None` when 288·vol² is provably negative.
pub fn volume_direct<S: Scalar>(e: &Edges<S>) -> Option<S> {
    volume_from_cm(cayley_menger(&squares(e)))
}

/// Cayley–Menger value by the mean value form around the box midpoint.
fn cayley_menger_order1(e: &EdgeLengths) -> Interval {
    let m: EdgeLengths = e.map(|x| Interval::point(x.mid()));
    let centre = cayley_menger(&squares(&m));
    let grad = cayley_menger(&squares(&DualInterval::variables(*e))).partials;
    (0..6).fold(centre, |acc, i| acc + (e[i] - m[i]) * grad[i])
}

/// Volume by the order-1 mean value form.
pub fn volume_order1(e: &EdgeLengths) -> Option<Interval> {
    volume_from_cm(cayley_menger_order1(e))
}

/// Intersection of the direct and order-1 volume enclosures.
pub fn volume(e: &EdgeLengths) -> Option<Interval> {
    let cm = cayley_menger(&squares(e));
    let cm = if e.iter().all(|x| x.is_point()) {
        cm
    } else {
        let refined = cayley_menger_order1(e);
        cm.intersect(refined).expect("volume enclosures must overlap")
    };
    volume_from_cm(cm)
}

/// Denominators of the half-angle tangent formula at each vertex.
pub fn lagrange_denominators<S: Scalar>(e: &Edges<S>, x: &Edges<S>) -> [S; 4] {
    VERTEX_EDGES.map(|[p, q, s, pq, ps, qs]| {
        let half_pq = (x[p] + x[q] - x[pq]) / 2.0;
        let half_ps = (x[p] + x[s] - x[ps]) / 2.0;
        let half_qs = (x[q] + x[s] - x[qs]) / 2.0;
        e[p] * e[q] * e[s] + half_pq * e[s] + half_ps * e[q] + half_qs * e[p]
    })
}

fn solid_angle<S: Scalar>(six_vol: S, den: S) -> S {
    let full = Interval::new(0.0, Interval::two_pi().hi());
    let d = den.value();
    if d.is_positive() {
        let ratio = six_vol / den;
        let omega = ratio.atan() * 2.0;
        // atan(t) <= t
        let cap = Interval::new(0.0, (ratio.value() * 2.0).hi().max(0.0));
        let range = cap.intersect(full).unwrap_or(full);
        omega.restrict(range).unwrap_or_else(|| S::unknown(range))
    } else if d.is_negative() {
        let omega = (six_vol / den).atan() * 2.0 + Interval::two_pi();
        omega.restrict(full).unwrap_or_else(|| S::unknown(full))
    } else {
        S::unknown(full)
    }
}

/// Solid angles at A, B, C, D given a volume enclosure.
pub fn solid_angles_with<S: Scalar>(e: &Edges<S>, x: &Edges<S>, vol: S) -> [S; 4] {
    let six_vol = vol * 6.0;
    lagrange_denominators(e, x).map(|den| solid_angle(six_vol, den))
}

pub fn solid_angles(e: &EdgeLengths) -> [Interval; 4] {
    let full = Interval::new(0.0, Interval::two_pi().hi());
    match volume(e) {
        Some(v) => solid_angles_with(e, &squares(e), v),
        None => [full; 4],
    }
}

fn coverage<S: Scalar>(angles: &[S; 4], radii: &Radii) -> S {
    let mut acc = S::constant(Interval::ZERO);
    for (omega, r) in angles.iter().zip(radii.0) {
        acc = acc + *omega * (r.powi(3) / 3.0);
    }
    acc
}

/// Upper bound Σ r_X³ Ω_X / 3 on the volume of the tetrahedron covered by
/// the spheres.
pub fn covered(e: &EdgeLengths, radii: &Radii) -> Interval {
    coverage(&solid_angles(e), radii)
}

/// Density enclosure; `[0, ∞)` when nothing better can be said.
pub fn density(e: &EdgeLengths, radii: &Radii) -> Interval {
    let Some(vol) = volume(e) else {
        return Interval::NON_NEGATIVE;
    };
    let x = squares(e);
    let dens = lagrange_denominators(e, &x);
    let angles = dens.map(|den| solid_angle(vol * 6.0, den));
    let cov = coverage(&angles, radii);
    let direct = (cov / vol).clip_non_negative().unwrap_or(Interval::NON_NEGATIVE);
    // With all denominators positive, Ω ≤ 12·vol/den cancels the volume.
    if dens.iter().all(|d| d.is_positive()) {
        let mut bound = Interval::ZERO;
        for (den, r) in dens.iter().zip(radii.0) {
            bound = bound + r.powi(3) * 4.0 / *den;
        }
        let linear = Interval::new(0.0, bound.hi().max(0.0));
        return direct.intersect(linear).unwrap_or(linear);
    }
    direct
}

/// Density as a generic scalar, for derivative computations.
pub fn density_of<S: Scalar>(e: &Edges<S>, radii: &Radii) -> Option<S> {
    let vol = volume_direct(e)?;
    let angles = solid_angles_with(e, &squares(e), vol);
    Some(coverage(&angles, radii) / vol)
}

/// cov(T) − δ·vol(T).
pub fn compression(e: &EdgeLengths, radii: &Radii, delta: Interval) -> Interval {
    let vol = volume(e).unwrap_or(Interval::NON_NEGATIVE);
    covered(e, radii) - delta * vol
}

#[derive(Clone, Copy, Debug)]
pub struct TetraQuantities {
    pub volume: Interval,
    pub solid_angles: [Interval; 4],
    pub covered: Interval,
    pub density: Interval,
}

impl TetraQuantities {
    pub fn of(e: &EdgeLengths, radii: &Radii) -> TetraQuantities {
        let solid_angles = solid_angles(e);
        TetraQuantities {
            volume: volume(e).unwrap_or(Interval::ZERO),
            solid_angles,
            covered: coverage(&solid_angles, radii),
            density: density(e, radii),
        }
    }

    pub fn compression(&self, delta: Interval) -> Interval {
        self.covered - delta * self.volume
    }
}
