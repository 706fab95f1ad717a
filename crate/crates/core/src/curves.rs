//! Densities of the extremal tetrahedra as functions of the small radius.

use std::fmt::{self, Write as _};

use crate::geometry::{density, EdgeLengths, Radii, TypeTag};
use crate::interval::Interval;
use crate::support_sphere::support_radius;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Tight1111,
    Tight11rr,
    Tight1rrr,
    /// Four small spheres, the edges bd and cd stretched
    /// equally until the support radius is r.
    StretchedRrrr,
    /// Radii (1, r, 1, 1), the edge cd between two unit spheres stretched
    /// until the support radius is r.
    Stretched111r,
}

impl Family {
    pub const ALL: [Family; 5] =
        [Family::Tight1111, Family::Tight11rr, Family::Tight1rrr, Family::StretchedRrrr, Family::Stretched111r];

    pub fn name(self) -> &'static str {
        match self {
            Family::Tight1111 => "1111",
            Family::Tight11rr => "11rr",
            Family::Tight1rrr => "1rrr",
            Family::StretchedRrrr => "rrrr_stretched",
            Family::Stretched111r => "111r_stretched",
        }
    }

    fn radii(self, r: Interval) -> Radii {
        match self {
            Family::Tight1111 => Radii::of_type_with(TypeTag::T1111, r),
            Family::Tight11rr => Radii::of_type_with(TypeTag::T11rr, r),
            Family::Tight1rrr => Radii::of_type_with(TypeTag::T1rrr, r),
            Family::StretchedRrrr => Radii::of_type_with(TypeTag::Trrrr, r),
            Family::Stretched111r => Radii([Interval::ONE, r, Interval::ONE, Interval::ONE]),
        }
    }

    fn stretched(self) -> [bool; 6] {
        match self {
            Family::StretchedRrrr => [false, false, false, false, true, true],
            Family::Stretched111r => [false, false, false, false, false, true],
            _ => [false; 6],
        }
    }

    /// The tetrahedron at small radius `r`, or `None` when the stretched
    /// length could not be bracketed.
    pub fn tetrahedron(self, r: Interval) -> Option<(EdgeLengths, Radii)> {
        let radii = self.radii(r);
        let mask = self.stretched();
        let mut edges = radii.edge_sums();
        if mask.iter().any(|&s| s) {
            let len = solve_stretched(&edges, &radii, &mask, r)?;
            for (e, s) in edges.iter_mut().zip(mask) {
                if s {
                    *e = len;
                }
            }
        }
        Some((edges, radii))
    }

    pub fn density(self, r: Interval) -> Option<Interval> {
        let (edges, radii) = self.tetrahedron(r)?;
        let d = density(&edges, &radii);
        d.is_bounded().then_some(d)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const SCAN_STEPS: usize = 256;
const MAX_BISECTIONS: usize = 200;

/// Sign of R(L) − r, if certified.
fn radius_sign(edges: &EdgeLengths, radii: &Radii, mask: &[bool; 6], len: f64, r: Interval) -> Option<bool> {
    let mut e = *edges;
    for (x, &s) in e.iter_mut().zip(mask) {
        if s {
            *x = Interval::point(len);
        }
    }
    let diff = support_radius(&e, radii)? - r;
    if diff.is_positive() {
        Some(true)
    } else if diff.is_negative() {
        Some(false)
    } else {
        None
    }
}

/// Common length of the stretched edges at which the support radius equals
/// `r`: a scan from the tight length up to twice it finds a certified sign
/// change, then bisection narrows it.
pub fn solve_stretched(edges: &EdgeLengths, radii: &Radii, mask: &[bool; 6], r: Interval) -> Option<Interval> {
    let tight = mask.iter().zip(edges).filter(|(s, _)| **s).map(|(_, e)| e.hi()).fold(0.0, f64::max);
    if radius_sign(edges, radii, mask, tight, r) != Some(false) {
        return None;
    }
    let mut lo = tight;
    let mut hi = None;
    for k in 1..=SCAN_STEPS {
        let len = tight * (1.0 + k as f64 / SCAN_STEPS as f64);
        match radius_sign(edges, radii, mask, len, r) {
            Some(true) => {
                hi = Some(len);
                break;
            }
            Some(false) => lo = len,
            None => return None,
        }
    }
    let mut hi = hi?;
    for _ in 0..MAX_BISECTIONS {
        let mid = Interval::new(lo, hi).mid();
        if mid <= lo || mid >= hi {
            break;
        }
        match radius_sign(edges, radii, mask, mid, r) {
            Some(true) => hi = mid,
            Some(false) => lo = mid,
            None => break,
        }
    }
    Some(Interval::new(lo, hi))
}

/// One sampled radius.
#[derive(Clone, Debug)]
pub struct CurveRow {
    pub r: f64,
    pub densities: [Option<Interval>; 5],
}

pub fn curve_row(r: Interval) -> CurveRow {
    CurveRow { r: r.mid(), densities: Family::ALL.map(|f| f.density(r)) }
}

/// `steps` evenly spaced radii from `r_min` to `r_max` inclusive.
pub fn curves(r_min: f64, r_max: f64, steps: usize) -> Vec<CurveRow> {
    let steps = steps.max(1);
    (0..steps)
        .map(|i| {
            let t = if steps == 1 { 0.0 } else { i as f64 / (steps - 1) as f64 };
            curve_row(Interval::point(r_min + (r_max - r_min) * t))
        })
        .collect()
}

pub fn csv_header() -> String {
    let mut h = String::from("r");
    for f in Family::ALL {
        write!(h, ",{0}_mid,{0}_width", f.name()).unwrap();
    }
    h
}

impl fmt::Display for CurveRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.r)?;
        for d in &self.densities {
            match d {
                Some(d) => write!(f, ",{},{:e}", d.mid(), d.width())?,
                None => write!(f, ",,")?,
            }
        }
        Ok(())
    }
}

pub fn to_csv(rows: &[CurveRow]) -> String {
    let mut out = csv_header();
    out.push('\n');
    for row in rows {
        writeln!(out, "{row}").unwrap();
    }
    out
}
