//! Browser demo: single-tetrahedron report, density curves and polynomial
//! rewriting, exported through wasm-bindgen.

use fmtetra::curves::{curves, to_csv};
use fmtetra::exprops::rewrite;
use fmtetra::geometry::{density, is_tetrahedron, volume, EdgeLengths, Radii, Validity};
use fmtetra::interval::Interval;
use fmtetra::support_sphere::{is_fm_block, support_radius, FmVerdict};
use wasm_bindgen::prelude::*;

/// Report for the tetrahedron with edges ab, ac, ad, bc, bd, cd and vertex
/// radii given as "1" or "r" per vertex.
pub fn report(edges: &[f64], radii: &str) -> Result<String, String> {
    let e: EdgeLengths = edges.try_into().map(|a: [f64; 6]| a.map(Interval::point)).map_err(|_| format!("need 6 edge lengths, got {}", edges.len()))?;
    if edges.iter().any(|x| !x.is_finite() || *x <= 0.0) {
        return Err("edge lengths must be positive".into());
    }
    let pattern: Vec<bool> = radii
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| match c {
            '1' => Ok(true),
            'r' | 'R' => Ok(false),
            other => Err(format!("radius must be 1 or r, got {other:?}")),
        })
        .collect::<Result<_, _>>()?;
    let pattern: [bool; 4] = pattern.try_into().map_err(|_| "need 4 vertex radii".to_string())?;
    let radii = Radii::from_pattern(pattern);
    let mut lines = vec![format!("validity: {:?}", is_tetrahedron(&e))];
    if is_tetrahedron(&e) == Validity::No {
        return Ok(lines.join("\n"));
    }
    let fmt = |x: Option<Interval>| x.map_or("none".to_string(), |v| format!("[{:.12}, {:.12}]", v.lo(), v.hi()));
    lines.push(format!("volume: {}", fmt(volume(&e))));
    lines.push(format!("density: {}", fmt(Some(density(&e, &radii)))));
    lines.push(format!("support radius: {}", fmt(support_radius(&e, &radii))));
    let verdict = match is_fm_block(&e, &radii) {
        FmVerdict::NotFm => "not FM",
        FmVerdict::PossiblyFm => "possibly FM",
        FmVerdict::Unknown => "undecided",
    };
    lines.push(format!("support sphere test: {verdict}"));
    Ok(lines.join("\n"))
}

/// Density curves as CSV.
pub fn curves_csv(r_min: f64, r_max: f64, steps: usize) -> Result<String, String> {
    if !(0.0 < r_min && r_min <= r_max && r_max < 1.0) {
        return Err("need 0 < r-min <= r-max < 1".into());
    }
    if !(1..=2000).contains(&steps) {
        return Err("steps must lie in 1..=2000".into());
    }
    Ok(to_csv(&curves(r_min, r_max, steps)))
}

/// Rewritten polynomials, one per input line.
pub fn rewrite_text(text: &str) -> Result<String, String> {
    let rows = rewrite(text).map_err(|e| e.to_string())?;
    Ok(rows.iter().map(|r| r.to_string()).collect::<Vec<_>>().join("\n"))
}

fn or_error(r: Result<String, String>) -> String {
    r.unwrap_or_else(|e| format!("error: {e}"))
}

#[wasm_bindgen]
pub fn tetra_report(edges: &[f64], radii: &str) -> String {
    or_error(report(edges, radii))
}

#[wasm_bindgen]
pub fn density_curves(r_min: f64, r_max: f64, steps: usize) -> String {
    or_error(curves_csv(r_min, r_max, steps))
}

#[wasm_bindgen]
pub fn rewrite_polynomials(text: &str) -> String {
    or_error(rewrite_text(text))
}
