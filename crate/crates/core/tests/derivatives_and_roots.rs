//! Forward-mode derivatives against finite differences, and the quadratic
//! solver on degenerate coefficient families.

use fmtetra::geometry::{density, density_of, volume, volume_direct, Radii};
use fmtetra::interval::Interval;
use fmtetra::scalar::DualInterval;
use fmtetra::support_sphere::{radius_from_coeffs, solve_quadratic, support_radius, support_radius_of, QuadCoeffs};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::*;

#[test]
fn dual_partials_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut checked = 0;
    for trial in 0..10_000 {
        let radii = Radii::from_pattern(std::array::from_fn(|_| rng.gen_bool(0.5)));
        let e = random_edges(&mut rng, &radii);
        let vars = DualInterval::variables(e);

        let vol = volume_direct(&vars).expect("valid tetrahedron");
        let dens = density_of(&vars, &radii).expect("valid tetrahedron");
        for i in 0..6 {
            let fd_vol = central_difference(|x| volume(x).map(|v| v.mid()), &e, i).unwrap();
            assert!(agrees(vol.partials[i], fd_vol), "trial {trial} volume ∂{i}: {:?} vs {fd_vol}", vol.partials[i]);
            let fd_dens = central_difference(|x| Some(density(x, &radii).mid()), &e, i).unwrap();
            assert!(agrees(dens.partials[i], fd_dens), "trial {trial} density ∂{i}: {:?} vs {fd_dens}", dens.partials[i]);
        }
        checked += 1;

        // the support radius only when it is a well-separated simple root
        if let (Some(rad), Some(point)) = (support_radius_of(&vars, &radii), support_radius(&e, &radii)) {
            if point.width() < 1e-9 && point.lo() > 1e-3 && point.hi() < 1e2 {
                for i in 0..6 {
                    let Some(fd) = central_difference(|x| support_radius(x, &radii).map(|v| v.mid()), &e, i) else { continue };
                    if rad.partials[i].is_bounded() {
                        assert!(agrees(rad.partials[i], fd), "trial {trial} radius ∂{i}: {:?} vs {fd}", rad.partials[i]);
                    }
                }
            }
        }
    }
    assert_eq!(checked, 10_000);
}

fn q(a: Interval, b: Interval, c: Interval) -> QuadCoeffs {
    QuadCoeffs { a, b, c }
}

#[test]
fn vanishing_leading_coefficient_keeps_the_linear_root() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..2000 {
        let b = rng.gen_range(0.5..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let c = rng.gen_range(-5.0..5.0);
        // small enough that b² > 4·d·|c| keeps both members real
        let d = 10f64.powi(-rng.gen_range(3..12));
        // A straddles zero: the member A = 0 has the root −C/B
        let res = solve_quadratic(&q(Interval::new(-d, d), Interval::point(b), Interval::point(c))).unwrap_or_else(|| panic!("no roots for b={b} c={c} d={d}"));
        assert!(res.x1.contains_rational(&(-rat(c) / rat(b))), "{res:?} for b={b} c={c} d={d}");
        // A a tiny point: x1 brackets the smaller-magnitude root exactly
        let res = solve_quadratic(&q(Interval::point(d), Interval::point(b), Interval::point(c))).expect("real roots");
        assert!(brackets(d, b, c, res.x1.lo(), res.x1.hi()), "{res:?} for a={d} b={b} c={c}");
        assert!((res.x1.mid() + c / b).abs() <= 10.0 * d * (1.0 + (c / b).powi(2)) / b.abs() + 1e-12);
    }
}

#[test]
fn straddling_linear_coefficient_is_unbounded() {
    let res = solve_quadratic(&q(Interval::point(1.0), Interval::new(-1.0, 1.0), Interval::point(-2.0))).unwrap();
    assert_eq!(res.x1, Interval::ENTIRE);
    assert_eq!(res.x2_pos_lb, 0.0);
}

fn coeff() -> impl Strategy<Value = Interval> {
    prop_oneof![
        (-5.0f64..5.0).prop_map(Interval::point),
        (-5.0f64..5.0, 0.0f64..1.0).prop_map(|(m, w)| Interval::new(m - w, m + w)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20_000))]

    /// Every member's smallest positive root lies in the family enclosure,
    /// including families whose B or A straddles zero.
    #[test]
    fn family_radius_contains_member_roots(a in coeff(), b in coeff(), c in coeff(), s in 0.0f64..=1.0, t in 0.0f64..=1.0, u in 0.0f64..=1.0) {
        let pick = |x: Interval, v: f64| (x.lo() + v * (x.hi() - x.lo())).clamp(x.lo(), x.hi());
        let (ma, mb, mc) = (pick(a, s), pick(b, t), pick(c, u));
        if let Some(root) = member_smallest_positive(ma, mb, mc) {
            // keep away from double roots, where the f64 member root is inaccurate
            let disc = mb * mb - 4.0 * ma * mc;
            prop_assume!(disc > 1e-6 * (mb * mb).max(1.0));
            let fam = radius_from_coeffs(&q(a, b, c));
            prop_assert!(fam.is_some(), "no enclosure for member root {root} in {a:?} {b:?} {c:?}");
            let fam = fam.unwrap();
            let tol = 1e-9 * root.max(1.0);
            prop_assert!(fam.lo() - tol <= root && root <= fam.hi() + tol, "{fam:?} misses {root} for {a:?} {b:?} {c:?} at ({ma}, {mb}, {mc})");
        }
    }
}
