//! Factorization on random sparse polynomials: never more occurrences than
//! the expanded form, always the same polynomial, and sound under intervals.

use fmtetra::exprops::{expand_verify, greedy_factor, parse_poly, SparsePoly};
use fmtetra::interval::Interval;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

const NVARS: usize = 4;

fn poly() -> impl Strategy<Value = SparsePoly> {
    let term = (prop::collection::vec(0u32..4, NVARS), -6i64..=6);
    prop::collection::vec(term, 1..9).prop_map(|terms| {
        SparsePoly::from_terms(SparsePoly::default_names(NVARS), terms.into_iter().map(|(e, c)| (e, BigRational::from_integer(BigInt::from(c)))))
    })
}

fn boxes() -> impl Strategy<Value = Vec<Interval>> {
    prop::collection::vec((-3.0f64..3.0, 0.0f64..0.5).prop_map(|(m, w)| Interval::new(m - w, m + w)), NVARS)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn greedy_is_equivalent_and_no_longer(p in poly()) {
        let naive = p.naive_tree();
        let g = greedy_factor(&p);
        prop_assert!(g.occurrences() <= naive.occurrences(), "{} vs {}", g.display(p.names()), naive.display(p.names()));
        prop_assert!(expand_verify(&g, &p));
        // printed forms parse back to the same polynomial
        let back = parse_poly(&g.display(p.names()).to_string()).unwrap();
        prop_assert_eq!(back, parse_poly(&naive.display(p.names()).to_string()).unwrap());
    }

    #[test]
    fn greedy_enclosure_contains_point_values(p in poly(), b in boxes(), t in prop::collection::vec(0.0f64..=1.0, NVARS)) {
        let g = greedy_factor(&p);
        let point: Vec<Interval> = b.iter().zip(&t).map(|(x, s)| Interval::point((x.lo() + s * (x.hi() - x.lo())).clamp(x.lo(), x.hi()))).collect();
        let (Some(enc), Some(val)) = (g.eval(&b), p.naive_tree().eval(&point)) else { return Ok(()) };
        prop_assert!(val.overlaps(enc), "{val:?} outside {enc:?}");
    }
}
