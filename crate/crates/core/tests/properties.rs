use exfactor::algebra::{exact_divide, height_bound, BivarPolyZ, Rational, UniPolyZ, Var};
use exfactor::pipeline::{factorize, parse_poly, FactorOptions};
use proptest::prelude::*;

fn bivar(max_deg: u32) -> impl Strategy<Value = BivarPolyZ> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, -9i64..=9), 1..6)
        .prop_map(|t| BivarPolyZ::from_i64_terms(&t))
        .prop_filter("nonzero", |f| !f.is_zero())
}

fn unipoly(max_deg: usize) -> impl Strategy<Value = UniPolyZ> {
    prop::collection::vec(-9i64..=9, 2..=max_deg + 1)
        .prop_map(|c| UniPolyZ::from_i64(&c))
        .prop_filter("degree at least one", |p| p.deg() >= 1)
}

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1u64..=30).prop_map(|(n, d)| Rational::from((n, d)))
}

proptest! {
    #[test]
    fn product_divides_exactly(f in bivar(3), g in bivar(3)) {
        let q = exact_divide(&f.mul(&g), &g).unwrap();
        let back = q.quotient.scale(&q.cofactor.numer().clone());
        prop_assert_eq!(q.cofactor.denom(), &1);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn content_times_primitive(f in bivar(4)) {
        let (c, p) = f.content_primitive().unwrap();
        prop_assert_eq!(p.scale(&c), f);
    }

    #[test]
    fn specialization_is_multiplicative(f in bivar(3), g in bivar(3), r in rational()) {
        for var in [Var::X, Var::Y] {
            let lhs = f.mul(&g).specialize(var, &r);
            let rhs = &f.specialize(var, &r) * &g.specialize(var, &r);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn line_restriction_is_multiplicative(f in bivar(3), g in bivar(3), m in rational(), b in rational()) {
        let lhs = f.mul(&g).restrict_to_line(&m, &b);
        let rhs = &f.restrict_to_line(&m, &b) * &g.restrict_to_line(&m, &b);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_parses_back(f in bivar(5)) {
        prop_assert_eq!(parse_poly(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn factor_heights_within_bound(a in unipoly(4), b in unipoly(4)) {
        let h = height_bound(&(&a * &b));
        prop_assert!(a.height() <= h && b.height() <= h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn factorization_multiplies_back(f in bivar(2), g in bivar(2), seed in 0u64..1000) {
        let prod = f.mul(&g);
        prop_assume!(!prod.is_constant());
        let r = factorize(&prod, &FactorOptions { seed, ..Default::default() }).unwrap();
        prop_assert_eq!(r.product(), prod);
        for (h, _) in &r.factors {
            prop_assert!(h.lc() > 0);
        }
    }
}

#[test]
fn parallel_and_sequential_agree() {
    let f = parse_poly("(x^2+y^2-1)*(x*y-2)*(2*x*y^2-x+5)").unwrap();
    let mut opts = FactorOptions { seed: 3, ..Default::default() };
    let a = factorize(&f, &opts).unwrap();
    opts.tracker.execution = exfactor::par::Execution::Sequential;
    let b = factorize(&f, &opts).unwrap();
    assert_eq!(a.factors, b.factors);
    assert_eq!(a.stats.retries, b.stats.retries);
    assert_eq!(a.stats.max_bits_used, b.stats.max_bits_used);
}
