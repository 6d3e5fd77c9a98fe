use besselmoments::exact::{self, binomial};
use besselmoments::quadrature::MomentSpec;
use besselmoments::sumrules::{
    alpha_beta_numeric, alpha_numeric, beta_numeric, crandall_numeric, crandall_terms, ladder,
    ladder_product_check, sum_rule_terms, verify_sum_rule, verify_sum_rule_fused, Family,
    LadderKind, SumRuleSpec,
};
use besselmoments::{BoundedReal, PrecisionContext};
use rug::{Float, Integer, Rational};

const Z_CASES: [(u32, u32); 7] = [(2, 1), (3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (6, 1)];
const Y_CASES: [(u32, u32); 5] = [(3, 1), (4, 1), (5, 1), (5, 2), (6, 1)];

fn within(v: &BoundedReal, target: &Float) -> bool {
    let d = Float::with_val(v.prec(), v.value() - target).abs();
    d <= *v.err()
}

#[test]
fn ladder_product_rule_up_to_twelve() {
    for l in 1..12 {
        for m in 1..=12 - l {
            assert!(ladder_product_check(l, m).unwrap(), "({l}, {m})");
        }
    }
}

#[test]
fn ladder_terms_follow_the_binomial_pattern() {
    for l in 1..=9u32 {
        let z = ladder(LadderKind::Zeta, l).unwrap();
        assert_eq!(z.terms.len() as u32, l / 2 + 1);
        for (m, t) in z.terms.iter().enumerate() {
            let m = m as u32;
            let c = binomial(l, 2 * m);
            assert_eq!(t.coeff, if m % 2 == 0 { c } else { -c });
            assert_eq!((t.iota_pow, t.kappa_pow), (l - 2 * m, l + 2 * m));
        }
        let e = ladder(LadderKind::Eta, l).unwrap();
        let expected: Vec<_> = (1..=l / 2 + 1)
            .filter(|m| 2 * m - 1 <= l)
            .map(|m| {
                let c = binomial(l, 2 * m - 1);
                (if m % 2 == 0 { c } else { -c }, l + 1 - 2 * m, l + 2 * m - 1)
            })
            .collect();
        let got: Vec<_> = e.terms.iter().map(|t| (t.coeff.clone(), t.iota_pow, t.kappa_pow)).collect();
        assert_eq!(got, expected, "eta_{l}");
    }
}

#[test]
fn alternating_even_binomials_are_real_part_of_one_plus_i() {
    for n in 0..=20u32 {
        let s: Integer = (0..=n / 2)
            .map(|m| {
                let c = binomial(n, 2 * m);
                if m % 2 == 0 { c } else { -c }
            })
            .sum();
        // Re (1+i)^n = 2^(n/2) cos(n pi / 4)
        let (mut re, mut im) = (Integer::from(1), Integer::new());
        for _ in 0..n {
            let next_re = Integer::from(&re - &im);
            im += &re;
            re = next_re;
        }
        assert_eq!(s, re, "n = {n}");
        if n >= 4 {
            let spec = SumRuleSpec::new(Family::Z, n, 1).unwrap();
            let total: Integer = sum_rule_terms(&spec).unwrap().into_iter().map(|(c, _)| c).sum();
            assert_eq!(total, re);
        }
    }
}

#[test]
fn small_rule_shapes() {
    let terms = sum_rule_terms(&SumRuleSpec::new(Family::Z, 3, 1).unwrap()).unwrap();
    assert_eq!(
        terms,
        vec![
            (Integer::from(1), MomentSpec::new(3, 3, 1).with_pi_power(3)),
            (Integer::from(-3), MomentSpec::new(1, 5, 1).with_pi_power(1)),
        ]
    );
    let terms = sum_rule_terms(&SumRuleSpec::new(Family::Y, 4, 1).unwrap()).unwrap();
    assert_eq!(
        terms,
        vec![
            (Integer::from(-4), MomentSpec::new(3, 5, 1).with_pi_power(3)),
            (Integer::from(4), MomentSpec::new(1, 7, 1).with_pi_power(1)),
        ]
    );
    assert!(SumRuleSpec::new(Family::Y, 2, 1).is_err());
    assert!(SumRuleSpec::new(Family::Z, 3, 2).is_err());
}

#[test]
fn y_rule_is_proportional_to_the_first_crandall_integrand() {
    // A(1) = -(8 / pi^5) Y_{8,2}: each Crandall term is -8 times a Y term with
    // the same moment and five fewer powers of pi.
    let y = sum_rule_terms(&SumRuleSpec::new(Family::Y, 4, 1).unwrap()).unwrap();
    let a = crandall_terms(1).unwrap();
    let y_nonzero: Vec<_> = y.iter().filter(|(c, _)| *c != 0).collect();
    assert_eq!(y_nonzero.len(), a.len());
    for (w, spec) in &a {
        let (c, s) = y_nonzero
            .iter()
            .find(|(_, s)| (s.a, s.b, s.c) == (spec.a, spec.b, spec.c))
            .expect("matching moment");
        assert_eq!(s.pi_power - 5, spec.pi_power);
        assert_eq!(*w, Rational::from(c.clone()) * Rational::from(-8));
    }

    let c = PrecisionContext::new(40).unwrap();
    let yv = verify_sum_rule(&SumRuleSpec::new(Family::Y, 4, 1).unwrap(), &c).unwrap();
    let av = crandall_numeric(1, &c).unwrap();
    let factor = Float::with_val(c.bits(), -8) / Float::with_val(c.bits(), rug::ops::Pow::pow(c.pi(), 5u32));
    let scaled = yv.value.scale_float(&factor);
    let d = Float::with_val(c.bits(), scaled.value() - av.value()).abs();
    assert!(d <= Float::with_val(c.bits(), scaled.err() + av.err()));
}

#[test]
fn z_and_y_rules_vanish() {
    let c = PrecisionContext::new(50).unwrap();
    for (family, cases) in [(Family::Z, &Z_CASES[..]), (Family::Y, &Y_CASES[..])] {
        for &(n, k) in cases {
            let spec = SumRuleSpec::new(family, n, k).unwrap();
            let r = verify_sum_rule(&spec, &c).unwrap();
            assert!(r.pass, "{spec}: {}", r.value);
            assert!(*r.value.err() < 1e-30);
            assert_eq!(r.terms.len(), sum_rule_terms(&spec).unwrap().len());
        }
    }
}

#[test]
fn fused_evaluation_agrees() {
    let c = PrecisionContext::new(40).unwrap();
    for (family, n, k) in [(Family::Z, 2, 1), (Family::Z, 5, 2), (Family::Y, 4, 1), (Family::Y, 6, 1)] {
        let spec = SumRuleSpec::new(family, n, k).unwrap();
        let r = verify_sum_rule_fused(&spec, &c).unwrap();
        assert!(r.pass, "{spec}: {}", r.value);
        assert!(*r.value.err() < 1e-30);
    }
}

#[test]
fn crandall_numbers_by_quadrature() {
    let c = PrecisionContext::new(50).unwrap();
    for n in 1..=5 {
        let v = crandall_numeric(n, &c).unwrap();
        let exact = Float::with_val(c.bits(), &exact::crandall(n).unwrap());
        assert!(within(&v, &exact), "A({n}) = {v}");
        assert!(*v.err() < 1e-25);
    }
}

#[test]
fn alpha_and_beta_integrals_match_exact_values() {
    let c = PrecisionContext::new(40).unwrap();
    for big_m in 1..=4 {
        for n in 1..=3 {
            let v = alpha_beta_numeric(big_m, n, &c).unwrap();
            let e = Float::with_val(c.bits(), &exact::broadhurst_roberts(big_m, n).unwrap());
            assert!(within(&v, &e), "M = {big_m}, n = {n}: {v}");
        }
    }
    let one = c.float(1);
    assert!(within(&alpha_numeric(1, 1, &c).unwrap(), &one));
    assert!(within(&alpha_numeric(2, 1, &c).unwrap(), &one));
    assert!(within(&beta_numeric(1, 1, &c).unwrap(), &one));
}
