use besselmoments::bessel::{self, i0, k0};
use besselmoments::quadrature::MomentSpec;
use besselmoments::PrecisionContext;
use rug::Float;

fn ctx(digits: u32) -> PrecisionContext {
    PrecisionContext::new(digits).unwrap()
}

fn rel(a: &Float, b: &Float) -> f64 {
    let d = Float::with_val(a.prec(), a - b);
    (d / b).abs().to_f64()
}

#[test]
fn k0_series_agrees_with_schlafli_integral() {
    let c = ctx(50);
    for t in ["0.1", "1", "5", "20"] {
        let t = Float::with_val(c.bits(), Float::parse(t).unwrap());
        let a = k0(&t, &c).unwrap();
        let b = bessel::k0_integral(&t, &c).unwrap();
        let d = Float::with_val(c.bits(), a.value() - b.value()).abs();
        let tol = Float::with_val(c.bits(), a.err() + b.err());
        assert!(d <= tol, "t = {t}: |diff| {d} > {tol}");
        assert!(a.relative_err() < 1e-50);
    }
}

#[test]
fn i0_matches_its_integral_representation() {
    let c = ctx(40);
    for t in [0.5, 3.0, 12.0] {
        let t = c.float(t);
        let a = i0(&t, &c).unwrap();
        let b = bessel::i0_integral(&t, &c).unwrap();
        assert!(rel(a.value(), b.value()) < 1e-38, "t = {t}");
    }
}

#[test]
fn leading_asymptotics() {
    let c = ctx(50);
    let p = c.bits();
    let pi = c.pi().clone();

    let t = c.float(100);
    let lead = Float::with_val(p, t.exp_ref()) / Float::with_val(p, &pi * 200u32).sqrt();
    assert!(rel(i0(&t, &c).unwrap().value(), &lead) < 0.01);

    let t = c.float(200);
    let scaled = Float::with_val(p, k0(&t, &c).unwrap().value() * Float::with_val(p, t.exp_ref()))
        * Float::with_val(p, t.sqrt_ref());
    let target = Float::with_val(p, &pi / 2u32).sqrt();
    assert!(rel(&scaled, &target) < 0.01);
}

#[test]
fn k0_small_argument_logarithm() {
    let c = ctx(50);
    let p = c.bits();
    let t = Float::with_val(p, Float::parse("1e-30").unwrap());
    let v = k0(&t, &c).unwrap();
    let approx = -Float::with_val(p, &t / 2u32).ln() - c.euler_gamma();
    let d = Float::with_val(p, v.value() - &approx).abs();
    assert!(d < 1e-20);
}

#[test]
fn monotone_on_sample_points() {
    let c = ctx(30);
    let ts = [0.01, 0.3, 1.0, 2.5, 7.0, 30.0, 90.0];
    for w in ts.windows(2) {
        let (a, b) = (c.float(w[0]), c.float(w[1]));
        assert!(i0(&a, &c).unwrap().value() < i0(&b, &c).unwrap().value());
        assert!(k0(&a, &c).unwrap().value() > k0(&b, &c).unwrap().value());
    }
    let p = bessel::bessel_point(&c.float(4), &c).unwrap();
    assert!(*p.i0.value() >= 1 && *p.k0.value() > 0);
}

#[test]
fn doubling_guard_digits_keeps_leading_digits() {
    let lo = PrecisionContext::with_digits(40, 15).unwrap();
    let hi = PrecisionContext::with_digits(40, 30).unwrap();
    for t in [0.25, 1.0, 6.0, 45.0] {
        let a = k0(&lo.float(t), &lo).unwrap().value_string(40);
        let b = k0(&hi.float(t), &hi).unwrap().value_string(40);
        assert_eq!(a, b, "k0({t})");
        let a = i0(&lo.float(t), &lo).unwrap().value_string(40);
        let b = i0(&hi.float(t), &hi).unwrap().value_string(40);
        assert_eq!(a, b, "i0({t})");
    }
}

#[test]
fn integrand_examples() {
    let c = ctx(50);
    let one = c.float(1);
    let k = k0(&one, &c).unwrap();
    let sq = bessel::integrand(&MomentSpec::new(0, 2, 0), &one, &c).unwrap();
    assert!(sq.value_string(20).starts_with("1.7726157"));
    assert!(rel(sq.value(), k.powu(2).value()) < 1e-55);

    // I0 K0 ~ -ln t near the origin
    let t = Float::with_val(c.bits(), Float::parse("1e-10").unwrap());
    let v = bessel::integrand(&MomentSpec::new(1, 1, 0), &t, &c).unwrap();
    let ratio = v.value().to_f64() / (1e10f64).ln();
    assert!((ratio - 1.0).abs() < 0.01);

    let three = c.float(3);
    let v = bessel::integrand(&MomentSpec::new(2, 2, 0), &three, &c).unwrap();
    let i = i0(&three, &c).unwrap();
    let k = k0(&three, &c).unwrap();
    let direct = i.powu(2).mul(&k.powu(2));
    assert!(rel(v.value(), direct.value()) < 1e-55);
}

#[test]
fn pi_power_weights_the_integrand() {
    let c = ctx(30);
    let t = c.float(2);
    let plain = bessel::integrand(&MomentSpec::new(1, 3, 1), &t, &c).unwrap();
    let weighted = bessel::integrand(&MomentSpec::new(1, 3, 1).with_pi_power(-2), &t, &c).unwrap();
    let back = Float::with_val(c.bits(), weighted.value() * c.pi()) * c.pi();
    assert!(rel(&back, plain.value()) < 1e-40);
}
