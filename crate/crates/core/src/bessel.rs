//! Modified Bessel functions I0 and K0 at arbitrary precision.
//!
//! Evaluation paths:
//!
//! * ascending series. `I0 = sum (t^2/4)^k/(k!)^2` and
//!   `K0 = -(ln(t/2)+gamma) I0 + sum H_k (t^2/4)^k/(k!)^2`, both accumulated in one
//!   pass. The K0 combination cancels about `2t/ln 2` bits for large `t`, so
//!   the pass runs with that many extra bits.
//! * large-argument expansion, used once `t` is big enough that its smallest
//!   term is below the working epsilon. It delivers the exponentially scaled
//!   values `e^-t I0` and `e^t K0` directly, so products such as `I0 K0` stay
//!   representable at any `t`.
//! * the Schläfli integrals
//!   `I0(t) = (1/pi) int_0^pi e^(t cos th) dth` and `K0(t) = int_0^inf e^(-t cosh u) du`
//!   by double-exponential quadrature, kept as independent oracles.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use crate::bounded::BoundedReal;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::quadrature::engine::{self, QuadratureOptions, Range};
use crate::quadrature::MomentSpec;

/// `e^-t I0(t)` and `e^t K0(t)` at one point.
#[derive(Clone, Debug)]
pub struct ScaledBessel {
    pub t: Float,
    pub i0e: BoundedReal,
    pub k0e: BoundedReal,
}

/// Unscaled `I0(t)` and `K0(t)` at one point.
#[derive(Clone, Debug)]
pub struct BesselPoint {
    pub t: Float,
    pub i0: BoundedReal,
    pub k0: BoundedReal,
}

fn require_finite(t: &Float) -> Result<()> {
    if t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("argument {t} is not finite")))
    }
}

fn certify(value: &BoundedReal, ctx: &PrecisionContext, what: &str) -> Result<()> {
    let bound = Float::with_val(ctx.bits(), value.value().abs_ref()) * ctx.target_tolerance();
    if *value.err() <= bound {
        Ok(())
    } else {
        Err(Error::PrecisionUnreachable {
            target_digits: ctx.target_digits(),
            detail: format!("{what}: error {} exceeds bound", value.err_string()),
        })
    }
}

/// Argument above which the large-`t` expansion is attempted.
fn asymptotic_threshold(ctx: &PrecisionContext) -> f64 {
    f64::from(ctx.bits()) * std::f64::consts::LN_2 / 2.0 + 8.0
}

/// Joint ascending series at extended precision. Returns `(I0, K0)` unscaled
/// at the extended precision; callers round.
fn series_pair(t: &Float, ctx: &PrecisionContext) -> (BoundedReal, Option<BoundedReal>) {
    let tf = t.to_f64();
    let positive = !t.is_zero();
    // Cancellation in K0 costs about log2(I0/K0) bits.
    // ln t from the Float itself: nodes near 0 underflow f64.
    let log_term = if positive {
        let ln_t = Float::with_val(53, t.ln_ref()).to_f64();
        ((ln_t - std::f64::consts::LN_2).abs() + (tf + 1.0).ln() + 2.0).log2()
    } else {
        0.0
    };
    let extra = if positive {
        (2.0 * tf * std::f64::consts::LOG2_E + log_term).ceil().max(0.0) as u32 + 16
    } else {
        8
    };
    let p = ctx.bits() + extra;
    let eps = Float::with_val(p, 1) >> (p - 1);

    let t = Float::with_val(p, t);
    let q = Float::with_val(p, t.square_ref()) >> 2;
    let mut term = Float::with_val(p, 1);
    let mut sum_i = Float::with_val(p, 1);
    let mut sum_h = Float::new(p);
    let mut harmonic = Float::new(p);
    let mut k: u32 = 0;
    loop {
        k += 1;
        term *= &q;
        term /= k;
        term /= k;
        harmonic += Float::with_val(p, 1) / k;
        sum_i += &term;
        sum_h += Float::with_val(p, &harmonic * &term);
        let past_peak = Float::with_val(p, k) * k > Float::with_val(p, &q * 2u32);
        if past_peak && term <= Float::with_val(p, &sum_i * &eps) {
            break;
        }
        if term.is_zero() {
            break;
        }
    }
    // Ratio after the stopping index is at most 1/2, so the tail is below `term`.
    let tail_i = term.clone();
    let rounding = Float::with_val(p, &sum_i * &eps) * (k + 4);
    let err_i = Float::with_val(p, &tail_i + &rounding);
    let i0 = BoundedReal::new(sum_i.clone(), err_i.clone());
    if !positive {
        return (i0, None);
    }

    let gamma = Float::with_val(p, Constant::Euler);
    let log_half = Float::with_val(p, &t / 2u32).ln();
    let lead = Float::with_val(p, &log_half + &gamma);
    let k0 = Float::with_val(p, &sum_h - Float::with_val(p, &lead * &sum_i));
    let lead_abs = Float::with_val(p, lead.abs_ref());
    let tail_h = Float::with_val(p, &harmonic + 1u32) * &tail_i * 4u32;
    let magnitude = Float::with_val(p, &lead_abs * &sum_i) + &sum_h;
    let err_k = Float::with_val(p, &lead_abs * &err_i)
        + tail_h
        + Float::with_val(p, &magnitude * &eps) * (2 * k + 8);
    (i0, Some(BoundedReal::new(k0, err_k)))
}

/// Large-argument expansion for the scaled pair. `None` when the series
/// starts growing before reaching the working epsilon.
fn asymptotic_pair(t: &Float, ctx: &PrecisionContext) -> Option<(BoundedReal, BoundedReal)> {
    let p = ctx.bits() + 16;
    let eps = Float::with_val(p, 1) >> (ctx.bits() + 4);
    let eight_t = Float::with_val(p, t) * 8u32;
    let mut term = Float::with_val(p, 1);
    let mut sum_i = Float::with_val(p, 1);
    let mut sum_k = Float::with_val(p, 1);
    let mut k: u32 = 0;
    while term > eps {
        let odd = 2 * k + 1;
        let next = Float::with_val(p, &term * odd) * odd / (k + 1) / &eight_t;
        if next >= term || k > 100_000 {
            return None;
        }
        term = next;
        k += 1;
        sum_i += &term;
        if k % 2 == 1 {
            sum_k -= &term;
        } else {
            sum_k += &term;
        }
    }
    let pi = Float::with_val(p, Constant::Pi);
    let rounding = Float::with_val(p, &sum_i * &eps) * (k + 4);
    let two_pi_t = Float::with_val(p, &pi * t) * 2u32;
    let i0e = Float::with_val(p, &sum_i / two_pi_t.sqrt());
    let k_fac = (Float::with_val(p, &pi / t) / 2u32).sqrt();
    let k0e = Float::with_val(p, &sum_k * &k_fac);
    let i_fac = Float::with_val(p, &i0e / &sum_i);
    let err_i = Float::with_val(p, &term * 2u32) + &rounding;
    let err_k = Float::with_val(p, &term + &rounding);
    let bits = ctx.bits();
    let round = |v: Float, e: Float| {
        let v = Float::with_val(bits, v);
        let mut e = Float::with_val(bits, e);
        e += Float::with_val(bits, v.abs_ref()) >> (bits - 1);
        BoundedReal::new(v, e)
    };
    Some((
        round(i0e, err_i * i_fac),
        round(k0e, err_k * k_fac),
    ))
}

fn round_to_working(x: &BoundedReal, ctx: &PrecisionContext) -> BoundedReal {
    let bits = ctx.bits();
    let v = Float::with_val(bits, x.value());
    let mut e = Float::with_val(bits, x.err());
    e += Float::with_val(bits, v.abs_ref()) >> (bits - 1);
    BoundedReal::new(v, e)
}

/// `e^-t I0(t)` and `e^t K0(t)` for `t > 0`.
pub fn scaled_pair(t: &Float, ctx: &PrecisionContext) -> Result<ScaledBessel> {
    require_finite(t)?;
    if *t <= 0 {
        return Err(Error::Domain(format!(
            "K0 needs t > 0, got {}",
            t.to_string_radix(10, Some(10))
        )));
    }
    if t.to_f64() >= asymptotic_threshold(ctx) {
        if let Some((i0e, k0e)) = asymptotic_pair(t, ctx) {
            return Ok(ScaledBessel {
                t: t.clone(),
                i0e,
                k0e,
            });
        }
    }
    let (i0, k0) = series_pair(t, ctx);
    let k0 = k0.expect("t > 0 yields K0");
    let p = i0.prec();
    let tt = Float::with_val(p, t);
    let down = Float::with_val(p, -&tt).exp();
    let up = tt.exp();
    let i0e = i0.scale_float(&down);
    let k0e = k0.scale_float(&up);
    Ok(ScaledBessel {
        t: t.clone(),
        i0e: round_to_working(&i0e, ctx),
        k0e: round_to_working(&k0e, ctx),
    })
}

/// I0(t) for t >= 0.
pub fn i0(t: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    require_finite(t)?;
    if t.is_sign_negative() && !t.is_zero() {
        return Err(Error::Domain("i0 expects t >= 0".into()));
    }
    if t.is_zero() {
        return Ok(BoundedReal::exact(ctx.float(1)));
    }
    let value = if t.to_f64() >= asymptotic_threshold(ctx) {
        let sb = scaled_pair(t, ctx)?;
        let up = Float::with_val(ctx.bits(), t.exp_ref());
        if up.is_infinite() {
            return Err(Error::Overflow(format!(
                "I0({}) exceeds the exponent range",
                t.to_string_radix(10, Some(10))
            )));
        }
        sb.i0e.scale_float(&up)
    } else {
        round_to_working(&series_pair(t, ctx).0, ctx)
    };
    certify(&value, ctx, "i0")?;
    Ok(value)
}

/// K0(t) for t > 0.
pub fn k0(t: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let sb = scaled_pair(t, ctx)?;
    let down = Float::with_val(ctx.bits(), -t).exp();
    if down.is_zero() {
        return Err(Error::Overflow(format!(
            "K0({}) underflows the exponent range",
            t.to_string_radix(10, Some(10))
        )));
    }
    let value = sb.k0e.scale_float(&down);
    certify(&value, ctx, "k0")?;
    Ok(value)
}

pub fn bessel_point(t: &Float, ctx: &PrecisionContext) -> Result<BesselPoint> {
    Ok(BesselPoint {
        t: t.clone(),
        i0: i0(t, ctx)?,
        k0: k0(t, ctx)?,
    })
}

/// `e^t K0(t) = int_0^inf exp(-2t sinh^2(u/2)) du`, truncated where the
/// integrand drops below the working epsilon.
pub fn k0_scaled_integral(t: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    require_finite(t)?;
    if *t <= 0 {
        return Err(Error::Domain("K0 needs t > 0".into()));
    }
    let p = ctx.bits();
    let tf = t.to_f64();
    let wd = f64::from(ctx.working_digits()) * std::f64::consts::LN_10;
    // e^(-t (cosh u - 1)) < 10^-wd once cosh u >= 1 + wd/t.
    let mut u_max = (2.0 * wd / tf + std::f64::consts::E).ln();
    while tf * (u_max.cosh() - 1.0) < wd + 5.0 {
        u_max += 0.25;
    }
    let hi = Float::with_val(p, u_max);
    let range = Range::finite(ctx.float(0), hi.clone());
    let opts = QuadratureOptions::from_context(ctx);
    let out = engine::integrate(&range, ctx, &opts, |node| {
        let half = Float::with_val(p, &node.x / 2u32).sinh();
        let arg = Float::with_val(p, half.square_ref()) * t * -2i32;
        Ok(BoundedReal::new(arg.exp(), Float::new(p)))
    })?;
    // Tail beyond u_max: int e^{-t(cosh u - 1)} <= e^{-t(cosh U - 1)} / (t sinh U).
    let cosh_m1 = Float::with_val(p, hi.cosh_ref()) - 1u32;
    let tail = (cosh_m1 * t * -1i32).exp() / (Float::with_val(p, hi.sinh_ref()) * t);
    Ok(out.value.widen(&tail))
}

/// K0(t) by direct quadrature of the Schläfli integral.
pub fn k0_integral(t: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let scaled = k0_scaled_integral(t, ctx)?;
    let down = Float::with_val(ctx.bits(), -t).exp();
    Ok(scaled.scale_float(&down))
}

/// I0(t) by quadrature of `(1/pi) int_0^pi e^(t cos th) dth`.
pub fn i0_integral(t: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    require_finite(t)?;
    let p = ctx.bits();
    let range = Range::finite(ctx.float(0), ctx.pi().clone());
    let opts = QuadratureOptions::from_context(ctx);
    let out = engine::integrate(&range, ctx, &opts, |node| {
        let c = Float::with_val(p, node.x.cos_ref()) * t;
        Ok(BoundedReal::new(c.exp(), Float::new(p)))
    })?;
    let inv_pi = Float::with_val(p, ctx.pi().recip_ref());
    Ok(out.value.scale_float(&inv_pi))
}

/// `pi^p I0^a K0^b t^c` from a scaled pair.
pub(crate) fn integrand_from(spec: &MomentSpec, sb: &ScaledBessel, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let p = ctx.bits();
    let mut acc = sb.i0e.powu(spec.a).mul(&sb.k0e.powu(spec.b));
    if spec.c > 0 {
        let tc = Float::with_val(p, (&sb.t).pow(spec.c));
        acc = acc.scale_float(&tc);
    }
    if spec.a != spec.b {
        let shift = Float::with_val(p, &sb.t * (i64::from(spec.a) - i64::from(spec.b)));
        let factor = shift.clone().exp();
        // exp of a rounded argument: relative error |shift| * eps
        let extra = Float::with_val(p, acc.value().abs_ref())
            * Float::with_val(p, shift.abs_ref())
            * ctx.epsilon();
        acc = acc.scale_float(&factor);
        let extra = extra * Float::with_val(p, factor.abs_ref());
        acc = acc.widen(&extra);
    }
    if spec.pi_power != 0 {
        let pw = Float::with_val(p, ctx.pi().pow(spec.pi_power));
        acc = acc.scale_float(&pw);
    }
    if acc.value().is_infinite() || acc.err().is_infinite() {
        return Err(Error::Overflow(format!(
            "integrand of {spec} at t = {}",
            sb.t.to_string_radix(10, Some(10))
        )));
    }
    Ok(acc)
}

/// Moment integrand `pi^p I0(t)^a K0(t)^b t^c` with propagated error.
pub fn integrand(spec: &MomentSpec, t: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let sb = scaled_pair(t, ctx)?;
    integrand_from(spec, &sb, ctx)
}
