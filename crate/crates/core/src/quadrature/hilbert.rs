//! Principal-value Hilbert transforms `(Hf)(x) = PV int f(xi) / (pi (x - xi)) dxi`
//! of the Bessel building blocks
//!
//! ```text
//! iota(x)  = pi I0(x)            kappa(x)  = K0(|x|)
//! iota+(x) = iota(x) e^-x [x>0]  kappa+(x) = kappa(x) e^-x
//! iota-(x) = iota(x) e^x  [x<0]  kappa-(x) = kappa(x) e^x
//! ```
//!
//! and the products `kappa^2`, `iota kappa sgn`. The real line is cut at 0
//! (log singularity / jump) and at `x +- delta`; on the patch around the pole
//! the constant `f(x)` is subtracted, which pairs `x - u` with `x + u` into
//! the regular integrand `(f(x-u) - f(x+u)) / u`.

use std::fmt;
use std::str::FromStr;

use rug::Float;

use crate::bessel;
use crate::bounded::BoundedReal;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;
use crate::quadrature::engine::{self, QuadratureOptions, Range};

pub const DEFAULT_MIN_ABS_X: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PvFunction {
    KappaSq,
    IotaKappaSgn,
    KappaPlus,
    KappaMinus,
    IotaPlus,
    IotaMinus,
}

impl PvFunction {
    pub const ALL: [PvFunction; 6] = [
        PvFunction::KappaSq,
        PvFunction::IotaKappaSgn,
        PvFunction::KappaPlus,
        PvFunction::KappaMinus,
        PvFunction::IotaPlus,
        PvFunction::IotaMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PvFunction::KappaSq => "kappa_sq",
            PvFunction::IotaKappaSgn => "iota_kappa_sgn",
            PvFunction::KappaPlus => "kappa_plus",
            PvFunction::KappaMinus => "kappa_minus",
            PvFunction::IotaPlus => "iota_plus",
            PvFunction::IotaMinus => "iota_minus",
        }
    }

    /// Whether the function can be nonzero on `(-inf, 0)` and on `(0, inf)`.
    fn support(self) -> (bool, bool) {
        match self {
            PvFunction::IotaPlus => (false, true),
            PvFunction::IotaMinus => (true, false),
            _ => (true, true),
        }
    }
}

impl fmt::Display for PvFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PvFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PvFunction::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "unknown function id '{s}' (expected one of kappa_sq, iota_kappa_sgn, \
                     kappa_plus, kappa_minus, iota_plus, iota_minus)"
                ))
            })
    }
}

#[derive(Clone, Debug)]
pub struct PvQuery {
    pub function: PvFunction,
    pub x: Float,
}

impl PvQuery {
    pub fn new(function: PvFunction, x: Float) -> Self {
        Self { function, x }
    }
}

/// Value of `function` at a nonzero real point.
pub fn pv_function_value(function: PvFunction, xi: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    if xi.is_zero() {
        return Err(Error::Domain(format!("{function} is singular or undefined at 0")));
    }
    let p = ctx.bits();
    let positive = xi.is_sign_positive();
    let (neg_support, pos_support) = function.support();
    if (positive && !pos_support) || (!positive && !neg_support) {
        return Ok(BoundedReal::zero(p));
    }
    let t = Float::with_val(p, xi.abs_ref());
    let sb = bessel::scaled_pair(&t, ctx)?;
    let decay = |k: u32| Float::with_val(p, &t * -(k as i32)).exp();
    let v = match function {
        PvFunction::KappaSq => sb.k0e.powu(2).scale_float(&decay(2)),
        PvFunction::IotaKappaSgn => {
            let v = sb.i0e.mul(&sb.k0e).scale_float(ctx.pi());
            if positive {
                v
            } else {
                v.neg()
            }
        }
        PvFunction::KappaPlus => {
            if positive {
                sb.k0e.scale_float(&decay(2))
            } else {
                sb.k0e
            }
        }
        PvFunction::KappaMinus => {
            if positive {
                sb.k0e
            } else {
                sb.k0e.scale_float(&decay(2))
            }
        }
        PvFunction::IotaPlus | PvFunction::IotaMinus => sb.i0e.scale_float(ctx.pi()),
    };
    Ok(v)
}

/// Closed-form image of `function` under the Hilbert transform:
/// `H iota+ = -kappa+`, `H iota- = kappa-`, `H kappa+ = iota+`,
/// `H kappa- = -iota-`, `H(iota kappa sgn) = -kappa^2`, `H(kappa^2) = iota kappa sgn`.
pub fn hilbert_image(function: PvFunction, x: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let (image, sign) = match function {
        PvFunction::KappaSq => (PvFunction::IotaKappaSgn, 1),
        PvFunction::IotaKappaSgn => (PvFunction::KappaSq, -1),
        PvFunction::KappaPlus => (PvFunction::IotaPlus, 1),
        PvFunction::KappaMinus => (PvFunction::IotaMinus, -1),
        PvFunction::IotaPlus => (PvFunction::KappaPlus, -1),
        PvFunction::IotaMinus => (PvFunction::KappaMinus, 1),
    };
    let v = pv_function_value(image, x, ctx)?;
    Ok(if sign < 0 { v.neg() } else { v })
}

pub fn hilbert_pv(q: &PvQuery, ctx: &PrecisionContext) -> Result<BoundedReal> {
    hilbert_pv_with_min(q, &Float::with_val(64, DEFAULT_MIN_ABS_X), ctx)
}

/// Hilbert transform at `q.x`, refusing points with `|x| < min_abs_x`.
pub fn hilbert_pv_with_min(q: &PvQuery, min_abs_x: &Float, ctx: &PrecisionContext) -> Result<BoundedReal> {
    let p = ctx.bits();
    if !q.x.is_finite() || Float::with_val(p, q.x.abs_ref()) < *min_abs_x {
        return Err(Error::SingularPoint {
            x: q.x.to_string_radix(10, Some(10)),
            min: min_abs_x.to_string_radix(10, Some(3)),
        });
    }
    let function = q.function;
    if q.x.is_sign_positive() {
        transform_positive(&|xi: &Float| pv_function_value(function, xi, ctx), function.support(), &q.x, ctx)
    } else {
        // (Hf)(x) = -(Hg)(-x) with g(xi) = f(-xi)
        let (neg, pos) = function.support();
        let mirrored = |xi: &Float| pv_function_value(function, &Float::with_val(p, -xi), ctx);
        let x = Float::with_val(p, -&q.x);
        Ok(transform_positive(&mirrored, (pos, neg), &x, ctx)?.neg())
    }
}

/// PV transform at `x > 0` of a function with log/jump behaviour only at 0.
fn transform_positive(
    f: &dyn Fn(&Float) -> Result<BoundedReal>,
    support: (bool, bool),
    x: &Float,
    ctx: &PrecisionContext,
) -> Result<BoundedReal> {
    let p = ctx.bits();
    let opts = QuadratureOptions::from_context(ctx);
    let half = Float::with_val(p, x / 2u32);
    let delta = if half < 1 { half } else { ctx.float(1) };
    let (neg_support, pos_support) = support;
    let mut total = BoundedReal::zero(p);

    if neg_support {
        // int_{-inf}^0 f(xi)/(x - xi) dxi = int_0^inf f(-y)/(x + y) dy
        let out = engine::integrate(&Range::half_line(ctx.float(0)), ctx, &opts, |node| {
            let y = &node.from_lo;
            let v = f(&Float::with_val(p, -y))?;
            let den = Float::with_val(p, x + y);
            Ok(BoundedReal::new(
                Float::with_val(p, v.value() / &den),
                Float::with_val(p, v.err() / &den),
            ))
        })?;
        total = total.add(&out.value);
    }

    if pos_support {
        let left_end = Float::with_val(p, x - &delta);
        // (0, x - delta]
        let out = engine::integrate(&Range::finite(ctx.float(0), left_end), ctx, &opts, |node| {
            let xi = if node.index() <= 0 { node.from_lo.clone() } else { node.x.clone() };
            let v = f(&xi)?;
            let den = Float::with_val(p, x - &xi);
            Ok(BoundedReal::new(
                Float::with_val(p, v.value() / &den),
                Float::with_val(p, v.err() / &den).abs(),
            ))
        })?;
        total = total.add(&out.value);

        // patch: int_0^delta (f(x-u) - f(x+u))/u du
        let out = engine::integrate(&Range::finite(ctx.float(0), delta.clone()), ctx, &opts, |node| {
            let u = &node.from_lo;
            let lo = f(&Float::with_val(p, x - u))?;
            let hi = f(&Float::with_val(p, x + u))?;
            let diff = lo.sub(&hi);
            Ok(BoundedReal::new(
                Float::with_val(p, diff.value() / u),
                Float::with_val(p, diff.err() / u),
            ))
        })?;
        total = total.add(&out.value);

        // [x + delta, inf): x - xi = -(delta + y)
        let start = Float::with_val(p, x + &delta);
        let out = engine::integrate(&Range::half_line(start), ctx, &opts, |node| {
            let v = f(&node.x)?;
            let den = Float::with_val(p, &delta + &node.from_lo);
            Ok(BoundedReal::new(
                -Float::with_val(p, v.value() / &den),
                Float::with_val(p, v.err() / &den),
            ))
        })?;
        total = total.add(&out.value);
    }

    let inv_pi = Float::with_val(p, ctx.pi().recip_ref());
    Ok(total.scale_float(&inv_pi))
}
