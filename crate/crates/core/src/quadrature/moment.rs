use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rug::ops::Pow;
use rug::{Float, Rational};

use crate::bessel::{self, ScaledBessel};
use crate::bounded::BoundedReal;
use crate::error::{Error, Result};
use crate::precision::{NodeKey, PrecisionContext};
use crate::quadrature::engine::{self, Node, QuadratureOptions, Range};

/// `pi^pi_power * IKM(a, b; c)` where `IKM(a,b;c) = int_0^inf I0^a K0^b t^c dt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MomentSpec {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub pi_power: i32,
}

impl MomentSpec {
    pub const fn new(a: u32, b: u32, c: u32) -> Self {
        Self {
            a,
            b,
            c,
            pi_power: 0,
        }
    }

    pub const fn with_pi_power(mut self, pi_power: i32) -> Self {
        self.pi_power = pi_power;
        self
    }

    /// `a < b` decays exponentially; `a == b` decays like `t^(c-a)` and
    /// converges for `c <= a - 2`. Near 0 the `(-ln t)^b` growth is always
    /// integrable.
    pub fn is_convergent(&self) -> bool {
        self.a < self.b || (self.a == self.b && self.c + 2 <= self.a)
    }

    pub fn validate(&self) -> Result<()> {
        if self.is_convergent() {
            Ok(())
        } else {
            Err(Error::Divergent {
                a: self.a,
                b: self.b,
                c: self.c,
            })
        }
    }
}

impl fmt::Display for MomentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_power {
            0 => {}
            1 => write!(f, "pi*")?,
            p => write!(f, "pi^{p}*")?,
        }
        write!(f, "IKM({},{};{})", self.a, self.b, self.c)
    }
}

#[derive(Clone, Debug)]
pub struct MomentResult {
    pub spec: MomentSpec,
    pub value: BoundedReal,
    pub nodes_used: usize,
    pub split_point: f64,
    /// Largest abscissa the quadrature visited; the analytic tail beyond it
    /// is folded into `value.err`.
    pub tail_cutoff: Float,
    pub tail_bound: Float,
    pub level: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) struct MomentKey {
    spec: MomentSpec,
    split_bits: u64,
}

/// Outcome of integrating a linear combination of moment integrands.
#[derive(Clone, Debug)]
pub struct Integration {
    pub value: BoundedReal,
    pub nodes_used: usize,
    pub split_point: f64,
    pub tail_cutoff: Float,
    pub tail_bound: Float,
    pub level: u32,
}

pub const DEFAULT_SPLIT: f64 = 1.0;

const HEAD: u8 = 0;
const TAIL: u8 = 1;

/// Bound on `e^-t I0(t) sqrt(2 pi t)` for `t >= 1`.
const I0_ENVELOPE: f64 = 1.2;

/// Analytic bound on `int_T^inf pi^p I0^a K0^b t^c dt` for `T >= 1`, using
/// `I0(t) <= 1.2 e^t / sqrt(2 pi t)` and `K0(t) <= sqrt(pi/(2t)) e^-t`.
/// Returns +inf when the envelope does not apply at this `T`.
pub fn tail_bound(spec: &MomentSpec, cutoff: &Float) -> Float {
    let p = 64;
    let inf = Float::with_val(p, f64::INFINITY);
    if *cutoff < 1 || !spec.is_convergent() {
        return inf;
    }
    let t = Float::with_val(p, cutoff);
    let pi = Float::with_val(p, rug::float::Constant::Pi);
    let c_i = Float::with_val(p, I0_ENVELOPE) / Float::with_val(p, &pi * 2u32).sqrt();
    let c_k = Float::with_val(p, &pi / 2u32).sqrt();
    let mut coef = c_i.pow(spec.a) * c_k.pow(spec.b);
    if spec.pi_power != 0 {
        coef *= Float::with_val(p, (&pi).pow(spec.pi_power));
    }
    let beta = f64::from(spec.c) - f64::from(spec.a + spec.b) / 2.0;
    let lambda = f64::from(spec.b - spec.a);
    let t_beta = Float::with_val(p, (&t).pow(&Float::with_val(p, beta)));
    if lambda > 0.0 {
        let decay = Float::with_val(p, &t * -lambda).exp();
        let rate = if beta <= 0.0 {
            lambda
        } else {
            let r = lambda - beta / t.to_f64();
            if r <= 0.0 {
                return inf;
            }
            r
        };
        coef * t_beta * decay / rate
    } else {
        // a == b: t^beta with beta < -1
        let k = -beta - 1.0;
        coef * t_beta * &t / k
    }
}

fn scaled_at(
    node: &Node,
    segment: u8,
    split_bits: u64,
    ctx: &PrecisionContext,
) -> Result<Arc<ScaledBessel>> {
    let key = NodeKey {
        segment,
        split_bits,
        index: node.index(),
    };
    if let Some(hit) = ctx.cached_node(&key) {
        return Ok(hit);
    }
    // Head nodes near 0 carry their abscissa exactly in `from_lo`.
    let t = if segment == HEAD && node.index() <= 0 {
        &node.from_lo
    } else {
        &node.x
    };
    let sb = Arc::new(bessel::scaled_pair(t, ctx)?);
    ctx.store_node(key, sb.clone());
    Ok(sb)
}

fn combination_at(
    terms: &[(Rational, MomentSpec)],
    sb: &ScaledBessel,
    ctx: &PrecisionContext,
) -> Result<BoundedReal> {
    let mut acc = BoundedReal::zero(ctx.bits());
    for (coeff, spec) in terms {
        let v = bessel::integrand_from(spec, sb, ctx)?;
        acc = acc.add(&v.scale(coeff));
    }
    Ok(acc)
}

/// Integrate `sum coeff * pi^p I0^a K0^b t^c` over `(0, inf)` as a single
/// integrand: tanh-sinh on `(0, split]`, exp-sinh on `[split, inf)`.
pub fn integrate_combination(
    terms: &[(Rational, MomentSpec)],
    split: f64,
    ctx: &PrecisionContext,
) -> Result<Integration> {
    for (_, spec) in terms {
        spec.validate()?;
    }
    if !(split.is_finite() && split >= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "split point must be finite and >= 1, got {split}"
        )));
    }
    let p = ctx.bits();
    let split_bits = split.to_bits();
    let split_f = Float::with_val(p, split);
    let opts = QuadratureOptions::from_context(ctx);

    let head = engine::integrate(&Range::finite(ctx.float(0), split_f.clone()), ctx, &opts, |node| {
        let sb = scaled_at(node, HEAD, split_bits, ctx)?;
        combination_at(terms, &sb, ctx)
    })?;
    let tail = engine::integrate(&Range::half_line(split_f), ctx, &opts, |node| {
        let sb = scaled_at(node, TAIL, split_bits, ctx)?;
        combination_at(terms, &sb, ctx)
    })?;

    let cutoff = tail.max_abscissa.clone();
    let mut bound = Float::new(p);
    for (coeff, spec) in terms {
        let b = tail_bound(spec, &cutoff);
        bound += Float::with_val(p, &b * coeff).abs();
    }
    let value = head.value.add(&tail.value).widen(&bound);
    Ok(Integration {
        value,
        nodes_used: head.nodes + tail.nodes,
        split_point: split,
        tail_cutoff: cutoff,
        tail_bound: bound,
        level: head.level.max(tail.level),
    })
}

/// `pi^p IKM(a,b;c)` with a split at an explicit point.
pub fn moment_with_split(spec: MomentSpec, split: f64, ctx: &PrecisionContext) -> Result<MomentResult> {
    spec.validate()?;
    let key = MomentKey {
        spec,
        split_bits: split.to_bits(),
    };
    if let Some(hit) = ctx.cached_moment(&key) {
        return Ok(hit);
    }
    let one = Rational::from(1);
    let out = integrate_combination(&[(one, spec)], split, ctx)?;
    let result = MomentResult {
        spec,
        value: out.value,
        nodes_used: out.nodes_used,
        split_point: out.split_point,
        tail_cutoff: out.tail_cutoff,
        tail_bound: out.tail_bound,
        level: out.level,
    };
    ctx.store_moment(key, result.clone());
    Ok(result)
}

/// `pi^p IKM(a,b;c)`.
pub fn moment(spec: MomentSpec, ctx: &PrecisionContext) -> Result<MomentResult> {
    moment_with_split(spec, DEFAULT_SPLIT, ctx)
}

/// `sum coeff * moment(spec)` with each distinct spec integrated once.
pub fn weighted_moment_sum(
    terms: &[(Rational, MomentSpec)],
    ctx: &PrecisionContext,
) -> Result<BoundedReal> {
    Ok(weighted_moment_sum_detailed(terms, ctx)?.0)
}

/// As [`weighted_moment_sum`], also returning each term's moment.
pub fn weighted_moment_sum_detailed(
    terms: &[(Rational, MomentSpec)],
    ctx: &PrecisionContext,
) -> Result<(BoundedReal, Vec<(Rational, MomentResult)>)> {
    let mut memo: HashMap<MomentSpec, MomentResult> = HashMap::new();
    let mut total = BoundedReal::zero(ctx.bits());
    let mut parts = Vec::with_capacity(terms.len());
    for (coeff, spec) in terms {
        let m = match memo.get(spec) {
            Some(m) => m.clone(),
            None => {
                let m = moment(*spec, ctx)?;
                memo.insert(*spec, m.clone());
                m
            }
        };
        total = total.add(&m.value.scale(coeff));
        parts.push((coeff.clone(), m));
    }
    Ok((total, parts))
}

/// The same combination integrated as one integrand.
pub fn fused_moment_sum(
    terms: &[(Rational, MomentSpec)],
    ctx: &PrecisionContext,
) -> Result<Integration> {
    if terms.is_empty() {
        return Ok(Integration {
            value: BoundedReal::zero(ctx.bits()),
            nodes_used: 0,
            split_point: DEFAULT_SPLIT,
            tail_cutoff: ctx.float(DEFAULT_SPLIT),
            tail_bound: ctx.zero(),
            level: 0,
        });
    }
    integrate_combination(terms, DEFAULT_SPLIT, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergence_rule() {
        assert!(MomentSpec::new(0, 2, 0).is_convergent());
        assert!(MomentSpec::new(2, 2, 0).is_convergent());
        assert!(MomentSpec::new(3, 3, 1).is_convergent());
        assert!(!MomentSpec::new(3, 3, 2).is_convergent());
        assert!(!MomentSpec::new(1, 1, 0).is_convergent());
        assert!(matches!(
            MomentSpec::new(3, 2, 0).validate(),
            Err(Error::Divergent { a: 3, b: 2, c: 0 })
        ));
    }

    #[test]
    fn display_includes_pi_weight() {
        assert_eq!(MomentSpec::new(2, 2, 0).with_pi_power(2).to_string(), "pi^2*IKM(2,2;0)");
        assert_eq!(MomentSpec::new(1, 5, 1).with_pi_power(1).to_string(), "pi*IKM(1,5;1)");
    }

    #[test]
    fn empty_sum_is_exact_zero() {
        let ctx = PrecisionContext::new(20).unwrap();
        let v = weighted_moment_sum(&[], &ctx).unwrap();
        assert!(v.value().is_zero());
        assert!(v.err().is_zero());
    }

    #[test]
    fn tail_bound_needs_cutoff_at_least_one() {
        let spec = MomentSpec::new(0, 2, 0);
        assert!(tail_bound(&spec, &Float::with_val(64, 0.5)).is_infinite());
        let b = tail_bound(&spec, &Float::with_val(64, 40));
        assert!(b < 1e-30 && b > 0);
    }
}
