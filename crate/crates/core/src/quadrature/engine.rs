//! Double-exponential (tanh-sinh / exp-sinh) quadrature with level doubling.
//!
//! Level `L` is the trapezoid rule with step `2^-L` in the transformed
//! variable `s`; every level reuses the nodes of the coarser ones, so each
//! refinement only evaluates the new odd-indexed abscissae. Abscissae are
//! identified by an integer index at the finest representable level, which
//! lets callers cache per-node work across integrands that share a map.

use rug::Float;

use crate::bounded::BoundedReal;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

/// log2 of the finest step; node indices are multiples of `2^(FINEST - L)`.
pub(crate) const FINEST: u32 = 24;
/// Transformed-variable cutoff; beyond it every weight is far below any
/// usable precision.
const S_HARD: f64 = 7.5;
const MIN_LEVEL: u32 = 3;

/// Integration range of a double-exponential rule.
#[derive(Clone, Debug)]
pub enum Range {
    /// Finite `[lo, hi]`, tanh-sinh map.
    Finite { lo: Float, hi: Float },
    /// `[lo, +inf)`, exp-sinh map `x = lo + exp(pi/2 sinh s)`.
    HalfLine { lo: Float },
}

impl Range {
    pub fn finite(lo: Float, hi: Float) -> Self {
        Range::Finite { lo, hi }
    }

    pub fn half_line(lo: Float) -> Self {
        Range::HalfLine { lo }
    }
}

/// One abscissa of a rule together with its weight `dx/ds`.
///
/// `from_lo` and `from_hi` are the distances to the endpoints computed
/// without cancellation, so integrands singular at an endpoint can use them
/// instead of `x`.
#[derive(Clone, Debug)]
pub struct Node {
    pub x: Float,
    pub from_lo: Float,
    pub from_hi: Option<Float>,
    pub weight: Float,
    pub(crate) index: i64,
}

impl Node {
    pub fn index(&self) -> i64 {
        self.index
    }
}

/// Per-call refinement settings.
#[derive(Clone, Debug)]
pub struct QuadratureOptions {
    pub max_level: u32,
    /// Relative truncation target; `None` uses the context's quadrature tolerance.
    pub rel_tol: Option<Float>,
    /// Run every level up to `max_level` regardless of convergence.
    pub exhaust: bool,
}

impl QuadratureOptions {
    pub fn from_context(ctx: &PrecisionContext) -> Self {
        Self {
            max_level: ctx.max_level(),
            rel_tol: None,
            exhaust: false,
        }
    }
}

/// Result of one double-exponential integration.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub value: BoundedReal,
    pub level: u32,
    pub nodes: usize,
    /// Largest abscissa at which the integrand was evaluated.
    pub max_abscissa: Float,
    /// (level, total error estimate) for every completed level.
    pub history: Vec<(u32, Float)>,
}

fn pi_half(ctx: &PrecisionContext) -> Float {
    Float::with_val(ctx.bits(), ctx.pi() / 2u32)
}

pub(crate) fn make_node(range: &Range, index: i64, ctx: &PrecisionContext) -> Option<Node> {
    let p = ctx.bits();
    let s = Float::with_val(p, index) >> FINEST;
    let ph = pi_half(ctx);
    let node = match range {
        Range::Finite { lo, hi } => {
            let width = Float::with_val(p, hi - lo);
            let u = Float::with_val(p, s.sinh_ref()) * &ph;
            // e = exp(-2|u|); the near endpoint sits at width * e / (1 + e)
            let e = (Float::with_val(p, u.abs_ref()) * -2i32).exp();
            let one_plus = Float::with_val(p, &e + 1u32);
            let near = Float::with_val(p, &width * &e) / &one_plus;
            let weight = Float::with_val(p, s.cosh_ref()) * &ph * &width * &e * 2u32
                / Float::with_val(p, one_plus.square_ref());
            if weight.is_zero() || near.is_zero() {
                return None;
            }
            let far = Float::with_val(p, &width - &near);
            let (from_lo, from_hi) = if index <= 0 { (near, far) } else { (far, near) };
            let x = if index <= 0 {
                Float::with_val(p, lo + &from_lo)
            } else {
                Float::with_val(p, hi - &from_hi)
            };
            Node {
                x,
                from_lo,
                from_hi: Some(from_hi),
                weight,
                index,
            }
        }
        Range::HalfLine { lo } => {
            let v = (Float::with_val(p, s.sinh_ref()) * &ph).exp();
            if v.is_zero() || v.is_infinite() {
                return None;
            }
            let weight = Float::with_val(p, s.cosh_ref()) * &ph * &v;
            let x = Float::with_val(p, lo + &v);
            Node {
                x,
                from_lo: v,
                from_hi: None,
                weight,
                index,
            }
        }
    };
    Some(node)
}

/// Extrapolated truncation error from the last three level sums.
fn truncation_estimate(sums: &[Float], scale: &Float) -> Option<Float> {
    let n = sums.len();
    if n < 2 || scale.is_zero() {
        return None;
    }
    let p = scale.prec();
    let d1 = Float::with_val(p, &sums[n - 1] - &sums[n - 2]).abs();
    if d1.is_zero() {
        return Some(Float::new(p));
    }
    if n < 3 {
        return Some(d1);
    }
    let d2 = Float::with_val(p, &sums[n - 1] - &sums[n - 3]).abs();
    if d2.is_zero() {
        return Some(d1);
    }
    let log_rel = |d: &Float| Float::with_val(53, d / scale).log10().to_f64();
    let e1 = log_rel(&d1);
    let e2 = log_rel(&d2);
    if e2 >= 0.0 || e1 >= 0.0 {
        return Some(d1);
    }
    // Ideal double-exponential convergence squares the error per level.
    // Algebraically decaying integrands on the half line fall short of that,
    // so the estimate never claims more than a 1.5 power of the last step.
    let est = (e1 * e1 / e2).max(1.5 * e1).min(0.0);
    let ten = Float::with_val(p, 10);
    Some(Float::with_val(p, rug::ops::Pow::pow(&ten, &Float::with_val(p, est))) * scale)
}

/// Integrate `f` over `range`, doubling the node density until the
/// truncation estimate meets the tolerance.
pub fn integrate<F>(
    range: &Range,
    ctx: &PrecisionContext,
    opts: &QuadratureOptions,
    mut f: F,
) -> Result<Outcome>
where
    F: FnMut(&Node) -> Result<BoundedReal>,
{
    let p = ctx.bits();
    let eps = ctx.epsilon();
    let rel_tol = opts
        .rel_tol
        .clone()
        .unwrap_or_else(|| ctx.quadrature_tolerance());
    let max_level = opts.max_level.min(FINEST);

    let mut total = Float::new(p);
    let mut abs_total = Float::new(p);
    let mut err_total = Float::new(p);
    let mut nodes = 0usize;
    let mut max_abscissa = match range {
        Range::Finite { lo, .. } | Range::HalfLine { lo } => lo.clone(),
    };
    let mut sums: Vec<Float> = Vec::new();
    let mut history = Vec::new();
    let mut last_err = Float::with_val(p, f64::INFINITY);

    let mut accumulate = |node: &Node,
                          total: &mut Float,
                          abs_total: &mut Float,
                          err_total: &mut Float|
     -> Result<bool> {
        let v = f(node)?;
        if v.value().is_nan() {
            return Err(Error::Domain(format!(
                "integrand is NaN at x = {}",
                node.x.to_string_radix(10, Some(20))
            )));
        }
        let term = Float::with_val(p, v.value() * &node.weight);
        *total += &term;
        *abs_total += Float::with_val(p, term.abs_ref());
        *err_total += Float::with_val(p, v.err() * &node.weight);
        let threshold = Float::with_val(p, &*abs_total * &eps);
        Ok(term.abs() <= threshold)
    };

    for level in 0..=max_level {
        let stride = 1i64 << (FINEST - level);
        if level == 0 {
            let node = make_node(range, 0, ctx).ok_or_else(|| {
                Error::Domain("degenerate integration range".to_string())
            })?;
            accumulate(&node, &mut total, &mut abs_total, &mut err_total)?;
            nodes += 1;
            if node.x > max_abscissa {
                max_abscissa = node.x.clone();
            }
        }
        for dir in [1i64, -1] {
            let mut j: i64 = 1;
            let mut quiet = 0;
            loop {
                let index = dir * j * stride;
                let s = (index as f64) / (1u64 << FINEST) as f64;
                if s.abs() > S_HARD {
                    break;
                }
                let Some(node) = make_node(range, index, ctx) else {
                    break;
                };
                let negligible = accumulate(&node, &mut total, &mut abs_total, &mut err_total)?;
                nodes += 1;
                if node.x > max_abscissa {
                    max_abscissa = node.x.clone();
                }
                if negligible && s.abs() >= 1.0 {
                    quiet += 1;
                    if quiet >= 2 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                j += if level == 0 { 1 } else { 2 };
            }
        }

        let sum = Float::with_val(p, &total >> level);
        let abs_sum = Float::with_val(p, &abs_total >> level);
        let scale = Float::with_val(p, sum.abs_ref()).max(&abs_sum);
        sums.push(sum.clone());
        let trunc = truncation_estimate(&sums, &scale).unwrap_or_else(|| scale.clone());
        let rounding = Float::with_val(p, &abs_sum * &eps) * Float::with_val(p, nodes).sqrt() * 2u32
            + Float::with_val(p, &err_total >> level);
        let err = Float::with_val(p, &trunc + &rounding);
        history.push((level, err.clone()));
        last_err = err.clone();

        let converged = trunc <= Float::with_val(p, &rel_tol * &scale);
        if level >= MIN_LEVEL && converged && !opts.exhaust {
            return Ok(Outcome {
                value: BoundedReal::new(sum, err),
                level,
                nodes,
                max_abscissa,
                history,
            });
        }
        if opts.exhaust && level == max_level {
            return Ok(Outcome {
                value: BoundedReal::new(sum, err),
                level,
                nodes,
                max_abscissa,
                history,
            });
        }
    }

    let best = sums.last().cloned().unwrap_or_else(|| Float::new(p));
    Err(Error::NonConvergence {
        level: max_level,
        value: best.to_string_radix(10, Some(30)),
        err: last_err.to_string_radix(10, Some(3)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(30).unwrap()
    }

    #[test]
    fn finite_nodes_are_symmetric_and_inside() {
        let c = ctx();
        let r = Range::finite(c.float(0), c.float(1));
        for idx in [1i64 << 20, 3 << 22, 5 << 23] {
            let a = make_node(&r, idx, &c).unwrap();
            let b = make_node(&r, -idx, &c).unwrap();
            let sum = Float::with_val(c.bits(), &a.x + &b.x);
            assert!((sum - 1u32).abs() < 1e-40);
            assert!(a.x > 0 && a.x < 1);
            assert_eq!(a.weight, b.weight);
        }
    }

    #[test]
    fn endpoint_distances_do_not_cancel() {
        let c = ctx();
        let r = Range::finite(c.float(0), c.float(1));
        let n = make_node(&r, -(5i64 << FINEST), &c).unwrap();
        assert!(n.from_lo > 0);
        assert!(n.from_lo < 1e-50);
        assert_eq!(n.x, n.from_lo);
    }

    #[test]
    fn polynomial_integrates_exactly() {
        let c = ctx();
        let r = Range::finite(c.float(-1), c.float(2));
        let out = integrate(&r, &c, &QuadratureOptions::from_context(&c), |n| {
            let x = &n.x;
            Ok(BoundedReal::exact(Float::with_val(c.bits(), x * x)))
        })
        .unwrap();
        assert!((out.value.value().clone() - 3u32).abs() < 1e-35);
    }
}
