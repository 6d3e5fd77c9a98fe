//! `3F2(1/3, 1/2, 2/3; 1, 1; x)` and the Domb generating-function identity
//! `3F2(..; 27u^2/(4(1-u)^3)) = (1-u) sum D_n (u/4)^n`.

use rug::{Float, Rational};

use super::domb;
use crate::bounded::BoundedReal;
use crate::error::{Error, Result};
use crate::precision::PrecisionContext;

struct Partial {
    value: BoundedReal,
    /// `sum k |t_k|`, i.e. `|x| F'(|x|)` up to the tail, for perturbation bounds.
    weighted_abs: Float,
}

fn sum_3f2(x: &Float, ctx: &PrecisionContext, max_terms: usize) -> Result<Partial> {
    let p = ctx.bits();
    if !x.is_finite() || Float::with_val(p, x.abs_ref()) >= 1 {
        return Err(Error::Domain(format!(
            "3F2 series needs |x| < 1, got {}",
            x.to_string_radix(10, Some(10))
        )));
    }
    if x.is_zero() {
        return Ok(Partial {
            value: BoundedReal::exact(ctx.float(1)),
            weighted_abs: ctx.zero(),
        });
    }
    let eps = ctx.epsilon();
    let ax = Float::with_val(p, x.abs_ref());
    // With ratio (k+1/3)(k+1/2)(k+2/3)/(k+1)^3 * x below |x|, the tail after
    // t_k is at most |t_k| |x| / (1 - |x|).
    let tail_factor = Float::with_val(p, &ax / Float::with_val(p, 1 - &ax));
    let mut term = ctx.float(1);
    let mut sum = ctx.float(1);
    let mut abs_sum = ctx.float(1);
    let mut weighted = ctx.zero();
    for k in 0..max_terms as u64 {
        let num = (3 * k + 1) * (2 * k + 1) * (3 * k + 2);
        let den = 18 * (k + 1) * (k + 1) * (k + 1);
        term *= num;
        term /= den;
        term *= x;
        sum += &term;
        let at = Float::with_val(p, term.abs_ref());
        weighted += Float::with_val(p, &at * (k + 1));
        abs_sum += &at;
        let tail = Float::with_val(p, &at * &tail_factor);
        if tail <= Float::with_val(p, sum.abs_ref()) * &eps {
            let rounding = Float::with_val(p, &abs_sum * &eps) * (4 * k + 8);
            return Ok(Partial {
                value: BoundedReal::new(sum, tail + rounding),
                weighted_abs: weighted,
            });
        }
    }
    Err(Error::NonConvergence {
        level: max_terms as u32,
        value: sum.to_string_radix(10, Some(30)),
        err: term.to_string_radix(10, Some(3)),
    })
}

/// Partial sum of `3F2(1/3, 1/2, 2/3; 1, 1; x)` for `|x| < 1`, stopped once
/// the ratio-test tail bound is below the working epsilon.
pub fn hyp_3f2(x: &Float, ctx: &PrecisionContext, max_terms: usize) -> Result<BoundedReal> {
    Ok(sum_3f2(x, ctx, max_terms)?.value)
}

const HYP_MAX_TERMS: usize = 1_000_000;

/// `|LHS - RHS|` of the Domb identity at rational `u`, with the right side
/// truncated after `terms` Domb numbers and summed exactly.
pub fn rogers_check(u: &Rational, terms: u32, ctx: &PrecisionContext) -> Result<BoundedReal> {
    if terms < 10 {
        return Err(Error::InvalidSpec(format!("truncation order must be >= 10, got {terms}")));
    }
    let p = ctx.bits();
    let rho = Rational::from(u.abs_ref()) * 4u32;
    if rho >= 1 {
        return Err(Error::Domain(format!("need |u| < 1/4, got {u}")));
    }
    let one_minus = Rational::from(1 - u);
    let z = Rational::from(u.square_ref()) * 27u32
        / (Rational::from(one_minus.square_ref()) * &one_minus * 4u32);
    let zf = Float::with_val(p, &z);
    let lhs = sum_3f2(&zf, ctx, HYP_MAX_TERMS)?;
    let mut lhs_err = lhs.value.err().clone();
    if !z.is_zero() {
        // |F(z) - F(zf)| <= |z - zf| sum k |t_k| / |z|
        let dz = Float::with_val(p, &zf - &z).abs();
        let zabs = Float::with_val(p, zf.abs_ref());
        lhs_err += dz * &lhs.weighted_abs / zabs * 2u32;
    }

    let quarter = Rational::from(u / 4u32);
    let mut power = Rational::from(1);
    let mut series = Rational::new();
    let mut last = Rational::new();
    for n in 0..=terms {
        last = Rational::from(domb(n) * &power);
        series += &last;
        power *= &quarter;
    }
    let rhs = Rational::from(&series * &one_minus);
    // D_(n+1)/D_n stays below 16, so the dropped terms shrink at least by 4|u|.
    let tail = Rational::from(last.abs_ref()) * &rho / (Rational::from(1) - &rho)
        * Rational::from(one_minus.abs_ref());
    let rhs_f = Float::with_val(p, &rhs);
    let rhs_err = Float::with_val(p, &tail) + (Float::with_val(p, rhs_f.abs_ref()) >> (p - 1));

    let diff = Float::with_val(p, lhs.value.value() - &rhs_f).abs();
    let round = Float::with_val(p, diff.abs_ref()) >> (p - 1);
    Ok(BoundedReal::new(diff, lhs_err + rhs_err + round))
}

/// Largest `D_(n+1)/D_n` for `n < upto`; the tail bound above needs it < 16.
#[cfg(test)]
fn max_domb_ratio(upto: u32) -> Rational {
    let mut best = Rational::new();
    let mut prev: rug::Integer = domb(0);
    for n in 1..=upto {
        let cur = domb(n);
        let r = Rational::from((cur.clone(), prev));
        if r > best {
            best = r;
        }
        prev = cur;
    }
    best
}
