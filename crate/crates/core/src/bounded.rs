//! Real values carried together with an absolute error estimate.

use std::fmt;

use rug::float::Round;
use rug::{Float, Rational};

/// An arbitrary-precision value with a non-negative absolute error estimate.
///
/// Operations propagate the estimate to first order and charge one rounding
/// of the result on top; they never shrink it.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundedReal {
    value: Float,
    err: Float,
}

impl BoundedReal {
    /// Panics if `err` is negative or NaN.
    pub fn new(value: Float, err: Float) -> Self {
        assert!(
            !err.is_nan() && !err.is_sign_negative() || err.is_zero(),
            "error estimate must be non-negative"
        );
        let err = err.abs();
        Self { value, err }
    }

    pub fn exact(value: Float) -> Self {
        let err = Float::new(value.prec());
        Self { value, err }
    }

    pub fn zero(prec: u32) -> Self {
        Self::exact(Float::new(prec))
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    pub fn err(&self) -> &Float {
        &self.err
    }

    pub fn into_parts(self) -> (Float, Float) {
        (self.value, self.err)
    }

    pub fn prec(&self) -> u32 {
        self.value.prec()
    }

    /// err / |value|, or +inf for a zero value with nonzero error.
    pub fn relative_err(&self) -> Float {
        if self.err.is_zero() {
            return Float::new(53);
        }
        Float::with_val(53, &self.err / self.value.clone().abs())
    }

    /// Whether `other` lies inside value ± err.
    pub fn contains(&self, other: &Float) -> bool {
        let d = Float::with_val(self.prec().max(other.prec()), &self.value - other);
        d.abs() <= self.err
    }

    /// Grow the error estimate by `extra`.
    pub fn widen(mut self, extra: &Float) -> Self {
        self.err += extra.clone().abs();
        self
    }

    fn ulp_of(x: &Float) -> Float {
        // |x| * 2^(1-prec), rounded up; zero stays zero.
        let mut u = Float::with_val(x.prec(), x.abs_ref());
        u >>= x.prec() - 1;
        u
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let value = Float::with_val(self.prec(), &self.value + &rhs.value);
        let mut err = Float::with_val(self.prec(), &self.err + &rhs.err);
        err += Self::ulp_of(&value);
        Self { value, err }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let value = Float::with_val(self.prec(), &self.value - &rhs.value);
        let mut err = Float::with_val(self.prec(), &self.err + &rhs.err);
        err += Self::ulp_of(&value);
        Self { value, err }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.prec();
        let value = Float::with_val(p, &self.value * &rhs.value);
        let a = Float::with_val(p, self.value.abs_ref()) * &rhs.err;
        let b = Float::with_val(p, rhs.value.abs_ref()) * &self.err;
        let c = Float::with_val(p, &self.err * &rhs.err);
        let mut err = a + b + c;
        err += Self::ulp_of(&value);
        Self { value, err }
    }

    /// Multiply by an exactly known rational.
    pub fn scale(&self, q: &Rational) -> Self {
        let p = self.prec();
        let value = Float::with_val(p, &self.value * q);
        let mut err = Float::with_val(p, &self.err * q).abs();
        err += Self::ulp_of(&value);
        Self { value, err }
    }

    /// Multiply by a float treated as exact.
    pub fn scale_float(&self, f: &Float) -> Self {
        let p = self.prec();
        let value = Float::with_val(p, &self.value * f);
        let mut err = Float::with_val(p, &self.err * f).abs();
        err += Self::ulp_of(&value);
        Self { value, err }
    }

    pub fn neg(&self) -> Self {
        Self {
            value: Float::with_val(self.prec(), -&self.value),
            err: self.err.clone(),
        }
    }

    /// x^n for n >= 0 with error n·|x|^(n-1)·err to first order.
    pub fn powu(&self, n: u32) -> Self {
        let p = self.prec();
        if n == 0 {
            return Self::exact(Float::with_val(p, 1));
        }
        let value = Float::with_val(p, rug::ops::Pow::pow(&self.value, n));
        let mut err = if self.value.is_zero() {
            Float::with_val(p, rug::ops::Pow::pow(&self.err, n))
        } else {
            let rel = Float::with_val(p, &self.err / Float::with_val(p, self.value.abs_ref()));
            Float::with_val(p, value.abs_ref()) * rel * n
        };
        err += Self::ulp_of(&value) * n;
        Self { value, err }
    }

    /// Decimal rendering of the value with `digits` significant digits.
    pub fn value_string(&self, digits: usize) -> String {
        format_value(&self.value, digits)
    }

    /// Decimal rendering of the error estimate, rounded upward.
    pub fn err_string(&self) -> String {
        format_bound(&self.err)
    }
}

impl fmt::Display for BoundedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((f64::from(self.prec()) * std::f64::consts::LOG10_2) as usize).max(1);
        write!(f, "{} ± {}", self.value_string(digits), self.err_string())
    }
}

/// Round-to-nearest decimal string with `digits` significant digits.
pub fn format_value(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Three significant digits, always rounded up so the printed bound is
/// never smaller than the computed one.
pub fn format_bound(x: &Float) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix_round(10, Some(3), Round::Up)
}
