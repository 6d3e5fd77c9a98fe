use std::fmt;
use std::ops::Mul;

use rug::Rational;

/// Polynomial with exact rational coefficients, lowest degree first.
/// Trailing zeros are always trimmed, so the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SeriesPoly {
    coeffs: Vec<Rational>,
}

impl SeriesPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self::new(vec![Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    /// Product with every term above `max_degree` dropped.
    pub fn mul_truncated(&self, rhs: &Self, max_degree: usize) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::default();
        }
        let len = (self.coeffs.len() + rhs.coeffs.len() - 1).min(max_degree + 1);
        let mut out = vec![Rational::new(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += Rational::from(a * b);
            }
        }
        Self::new(out)
    }

    /// `self^m` truncated at `max_degree`, by repeated multiplication.
    pub fn pow_truncated(&self, m: u32, max_degree: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..m {
            acc = acc.mul_truncated(self, max_degree);
        }
        acc
    }
}

impl Mul for &SeriesPoly {
    type Output = SeriesPoly;

    fn mul(self, rhs: &SeriesPoly) -> SeriesPoly {
        let deg = self.coeffs.len() + rhs.coeffs.len();
        self.mul_truncated(rhs, deg)
    }
}

impl fmt::Display for SeriesPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*x")?,
                _ => write!(f, "{c}*x^{i}")?,
            }
        }
        Ok(())
    }
}
