//! Exact integer and rational sequences: Domb numbers, the alpha and beta
//! families, Crandall numbers and the rational parts of the K0^2 and I0 K0^3
//! moments.

mod hypergeometric;
mod series;

use std::sync::{OnceLock, RwLock};

use rug::{Integer, Rational};

use crate::error::{Error, Result};

pub use hypergeometric::{hyp_3f2, rogers_check};
pub use series::SeriesPoly;

fn factorial_table() -> &'static RwLock<Vec<Integer>> {
    static TABLE: OnceLock<RwLock<Vec<Integer>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(vec![Integer::from(1)]))
}

/// n!, memoized per process.
pub fn factorial(n: u32) -> Integer {
    let n = n as usize;
    {
        let table = factorial_table().read().expect("factorial table poisoned");
        if let Some(v) = table.get(n) {
            return v.clone();
        }
    }
    let mut table = factorial_table().write().expect("factorial table poisoned");
    while table.len() <= n {
        let k = table.len() as u32;
        let next = Integer::from(&table[table.len() - 1] * k);
        table.push(next);
    }
    table[n].clone()
}

pub fn binomial(n: u32, k: u32) -> Integer {
    if k > n {
        return Integer::new();
    }
    Integer::from(n).binomial(k)
}

/// `[(2j)!]^3 / (j!)^4`, an integer since it equals `C(2j,j)^3 (j!)^2`.
pub(crate) fn central_cube(j: u32) -> Integer {
    let c = binomial(2 * j, j);
    let f = factorial(j);
    Integer::from(c.square_ref()) * &c * Integer::from(f.square_ref())
}

fn require_positive(name: &str, v: u32) -> Result<()> {
    if v == 0 {
        Err(Error::InvalidSpec(format!("{name} must be >= 1")))
    } else {
        Ok(())
    }
}

/// D_n = sum_k C(n,k)^2 C(2(n-k), n-k) C(2k, k).
pub fn domb(n: u32) -> Integer {
    let mut total = Integer::new();
    for k in 0..=n {
        let c = binomial(n, k);
        total += Integer::from(c.square_ref()) * binomial(2 * (n - k), n - k) * binomial(2 * k, k);
    }
    total
}

/// alpha_l = ((l-1)!)^2 D_(l-1) / 4^(l-1).
pub fn alpha(l: u32) -> Result<Integer> {
    require_positive("l", l)?;
    let j = l - 1;
    let f = factorial(j);
    let num = Integer::from(f.square_ref()) * domb(j);
    let den = Integer::from(1) << (2 * j);
    if !num.is_divisible(&den) {
        return Err(Error::Divisibility(format!(
            "4^{j} does not divide ({j}!)^2 D_{j}"
        )));
    }
    Ok(num / den)
}

/// `sum_{l=1}^{n} alpha_l x^(l-1)`.
fn alpha_series(n: u32) -> Result<SeriesPoly> {
    let coeffs = (1..=n)
        .map(|l| alpha(l).map(Rational::from))
        .collect::<Result<Vec<_>>>()?;
    Ok(SeriesPoly::new(coeffs))
}

fn integral_coeff(q: Rational, what: &str) -> Result<Integer> {
    if *q.denom() != 1 {
        return Err(Error::Divisibility(format!("{what} = {q} is not an integer")));
    }
    Ok(q.into_numer_denom().0)
}

/// Coefficient of x^(n-1) in `(sum_l alpha_l x^(l-1))^m`.
pub fn alpha_m(m: u32, n: u32) -> Result<Integer> {
    require_positive("m", m)?;
    require_positive("n", n)?;
    let deg = (n - 1) as usize;
    let power = alpha_series(n)?.pow_truncated(m, deg);
    integral_coeff(power.coeff(deg), &format!("alpha_{n}^[{m}]"))
}

/// Crandall numbers: A(1) = 0 and A(n+1) = alpha_n^[2].
pub fn crandall(n: u32) -> Result<Integer> {
    require_positive("n", n)?;
    if n == 1 {
        return Ok(Integer::new());
    }
    alpha_m(2, n - 1)
}

/// A(n+1) from the explicit triple sum over (m, l, k), kept rational so a
/// non-integer result is visible rather than truncated.
pub fn crandall_explicit(n: u32) -> Result<Rational> {
    require_positive("n", n)?;
    let g: Vec<Integer> = (0..n).map(central_cube).collect();
    let mut total = Integer::new();
    for m in 1..=n {
        for l in 1..=m {
            for k in 1..=l {
                let gi = |j: u32| &g[j as usize];
                total += Integer::from(gi(n - m) * gi(m - l)) * gi(l - k) * gi(k - 1);
            }
        }
    }
    Ok(Rational::from((total, Integer::from(1) << (4 * (n - 1)))))
}

/// r with `int_0^inf K0^2 t^(2n) dt = r pi^2`.
pub fn k0sq_moment_rational(n: u32) -> Rational {
    Rational::from((central_cube(n), Integer::from(1) << (2 * (3 * n + 1))))
}

/// r with `int_0^inf I0 K0^3 t^(2l-1) dt = r pi^2`.
pub fn ikkk_moment_rational(l: u32) -> Result<Rational> {
    require_positive("l", l)?;
    let mut total = Integer::new();
    for k in 1..=l {
        total += central_cube(l - k) * central_cube(k - 1);
    }
    Ok(Rational::from((total, Integer::from(1) << (2 * (3 * l - 1)))))
}

/// Coefficient of x^(n-1) in
/// `[sum_l (l!)^2 D_l/4^l x^l]^(m-1) * sum_k [(2k)!]^3/(2^(4k) (k!)^4) x^k`.
pub fn beta_m(m: u32, n: u32) -> Result<Rational> {
    require_positive("m", m)?;
    require_positive("n", n)?;
    let deg = (n - 1) as usize;
    // (l!)^2 D_l / 4^l = alpha_(l+1)
    let domb_part = alpha_series(n)?;
    let base = SeriesPoly::new(
        (0..n)
            .map(|k| Rational::from((central_cube(k), Integer::from(1) << (4 * k))))
            .collect(),
    );
    let product = domb_part.pow_truncated(m - 1, deg).mul_truncated(&base, deg);
    Ok(product.coeff(deg))
}

/// The integer of the compact form indexed by (M, n): `alpha_n^[M/2]` for
/// even M, `2^(4(n-1)) beta_n^[(M+1)/2]` for odd M.
pub fn broadhurst_roberts(big_m: u32, n: u32) -> Result<Integer> {
    require_positive("M", big_m)?;
    require_positive("n", n)?;
    let value = if big_m % 2 == 0 {
        Rational::from(alpha_m(big_m / 2, n)?)
    } else {
        beta_m(big_m.div_ceil(2), n)? << (4 * (n - 1))
    };
    if *value.denom() != 1 || value <= 0 {
        return Err(Error::ReductionMismatch(format!(
            "M = {big_m}, n = {n}: reduced value {value} is not a positive integer"
        )));
    }
    Ok(value.into_numer_denom().0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_grow_the_table_on_demand() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(20), 2_432_902_008_176_640_000u64);
        assert_eq!(factorial(5), 120);
    }

    #[test]
    fn small_domb_numbers() {
        let d: Vec<Integer> = (0..6).map(domb).collect();
        assert_eq!(d, [1, 4, 28, 256, 2716, 31504]);
    }

    #[test]
    fn small_alphas() {
        let a: Vec<Integer> = (1..=4).map(|l| alpha(l).unwrap()).collect();
        assert_eq!(a, [1, 1, 7, 144]);
        assert!(alpha(0).is_err());
    }

    #[test]
    fn alpha_m_base_cases() {
        assert_eq!(alpha_m(2, 1).unwrap(), 1);
        assert_eq!(alpha_m(2, 2).unwrap(), 2);
        for n in 1..=10 {
            assert_eq!(alpha_m(1, n).unwrap(), alpha(n).unwrap());
        }
    }

    #[test]
    fn crandall_start() {
        let a: Vec<Integer> = (1..=3).map(|n| crandall(n).unwrap()).collect();
        assert_eq!(a, [0, 1, 2]);
        assert_eq!(crandall_explicit(1).unwrap(), 1);
        assert_eq!(crandall_explicit(2).unwrap(), 2);
    }

    #[test]
    fn moment_rationals() {
        assert_eq!(k0sq_moment_rational(0), Rational::from((1, 4)));
        assert_eq!(k0sq_moment_rational(1), Rational::from((1, 32)));
        assert_eq!(k0sq_moment_rational(2), Rational::from((27, 512)));
        assert_eq!(ikkk_moment_rational(1).unwrap(), Rational::from((1, 16)));
        assert_eq!(ikkk_moment_rational(2).unwrap(), Rational::from((1, 64)));
    }

    #[test]
    fn beta_start() {
        assert_eq!(beta_m(1, 1).unwrap(), 1);
        assert_eq!(beta_m(1, 2).unwrap(), Rational::from((1, 2)));
    }

    #[test]
    fn compact_form_reductions() {
        for n in 1..=5 {
            assert_eq!(broadhurst_roberts(2, n).unwrap(), alpha(n).unwrap());
            assert_eq!(broadhurst_roberts(4, n).unwrap(), crandall(n + 1).unwrap());
        }
        assert_eq!(broadhurst_roberts(1, 1).unwrap(), 1);
        assert_eq!(broadhurst_roberts(1, 2).unwrap(), 8);
    }
}
