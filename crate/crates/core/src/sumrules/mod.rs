//! Z and Y sum rules for Bessel moments, the Crandall-number integrand and
//! the alpha/beta moment combinations, assembled from the Hilbert ladders.

mod ladder;

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};

use crate::bounded::BoundedReal;
use crate::error::{Error, Result};
use crate::exact::binomial;
use crate::precision::PrecisionContext;
use crate::quadrature::{self, MomentResult, MomentSpec};

pub use ladder::{ladder, ladder_product_check, LadderKind, LadderPoly, LadderTerm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Z,
    Y,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Z => "Z",
            Family::Y => "Y",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" | "z" => Ok(Family::Z),
            "Y" | "y" => Ok(Family::Y),
            _ => Err(Error::InvalidSpec(format!("unknown sum-rule family '{s}' (expected Z or Y)"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SumRuleSpec {
    pub family: Family,
    pub n: u32,
    pub k: u32,
}

impl SumRuleSpec {
    /// Z needs `n >= 2k >= 2`, Y needs `n - 1 >= 2k >= 2`.
    pub fn new(family: Family, n: u32, k: u32) -> Result<Self> {
        let ok = k >= 1
            && match family {
                Family::Z => n >= 2 * k,
                Family::Y => n > 2 * k,
            };
        if !ok {
            let need = match family {
                Family::Z => "n >= 2k >= 2",
                Family::Y => "n - 1 >= 2k >= 2",
            };
            return Err(Error::InvalidSpec(format!("{family}({n},{k}) requires {need}")));
        }
        Ok(Self { family, n, k })
    }

    /// Conventional label with doubled first index, e.g. `Z(2,1)` is `Z_{4,0}`.
    pub fn label(&self) -> String {
        format!("{}_{{{},{}}}", self.family, 2 * self.n, self.n - 2 * self.k)
    }
}

impl fmt::Display for SumRuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.family, self.n, self.k)
    }
}

/// `(coeff, pi^a IKM(a, b; c))` terms of the rule, read off the ladder
/// `zeta_n` (Z) or `eta_n` (Y).
pub fn sum_rule_terms(spec: &SumRuleSpec) -> Result<Vec<(Integer, MomentSpec)>> {
    let spec = SumRuleSpec::new(spec.family, spec.n, spec.k)?;
    let (kind, c) = match spec.family {
        Family::Z => (LadderKind::Zeta, spec.n - 2 * spec.k),
        Family::Y => (LadderKind::Eta, spec.n - 2 * spec.k - 1),
    };
    let poly = ladder(kind, spec.n)?;
    Ok(poly
        .terms
        .into_iter()
        .map(|t| {
            let m = MomentSpec::new(t.iota_pow, t.kappa_pow, c).with_pi_power(t.iota_pow as i32);
            (t.coeff, m)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Each moment integrated (and cached) separately.
    TermByTerm,
    /// The whole combination integrated as one integrand.
    Fused,
}

#[derive(Clone, Debug)]
pub struct TermReport {
    pub coeff: Integer,
    pub spec: MomentSpec,
    /// `None` in fused mode.
    pub moment: Option<MomentResult>,
}

#[derive(Clone, Debug)]
pub struct SumRuleReport {
    pub spec: SumRuleSpec,
    pub value: BoundedReal,
    /// `|value| <= err`.
    pub pass: bool,
    pub method: Method,
    pub terms: Vec<TermReport>,
}

fn passes(v: &BoundedReal) -> bool {
    let p = v.prec();
    rug::Float::with_val(p, v.value().abs_ref()) <= *v.err()
}

fn as_rational(terms: &[(Integer, MomentSpec)]) -> Vec<(Rational, MomentSpec)> {
    terms.iter().map(|(c, s)| (Rational::from(c), *s)).collect()
}

pub fn verify_sum_rule(spec: &SumRuleSpec, ctx: &PrecisionContext) -> Result<SumRuleReport> {
    let terms = sum_rule_terms(spec)?;
    let (value, parts) = quadrature::weighted_moment_sum_detailed(&as_rational(&terms), ctx)?;
    let reports = terms
        .into_iter()
        .zip(parts)
        .map(|((coeff, spec), (_, m))| TermReport {
            coeff,
            spec,
            moment: Some(m),
        })
        .collect();
    Ok(SumRuleReport {
        spec: *spec,
        pass: passes(&value),
        value,
        method: Method::TermByTerm,
        terms: reports,
    })
}

pub fn verify_sum_rule_fused(spec: &SumRuleSpec, ctx: &PrecisionContext) -> Result<SumRuleReport> {
    let terms = sum_rule_terms(spec)?;
    let out = quadrature::fused_moment_sum(&as_rational(&terms), ctx)?;
    Ok(SumRuleReport {
        spec: *spec,
        pass: passes(&out.value),
        value: out.value,
        method: Method::Fused,
        terms: terms
            .into_iter()
            .map(|(coeff, spec)| TermReport {
                coeff,
                spec,
                moment: None,
            })
            .collect(),
    })
}

fn pow2(e: u32) -> Rational {
    Rational::from(Integer::from(1) << e)
}

/// `A(n) = 2^(2n+3) [pi^-2 IKM(3,5;2n-1) - pi^-4 IKM(1,7;2n-1)]`.
pub fn crandall_terms(n: u32) -> Result<Vec<(Rational, MomentSpec)>> {
    if n == 0 {
        return Err(Error::InvalidSpec("n must be >= 1".into()));
    }
    let c = 2 * n - 1;
    let w = pow2(2 * n + 3);
    Ok(vec![
        (w.clone(), MomentSpec::new(3, 5, c).with_pi_power(-2)),
        (-w, MomentSpec::new(1, 7, c).with_pi_power(-4)),
    ])
}

pub fn crandall_numeric(n: u32, ctx: &PrecisionContext) -> Result<BoundedReal> {
    quadrature::weighted_moment_sum(&crandall_terms(n)?, ctx)
}

/// `2^e sum_l (-1)^(l-1) C(M, 2l-1) pi^-2l IKM(M-2l+1, M+2l-1; c) 2^c`, the
/// shared shape of the alpha, beta and compact-form combinations.
fn ladder_combination(big_m: u32, c: u32, scale_exp: u32) -> Vec<(Rational, MomentSpec)> {
    let mut terms = Vec::new();
    let mut l = 1;
    while 2 * l - 1 <= big_m {
        let mut coeff = Rational::from(binomial(big_m, 2 * l - 1)) * pow2(scale_exp + c);
        if l % 2 == 0 {
            coeff = -coeff;
        }
        terms.push((
            coeff,
            MomentSpec::new(big_m + 1 - 2 * l, big_m + 2 * l - 1, c).with_pi_power(-2 * l as i32),
        ));
        l += 1;
    }
    terms
}

fn require_positive(m: u32, n: u32) -> Result<()> {
    if m == 0 || n == 0 {
        Err(Error::InvalidSpec("indices must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// Moment combination equal to `alpha_n^[m]`:
/// `4/pi^(2m+1) sum_l (-1)^(l-1) C(2m,2l-1) int (pi I0)^(2m-2l+1) K0^(2m+2l-1) (2t)^(2n+2m-3)`.
pub fn alpha_terms(m: u32, n: u32) -> Result<Vec<(Rational, MomentSpec)>> {
    require_positive(m, n)?;
    Ok(ladder_combination(2 * m, 2 * (n + m) - 3, 2))
}

/// Moment combination equal to `beta_n^[m]`:
/// `4/pi^(2m) sum_l (-1)^(l-1) C(2m-1,2l-1) int (pi I0)^(2m-2l) K0^(2m+2l-2) (2t)^(2n+2m-4)`.
pub fn beta_terms(m: u32, n: u32) -> Result<Vec<(Rational, MomentSpec)>> {
    require_positive(m, n)?;
    Ok(ladder_combination(2 * m - 1, 2 * (n + m - 2), 2))
}

/// The compact form
/// `2^(1+2(n-1)(1-(-1)^M)) / pi^(M+1) int [(pi I0 + i K0)^M - (pi I0 - i K0)^M]/i K0^M (2t)^(2n+M-3)`.
pub fn compact_terms(big_m: u32, n: u32) -> Result<Vec<(Rational, MomentSpec)>> {
    require_positive(big_m, n)?;
    // The bracket over i is 2 sum_l (-1)^(l-1) C(M,2l-1) (pi I0)^(M-2l+1) K0^(2l-1).
    let prefactor = 1 + if big_m % 2 == 1 { 4 * (n - 1) } else { 0 };
    Ok(ladder_combination(big_m, 2 * n + big_m - 3, prefactor + 1))
}

pub fn alpha_numeric(m: u32, n: u32, ctx: &PrecisionContext) -> Result<BoundedReal> {
    quadrature::weighted_moment_sum(&alpha_terms(m, n)?, ctx)
}

pub fn beta_numeric(m: u32, n: u32, ctx: &PrecisionContext) -> Result<BoundedReal> {
    quadrature::weighted_moment_sum(&beta_terms(m, n)?, ctx)
}

/// Numerical value of the compact form at (M, n).
pub fn alpha_beta_numeric(big_m: u32, n: u32, ctx: &PrecisionContext) -> Result<BoundedReal> {
    quadrature::weighted_moment_sum(&compact_terms(big_m, n)?, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(f: Family, n: u32, k: u32) -> SumRuleSpec {
        SumRuleSpec::new(f, n, k).unwrap()
    }

    fn shape(terms: &[(Integer, MomentSpec)]) -> Vec<(i64, MomentSpec)> {
        terms.iter().map(|(c, s)| (c.to_i64().unwrap(), *s)).collect()
    }

    #[test]
    fn validation_ranges() {
        assert!(SumRuleSpec::new(Family::Z, 2, 1).is_ok());
        assert!(SumRuleSpec::new(Family::Z, 1, 1).is_err());
        assert!(SumRuleSpec::new(Family::Z, 4, 0).is_err());
        assert!(SumRuleSpec::new(Family::Y, 3, 1).is_ok());
        assert!(SumRuleSpec::new(Family::Y, 4, 2).is_err());
    }

    #[test]
    fn z_terms() {
        let m = |a, b, c, p| MomentSpec::new(a, b, c).with_pi_power(p);
        assert_eq!(
            shape(&sum_rule_terms(&spec(Family::Z, 2, 1)).unwrap()),
            [(1, m(2, 2, 0, 2)), (-1, m(0, 4, 0, 0))]
        );
        assert_eq!(
            shape(&sum_rule_terms(&spec(Family::Z, 3, 1)).unwrap()),
            [(1, m(3, 3, 1, 3)), (-3, m(1, 5, 1, 1))]
        );
    }

    #[test]
    fn y_terms() {
        let m = |a, b, c, p| MomentSpec::new(a, b, c).with_pi_power(p);
        assert_eq!(
            shape(&sum_rule_terms(&spec(Family::Y, 4, 1)).unwrap()),
            [(-4, m(3, 5, 1, 3)), (4, m(1, 7, 1, 1))]
        );
    }

    #[test]
    fn labels() {
        assert_eq!(spec(Family::Z, 2, 1).label(), "Z_{4,0}");
        assert_eq!(spec(Family::Y, 4, 1).label(), "Y_{8,2}");
    }

    #[test]
    fn compact_form_matches_alpha_and_beta_shapes() {
        for n in 1..=3 {
            assert_eq!(compact_terms(4, n).unwrap(), alpha_terms(2, n).unwrap());
            let scaled: Vec<_> = beta_terms(2, n)
                .unwrap()
                .into_iter()
                .map(|(c, s)| (c * pow2(4 * (n - 1)), s))
                .collect();
            assert_eq!(compact_terms(3, n).unwrap(), scaled);
        }
    }
}
