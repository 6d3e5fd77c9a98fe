//! Hilbert ladders as exact polynomials in `X = iota sgn` and `Y = kappa`:
//! `zeta_l = Y^l Re (X + iY)^l`, `eta_l = -Y^l Im (X + iY)^l`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::Integer;

use crate::error::{Error, Result};
use crate::exact::binomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LadderKind {
    Zeta,
    Eta,
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LadderKind::Zeta => "zeta",
            LadderKind::Eta => "eta",
        })
    }
}

impl FromStr for LadderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zeta" => Ok(LadderKind::Zeta),
            "eta" => Ok(LadderKind::Eta),
            _ => Err(Error::InvalidSpec(format!("unknown ladder '{s}' (expected zeta or eta)"))),
        }
    }
}

/// `coeff * (iota sgn)^iota_pow * kappa^kappa_pow`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderTerm {
    pub coeff: Integer,
    pub iota_pow: u32,
    pub kappa_pow: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderPoly {
    pub kind: LadderKind,
    pub ell: u32,
    /// Ordered by decreasing `iota_pow`.
    pub terms: Vec<LadderTerm>,
}

/// Sparse polynomial in (X, Y), keyed by exponents.
pub(crate) type Poly = BTreeMap<(u32, u32), Integer>;

fn gaussian_power(ell: u32) -> (Poly, Poly) {
    // (X + iY)^l = sum_j C(l,j) X^(l-j) (iY)^j, split into real/imaginary parts.
    let mut re = Poly::new();
    let mut im = Poly::new();
    for j in 0..=ell {
        let c = binomial(ell, j);
        let signed = if (j / 2) % 2 == 0 { c } else { -c };
        let key = (ell - j, j);
        if j % 2 == 0 {
            re.insert(key, signed);
        } else {
            im.insert(key, signed);
        }
    }
    (re, im)
}

impl LadderPoly {
    pub fn to_poly(&self) -> Poly {
        self.terms
            .iter()
            .map(|t| ((t.iota_pow, t.kappa_pow), t.coeff.clone()))
            .collect()
    }
}

impl fmt::Display for LadderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{} =", self.kind, self.ell)?;
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff < 0 { "-" } else if i == 0 { "" } else { "+" };
            write!(
                f,
                " {sign}{}*(iota sgn)^{}*kappa^{}",
                Integer::from(t.coeff.abs_ref()),
                t.iota_pow,
                t.kappa_pow
            )?;
        }
        Ok(())
    }
}

pub fn ladder(kind: LadderKind, ell: u32) -> Result<LadderPoly> {
    if ell == 0 {
        return Err(Error::InvalidSpec("ladder index must be >= 1".into()));
    }
    let (re, im) = gaussian_power(ell);
    let part = match kind {
        LadderKind::Zeta => re,
        LadderKind::Eta => im.into_iter().map(|(k, c)| (k, -c)).collect(),
    };
    let terms = part
        .into_iter()
        .rev()
        .filter(|(_, c)| *c != 0)
        .map(|((x, y), coeff)| LadderTerm {
            coeff,
            iota_pow: x,
            kappa_pow: y + ell,
        })
        .collect();
    Ok(LadderPoly { kind, ell, terms })
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for ((ax, ay), ac) in a {
        for ((bx, by), bc) in b {
            *out.entry((ax + bx, ay + by)).or_default() += Integer::from(ac * bc);
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn combine(a: &Poly, b: &Poly, sign: i32) -> Poly {
    let mut out = a.clone();
    for (k, c) in b {
        let e = out.entry(*k).or_default();
        if sign < 0 {
            *e -= c;
        } else {
            *e += c;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `zeta_l zeta_m - eta_l eta_m = zeta_(l+m)` and
/// `zeta_l eta_m + eta_l zeta_m = eta_(l+m)`, compared as exact polynomials.
pub fn ladder_product_check(ell: u32, m: u32) -> Result<bool> {
    let z = |k| ladder(LadderKind::Zeta, k).map(|p| p.to_poly());
    let e = |k| ladder(LadderKind::Eta, k).map(|p| p.to_poly());
    let (zl, zm, el, em) = (z(ell)?, z(m)?, e(ell)?, e(m)?);
    let zeta_sum = combine(&mul(&zl, &zm), &mul(&el, &em), -1);
    let eta_sum = combine(&mul(&zl, &em), &mul(&el, &zm), 1);
    Ok(zeta_sum == z(ell + m)? && eta_sum == e(ell + m)?)
}
