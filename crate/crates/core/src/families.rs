//! Named curve families with their parameter conditions validated up front.
//!
//! Fermat-shaped families are `alpha X1^d + beta X2^d - X0^d`, i.e. the affine
//! curve `alpha X^d + beta Y^d = 1` in the chart `X0 = 1`. The Hermitian family is
//! `X0^(q0+1) + X1^(q0+1) + X2^(q0+1)` over `F_(q0^2)`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::algebra::field::is_prime;
use crate::algebra::{make_field, Fe, Field, MultiPoly};
use crate::counting::{fermat_intro, hefez_voloch, remark43};
use crate::curve::{make_curve, PlaneCurve};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    Fermat,
    Hermitian,
    Remark42i,
    Remark42ii,
    Remark43,
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "fermat" => FamilyKind::Fermat,
            "hermitian" => FamilyKind::Hermitian,
            "remark42i" => FamilyKind::Remark42i,
            "remark42ii" => FamilyKind::Remark42ii,
            "remark43" => FamilyKind::Remark43,
            other => return Err(Error::Family(format!("unknown family {other:?}"))),
        })
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyKind::Fermat => "fermat",
            FamilyKind::Hermitian => "hermitian",
            FamilyKind::Remark42i => "remark42i",
            FamilyKind::Remark42ii => "remark42ii",
            FamilyKind::Remark43 => "remark43",
        };
        f.write_str(s)
    }
}

/// Coefficients are coefficient vectors over `F_p` (low degree first) of elements of `F_q`.
#[derive(Debug, Clone, Default)]
pub struct FamilyParams {
    pub p: Option<u64>,
    /// `q = p^field_degree`.
    pub field_degree: Option<u32>,
    /// Degree of the subfield `F_(p^s)` used by the subfield-twisted families.
    pub subfield_degree: Option<u32>,
    pub d: Option<u32>,
    pub alpha: Option<Vec<i64>>,
    pub beta: Option<Vec<i64>>,
    pub q0: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyMeta {
    pub kind: FamilyKind,
    pub p: u64,
    pub q: u64,
    pub field_degree: u32,
    pub subfield_degree: Option<u32>,
    pub d: u32,
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    /// Conditions of the family that were checked.
    pub validated: Vec<String>,
    /// `p^nu` where the literature fixes it.
    pub expected_p_nu: Option<u64>,
    /// Point count predicted by a closed formula for this family.
    pub expected_n: Option<u64>,
    pub expected_n_formula: Option<String>,
    /// The family is stated to be classical and Frobenius non-classical for conics.
    pub claims_conditions_ab: bool,
}

fn need<T: Copy>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::Family(format!("missing parameter {name}")))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn element(k: &Field, v: &Option<Vec<i64>>, name: &str) -> Result<Fe> {
    let v = v.clone().unwrap_or_else(|| vec![1]);
    if v.len() > k.r() as usize {
        return Err(Error::Family(format!(
            "{name} has {} coefficients but F_q has degree {}",
            v.len(),
            k.r()
        )));
    }
    let p = k.p() as i64;
    let mut coeffs: Vec<u32> = v.iter().map(|c| c.rem_euclid(p) as u32).collect();
    coeffs.resize(k.r() as usize, 0);
    let x = k.from_coeffs(&coeffs)?;
    if x.is_zero() {
        return Err(Error::Family(format!("{name} must be nonzero")));
    }
    Ok(x)
}

fn fermat_shape(k: &Field, d: u32, alpha: Fe, beta: Fe) -> Result<PlaneCurve> {
    let mut f = MultiPoly::zero(k, 3);
    f.add_term([0, d, 0], alpha);
    f.add_term([0, 0, d], beta);
    f.add_term([d, 0, 0], k.from_int(-1));
    make_curve(&f)
}

fn prime_power(q0: u64) -> Result<(u64, u32)> {
    let p = (2..=q0)
        .find(|&p| q0 % p == 0)
        .ok_or_else(|| Error::Family(format!("q0 = {q0} is not a prime power")))?;
    let mut rest = q0;
    let mut s = 0;
    while rest % p == 0 {
        rest /= p;
        s += 1;
    }
    if rest != 1 || !is_prime(p) {
        return Err(Error::Family(format!("q0 = {q0} is not a prime power")));
    }
    Ok((p, s))
}

fn exact_sqrt(q: u64) -> Option<u64> {
    let s = (q as f64).sqrt().round() as u64;
    (s * s == q).then_some(s)
}

/// Builds the curve of a family and records which conditions were validated.
pub fn make_family(kind: FamilyKind, params: &FamilyParams) -> Result<(PlaneCurve, FamilyMeta)> {
    if kind == FamilyKind::Hermitian {
        return hermitian(params);
    }
    let p = need(params.p, "p")?;
    let r = need(params.field_degree, "r")?;
    if !is_prime(p) {
        return Err(Error::Family(format!("p = {p} is not prime")));
    }
    let k = make_field(p, r)?;
    let q = k.q();
    let alpha = element(&k, &params.alpha, "alpha")?;
    let beta = element(&k, &params.beta, "beta")?;
    let mut validated = vec!["alpha, beta nonzero".to_string()];
    let mut expected_p_nu = None;
    let mut expected = None;
    let mut claims = false;
    let subfield = params.subfield_degree;

    let d = match kind {
        FamilyKind::Fermat => {
            let d = need(params.d, "d")?;
            if d == 0 {
                return Err(Error::Family("d must be positive".into()));
            }
            if let Some(s) = exact_sqrt(q) {
                if 2 * d as u64 == s + 1 {
                    validated.push("d = (sqrt(q) + 1)/2".into());
                    expected_p_nu = Some(s);
                    claims = true;
                }
                if alpha == Fe::ONE && beta == Fe::ONE {
                    if let Ok(n) = fermat_intro(d as u64, q) {
                        validated.push("sqrt(q) = -1 mod d".into());
                        expected = Some((n, "q + 1 + (d-1)(d-2) sqrt(q)"));
                    }
                }
            }
            d
        }
        _ => {
            let s = need(subfield, "subfield-degree")?;
            if s == 0 || r % s != 0 || s == r {
                return Err(Error::Family(format!(
                    "subfield degree {s} must be a proper divisor of r = {r}"
                )));
            }
            validated.push(format!("F_{{p^{s}}} is a proper subfield of F_q"));
            let ps = p.pow(s);
            let num = if kind == FamilyKind::Remark42i { q - 1 } else { 2 * (q - 1) };
            let den = if kind == FamilyKind::Remark42i { 2 * (ps - 1) } else { ps - 1 };
            if num % den != 0 {
                return Err(Error::Family(format!("d = {num}/{den} is not an integer")));
            }
            let d = (num / den) as u32;
            if let Some(given) = params.d {
                if given != d {
                    return Err(Error::Family(format!("d = {given} but the family forces d = {d}")));
                }
            }
            let in_sub = |x: Fe| k.in_subfield(x, s);
            let sub_square = |x: Fe| k.pow(x, (ps - 1) / 2) == Fe::ONE;
            match kind {
                FamilyKind::Remark42i => {
                    for (name, x) in [("alpha", alpha), ("beta", beta)] {
                        if !in_sub(k.mul(x, x)) {
                            return Err(Error::Family(format!("{name}^2 is not in F_{{p^{s}}}")));
                        }
                    }
                    validated.push("d = (q-1)/(2(p^s-1))".into());
                    validated.push("alpha^2, beta^2 in F_{p^s}".into());
                }
                FamilyKind::Remark42ii | FamilyKind::Remark43 => {
                    validated.push("d = 2(q-1)/(p^s-1)".into());
                    if kind == FamilyKind::Remark42ii {
                        if p % 4 != 1 {
                            return Err(Error::Family(format!("p = {p} is not 1 mod 4")));
                        }
                        validated.push("p = 1 mod 4".into());
                    }
                    let want_square = kind == FamilyKind::Remark42ii;
                    for (name, x) in [("alpha", alpha), ("beta", beta)] {
                        if !in_sub(x) {
                            return Err(Error::Family(format!("{name} is not in F_{{p^{s}}}")));
                        }
                        if sub_square(x) != want_square {
                            let what = if want_square { "a square" } else { "a non-square" };
                            return Err(Error::Family(format!("{name} is not {what} in F_{{p^{s}}}")));
                        }
                    }
                    if want_square {
                        validated.push("alpha, beta nonzero squares in F_{p^s}".into());
                    } else {
                        validated.push("alpha, beta non-squares in F_{p^s}".into());
                        expected = Some((remark43(d as u64, q, p, s)?, "d(q - 1 + d - d psi + 2 psi)/2"));
                    }
                }
                _ => unreachable!(),
            }
            claims = true;
            d
        }
    };
    if gcd(d as u64, p) != 1 {
        return Err(Error::Family(format!("gcd(d, p) = gcd({d}, {p}) is not 1")));
    }
    validated.push("gcd(d, p) = 1".into());
    let curve = fermat_shape(&k, d, alpha, beta)?;
    let meta = FamilyMeta {
        kind,
        p,
        q,
        field_degree: r,
        subfield_degree: subfield.filter(|_| kind != FamilyKind::Fermat),
        d,
        alpha: k.coeffs(alpha),
        beta: k.coeffs(beta),
        validated,
        expected_p_nu,
        expected_n: expected.map(|e| e.0),
        expected_n_formula: expected.map(|e| e.1.to_string()),
        claims_conditions_ab: claims,
    };
    Ok((curve, meta))
}

fn hermitian(params: &FamilyParams) -> Result<(PlaneCurve, FamilyMeta)> {
    let q0 = need(params.q0, "q0")?;
    let (p, s) = prime_power(q0)?;
    let k = make_field(p, 2 * s)?;
    let d = (q0 + 1) as u32;
    let f = MultiPoly::from_int_terms(&k, 3, &[([d, 0, 0], 1), ([0, d, 0], 1), ([0, 0, d], 1)]);
    let curve = make_curve(&f)?;
    let q = k.q();
    let meta = FamilyMeta {
        kind: FamilyKind::Hermitian,
        p,
        q,
        field_degree: 2 * s,
        subfield_degree: None,
        d,
        alpha: vec![1],
        beta: vec![1],
        validated: vec!["q = q0^2".into(), "d = q0 + 1".into()],
        expected_p_nu: None,
        expected_n: Some(hefez_voloch(d as u64, q) as u64),
        expected_n_formula: Some("d(q - d + 2)".into()),
        claims_conditions_ab: false,
    };
    Ok((curve, meta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: u64, r: u32) -> FamilyParams {
        FamilyParams {
            p: Some(p),
            field_degree: Some(r),
            ..Default::default()
        }
    }

    #[test]
    fn fermat_cubic_metadata() {
        let (c, meta) = make_family(FamilyKind::Fermat, &FamilyParams { d: Some(3), ..params(5, 2) }).unwrap();
        assert_eq!(c.degree(), 3);
        assert_eq!(c.genus(), 1);
        assert_eq!(meta.expected_p_nu, Some(5));
        assert_eq!(meta.expected_n, Some(36));
        assert!(meta.claims_conditions_ab);
    }

    #[test]
    fn hermitian_over_f25() {
        let (c, meta) = make_family(FamilyKind::Hermitian, &FamilyParams { q0: Some(5), ..Default::default() }).unwrap();
        assert_eq!((c.degree(), c.genus(), c.q()), (6, 10, 25));
        assert_eq!(meta.expected_n, Some(126));
        assert!(make_family(FamilyKind::Hermitian, &FamilyParams { q0: Some(6), ..Default::default() }).is_err());
    }

    #[test]
    fn subfield_twisted_families() {
        let base = FamilyParams {
            subfield_degree: Some(1),
            ..params(5, 2)
        };
        let (c, _) = make_family(FamilyKind::Remark42i, &base).unwrap();
        assert_eq!(c.degree(), 3);
        let (c, _) = make_family(FamilyKind::Remark42ii, &base).unwrap();
        assert_eq!(c.degree(), 12);
        let (c, meta) = make_family(
            FamilyKind::Remark43,
            &FamilyParams {
                alpha: Some(vec![2]),
                beta: Some(vec![3]),
                ..base.clone()
            },
        )
        .unwrap();
        assert_eq!(c.degree(), 12);
        assert_eq!(meta.expected_n, Some(156));
        // squares are rejected for the non-square family and vice versa
        assert!(make_family(FamilyKind::Remark43, &base).is_err());
        let err = make_family(
            FamilyKind::Remark42ii,
            &FamilyParams {
                alpha: Some(vec![2]),
                ..base.clone()
            },
        )
        .unwrap_err();
        assert!(err.to_string().contains("square"));
        // p = 7 is not 1 mod 4
        let seven = FamilyParams {
            subfield_degree: Some(1),
            ..params(7, 2)
        };
        assert!(make_family(FamilyKind::Remark42ii, &seven).unwrap_err().to_string().contains("1 mod 4"));
        let (c, _) = make_family(FamilyKind::Remark42i, &seven).unwrap();
        assert_eq!(c.degree(), 4);
    }

    #[test]
    fn fermat_rejects_bad_degree() {
        let err = make_family(FamilyKind::Fermat, &FamilyParams { d: Some(10), ..params(5, 2) }).unwrap_err();
        assert!(err.to_string().contains("gcd"));
        assert!(make_family(
            FamilyKind::Fermat,
            &FamilyParams {
                d: Some(3),
                alpha: Some(vec![0]),
                ..params(5, 2)
            }
        )
        .is_err());
    }
}
