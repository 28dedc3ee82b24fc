//! Dense univariate polynomials over a [`Field`], stored low degree first.
//!
//! The free functions work on slices and always return trimmed vectors (no
//! trailing zeros; the zero polynomial is the empty vector).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Fe, Field};
use crate::error::{Error, Result};

/// Exhaustive scan is used as a last resort for fields at most this large.
pub const SCAN_LIMIT: u64 = 4096;

pub fn trim(v: &mut Vec<Fe>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

pub fn trimmed(v: &[Fe]) -> Vec<Fe> {
    let mut v = v.to_vec();
    trim(&mut v);
    v
}

/// Degree, or `None` for the zero polynomial.
pub fn degree(a: &[Fe]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn add(k: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let n = a.len().max(b.len());
    let mut out: Vec<Fe> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Fe::ZERO);
            let y = b.get(i).copied().unwrap_or(Fe::ZERO);
            k.add(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn sub(k: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let n = a.len().max(b.len());
    let mut out: Vec<Fe> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Fe::ZERO);
            let y = b.get(i).copied().unwrap_or(Fe::ZERO);
            k.sub(x, y)
        })
        .collect();
    trim(&mut out);
    out
}

pub fn scale(k: &Field, a: &[Fe], c: Fe) -> Vec<Fe> {
    let mut out: Vec<Fe> = a.iter().map(|&x| k.mul(x, c)).collect();
    trim(&mut out);
    out
}

pub fn mul(k: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Fe::ZERO; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = k.add(out[i + j], k.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// Quotient and remainder. Panics if `b` is zero.
pub fn divrem(k: &Field, a: &[Fe], b: &[Fe]) -> (Vec<Fe>, Vec<Fe>) {
    let b = trimmed(b);
    let db = degree(&b).expect("division by the zero polynomial");
    let mut r = trimmed(a);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let inv_lead = k.inv(b[db]);
    let mut q = vec![Fe::ZERO; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = k.mul(r[r.len() - 1], inv_lead);
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = k.sub(r[shift + i], k.mul(c, bi));
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(k: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    divrem(k, a, b).1
}

pub fn monic(k: &Field, a: &[Fe]) -> Vec<Fe> {
    match degree(a) {
        None => Vec::new(),
        Some(d) => {
            let inv = k.inv(a[d]);
            scale(k, &a[..=d], inv)
        }
    }
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd(k: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    let mut a = trimmed(a);
    let mut b = trimmed(b);
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

pub fn mulmod(k: &Field, a: &[Fe], b: &[Fe], m: &[Fe]) -> Vec<Fe> {
    rem(k, &mul(k, a, b), m)
}

pub fn powmod(k: &Field, base: &[Fe], mut e: u128, m: &[Fe]) -> Vec<Fe> {
    let mut result = rem(k, &[Fe::ONE], m);
    let mut b = rem(k, base, m);
    while e > 0 {
        if e & 1 == 1 {
            result = mulmod(k, &result, &b, m);
        }
        e >>= 1;
        if e > 0 {
            b = mulmod(k, &b, &b, m);
        }
    }
    result
}

pub fn derivative(k: &Field, a: &[Fe]) -> Vec<Fe> {
    let mut out: Vec<Fe> = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| k.mul(k.from_int(i as i64), c))
        .collect();
    trim(&mut out);
    out
}

pub fn eval(k: &Field, a: &[Fe], x: Fe) -> Fe {
    a.iter().rev().fold(Fe::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
}

/// `x^Q - x mod m` where `Q = |k|^s`.
fn frobenius_residue(k: &Field, m: &[Fe], s: u32) -> Vec<Fe> {
    let x = [Fe::ZERO, Fe::ONE];
    let mut w = rem(k, &x, m);
    for _ in 0..s {
        w = powmod(k, &w, k.q() as u128, m);
    }
    sub(k, &w, &rem(k, &x, m))
}

/// The distinct roots of `g` lying in `k`, sorted by index.
///
/// `seed` drives the equal-degree splitting; the output does not depend on it.
pub fn roots(k: &Field, g: &[Fe], seed: u64) -> Result<Vec<Fe>> {
    let g = trimmed(g);
    let Some(dg) = degree(&g) else {
        return Err(Error::ZeroPolynomial);
    };
    if dg == 0 {
        return Ok(Vec::new());
    }
    let g = monic(k, &g);
    let h = gcd(k, &g, &frobenius_residue(k, &g, 1));
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    split_linear(k, &h, &mut rng, &mut out)?;
    out.sort_by_key(|&x| k.index(x));
    Ok(out)
}

/// Roots together with their multiplicities.
pub fn roots_with_multiplicity(k: &Field, g: &[Fe], seed: u64) -> Result<Vec<(Fe, u32)>> {
    let rs = roots(k, g, seed)?;
    Ok(rs
        .into_iter()
        .map(|x| {
            let lin = [k.neg(x), Fe::ONE];
            let mut cur = trimmed(g);
            let mut mult = 0;
            loop {
                let (q, r) = divrem(k, &cur, &lin);
                if !r.is_empty() {
                    break;
                }
                mult += 1;
                cur = q;
            }
            (x, mult)
        })
        .collect())
}

fn split_linear(k: &Field, h: &[Fe], rng: &mut ChaCha8Rng, out: &mut Vec<Fe>) -> Result<()> {
    let d = degree(h).unwrap_or(0);
    if d == 0 {
        return Ok(());
    }
    if d == 1 {
        out.push(k.neg(k.div(h[0], h[1])));
        return Ok(());
    }
    for _ in 0..64 {
        let delta = k.from_index(rng.gen_range(0..k.q() as u32));
        let s = if k.p() == 2 {
            // trace map: sum of (delta x)^(2^i) for i < deg_F2(k)
            let base = rem(k, &[Fe::ZERO, delta], h);
            let mut term = base.clone();
            let mut acc = base;
            for _ in 1..k.r() {
                term = mulmod(k, &term, &term, h);
                acc = add(k, &acc, &term);
            }
            gcd(k, h, &acc)
        } else {
            let w = powmod(k, &[delta, Fe::ONE], ((k.q() - 1) / 2) as u128, h);
            gcd(k, h, &sub(k, &w, &[Fe::ONE]))
        };
        let ds = degree(&s).unwrap_or(0);
        if ds > 0 && ds < d {
            let (other, _) = divrem(k, h, &s);
            split_linear(k, &s, rng, out)?;
            split_linear(k, &other, rng, out)?;
            return Ok(());
        }
    }
    if k.q() <= SCAN_LIMIT {
        out.extend(k.elements().filter(|&x| eval(k, h, x).is_zero()));
        return Ok(());
    }
    Err(Error::Internal("equal-degree splitting did not converge".into()))
}

/// `a^(1/p)` coefficient-wise for a polynomial in `x^p`.
fn pth_root(k: &Field, a: &[Fe]) -> Vec<Fe> {
    let p = k.p() as usize;
    let mut out: Vec<Fe> = a
        .iter()
        .step_by(p)
        .map(|&c| k.frobenius(c, k.r() - 1))
        .collect();
    trim(&mut out);
    out
}

/// Product of the distinct monic irreducible factors of `g`.
pub fn radical(k: &Field, g: &[Fe]) -> Vec<Fe> {
    let g = monic(k, g);
    if degree(&g).unwrap_or(0) == 0 {
        return vec![Fe::ONE];
    }
    let dg = derivative(k, &g);
    if dg.is_empty() {
        return radical(k, &pth_root(k, &g));
    }
    let c = gcd(k, &g, &dg);
    let (w, _) = divrem(k, &g, &c);
    let rc = radical(k, &c);
    let common = gcd(k, &w, &rc);
    let (rest, _) = divrem(k, &rc, &common);
    monic(k, &mul(k, &w, &rest))
}

/// Distinct-degree factorization of a squarefree monic polynomial: pairs
/// `(e, product of all irreducible factors of degree e)`.
pub fn distinct_degree(k: &Field, g: &[Fe]) -> Vec<(u32, Vec<Fe>)> {
    let mut rest = monic(k, g);
    let mut out = Vec::new();
    let x = vec![Fe::ZERO, Fe::ONE];
    let mut w = x.clone();
    let mut e = 0u32;
    while degree(&rest).unwrap_or(0) > 0 {
        e += 1;
        if 2 * e as usize > degree(&rest).unwrap() {
            out.push((degree(&rest).unwrap() as u32, rest));
            break;
        }
        w = powmod(k, &w, k.q() as u128, &rest);
        let f = gcd(k, &rest, &sub(k, &w, &x));
        if degree(&f).unwrap_or(0) > 0 {
            rest = divrem(k, &rest, &f).0;
            w = rem(k, &w, &rest);
            out.push((e, f));
        }
    }
    out
}
