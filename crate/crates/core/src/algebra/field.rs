//! Finite fields `F_{p^r}` in the power basis of a canonical modulus.
//!
//! The modulus is the first monic irreducible polynomial of degree `r` when its
//! low coefficient tuple `(c_0, .., c_{r-1})` is read as a base-`p` integer. An
//! element with coefficients `(a_0, .., a_{r-1})` has *index* `sum a_i p^i`; the
//! index order is the canonical enumeration order of the field.
//!
//! Internally an element is stored as its discrete logarithm with respect to a
//! fixed generator, and addition goes through a Zech logarithm table. Both
//! operations are a couple of table lookups.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest field order that can be represented (three `u32` tables of this size).
pub const MAX_FIELD_ORDER: u64 = 1 << 23;

const ZERO_LOG: u32 = u32::MAX;

/// A field element. Only meaningful together with the [`Field`] that produced it.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fe(u32);

impl Fe {
    pub const ZERO: Fe = Fe(ZERO_LOG);
    pub const ONE: Fe = Fe(0);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == ZERO_LOG
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "g^{}", self.0)
        }
    }
}

struct Inner {
    p: u32,
    r: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
    minus_one: u32,
}

/// Handle to a finite field; cheap to clone.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.r == other.0.r
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.r)
    }
}

/// JSON form of a field: `{"p": int, "r": int, "modulus": [c0..cr]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub r: u32,
    pub modulus: Vec<u32>,
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

fn embeddings() -> &'static Mutex<HashMap<(u32, u32, u32), Fe>> {
    static EMB: OnceLock<Mutex<HashMap<(u32, u32, u32), Fe>>> = OnceLock::new();
    EMB.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Builds (or fetches from the process-wide cache) the field with `p^r` elements.
pub fn make_field(p: u64, r: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if r < 1 {
        return Err(Error::BadDegree(r));
    }
    let q = (p as u128).checked_pow(r).unwrap_or(u128::MAX);
    if q > MAX_FIELD_ORDER as u128 {
        return Err(Error::Capacity {
            what: "field order",
            needed: q,
            limit: MAX_FIELD_ORDER as u128,
        });
    }
    let key = (p as u32, r);
    if let Some(f) = registry().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let field = Field(Arc::new(build(p as u32, r)));
    registry()
        .lock()
        .unwrap()
        .entry(key)
        .or_insert_with(|| field.clone());
    Ok(field)
}

// Dense polynomials over F_p with u64 coefficients, low degree first. Only used
// while constructing a field.
mod fp {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        let inv_lead = inv(m[dm], p);
        while a.len() > dm {
            let k = a.len() - 1 - dm;
            let c = a[a.len() - 1] * inv_lead % p;
            for (i, &mi) in m.iter().enumerate() {
                a[k + i] = (a[k + i] + p * p - c * mi % p) % p;
            }
            trim(&mut a);
        }
        a
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        rem(&result, m, p)
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a % p, p - 2, p)
    }

    pub fn pow(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1 % p;
        b %= p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }
}

/// Rabin's irreducibility test for a monic `f` of degree `r` over `F_p`.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let r = (f.len() - 1) as u32;
    let x = vec![0u64, 1];
    let pr = (p as u128).pow(r);
    let mut xr = fp::powmod(&x, pr, f, p);
    fp::trim(&mut xr);
    let mut xx = fp::rem(&x, f, p);
    fp::trim(&mut xx);
    if xr != xx {
        return false;
    }
    for l in prime_factors(r as u64) {
        let e = (p as u128).pow(r / l as u32);
        let mut h = fp::powmod(&x, e, f, p);
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = fp::gcd(f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The canonical modulus `c_0 + c_1 t + .. + t^r`, returned as `[c_0, .., c_{r-1}, 1]`.
pub fn canonical_modulus(p: u64, r: u32) -> Vec<u32> {
    if r == 1 {
        return vec![0, 1];
    }
    let total = (p as u128).pow(r);
    for n in 0..total {
        let mut f: Vec<u64> = (0..r).map(|i| ((n / (p as u128).pow(i)) % p as u128) as u64).collect();
        if f[0] == 0 {
            continue;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f.into_iter().map(|c| c as u32).collect();
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn digits(mut idx: u32, p: u32, r: u32) -> Vec<u64> {
    (0..r)
        .map(|_| {
            let d = idx % p;
            idx /= p;
            d as u64
        })
        .collect()
}

fn undigits(ds: &[u64], p: u32) -> u32 {
    ds.iter().rev().fold(0u32, |acc, &d| acc * p + d as u32)
}

fn build(p: u32, r: u32) -> Inner {
    let modulus = canonical_modulus(p as u64, r);
    let q = p.pow(r);
    let n = q - 1;
    let m64: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
    let pp = p as u64;

    let slow_mul = |a: &[u64], b: &[u64]| -> Vec<u64> {
        let mut v = fp::mulmod(a, b, &m64, pp);
        v.resize(r as usize, 0);
        v
    };

    let factors = prime_factors(n as u64);
    let generator = (1..q)
        .find(|&cand| {
            let base = digits(cand, p, r);
            factors.iter().all(|&l| {
                let mut v = fp::powmod(&base, (n as u64 / l) as u128, &m64, pp);
                v.resize(r as usize, 0);
                undigits(&v, p) != 1
            })
        })
        .expect("multiplicative group is cyclic");
    let g = digits(generator, p, r);

    let mut exp = Vec::with_capacity(n as usize);
    let mut log = vec![ZERO_LOG; q as usize];
    let mut cur = digits(1, p, r);
    for e in 0..n {
        let idx = undigits(&cur, p);
        exp.push(idx);
        log[idx as usize] = e;
        cur = slow_mul(&cur, &g);
    }
    let zech = exp
        .iter()
        .map(|&idx| {
            let d0 = idx % p;
            let next = idx - d0 + (d0 + 1) % p;
            log[next as usize]
        })
        .collect();
    let minus_one = if p == 2 { 0 } else { n / 2 };
    Inner {
        p,
        r,
        q,
        modulus,
        exp,
        log,
        zech,
        minus_one,
    }
}

impl Field {
    #[inline]
    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.0.r
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.0.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc {
            p: self.p(),
            r: self.r(),
            modulus: self.0.modulus.clone(),
        }
    }

    /// Rebuilds a field from its JSON description; the modulus must be the canonical one.
    pub fn from_desc(d: &FieldDesc) -> Result<Field> {
        let f = make_field(d.p, d.r)?;
        if d.modulus != f.0.modulus {
            return Err(Error::Format(format!(
                "field.modulus {:?} is not the canonical modulus {:?} of F_{}^{}",
                d.modulus, f.0.modulus, d.p, d.r
            )));
        }
        Ok(f)
    }

    /// The field `F_{p^(r*m)}`.
    pub fn extension(&self, m: u32) -> Result<Field> {
        if m == 1 {
            return Ok(self.clone());
        }
        make_field(self.p(), self.r() * m)
    }

    #[inline]
    pub fn zero(&self) -> Fe {
        Fe::ZERO
    }

    #[inline]
    pub fn one(&self) -> Fe {
        Fe::ONE
    }

    /// Element of the prime subfield.
    pub fn from_int(&self, v: i64) -> Fe {
        let p = self.0.p as i64;
        self.from_index(v.rem_euclid(p) as u32)
    }

    #[inline]
    pub fn from_index(&self, idx: u32) -> Fe {
        Fe(self.0.log[idx as usize])
    }

    pub fn try_from_index(&self, idx: u64) -> Result<Fe> {
        if idx >= self.q() {
            return Err(Error::BadElement(format!("index {idx} out of range for {self:?}")));
        }
        Ok(self.from_index(idx as u32))
    }

    #[inline]
    pub fn index(&self, a: Fe) -> u32 {
        if a.is_zero() {
            0
        } else {
            self.0.exp[a.0 as usize]
        }
    }

    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        digits(self.index(a), self.0.p, self.0.r)
            .into_iter()
            .map(|d| d as u32)
            .collect()
    }

    pub fn from_coeffs(&self, cs: &[u32]) -> Result<Fe> {
        if cs.len() != self.0.r as usize {
            return Err(Error::BadElement(format!(
                "expected {} residues, got {}",
                self.0.r,
                cs.len()
            )));
        }
        if let Some(&c) = cs.iter().find(|&&c| c >= self.0.p) {
            return Err(Error::BadElement(format!("residue {c} not in [0,{})", self.0.p)));
        }
        let ds: Vec<u64> = cs.iter().map(|&c| c as u64).collect();
        Ok(self.from_index(undigits(&ds, self.0.p)))
    }

    /// All elements in canonical (index) order.
    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.0.q).map(move |i| self.from_index(i))
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let (lo, hi) = if a.0 <= b.0 { (a.0, b.0) } else { (b.0, a.0) };
        let z = self.0.zech[(hi - lo) as usize];
        if z == ZERO_LOG {
            return Fe::ZERO;
        }
        let s = lo + z;
        let n = self.0.q - 1;
        Fe(if s >= n { s - n } else { s })
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if a.is_zero() {
            return a;
        }
        let s = a.0 + self.0.minus_one;
        let n = self.0.q - 1;
        Fe(if s >= n { s - n } else { s })
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        let s = a.0 + b.0;
        let n = self.0.q - 1;
        Fe(if s >= n { s - n } else { s })
    }

    /// Multiplicative inverse.
    ///
    /// Panics on zero; use [`Field::try_inv`] when the argument may vanish.
    #[inline]
    pub fn inv(&self, a: Fe) -> Fe {
        self.try_inv(a).expect("division by zero")
    }

    #[inline]
    pub fn try_inv(&self, a: Fe) -> Option<Fe> {
        if a.is_zero() {
            return None;
        }
        let n = self.0.q - 1;
        Some(Fe(if a.0 == 0 { 0 } else { n - a.0 }))
    }

    #[inline]
    pub fn div(&self, a: Fe, b: Fe) -> Fe {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if e == 0 {
            return Fe::ONE;
        }
        if a.is_zero() {
            return Fe::ZERO;
        }
        let n = (self.0.q - 1) as u64;
        Fe(((a.0 as u64 * (e % n)) % n) as u32)
    }

    /// `a^(p^s)`.
    pub fn frobenius(&self, a: Fe, s: u32) -> Fe {
        if a.is_zero() {
            return a;
        }
        let n = (self.0.q - 1) as u64;
        let e = fp::pow(self.p() % n.max(1), s as u64, n.max(1));
        let e = if n == 1 { 0 } else { e };
        Fe(((a.0 as u64 * e) % n.max(1)) as u32)
    }

    /// Whether `a` lies in the subfield `F_{p^s}` (fixed points of `frobenius(., s)`).
    pub fn in_subfield(&self, a: Fe, s: u32) -> bool {
        self.frobenius(a, s) == a
    }

    pub fn is_square(&self, a: Fe) -> bool {
        a.is_zero() || self.0.p == 2 || a.0 % 2 == 0
    }

    /// Canonical embedding of an element of `src` into this field.
    ///
    /// The root of the source modulus is sent to its smallest-index root here, fixed
    /// once per pair of fields.
    pub fn embed(&self, src: &Field, a: Fe) -> Result<Fe> {
        if src.p() != self.p() {
            return Err(Error::Characteristic(src.p(), self.p()));
        }
        if self.r() % src.r() != 0 {
            return Err(Error::NotSubfield {
                from: src.r(),
                target: self.r(),
            });
        }
        if src.r() == self.r() {
            return Ok(a);
        }
        let theta = self.embedding_root(src)?;
        let cs = src.coeffs(a);
        let mut acc = Fe::ZERO;
        for &c in cs.iter().rev() {
            acc = self.add(self.mul(acc, theta), self.from_index(c));
        }
        Ok(acc)
    }

    fn embedding_root(&self, src: &Field) -> Result<Fe> {
        let key = (self.0.p, src.r(), self.r());
        if let Some(&t) = embeddings().lock().unwrap().get(&key) {
            return Ok(t);
        }
        if src.r() == 1 {
            return Ok(Fe::ZERO);
        }
        let poly: Vec<Fe> = src.modulus().iter().map(|&c| self.from_index(c)).collect();
        let roots = crate::algebra::upoly::roots(self, &poly, 0)?;
        let theta = *roots
            .first()
            .ok_or_else(|| Error::Internal("source modulus has no root in target".into()))?;
        embeddings().lock().unwrap().insert(key, theta);
        Ok(theta)
    }

    /// Degree over `F_p` of the smallest subfield containing `a`.
    pub fn degree_of(&self, a: Fe) -> u32 {
        (1..=self.r())
            .filter(|s| self.r() % s == 0)
            .find(|&s| self.in_subfield(a, s))
            .unwrap_or(self.r())
    }
}

/// Binomial coefficient `C(n, k)` reduced mod `p`, by Lucas' theorem.
pub fn binomial_mod(mut n: u64, mut k: u64, p: u64) -> u64 {
    let mut result = 1u64;
    while n > 0 || k > 0 {
        let (ni, ki) = (n % p, k % p);
        if ki > ni {
            return 0;
        }
        let mut c = 1u64;
        for i in 0..ki {
            c = c * ((ni - i) % p) % p;
            c = c * fp::inv(i + 1, p) % p;
        }
        result = result * c % p;
        n /= p;
        k /= p;
    }
    result
}
