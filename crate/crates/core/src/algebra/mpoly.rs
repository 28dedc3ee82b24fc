//! Sparse polynomials in two or three variables.
//!
//! Exponents are always stored as a triple; two-variable polynomials keep the
//! third exponent at zero. Terms are ordered lexicographically by exponent
//! triple, which is also the monomial order used by [`MultiPoly::rem`].

use std::collections::BTreeMap;
use std::fmt;

use super::field::{binomial_mod, Fe, Field};
use crate::error::{Error, Result};

pub type Exps = [u32; 3];

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Exps, Fe>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["X0", "X1", "X2"];
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(e, c)| {
                let mut s = format!("{:?}", self.field.coeffs(*c));
                for (v, &ev) in e.iter().enumerate().take(self.nvars) {
                    if ev > 0 {
                        s.push_str(&format!("*{}^{}", names[v], ev));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        assert!(nvars == 2 || nvars == 3, "two or three variables");
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: Fe) -> Self {
        Self::monomial(field, nvars, [0, 0, 0], c)
    }

    pub fn monomial(field: &Field, nvars: usize, e: Exps, c: Fe) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(e, c);
        p
    }

    /// The variable `X_i`.
    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Self::monomial(field, nvars, e, Fe::ONE)
    }

    pub fn from_terms(field: &Field, nvars: usize, terms: impl IntoIterator<Item = (Exps, Fe)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Convenience constructor from prime-field integer coefficients.
    pub fn from_int_terms(field: &Field, nvars: usize, terms: &[(Exps, i64)]) -> Self {
        Self::from_terms(field, nvars, terms.iter().map(|&(e, c)| (e, field.from_int(c))))
    }

    pub fn add_term(&mut self, e: Exps, c: Fe) {
        debug_assert!(self.nvars == 3 || e[2] == 0);
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert(Fe::ZERO);
        *slot = self.field.add(*slot, c);
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &Fe)> + '_ {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Exps) -> Fe {
        self.terms.get(e).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Degree in a single variable.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, *c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, self.field.neg(*c));
        }
        out
    }

    pub fn scale(&self, c: Fe) -> Self {
        Self::from_terms(
            &self.field,
            self.nvars,
            self.terms.iter().map(|(e, x)| (*e, self.field.mul(*x, c))),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.field, self.nvars.max(other.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                out.add_term(e, self.field.mul(*ca, *cb));
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(&self.field, self.nvars, Fe::ONE);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Ordinary partial derivative with respect to `X_var`.
    pub fn partial(&self, var: usize) -> Self {
        self.hasse(var, 1)
    }

    /// Hasse derivative `D^k` with respect to `X_var`: `X^n -> C(n,k) X^(n-k)`.
    pub fn hasse(&self, var: usize, k: u32) -> Self {
        let p = self.field.p();
        Self::from_terms(
            &self.field,
            self.nvars,
            self.terms.iter().filter(|(e, _)| e[var] >= k).map(|(e, c)| {
                let b = binomial_mod(e[var] as u64, k as u64, p);
                let mut ne = *e;
                ne[var] -= k;
                (ne, self.field.mul(*c, self.field.from_int(b as i64)))
            }),
        )
    }

    /// Evaluates at a point whose coordinates live in the same field.
    pub fn eval(&self, x: &[Fe]) -> Fe {
        let k = &self.field;
        self.terms.iter().fold(Fe::ZERO, |acc, (e, c)| {
            let mut t = *c;
            for (v, xv) in x.iter().enumerate().take(self.nvars) {
                if e[v] > 0 {
                    t = k.mul(t, k.pow(*xv, e[v] as u64));
                }
            }
            k.add(acc, t)
        })
    }

    /// Dense coefficients in `X_var` after fixing the other variables to `fixed`.
    pub fn slice(&self, var: usize, fixed: &[Fe]) -> Vec<Fe> {
        let k = &self.field;
        let len = self.degree_in(var).map_or(0, |d| d as usize + 1);
        let mut out = vec![Fe::ZERO; len];
        for (e, c) in &self.terms {
            let mut t = *c;
            for (v, xv) in fixed.iter().enumerate().take(self.nvars) {
                if v != var && e[v] > 0 {
                    t = k.mul(t, k.pow(*xv, e[v] as u64));
                }
            }
            let slot = &mut out[e[var] as usize];
            *slot = k.add(*slot, t);
        }
        super::upoly::trim(&mut out);
        out
    }

    /// Image of the coefficients under the canonical embedding into `target`.
    pub fn embed(&self, target: &Field) -> Result<Self> {
        if *target == self.field {
            return Ok(self.clone());
        }
        let mut out = Self::zero(target, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(*e, target.embed(&self.field, *c)?);
        }
        Ok(out)
    }

    /// Two-variable `f(X, Y)` to the form `X2^d f(X0/X2, X1/X2)`.
    pub fn homogenize(&self) -> Result<Self> {
        if self.nvars != 2 {
            return Ok(self.clone());
        }
        let d = self.total_degree().ok_or(Error::ZeroPolynomial)?;
        Ok(Self::from_terms(
            &self.field,
            3,
            self.terms
                .iter()
                .map(|(e, c)| ([e[0], e[1], d - e[0] - e[1]], *c)),
        ))
    }

    /// Sets `X_k = 1`; the remaining variables keep their relative order.
    pub fn dehomogenize(&self, k: usize) -> Self {
        assert_eq!(self.nvars, 3);
        let (a, b) = chart_vars(k);
        Self::from_terms(
            &self.field,
            2,
            self.terms.iter().map(|(e, c)| ([e[a], e[b], 0], *c)),
        )
    }

    /// Remainder of division by `f` under lexicographic order; zero iff `f` divides `self`.
    pub fn rem(&self, f: &Self) -> Result<Self> {
        let (lead_e, lead_c) = f
            .terms
            .iter()
            .next_back()
            .map(|(e, c)| (*e, *c))
            .ok_or(Error::ZeroPolynomial)?;
        let k = &self.field;
        let inv = k.inv(lead_c);
        let mut work = self.terms.clone();
        let mut remainder = Self::zero(k, self.nvars);
        while let Some((e, c)) = work.pop_last() {
            if (0..3).all(|v| e[v] >= lead_e[v]) {
                let shift = [e[0] - lead_e[0], e[1] - lead_e[1], e[2] - lead_e[2]];
                let factor = k.mul(c, inv);
                for (fe, fc) in f.terms.iter().rev().skip(1) {
                    let ne = [fe[0] + shift[0], fe[1] + shift[1], fe[2] + shift[2]];
                    let slot = work.entry(ne).or_insert(Fe::ZERO);
                    *slot = k.sub(*slot, k.mul(factor, *fc));
                    if slot.is_zero() {
                        work.remove(&ne);
                    }
                }
            } else {
                remainder.add_term(e, c);
            }
        }
        Ok(remainder)
    }
}

/// The two affine variables of the chart `X_k = 1`, in increasing index order.
pub fn chart_vars(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        2 => (0, 1),
        _ => panic!("chart index out of range"),
    }
}

/// Hessian determinant `det(d^2 F / dX_i dX_j)` of a ternary form.
pub fn hessian(f: &MultiPoly) -> MultiPoly {
    let second = |i: usize, j: usize| f.partial(i).partial(j);
    let h: Vec<Vec<MultiPoly>> = (0..3)
        .map(|i| (0..3).map(|j| second(i, j)).collect())
        .collect();
    let minor = |a: usize, b: usize, c: usize, d: usize| {
        h[1][a].mul(&h[2][b]).sub(&h[1][c].mul(&h[2][d]))
    };
    h[0][0]
        .mul(&minor(1, 2, 2, 1))
        .sub(&h[0][1].mul(&minor(0, 2, 2, 0)))
        .add(&h[0][2].mul(&minor(0, 1, 1, 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::make_field;

    #[test]
    fn hasse_in_one_variable() {
        let k = make_field(7, 1).unwrap();
        let t5 = MultiPoly::from_int_terms(&k, 2, &[([5, 0, 0], 1)]);
        assert_eq!(t5.hasse(0, 2), MultiPoly::from_int_terms(&k, 2, &[([3, 0, 0], 3)]));
        let k5 = make_field(5, 1).unwrap();
        let t5 = MultiPoly::from_int_terms(&k5, 2, &[([5, 0, 0], 1)]);
        assert!(t5.hasse(0, 2).is_zero());
        assert!(t5.partial(0).is_zero());
    }

    #[test]
    fn homogenize_and_dehomogenize() {
        let k = make_field(5, 1).unwrap();
        // Y - X^2
        let f = MultiPoly::from_int_terms(&k, 2, &[([0, 1, 0], 1), ([2, 0, 0], -1)]);
        let h = f.homogenize().unwrap();
        assert!(h.is_homogeneous());
        assert_eq!(h.coeff(&[0, 1, 1]), Fe::ONE);
        assert_eq!(h.dehomogenize(2), f);
    }

    #[test]
    fn remainder_detects_divisibility() {
        let k = make_field(5, 1).unwrap();
        let f = MultiPoly::from_int_terms(&k, 3, &[([3, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 3], 1)]);
        let g = MultiPoly::from_int_terms(&k, 3, &[([1, 1, 0], 2), ([0, 0, 2], 3), ([1, 0, 1], 1)]);
        assert!(f.mul(&g).rem(&f).unwrap().is_zero());
        let r = f.mul(&g).add(&MultiPoly::var(&k, 3, 1)).rem(&f).unwrap();
        assert_eq!(r, MultiPoly::var(&k, 3, 1));
    }

    #[test]
    fn slice_matches_eval() {
        let k = make_field(7, 2).unwrap();
        let f = MultiPoly::from_int_terms(
            &k,
            3,
            &[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1), ([1, 2, 1], 3)],
        );
        let a = k.from_index(17);
        let c = k.from_index(30);
        let s = f.slice(1, &[a, Fe::ZERO, c]);
        for y in k.elements().step_by(7) {
            let direct = f.eval(&[a, y, c]);
            assert_eq!(crate::algebra::upoly::eval(&k, &s, y), direct);
        }
    }

    #[test]
    fn fermat_hessian_is_monomial() {
        let k = make_field(7, 1).unwrap();
        let f = MultiPoly::from_int_terms(&k, 3, &[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)]);
        let h = hessian(&f);
        assert_eq!(h.num_terms(), 1);
        assert_eq!(h.terms().next().unwrap().0, &[2, 2, 2]);
    }
}
