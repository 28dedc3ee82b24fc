//! Truncated power series `sum a_i t^i mod t^n` over a field.

use super::field::{binomial_mod, Fe, Field};

/// The `t`-adic order of a series, or a lower bound when every known coefficient vanishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    AtLeast(usize),
}

impl Order {
    pub fn finite(self) -> Option<usize> {
        match self {
            Order::Finite(n) => Some(n),
            Order::AtLeast(_) => None,
        }
    }
}

/// Coefficient `i` is the coefficient of `t^i`; the series is exact modulo `t^precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Fe>,
}

impl PowerSeries {
    pub fn new(coeffs: Vec<Fe>) -> Self {
        PowerSeries { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        PowerSeries {
            coeffs: vec![Fe::ZERO; precision],
        }
    }

    pub fn constant(c: Fe, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    /// `c + t`.
    pub fn shifted_variable(c: Fe, precision: usize) -> Self {
        let mut s = Self::constant(c, precision);
        if precision > 1 {
            s.coeffs[1] = Fe::ONE;
        }
        s
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.coeffs.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn order(&self) -> Order {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Order::Finite(i),
            None => Order::AtLeast(self.precision()),
        }
    }

    pub fn truncate(&self, precision: usize) -> Self {
        PowerSeries {
            coeffs: self.coeffs[..precision.min(self.precision())].to_vec(),
        }
    }

    pub fn add(&self, k: &Field, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        PowerSeries {
            coeffs: (0..n).map(|i| k.add(self.coeffs[i], other.coeffs[i])).collect(),
        }
    }

    pub fn sub(&self, k: &Field, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        PowerSeries {
            coeffs: (0..n).map(|i| k.sub(self.coeffs[i], other.coeffs[i])).collect(),
        }
    }

    pub fn scale(&self, k: &Field, c: Fe) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|&x| k.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, k: &Field, other: &Self) -> Self {
        let n = self.precision().min(other.precision());
        let mut out = vec![Fe::ZERO; n];
        for (i, &a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        PowerSeries { coeffs: out }
    }

    /// Power by repeated squaring.
    pub fn pow(&self, k: &Field, mut e: u64) -> Self {
        let mut result = Self::constant(Fe::ONE, self.precision());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(k, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(k, &base);
            }
        }
        result
    }

    /// The power `self^(p^s)`, computed as `sum a_i^(p^s) t^(i p^s)` (exact in characteristic p).
    pub fn frobenius_pow(&self, k: &Field, s: u32) -> Self {
        let n = self.precision();
        let step = (k.p() as u128).pow(s);
        let mut out = vec![Fe::ZERO; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            let pos = i as u128 * step;
            if pos >= n as u128 {
                break;
            }
            out[pos as usize] = k.frobenius(a, s);
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; `None` when the constant term vanishes.
    pub fn inverse(&self, k: &Field) -> Option<Self> {
        let n = self.precision();
        let c0 = k.try_inv(*self.coeffs.first()?)?;
        let mut out = vec![Fe::ZERO; n];
        out[0] = c0;
        for i in 1..n {
            let mut acc = Fe::ZERO;
            for j in 1..=i {
                acc = k.add(acc, k.mul(self.coeffs[j], out[i - j]));
            }
            out[i] = k.neg(k.mul(acc, c0));
        }
        Some(PowerSeries { coeffs: out })
    }

    /// Hasse derivative `D^j`: `t^n -> C(n,j) t^(n-j)`. Precision drops by `j`.
    pub fn hasse(&self, k: &Field, j: usize) -> Self {
        let p = k.p();
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(j)
                .map(|(n, &c)| {
                    let b = binomial_mod(n as u64, j as u64, p);
                    k.mul(c, k.from_int(b as i64))
                })
                .collect(),
        }
    }
}

/// `D^j` on a dense polynomial (coefficients low degree first).
pub fn hasse_poly(k: &Field, a: &[Fe], j: usize) -> Vec<Fe> {
    let mut out = PowerSeries::new(a.to_vec()).hasse(k, j).coeffs;
    super::upoly::trim(&mut out);
    out
}
