//! Point counts, the inflexion census and closed-form point-count formulas.

use serde::Serialize;

use crate::algebra::hessian;
use crate::config::Config;
use crate::curve::{enumerate_points, is_smooth, PlaneCurve, PointLocal, ProjPoint};
use crate::divisors::{curve_divisor_degrees, ram_order};
use crate::error::{Error, Result};

pub fn count_points(c: &PlaneCurve, cfg: &Config) -> Result<u64> {
    Ok(enumerate_points(c, 1, cfg)?.len() as u64)
}

#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub point: ProjPoint,
    /// Degree of the field of definition over `F_q`.
    pub m: u32,
    pub j: usize,
    pub rational: bool,
    pub v_r: usize,
}

#[derive(Debug, Clone)]
pub struct InflexionCensus {
    pub entries: Vec<CensusEntry>,
    pub ram_sum: i64,
    pub deg_r: i64,
    pub complete: bool,
    /// Extension degrees that were scanned.
    pub scanned: Vec<u32>,
    /// Extension degrees that were needed but exceed the capacity.
    pub skipped: Vec<u32>,
}

impl InflexionCensus {
    /// Number of inflexions that are not `F_q`-rational; defined only for a complete census.
    pub fn k(&self) -> Option<u64> {
        self.complete
            .then(|| self.entries.iter().filter(|e| !e.rational).count() as u64)
    }
}

fn census_entry(c: &PlaneCurve, p: &ProjPoint, m: u32, cfg: &Config) -> Result<Option<CensusEntry>> {
    let mut loc = PointLocal::new(c, p, cfg)?;
    let (_, j) = loc.tangent()?;
    if j < 3 {
        return Ok(None);
    }
    let v_r = ram_order(&mut loc)?;
    Ok(Some(CensusEntry {
        point: p.clone(),
        m,
        j,
        rational: m == 1,
        v_r,
    }))
}

/// Scans points of degree `m = 1, 2, ...` over `F_q` for inflexions until the sum of
/// `v_P(R)` reaches `deg R` (which proves no inflexion is missing) or `m_max` is passed.
pub fn inflexion_census(c: &PlaneCurve, cfg: &Config) -> Result<InflexionCensus> {
    if !is_smooth(c, cfg)?.is_smooth() {
        return Err(Error::SingularCurve);
    }
    let (deg_r, _) = curve_divisor_degrees(c);
    let p = c.p();
    let d = c.degree() as u64;
    // At a smooth point the Hessian vanishes at every inflexion when p does not divide 2(d-1).
    let hess = (p != 2 && (d - 1) % p != 0).then(|| hessian(c.form()));
    let mut census = InflexionCensus {
        entries: Vec::new(),
        ram_sum: 0,
        deg_r,
        complete: false,
        scanned: Vec::new(),
        skipped: Vec::new(),
    };
    for m in 1..=cfg.m_max {
        let pts = match enumerate_points(c, m, cfg) {
            Ok(p) => p,
            Err(Error::Capacity { .. }) => {
                census.skipped.extend(m..=cfg.m_max);
                break;
            }
            Err(e) => return Err(e),
        };
        census.scanned.push(m);
        let h = match &hess {
            Some(h) => Some(h.embed(&c.over(m)?.field)?),
            None => None,
        };
        let candidates: Vec<ProjPoint> = pts
            .into_iter()
            .filter(|pt| c.definition_degree(pt) == m)
            .filter(|pt| h.as_ref().map_or(true, |h| h.eval(&pt.coords()).is_zero()))
            .collect();
        let found = cfg.executor.map(&candidates, |pt| census_entry(c, pt, m, cfg));
        for e in found {
            if let Some(e) = e? {
                census.ram_sum += e.v_r as i64;
                census.entries.push(e);
            }
        }
        if census.ram_sum > deg_r {
            return Err(Error::Internal(format!(
                "ramification sum {} exceeds deg R = {}",
                census.ram_sum, deg_r
            )));
        }
        if census.ram_sum == deg_r {
            census.complete = true;
            break;
        }
    }
    Ok(census)
}

/// `(d(q + 5 - 2d) - k) / 2`.
pub fn theorem_formula(d: u64, q: u64, k: u64) -> Result<u64> {
    let v = d as i64 * (q as i64 + 5 - 2 * d as i64) - k as i64;
    if v < 0 {
        return Err(Error::Negative(v));
    }
    if v % 2 != 0 {
        return Err(Error::Parity(v));
    }
    Ok(v as u64 / 2)
}

/// `d(q - d + 2)`.
pub fn hefez_voloch(d: u64, q: u64) -> i64 {
    d as i64 * (q as i64 - d as i64 + 2)
}

fn exact_sqrt(q: u64) -> Option<u64> {
    let s = (q as f64).sqrt().round() as u64;
    (s.checked_mul(s) == Some(q)).then_some(s)
}

/// `q + 1 + (d-1)(d-2) sqrt(q)`, for square `q` with `sqrt(q) = -1 mod d`.
pub fn fermat_intro(d: u64, q: u64) -> Result<u64> {
    let s = exact_sqrt(q).ok_or_else(|| Error::Domain(format!("q = {q} is not a square")))?;
    if d == 0 || (s + 1) % d != 0 {
        return Err(Error::Domain(format!("sqrt(q) = {s} is not -1 mod d = {d}")));
    }
    Ok(q + 1 + (d - 1) * d.saturating_sub(2) * s)
}

/// `psi = 0` when the subfield degree is odd and `p = 3 mod 4`, else 1.
pub fn psi(p: u64, subfield_degree: u32) -> u64 {
    if subfield_degree % 2 == 1 && p % 4 == 3 {
        0
    } else {
        1
    }
}

/// `d (q - 1 + d - d psi + 2 psi) / 2`.
pub fn remark43(d: u64, q: u64, p: u64, subfield_degree: u32) -> Result<u64> {
    let ps = psi(p, subfield_degree) as i64;
    let (d, q) = (d as i64, q as i64);
    let v = d * (q - 1 + d - d * ps + 2 * ps);
    if v < 0 {
        return Err(Error::Negative(v));
    }
    if v % 2 != 0 {
        return Err(Error::Parity(v));
    }
    Ok(v as u64 / 2)
}

/// `(q + 1 - floor(2g sqrt q), q + 1 + floor(2g sqrt q))` with `g = (d-1)(d-2)/2`.
pub fn hasse_weil_bounds(d: u64, q: u64) -> (i64, i64) {
    let g = d.saturating_sub(1) * d.saturating_sub(2) / 2;
    let target = 4 * (g as u128) * (g as u128) * q as u128;
    let mut s = (target as f64).sqrt() as u128;
    while s * s > target {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= target {
        s += 1;
    }
    let s = s as i64;
    (q as i64 + 1 - s, q as i64 + 1 + s)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum FormulaValue {
    Single(i64),
    Bounds(i64, i64),
}

/// Evaluates a named reference formula: `hefez-voloch`, `fermat-intro`, `remark43`
/// or `hasse-weil-bounds`.
pub fn reference_formula(name: &str, d: u64, q: u64, p: u64, subfield_degree: u32) -> Result<FormulaValue> {
    Ok(match name {
        "hefez-voloch" => FormulaValue::Single(hefez_voloch(d, q)),
        "fermat-intro" => FormulaValue::Single(fermat_intro(d, q)? as i64),
        "remark43" => FormulaValue::Single(remark43(d, q, p, subfield_degree)? as i64),
        "hasse-weil-bounds" => {
            let (lo, hi) = hasse_weil_bounds(d, q);
            FormulaValue::Bounds(lo, hi)
        }
        other => return Err(Error::Domain(format!("unknown formula {other}"))),
    })
}
