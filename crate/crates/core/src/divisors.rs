//! Local valuations of the ramification divisor `R` and the Frobenius divisor `S`.
//!
//! At an affine point with local parameter `t` the correction terms of the
//! global definitions vanish, so both valuations are orders of explicit series:
//! `v_P(R) = ord(D^1x D^2y - D^1y D^2x)` and
//! `v_P(S) = ord((x - x^q) D^1y - (y - y^q) D^1x)`.

use serde::Serialize;

use crate::config::Config;
use crate::curve::{PlaneCurve, PointLocal, ProjPoint};
use crate::error::{Error, Result};

/// `(deg R, deg S) = (3(2g-2) + 3d, (2g-2) + (q+2)d)`.
pub fn divisor_degrees(d: u64, q: u64) -> (i64, i64) {
    let d = d as i64;
    let q = q as i64;
    let g = (d - 1) * (d - 2) / 2;
    (3 * (2 * g - 2) + 3 * d, (2 * g - 2) + (q + 2) * d)
}

pub fn curve_divisor_degrees(c: &PlaneCurve) -> (i64, i64) {
    divisor_degrees(c.degree() as u64, c.q())
}

fn bound(deg: i64) -> usize {
    deg.max(1) as usize
}

pub fn ram_order(loc: &mut PointLocal) -> Result<usize> {
    let (deg_r, _) = curve_divisor_degrees(loc.curve());
    loc.order_of(bound(deg_r), 2, |e| {
        let k = e.field();
        let (x1, y1) = (e.x.hasse(k, 1), e.y.hasse(k, 1));
        let (x2, y2) = (e.x.hasse(k, 2), e.y.hasse(k, 2));
        Ok(x1.mul(k, &y2).sub(k, &y1.mul(k, &x2)))
    })
}

pub fn frob_order(loc: &mut PointLocal) -> Result<usize> {
    let (_, deg_s) = curve_divisor_degrees(loc.curve());
    let s = loc.curve().base().r();
    loc.order_of(bound(deg_s), 1, |e| {
        let k = e.field();
        let dx = e.x.sub(k, &e.x.frobenius_pow(k, s));
        let dy = e.y.sub(k, &e.y.frobenius_pow(k, s));
        let (x1, y1) = (e.x.hasse(k, 1), e.y.hasse(k, 1));
        Ok(dx.mul(k, &y1).sub(k, &dy.mul(k, &x1)))
    })
}

pub fn ram_valuation(c: &PlaneCurve, pt: &ProjPoint, cfg: &Config) -> Result<usize> {
    ram_order(&mut PointLocal::new(c, pt, cfg)?)
}

pub fn frob_valuation(c: &PlaneCurve, pt: &ProjPoint, cfg: &Config) -> Result<usize> {
    frob_order(&mut PointLocal::new(c, pt, cfg)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaCase {
    Rational,
    NonRationalOrdinary,
    NonRationalInflexion,
}

impl LemmaCase {
    pub fn classify(rational: bool, j: usize) -> Self {
        match (rational, j) {
            (true, _) => LemmaCase::Rational,
            (false, 2) => LemmaCase::NonRationalOrdinary,
            (false, _) => LemmaCase::NonRationalInflexion,
        }
    }

    /// Predicted `(v_R, v_S)`.
    pub fn expected(self, j: usize) -> (usize, usize) {
        let v_s = match self {
            LemmaCase::Rational => j,
            LemmaCase::NonRationalOrdinary => 0,
            LemmaCase::NonRationalInflexion => j - 1,
        };
        (j - 2, v_s)
    }
}

#[derive(Debug, Clone)]
pub struct LemmaRow {
    pub point: ProjPoint,
    pub j: usize,
    /// `None` when the valuation stayed indeterminate up to the precision cap.
    pub v_r: Option<usize>,
    pub v_s: Option<usize>,
    pub rational: bool,
    pub case: LemmaCase,
    pub pass: bool,
}

impl LemmaRow {
    /// `v_R >= j - 2` everywhere and `v_S >= j` at rational points.
    pub fn inequalities_hold(&self) -> bool {
        let r_ok = self.v_r.map_or(true, |v| v + 2 >= self.j);
        let s_ok = !self.rational || self.v_s.map_or(true, |v| v >= self.j);
        r_ok && s_ok
    }
}

fn indeterminate_as_none(r: Result<usize>) -> Result<Option<usize>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::Indeterminate { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

pub fn lemma_row(c: &PlaneCurve, pt: &ProjPoint, cfg: &Config) -> Result<LemmaRow> {
    let mut loc = PointLocal::new(c, pt, cfg)?;
    let (_, j) = loc.tangent()?;
    let v_r = indeterminate_as_none(ram_order(&mut loc))?;
    let v_s = indeterminate_as_none(frob_order(&mut loc))?;
    let rational = c.is_rational_over(pt, 1);
    let case = LemmaCase::classify(rational, j);
    let (er, es) = case.expected(j);
    Ok(LemmaRow {
        point: pt.clone(),
        j,
        v_r,
        v_s,
        rational,
        case,
        pass: v_r == Some(er) && v_s == Some(es),
    })
}

/// Compares the valuations at each point with the case table; rows follow the input order.
pub fn check_lemma_cases(c: &PlaneCurve, points: &[ProjPoint], cfg: &Config) -> Result<Vec<LemmaRow>> {
    cfg.executor
        .map(points, |p| lemma_row(c, p, cfg))
        .into_iter()
        .collect()
}
