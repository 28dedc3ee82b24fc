//! Contact of a plane curve with conics: order sequences, osculating conics and
//! Frobenius tests against lines and conics.

use serde::Serialize;

use crate::algebra::mpoly::chart_vars;
use crate::algebra::{Fe, Field, MultiPoly, PowerSeries};
use crate::config::Config;
use crate::curve::{
    enumerate_points, sample_points, sampling_extension, LocalExpansion, PlaneCurve, PointLocal,
    ProjPoint,
};
use crate::error::{Error, Result};

/// Conic monomials in the fixed order `1, x, y, x^2, xy, y^2`.
pub const CONIC_MONOMIALS: [[u32; 2]; 6] = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];

/// The six contact orders `j_0 < ... < j_5` of conics at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct OrderSequence(pub [usize; 6]);

impl OrderSequence {
    pub fn orders(&self) -> [usize; 6] {
        self.0
    }

    pub fn epsilon(&self) -> usize {
        self.0[5]
    }

    /// `(0,1,2,3,4,e)` when `j = 2`, `(0,1,2,j,j+1,2j)` when `j >= 3`.
    pub fn matches_dichotomy(&self, j: usize) -> bool {
        let o = self.0;
        if o[..3] != [0, 1, 2] {
            return false;
        }
        if j == 2 {
            o[3] == 3 && o[4] == 4
        } else {
            o[3] == j && o[4] == j + 1 && o[5] == 2 * j
        }
    }
}

/// A conic `c_1 + c_X x + c_Y y + c_XX x^2 + c_XY xy + c_YY y^2` in the chart
/// `X_chart = 1`, with `x, y` the chart coordinates in increasing index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conic {
    pub field: Field,
    pub chart: usize,
    pub coeffs: [Fe; 6],
}

impl Conic {
    /// Scales so the first nonzero coefficient is 1.
    pub fn normalized(field: &Field, chart: usize, coeffs: [Fe; 6]) -> Result<Self> {
        let lead = coeffs
            .iter()
            .find(|c| !c.is_zero())
            .ok_or_else(|| Error::Internal("zero conic".into()))?;
        let inv = field.inv(*lead);
        Ok(Conic {
            field: field.clone(),
            chart,
            coeffs: coeffs.map(|c| field.mul(c, inv)),
        })
    }

    /// Value of the homogenized conic at projective coordinates; only the
    /// vanishing of the result is meaningful.
    pub fn eval_projective(&self, coords: [Fe; 3]) -> Fe {
        let k = &self.field;
        let (a, b) = chart_vars(self.chart);
        let (x, y, z) = (coords[a], coords[b], coords[self.chart]);
        let vals = [
            k.mul(z, z),
            k.mul(x, z),
            k.mul(y, z),
            k.mul(x, x),
            k.mul(x, y),
            k.mul(y, y),
        ];
        vals.iter()
            .zip(&self.coeffs)
            .fold(Fe::ZERO, |acc, (&v, &c)| k.add(acc, k.mul(v, c)))
    }

    pub fn contains(&self, pt: &ProjPoint) -> Result<bool> {
        let k = &self.field;
        let c = pt.coords();
        let lifted = [k.embed(pt.field(), c[0])?, k.embed(pt.field(), c[1])?, k.embed(pt.field(), c[2])?];
        Ok(self.eval_projective(lifted).is_zero())
    }

    /// As a two-variable polynomial in the chart coordinates.
    pub fn poly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            &self.field,
            2,
            CONIC_MONOMIALS
                .iter()
                .zip(self.coeffs)
                .map(|(e, c)| ([e[0], e[1], 0], c)),
        )
    }

    /// Symmetric matrix of the quadratic form in `(x, y, z)`; needs odd characteristic.
    pub fn matrix(&self) -> Option<[[Fe; 3]; 3]> {
        let k = &self.field;
        let half = k.try_inv(k.from_int(2))?;
        let [c1, cx, cy, cxx, cxy, cyy] = self.coeffs;
        let h = |c| k.mul(c, half);
        Some([
            [cxx, h(cxy), h(cx)],
            [h(cxy), cyy, h(cy)],
            [h(cx), h(cy), c1],
        ])
    }

    pub fn rank(&self) -> Option<usize> {
        let k = &self.field;
        let mut m = self.matrix()?;
        let mut rank = 0;
        for col in 0..3 {
            let Some(piv) = (rank..3).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, piv);
            let inv = k.inv(m[rank][col]);
            for r in 0..3 {
                if r != rank && !m[r][col].is_zero() {
                    let f = k.mul(m[r][col], inv);
                    for c in 0..3 {
                        m[r][c] = k.sub(m[r][c], k.mul(f, m[rank][c]));
                    }
                }
            }
            rank += 1;
        }
        Some(rank)
    }

    pub fn is_irreducible(&self) -> Option<bool> {
        self.rank().map(|r| r == 3)
    }

    pub fn coeff_vectors(&self) -> Vec<Vec<u32>> {
        self.coeffs.iter().map(|&c| self.field.coeffs(c)).collect()
    }
}

/// Valuation basis of the span of the conic monomials, or `None` when some
/// combination vanishes to the full precision.
fn valuation_basis(e: &LocalExpansion) -> Option<Vec<(usize, PowerSeries, [Fe; 6])>> {
    let k = e.field();
    let n = e.precision();
    let one = PowerSeries::constant(Fe::ONE, n);
    let series = [
        one,
        e.x.clone(),
        e.y.clone(),
        e.x.mul(k, &e.x),
        e.x.mul(k, &e.y),
        e.y.mul(k, &e.y),
    ];
    let mut basis: Vec<(usize, PowerSeries, [Fe; 6])> = Vec::with_capacity(6);
    for (i, s) in series.into_iter().enumerate() {
        let mut combo = [Fe::ZERO; 6];
        combo[i] = Fe::ONE;
        let mut s = s;
        loop {
            let ord = s.order().finite()?;
            let Some((_, ps, pc)) = basis.iter().find(|(o, _, _)| *o == ord) else {
                basis.push((ord, s, combo));
                break;
            };
            let f = k.div(s.coeff(ord), ps.coeff(ord));
            s = s.sub(k, &ps.scale(k, f));
            for (c, &p) in combo.iter_mut().zip(pc) {
                *c = k.sub(*c, k.mul(f, p));
            }
        }
    }
    basis.sort_by_key(|b| b.0);
    Some(basis)
}

fn require_degree(c: &PlaneCurve) -> Result<()> {
    if c.degree() < 3 {
        return Err(Error::DegreeTooSmall(c.degree()));
    }
    Ok(())
}

/// Order sequence and osculating conic at the point of `loc`.
pub fn osculation_at(loc: &mut PointLocal) -> Result<(OrderSequence, Conic)> {
    require_degree(loc.curve())?;
    let bound = 2 * loc.curve().degree() as usize;
    let schedule = loc.config().schedule(bound);
    let mut seen = 0;
    for prec in schedule {
        let e = loc.expansion(prec)?;
        seen = prec;
        if let Some(basis) = valuation_basis(e) {
            let orders = [0, 1, 2, 3, 4, 5].map(|i| basis[i].0);
            let conic = Conic::normalized(e.field(), e.chart.dehom, basis[5].2)?;
            return Ok((OrderSequence(orders), conic));
        }
    }
    Err(Error::Indeterminate { at_least: seen })
}

pub fn conic_order_sequence(c: &PlaneCurve, pt: &ProjPoint, cfg: &Config) -> Result<OrderSequence> {
    Ok(osculation_at(&mut PointLocal::new(c, pt, cfg)?)?.0)
}

pub fn osculating_conic(c: &PlaneCurve, pt: &ProjPoint, cfg: &Config) -> Result<Conic> {
    Ok(osculation_at(&mut PointLocal::new(c, pt, cfg)?)?.1)
}

/// Whether `Fr(P)` lies on the osculating conic at `P`.
pub fn frobenius_in_osculating_conic(c: &PlaneCurve, pt: &ProjPoint, cfg: &Config) -> Result<bool> {
    let conic = osculating_conic(c, pt, cfg)?;
    conic.contains(&c.frobenius(pt))
}

#[derive(Debug, Clone, Serialize)]
pub struct GenericEpsilon {
    pub epsilon: usize,
    pub nu: Option<u32>,
    pub sequence: OrderSequence,
    /// Extension degree over which the sample was drawn.
    pub m: u32,
    #[serde(skip)]
    pub points: Vec<ProjPoint>,
}

/// `nu` with `p^nu = e`, if any.
pub fn p_power_exponent(p: u64, e: usize) -> Option<u32> {
    let mut v = 1u64;
    for nu in 1..64 {
        v = v.checked_mul(p)?;
        if v == e as u64 {
            return Some(nu);
        }
        if v > e as u64 {
            return None;
        }
    }
    None
}

/// Lexicographically smallest order sequence over `cfg.sample` seeded points of
/// the smallest extension that is guaranteed to carry `100 * sample` points.
pub fn generic_epsilon(c: &PlaneCurve, cfg: &Config) -> Result<GenericEpsilon> {
    require_degree(c)?;
    let sample = cfg.sample.max(1);
    let m = sampling_extension(c, 100 * sample as u64, cfg)?;
    let points = sample_points(c, m, sample, cfg.seed)?;
    let seqs = cfg.executor.map(&points, |p| conic_order_sequence(c, p, cfg));
    let mut best: Option<OrderSequence> = None;
    for s in seqs {
        let s = s?;
        best = Some(best.map_or(s, |b| b.min(s)));
    }
    let sequence = best.expect("non-empty sample");
    Ok(GenericEpsilon {
        epsilon: sequence.epsilon(),
        nu: p_power_exponent(c.p(), sequence.epsilon()),
        sequence,
        m,
        points,
    })
}

/// `sum X_i^q dF/dX_i == 0 mod F`.
pub fn is_frobenius_nonclassical_lines(c: &PlaneCurve) -> Result<bool> {
    let q = u32::try_from(c.q()).map_err(|_| Error::Domain("q too large".into()))?;
    let f = c.form();
    let k = c.base();
    let mut g = MultiPoly::zero(k, 3);
    for i in 0..3 {
        let mut e = [0; 3];
        e[i] = q;
        g = g.add(&f.partial(i).mul(&MultiPoly::monomial(k, 3, e, Fe::ONE)));
    }
    Ok(g.rem(f)?.is_zero())
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum FncVerdict {
    HoldsOnTestedPoints,
    Refuted,
}

#[derive(Debug, Clone)]
pub struct FncConicsReport {
    pub verdict: FncVerdict,
    pub witness: Option<ProjPoint>,
    /// Number of points tested, excluding `F_q`-rational ones where the test is vacuous.
    pub tested: usize,
    /// Extension degrees scanned exhaustively.
    pub extensions: Vec<u32>,
    /// Extension degrees skipped because they exceed the capacity.
    pub skipped: Vec<u32>,
    /// Extension degree of the seeded extra sample.
    pub extra_m: Option<u32>,
}

fn first_failure(c: &PlaneCurve, pts: &[ProjPoint], cfg: &Config) -> Result<Option<ProjPoint>> {
    let hit = cfg.executor.find_first(pts, |p| match frobenius_in_osculating_conic(c, p, cfg) {
        Ok(true) => None,
        Ok(false) => Some(Ok(p.clone())),
        Err(e) => Some(Err(e)),
    });
    hit.transpose()
}

/// Tests `Fr(P)` on the osculating conic at every point of degree `m`,
/// `2 <= m <= m_max`, then on a seeded sample. The first failure in canonical
/// order is reported as witness.
pub fn check_fnc_conics(c: &PlaneCurve, cfg: &Config) -> Result<FncConicsReport> {
    require_degree(c)?;
    let mut report = FncConicsReport {
        verdict: FncVerdict::HoldsOnTestedPoints,
        witness: None,
        tested: 0,
        extensions: Vec::new(),
        skipped: Vec::new(),
        extra_m: None,
    };
    for m in 2..=cfg.m_max {
        let pts = match enumerate_points(c, m, cfg) {
            Ok(p) => p,
            Err(Error::Capacity { .. }) => {
                report.skipped.push(m);
                continue;
            }
            Err(e) => return Err(e),
        };
        let pts: Vec<ProjPoint> = pts
            .into_iter()
            .filter(|p| c.definition_degree(p) == m)
            .collect();
        report.extensions.push(m);
        if let Some(w) = first_failure(c, &pts, cfg)? {
            report.tested += pts.iter().position(|p| *p == w).unwrap() + 1;
            report.verdict = FncVerdict::Refuted;
            report.witness = Some(w);
            return Ok(report);
        }
        report.tested += pts.len();
    }
    let m = sampling_extension(c, 100 * cfg.sample.max(1) as u64, cfg)?;
    let extras: Vec<ProjPoint> = sample_points(c, m, cfg.sample.max(1), cfg.seed ^ 0x5eed)?
        .into_iter()
        .filter(|p| !c.is_rational_over(p, 1))
        .collect();
    report.extra_m = Some(m);
    if let Some(w) = first_failure(c, &extras, cfg)? {
        report.tested += extras.iter().position(|p| *p == w).unwrap() + 1;
        report.verdict = FncVerdict::Refuted;
        report.witness = Some(w);
        return Ok(report);
    }
    report.tested += extras.len();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::curve::{make_curve, tangent_order, vanishing_order};

    fn fermat(p: u64, r: u32, d: u32) -> PlaneCurve {
        let k = make_field(p, r).unwrap();
        make_curve(&MultiPoly::from_int_terms(
            &k,
            3,
            &[([d, 0, 0], 1), ([0, d, 0], 1), ([0, 0, d], 1)],
        ))
        .unwrap()
    }

    #[test]
    fn cubic_twist_at_origin_gives_double_tangent() {
        let k = make_field(7, 1).unwrap();
        let c = make_curve(&MultiPoly::from_int_terms(&k, 2, &[([0, 1, 0], 1), ([3, 0, 0], -1)])).unwrap();
        let o = ProjPoint::new(&k, 1, [Fe::ZERO, Fe::ZERO, Fe::ONE]).unwrap();
        let cfg = Config::default();
        assert_eq!(conic_order_sequence(&c, &o, &cfg).unwrap().0, [0, 1, 2, 3, 4, 6]);
        let conic = osculating_conic(&c, &o, &cfg).unwrap();
        assert_eq!(conic.coeffs, [Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ZERO, Fe::ONE]);
        assert_eq!(conic.rank(), Some(1));
    }

    #[test]
    fn parabola_like_quartic_osculates_with_parabola() {
        // y = x^2 + x^6 has contact 6 with y - x^2 at the origin
        let k = make_field(7, 1).unwrap();
        let c = make_curve(&MultiPoly::from_int_terms(
            &k,
            2,
            &[([0, 1, 0], 1), ([2, 0, 0], -1), ([6, 0, 0], -1)],
        ))
        .unwrap();
        let o = ProjPoint::new(&k, 1, [Fe::ZERO, Fe::ZERO, Fe::ONE]).unwrap();
        let conic = osculating_conic(&c, &o, &Config::default()).unwrap();
        let minus_one = k.from_int(-1);
        assert_eq!(conic.coeffs, [Fe::ZERO, Fe::ZERO, Fe::ONE, minus_one, Fe::ZERO, Fe::ZERO]);
    }

    #[test]
    fn fermat_cubic_order_sequences() {
        let c = fermat(5, 2, 3);
        let cfg = Config::default();
        for p in enumerate_points(&c, 1, &cfg).unwrap() {
            let mut loc = PointLocal::new(&c, &p, &cfg).unwrap();
            let (seq, conic) = osculation_at(&mut loc).unwrap();
            let (_, j) = loc.tangent().unwrap();
            assert!(seq.matches_dichotomy(j));
            // Oracle (coefficient-by-coefficient brute force): every rational
            // point has sequence (0,1,2,3,4,6), inflexion or not.
            assert_eq!(seq.0, [0, 1, 2, 3, 4, 6]);
            if j == 2 {
                assert_eq!(conic.is_irreducible(), Some(true));
            } else {
                assert_eq!(conic.rank(), Some(1));
            }
            let e = loc.expansion(16).unwrap();
            assert_eq!(vanishing_order(e, &conic.poly()).unwrap().finite(), Some(seq.epsilon()));
            assert!(frobenius_in_osculating_conic(&c, &p, &cfg).unwrap());
        }
    }

    #[test]
    fn fermat_cubic_quadratic_points_are_generic() {
        let c = fermat(5, 2, 3);
        let cfg = Config::default();
        let mut generic = 0;
        for p in sample_points(&c, 2, 40, 11).unwrap() {
            if c.is_rational_over(&p, 1) {
                continue;
            }
            let mut loc = PointLocal::new(&c, &p, &cfg).unwrap();
            let (seq, conic) = osculation_at(&mut loc).unwrap();
            let (_, j) = loc.tangent().unwrap();
            assert!(seq.matches_dichotomy(j));
            if seq.0 == [0, 1, 2, 3, 4, 5] {
                generic += 1;
                assert_eq!(conic.is_irreducible(), Some(true));
            }
            assert!(conic.contains(&c.frobenius(&p)).unwrap());
        }
        assert!(generic > 30);
    }

    #[test]
    fn generic_epsilon_of_theorem_families() {
        let cfg = Config::default();
        let g = generic_epsilon(&fermat(5, 2, 3), &cfg).unwrap();
        assert_eq!((g.epsilon, g.nu), (5, Some(1)));
        let g = generic_epsilon(&fermat(7, 2, 4), &cfg).unwrap();
        assert_eq!((g.epsilon, g.nu), (7, Some(1)));
    }

    #[test]
    fn degree_two_is_rejected() {
        let c = fermat(5, 1, 2);
        let p = enumerate_points(&c, 1, &Config::default()).unwrap()[0].clone();
        assert!(matches!(
            conic_order_sequence(&c, &p, &Config::default()),
            Err(Error::DegreeTooSmall(2))
        ));
    }

    #[test]
    fn frobenius_nonclassical_for_lines() {
        assert!(is_frobenius_nonclassical_lines(&fermat(5, 2, 6)).unwrap());
        assert!(!is_frobenius_nonclassical_lines(&fermat(5, 2, 3)).unwrap());
        // pointwise cross-check on the Hermitian curve
        let c = fermat(5, 2, 6);
        let cfg = Config::default();
        for p in sample_points(&c, 2, 20, 3).unwrap() {
            let (line, _) = tangent_order(&c, &p, &cfg).unwrap();
            let fr = c.frobenius(&p).coords();
            let k = p.field();
            let v = (0..3).fold(Fe::ZERO, |acc, i| k.add(acc, k.mul(line[i], fr[i])));
            assert!(v.is_zero());
        }
    }

    #[test]
    fn fnc_conics_on_fermat_cubic() {
        let cfg = Config::default().with_m_max(2);
        let r = check_fnc_conics(&fermat(5, 2, 3), &cfg).unwrap();
        assert_eq!(r.verdict, FncVerdict::HoldsOnTestedPoints);
        assert_eq!(r.extensions, vec![2]);
        assert!(r.tested > 0);
    }

    #[test]
    fn p_powers() {
        assert_eq!(p_power_exponent(5, 5), Some(1));
        assert_eq!(p_power_exponent(5, 25), Some(2));
        assert_eq!(p_power_exponent(5, 6), None);
        assert_eq!(p_power_exponent(7, 1), None);
    }
}
