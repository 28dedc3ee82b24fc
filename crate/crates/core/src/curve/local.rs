use serde::Serialize;

use super::{PlaneCurve, ProjPoint};
use crate::algebra::mpoly::chart_vars;
use crate::algebra::Order;
use crate::algebra::{Fe, Field, MultiPoly, PowerSeries};
use crate::config::Config;
use crate::error::{Error, Result};

/// The affine chart `X_dehom = 1` and the coordinate used as local parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub dehom: usize,
    pub param: usize,
}

impl Chart {
    /// The coordinate expressed as a series in the parameter.
    pub fn solved(&self) -> usize {
        let (a, b) = chart_vars(self.dehom);
        if self.param == a {
            b
        } else {
            a
        }
    }

    fn param_slot(&self) -> usize {
        (chart_vars(self.dehom).1 == self.param) as usize
    }
}

/// Power-series parametrization `(x(t), y(t))` of the curve near a point, where
/// `x, y` are the two affine coordinates of the chart in increasing index order.
/// One of them is exactly `a + t`.
#[derive(Debug, Clone)]
pub struct LocalExpansion {
    pub at: ProjPoint,
    pub chart: Chart,
    pub x: PowerSeries,
    pub y: PowerSeries,
}

impl LocalExpansion {
    pub fn field(&self) -> &Field {
        self.at.field()
    }

    pub fn precision(&self) -> usize {
        self.x.precision()
    }

    /// `f(x(t), y(t))` for the chart equation; zero to full precision by construction.
    pub fn residual(&self, c: &PlaneCurve) -> Result<PowerSeries> {
        let over = c.over(self.at.m())?;
        Ok(eval_series(&over.charts[self.chart.dehom], &self.x, &self.y))
    }
}

/// `g(x, y)` for a two-variable polynomial and series arguments.
pub(crate) fn eval_series(g: &MultiPoly, x: &PowerSeries, y: &PowerSeries) -> PowerSeries {
    let k = g.field();
    let n = x.precision().min(y.precision());
    let powers = |s: &PowerSeries, deg: u32| {
        let mut out = vec![PowerSeries::constant(Fe::ONE, n)];
        for i in 1..=deg as usize {
            out.push(out[i - 1].mul(k, s));
        }
        out
    };
    let xp = powers(x, g.degree_in(0).unwrap_or(0));
    let yp = powers(y, g.degree_in(1).unwrap_or(0));
    let mut acc = PowerSeries::zero(n);
    for (e, c) in g.terms() {
        let term = xp[e[0] as usize].mul(k, &yp[e[1] as usize]).scale(k, *c);
        acc = acc.add(k, &term);
    }
    acc
}

/// Checks that `pt` lies on `c` and picks the default chart: dehomogenize at the last
/// nonzero coordinate, solve for a coordinate with nonzero partial, and prefer
/// `X1` as the parameter when both partials are nonzero.
fn default_chart(c: &PlaneCurve, pt: &ProjPoint) -> Result<Chart> {
    let dehom = pt.chart();
    let (a, b) = chart_vars(dehom);
    let grad = c.gradient_at(pt)?;
    if !c.contains(pt)? {
        return Err(Error::NotOnCurve);
    }
    let (ga, gb) = (!grad[a].is_zero(), !grad[b].is_zero());
    let param = match (ga, gb) {
        (false, false) => return Err(Error::SingularPoint),
        (true, false) => b,
        (false, true) => a,
        (true, true) if a == 1 || b == 1 => 1,
        (true, true) => a,
    };
    Ok(Chart { dehom, param })
}

fn check_chart(c: &PlaneCurve, pt: &ProjPoint, chart: Chart) -> Result<()> {
    if chart.dehom > 2 || pt.coords()[chart.dehom].is_zero() {
        return Err(Error::Domain(format!("point is not affine in the chart X{} = 1", chart.dehom)));
    }
    let (a, b) = chart_vars(chart.dehom);
    if chart.param != a && chart.param != b {
        return Err(Error::Domain(format!("X{} is not a coordinate of the chart X{} = 1", chart.param, chart.dehom)));
    }
    if !c.contains(pt)? {
        return Err(Error::NotOnCurve);
    }
    let grad = c.gradient_at(pt)?;
    if grad[a].is_zero() && grad[b].is_zero() {
        return Err(Error::SingularPoint);
    }
    if grad[chart.solved()].is_zero() {
        return Err(Error::Domain(format!(
            "X{} cannot be solved for: its partial vanishes",
            chart.solved()
        )));
    }
    Ok(())
}

pub fn expand_at(c: &PlaneCurve, pt: &ProjPoint, precision: usize) -> Result<LocalExpansion> {
    let chart = default_chart(c, pt)?;
    expand_in_chart(c, pt, chart, precision)
}

/// Newton lifting of the implicit function in the given chart.
pub fn expand_in_chart(
    c: &PlaneCurve,
    pt: &ProjPoint,
    chart: Chart,
    precision: usize,
) -> Result<LocalExpansion> {
    check_chart(c, pt, chart)?;
    let n = precision.max(1);
    let over = c.over(pt.m())?;
    let k = &over.field;
    let f = &over.charts[chart.dehom];
    let (u, v) = pt.affine(chart.dehom).expect("chart checked");
    let s = chart.param_slot();
    let (s0, w0) = if s == 0 { (u, v) } else { (v, u) };

    // f(s0 + t, W) = sum_j G_j(t) W^j
    let param = PowerSeries::shifted_variable(s0, n);
    let deg_s = f.degree_in(s).unwrap_or(0) as usize;
    let mut spow = vec![PowerSeries::constant(Fe::ONE, n)];
    for i in 1..=deg_s {
        spow.push(spow[i - 1].mul(k, &param));
    }
    let deg_w = f.degree_in(1 - s).unwrap_or(0) as usize;
    let mut g = vec![PowerSeries::zero(n); deg_w + 1];
    for (e, coef) in f.terms() {
        let j = e[1 - s] as usize;
        g[j] = g[j].add(k, &spow[e[s] as usize].scale(k, *coef));
    }

    let mut w = vec![w0];
    let mut have = 1;
    while have < n {
        have = (2 * have).min(n);
        w.resize(have, Fe::ZERO);
        let ws = PowerSeries::new(w);
        let mut val = g[deg_w].truncate(have);
        let mut der = PowerSeries::zero(have);
        for j in (0..deg_w).rev() {
            der = der.mul(k, &ws).add(k, &val);
            val = val.mul(k, &ws).add(k, &g[j].truncate(have));
        }
        let inv = der
            .inverse(k)
            .ok_or_else(|| Error::Internal("implicit derivative vanished".into()))?;
        w = ws.sub(k, &val.mul(k, &inv)).coeffs().to_vec();
    }
    let solved = PowerSeries::new(w);
    let (x, y) = if s == 0 { (param, solved) } else { (solved, param) };
    Ok(LocalExpansion {
        at: pt.clone(),
        chart,
        x,
        y,
    })
}

/// Order at `t = 0` of `g(x(t), y(t))`. Ternary forms are dehomogenized in the
/// chart of `e`; coefficients from a subfield are embedded.
pub fn vanishing_order(e: &LocalExpansion, g: &MultiPoly) -> Result<Order> {
    let g = g.embed(e.field())?;
    let g = if g.nvars() == 3 {
        g.dehomogenize(e.chart.dehom)
    } else {
        g
    };
    Ok(eval_series(&g, &e.x, &e.y).order())
}

/// The tangent line at `pt` as a linear form.
pub fn tangent_line(c: &PlaneCurve, pt: &ProjPoint) -> Result<MultiPoly> {
    let grad = c.gradient_at(pt)?;
    Ok(MultiPoly::from_terms(
        pt.field(),
        3,
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
            .into_iter()
            .zip(grad),
    ))
}

/// A point with a cached expansion that grows on demand.
pub struct PointLocal<'a> {
    curve: &'a PlaneCurve,
    point: ProjPoint,
    chart: Chart,
    cfg: Config,
    expansion: Option<LocalExpansion>,
}

impl<'a> PointLocal<'a> {
    pub fn new(curve: &'a PlaneCurve, point: &ProjPoint, cfg: &Config) -> Result<Self> {
        let chart = default_chart(curve, point)?;
        Ok(Self::unchecked(curve, point, chart, cfg))
    }

    pub fn with_chart(curve: &'a PlaneCurve, point: &ProjPoint, chart: Chart, cfg: &Config) -> Result<Self> {
        check_chart(curve, point, chart)?;
        Ok(Self::unchecked(curve, point, chart, cfg))
    }

    fn unchecked(curve: &'a PlaneCurve, point: &ProjPoint, chart: Chart, cfg: &Config) -> Self {
        PointLocal {
            curve,
            point: point.clone(),
            chart,
            cfg: *cfg,
            expansion: None,
        }
    }

    pub fn curve(&self) -> &PlaneCurve {
        self.curve
    }

    pub fn point(&self) -> &ProjPoint {
        &self.point
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn config(&self) -> &Config {
        &self.cfg
    }

    pub fn expansion(&mut self, precision: usize) -> Result<&LocalExpansion> {
        let stale = self
            .expansion
            .as_ref()
            .map_or(true, |e| e.precision() < precision);
        if stale {
            self.expansion = Some(expand_in_chart(self.curve, &self.point, self.chart, precision)?);
        }
        Ok(self.expansion.as_ref().unwrap())
    }

    /// Order of a series built from the expansion, escalating precision for a
    /// quantity known to have order at most `bound`. `loss` is the number of
    /// trailing coefficients the construction consumes (e.g. 2 for `D^2`).
    pub fn order_of<F>(&mut self, bound: usize, loss: usize, build: F) -> Result<usize>
    where
        F: Fn(&LocalExpansion) -> Result<PowerSeries>,
    {
        let mut seen = 0;
        for prec in self.cfg.schedule(bound + loss) {
            let s = build(self.expansion(prec)?)?;
            match s.order() {
                Order::Finite(v) => return Ok(v),
                Order::AtLeast(n) => seen = n,
            }
        }
        Err(Error::Indeterminate { at_least: seen })
    }

    /// Tangent line coefficients and `j(P)`.
    pub fn tangent(&mut self) -> Result<([Fe; 3], usize)> {
        let line = tangent_line(self.curve, &self.point)?;
        let grad = self.curve.gradient_at(&self.point)?;
        let d = self.curve.degree() as usize;
        let j = self.order_of(d, 0, |e| {
            let g = line.dehomogenize(e.chart.dehom);
            Ok(eval_series(&g, &e.x, &e.y))
        })?;
        Ok((grad, j))
    }
}

/// Tangent line coefficients `(F_0(P), F_1(P), F_2(P))` and the tangent order `j(P)`.
pub fn tangent_order(c: &PlaneCurve, pt: &ProjPoint, cfg: &Config) -> Result<([Fe; 3], usize)> {
    PointLocal::new(c, pt, cfg)?.tangent()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::curve::{enumerate_points, make_curve};

    fn field_int(k: &Field, v: &[i64]) -> Vec<Fe> {
        v.iter().map(|&x| k.from_int(x)).collect()
    }

    #[test]
    fn parabola_expansion() {
        let k = make_field(7, 1).unwrap();
        let c = make_curve(&MultiPoly::from_int_terms(&k, 2, &[([0, 1, 0], 1), ([2, 0, 0], -1)])).unwrap();
        let o = ProjPoint::new(&k, 1, [Fe::ZERO, Fe::ZERO, Fe::ONE]).unwrap();
        let e = expand_at(&c, &o, 6).unwrap();
        assert_eq!(e.chart, Chart { dehom: 2, param: 0 });
        assert_eq!(e.x.coeffs(), field_int(&k, &[0, 1, 0, 0, 0, 0]).as_slice());
        assert_eq!(e.y.coeffs(), field_int(&k, &[0, 0, 1, 0, 0, 0]).as_slice());
        let y = MultiPoly::var(&k, 2, 1);
        let x = MultiPoly::var(&k, 2, 0);
        assert_eq!(vanishing_order(&e, &y).unwrap(), Order::Finite(2));
        assert_eq!(vanishing_order(&e, &x).unwrap(), Order::Finite(1));
        assert_eq!(vanishing_order(&e, &x.mul(&y)).unwrap(), Order::Finite(3));
    }

    #[test]
    fn circle_at_vertical_tangent() {
        let k = make_field(5, 1).unwrap();
        let c = make_curve(&MultiPoly::from_int_terms(
            &k,
            2,
            &[([2, 0, 0], 1), ([0, 2, 0], 1), ([0, 0, 0], -1)],
        ))
        .unwrap();
        let p = ProjPoint::new(&k, 1, [Fe::ONE, Fe::ZERO, Fe::ONE]).unwrap();
        let e = expand_at(&c, &p, 6).unwrap();
        assert_eq!(e.chart.param, 1);
        // oracle: x^2 = 1 - t^2, x = 1 - t^2/2 - t^4/8 = 1 + 2t^2 + 3t^4 over F_5
        assert_eq!(e.x.coeffs(), field_int(&k, &[1, 0, 2, 0, 3, 0]).as_slice());
        assert_eq!(e.residual(&c).unwrap().order(), Order::AtLeast(6));
    }

    #[test]
    fn fermat_cubic_residuals_and_tangent_orders() {
        let k = make_field(5, 2).unwrap();
        let c = make_curve(&MultiPoly::from_int_terms(
            &k,
            3,
            &[([3, 0, 0], 1), ([0, 3, 0], 1), ([0, 0, 3], 1)],
        ))
        .unwrap();
        let cfg = Config::default();
        let mut flexes = 0;
        for p in enumerate_points(&c, 1, &cfg).unwrap() {
            let e = expand_at(&c, &p, 64).unwrap();
            assert_eq!(e.residual(&c).unwrap().order(), Order::AtLeast(64));
            let (_, j) = tangent_order(&c, &p, &cfg).unwrap();
            assert!(j == 2 || j == 3);
            flexes += (j == 3) as usize;
        }
        assert_eq!(flexes, 9);
    }

    #[test]
    fn chart_choice_does_not_change_tangent_order() {
        let k = make_field(7, 2).unwrap();
        let c = make_curve(&MultiPoly::from_int_terms(
            &k,
            3,
            &[([4, 0, 0], 1), ([0, 4, 0], 1), ([0, 0, 4], 1)],
        ))
        .unwrap();
        let cfg = Config::default();
        for p in enumerate_points(&c, 1, &cfg).unwrap() {
            let (_, j) = tangent_order(&c, &p, &cfg).unwrap();
            let grad = c.gradient_at(&p).unwrap();
            for dehom in 0..3 {
                if p.coords()[dehom].is_zero() {
                    continue;
                }
                let (a, b) = chart_vars(dehom);
                for (param, solved) in [(a, b), (b, a)] {
                    if grad[solved].is_zero() {
                        continue;
                    }
                    let mut loc = PointLocal::with_chart(&c, &p, Chart { dehom, param }, &cfg).unwrap();
                    assert_eq!(loc.tangent().unwrap().1, j);
                }
            }
        }
    }

    #[test]
    fn rejects_points_off_curve_and_singular_points() {
        let k = make_field(5, 1).unwrap();
        let cusp = make_curve(&MultiPoly::from_int_terms(&k, 3, &[([1, 0, 2], 1), ([0, 3, 0], -1)])).unwrap();
        let corner = ProjPoint::new(&k, 1, [Fe::ONE, Fe::ZERO, Fe::ZERO]).unwrap();
        assert!(matches!(expand_at(&cusp, &corner, 8), Err(Error::SingularPoint)));
        let off = ProjPoint::new(&k, 1, [k.from_int(2), Fe::ONE, Fe::ONE]).unwrap();
        assert!(matches!(expand_at(&cusp, &off, 8), Err(Error::NotOnCurve)));
    }
}
