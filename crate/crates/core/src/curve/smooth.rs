use super::{enumerate_points, PlaneCurve, ProjPoint};
use crate::algebra::resultant::resultant;
use crate::algebra::{upoly, Fe, Field, MultiPoly};
use crate::config::Config;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    /// `component` is set when elimination degenerated because the curve and its
    /// derivatives share a whole component.
    Singular { witness: ProjPoint, component: bool },
}

impl Smoothness {
    pub fn is_smooth(&self) -> bool {
        matches!(self, Smoothness::Smooth)
    }
}

/// Decides whether `F` and its three partials have a common zero over the
/// algebraic closure. The result is cached on the curve.
pub fn is_smooth(c: &PlaneCurve, cfg: &Config) -> Result<Smoothness> {
    if let Some(s) = c.smooth_certificate() {
        return Ok(s);
    }
    let s = decide(c, cfg)?;
    c.set_smooth_certificate(s.clone());
    Ok(s)
}

fn decide(c: &PlaneCurve, cfg: &Config) -> Result<Smoothness> {
    let singular = |witness| Smoothness::Singular {
        witness,
        component: false,
    };
    match affine_candidates(c) {
        None => return component_witness(c, cfg),
        Some(g) => {
            if let Some(w) = affine_witness(c, &g, cfg.seed)? {
                return Ok(singular(w));
            }
        }
    }
    let k = c.base();
    let f = c.form();
    let on_line = |h: &MultiPoly| h.slice(0, &[Fe::ZERO, Fe::ONE, Fe::ZERO]);
    let mut u = on_line(f);
    for i in 0..3 {
        u = upoly::gcd(k, &u, &on_line(&f.partial(i)));
    }
    if u.is_empty() {
        return Ok(Smoothness::Singular {
            witness: ProjPoint::new(k, 1, [Fe::ZERO, Fe::ONE, Fe::ZERO])?,
            component: true,
        });
    }
    if let Some((m, a)) = some_root(k, &u, cfg.seed)? {
        let field = k.extension(m)?;
        return Ok(singular(ProjPoint::new(&field, m, [a, Fe::ONE, Fe::ZERO])?));
    }
    let corner = [Fe::ONE, Fe::ZERO, Fe::ZERO];
    if f.eval(&corner).is_zero() && (0..3).all(|i| f.partial(i).eval(&corner).is_zero()) {
        return Ok(singular(ProjPoint::new(k, 1, corner)?));
    }
    Ok(Smoothness::Smooth)
}

/// Univariate polynomial in `x = X0/X2` vanishing at the first coordinate of every
/// affine common zero of `f` and `h`.
fn x_eliminant(f: &MultiPoly, h: &MultiPoly) -> Vec<Fe> {
    if h.is_zero() {
        return Vec::new();
    }
    let flat = |g: &MultiPoly| g.degree_in(1).unwrap_or(0) == 0;
    if flat(f) && flat(h) {
        let at = [Fe::ZERO, Fe::ZERO];
        return upoly::gcd(f.field(), &f.slice(0, &at), &h.slice(0, &at));
    }
    resultant(f, h, 1)
}

/// Gcd of the eliminants of `f` against `f_x + lambda f_y` for several directions;
/// `None` when every eliminant vanishes identically.
fn affine_candidates(c: &PlaneCurve) -> Option<Vec<Fe>> {
    let k = c.base();
    let f = c.form().dehomogenize(2);
    let fx = f.partial(0);
    let fy = f.partial(1);
    let mut directions = vec![fx.clone(), fy.clone()];
    directions.extend(
        k.elements()
            .filter(|l| !l.is_zero())
            .take(4)
            .map(|l| fx.add(&fy.scale(l))),
    );
    let mut g: Option<Vec<Fe>> = None;
    for h in &directions {
        let r = x_eliminant(&f, h);
        if r.is_empty() {
            continue;
        }
        let next = match g {
            None => upoly::monic(k, &r),
            Some(prev) => upoly::gcd(k, &prev, &r),
        };
        let done = upoly::degree(&next) == Some(0);
        g = Some(next);
        if done {
            break;
        }
    }
    g
}

/// One root of `u` over the smallest extension containing one, as `(m, root)`.
fn some_root(k: &Field, u: &[Fe], seed: u64) -> Result<Option<(u32, Fe)>> {
    if upoly::degree(u).unwrap_or(0) == 0 {
        return Ok(None);
    }
    let rad = upoly::radical(k, u);
    let Some((e, factor)) = upoly::distinct_degree(k, &rad).into_iter().next() else {
        return Ok(None);
    };
    let big = k.extension(e)?;
    let lifted = factor
        .iter()
        .map(|&c| big.embed(k, c))
        .collect::<Result<Vec<_>>>()?;
    let roots = upoly::roots(&big, &lifted, seed)?;
    Ok(roots.first().map(|&a| (e, a)))
}

fn affine_witness(c: &PlaneCurve, g: &[Fe], seed: u64) -> Result<Option<ProjPoint>> {
    let k = c.base();
    if upoly::degree(g).unwrap_or(0) == 0 {
        return Ok(None);
    }
    for (e, factor) in upoly::distinct_degree(k, &upoly::radical(k, g)) {
        let over = c.over(e)?;
        let big = &over.field;
        let lifted = factor
            .iter()
            .map(|&x| big.embed(k, x))
            .collect::<Result<Vec<_>>>()?;
        for a in upoly::roots(big, &lifted, seed)? {
            let at = [a, Fe::ZERO, Fe::ONE];
            let mut u = over.form.slice(1, &at);
            u = upoly::gcd(big, &u, &over.gradient[0].slice(1, &at));
            u = upoly::gcd(big, &u, &over.gradient[1].slice(1, &at));
            if u.is_empty() {
                return Ok(Some(ProjPoint::new(big, e, [a, Fe::ZERO, Fe::ONE])?));
            }
            if let Some((e2, b)) = some_root(big, &u, seed)? {
                let m = e * e2;
                let field = k.extension(m)?;
                let a = field.embed(big, a)?;
                return Ok(Some(ProjPoint::new(&field, m, [a, b, Fe::ONE])?));
            }
        }
    }
    Ok(None)
}

/// Elimination degenerated: search small extensions for a point where every
/// partial vanishes.
fn component_witness(c: &PlaneCurve, cfg: &Config) -> Result<Smoothness> {
    for m in 1.. {
        let pts = match enumerate_points(c, m, cfg) {
            Ok(pts) => pts,
            Err(Error::Capacity { .. }) => break,
            Err(e) => return Err(e),
        };
        let hit = cfg.executor.find_first(&pts, |p| {
            let g = c.gradient_at(p).ok()?;
            g.iter().all(|x| x.is_zero()).then(|| p.clone())
        });
        if let Some(witness) = hit {
            return Ok(Smoothness::Singular {
                witness,
                component: true,
            });
        }
    }
    Err(Error::Internal(
        "elimination degenerated but no singular point was found within capacity".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_field;
    use crate::curve::make_curve;

    fn curve(p: u64, r: u32, terms: &[([u32; 3], i64)]) -> PlaneCurve {
        let k = make_field(p, r).unwrap();
        make_curve(&MultiPoly::from_int_terms(&k, 3, terms)).unwrap()
    }

    fn singular_point(c: &PlaneCurve) -> ProjPoint {
        match is_smooth(c, &Config::default()).unwrap() {
            Smoothness::Singular { witness, .. } => witness,
            Smoothness::Smooth => panic!("expected a singular curve"),
        }
    }

    #[test]
    fn fermat_and_hermitian_are_smooth() {
        let cfg = Config::default();
        for d in [3, 4, 6, 12] {
            let c = curve(5, 2, &[([d, 0, 0], 1), ([0, d, 0], 1), ([0, 0, d], 1)]);
            assert!(is_smooth(&c, &cfg).unwrap().is_smooth(), "d = {d}");
        }
        let c = curve(5, 2, &[([12, 0, 0], -1), ([0, 12, 0], 2), ([0, 0, 12], 3)]);
        assert!(is_smooth(&c, &cfg).unwrap().is_smooth());
    }

    #[test]
    fn cuspidal_cubic_singular_at_corner() {
        let c = curve(5, 2, &[([1, 0, 2], 1), ([0, 3, 0], -1)]);
        let w = singular_point(&c);
        assert_eq!(w.coords(), [Fe::ONE, Fe::ZERO, Fe::ZERO]);
        assert!(c.smooth_certificate().is_some());
    }

    #[test]
    fn affine_node_is_found() {
        // y^2 = x^2 (x + 1): node at the origin
        let c = curve(7, 1, &[([0, 2, 1], 1), ([3, 0, 0], -1), ([2, 0, 1], -1)]);
        let w = singular_point(&c);
        assert_eq!(w.coords(), [Fe::ZERO, Fe::ZERO, Fe::ONE]);
    }

    #[test]
    fn singular_point_over_extension() {
        // (x^2 - 3)^2 + y^2 (y - 1) over F_7: 3 is not a square, so the singular
        // points (±sqrt 3, 0) live over F_49.
        let k = make_field(7, 1).unwrap();
        let x = MultiPoly::var(&k, 2, 0);
        let y = MultiPoly::var(&k, 2, 1);
        let three = MultiPoly::constant(&k, 2, k.from_int(3));
        let one = MultiPoly::constant(&k, 2, Fe::ONE);
        let f = x.mul(&x).sub(&three).pow(2).add(&y.mul(&y).mul(&y.sub(&one)));
        let c = make_curve(&f).unwrap();
        let w = singular_point(&c);
        assert_eq!(w.m(), 2);
        assert!(c.contains(&w).unwrap());
        assert!(c.gradient_at(&w).unwrap().iter().all(|g| g.is_zero()));
    }

    #[test]
    fn repeated_component_is_reported() {
        // (x0 + x1)^2 x2
        let c = curve(5, 1, &[([2, 0, 1], 1), ([1, 1, 1], 2), ([0, 2, 1], 1)]);
        match is_smooth(&c, &Config::default()).unwrap() {
            Smoothness::Singular { witness, .. } => {
                assert!(c.gradient_at(&witness).unwrap().iter().all(|g| g.is_zero()))
            }
            Smoothness::Smooth => panic!("double line is singular"),
        }
    }

    #[test]
    fn singular_at_infinity() {
        // cusp of x1 x2^2 = x0^3 at (0:1:0)
        let c = curve(5, 1, &[([0, 1, 2], 1), ([3, 0, 0], -1)]);
        let w = singular_point(&c);
        assert_eq!(w.coords(), [Fe::ZERO, Fe::ONE, Fe::ZERO]);
    }
}
