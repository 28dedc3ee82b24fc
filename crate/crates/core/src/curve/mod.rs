//! Projective plane curves `F(X0, X1, X2) = 0` and their points over extensions.

mod local;
mod points;
mod smooth;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use crate::algebra::mpoly::chart_vars;
use crate::algebra::{Fe, Field, MultiPoly};
use crate::error::{Error, Result};

pub use local::{
    expand_at, expand_in_chart, tangent_line, tangent_order, vanishing_order, Chart, LocalExpansion,
    PointLocal,
};
pub use points::{enumerate_points, sample_points, sampling_extension};
pub use smooth::{is_smooth, Smoothness};

/// The form and its derived polynomials over one extension `F_{q^m}`.
#[derive(Debug)]
pub struct CurveOver {
    pub m: u32,
    pub field: Field,
    pub form: MultiPoly,
    pub gradient: [MultiPoly; 3],
    /// `charts[k]` is the form with `X_k = 1`.
    pub charts: [MultiPoly; 3],
}

#[derive(Clone)]
pub struct PlaneCurve {
    base: Field,
    form: MultiPoly,
    degree: u32,
    cache: Arc<Mutex<HashMap<u32, Arc<CurveOver>>>>,
    smooth: Arc<Mutex<Option<Smoothness>>>,
}

impl fmt::Debug for PlaneCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PlaneCurve({:?} over {:?})", self.form, self.base)
    }
}

/// Builds a curve from a ternary form, or from a two-variable affine polynomial
/// `f(X, Y)` which is homogenized as `X2^d f(X0/X2, X1/X2)`.
pub fn make_curve(poly: &MultiPoly) -> Result<PlaneCurve> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let form = if poly.nvars() == 2 {
        poly.homogenize()?
    } else {
        poly.clone()
    };
    if !form.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let degree = form.total_degree().ok_or(Error::ZeroPolynomial)?;
    Ok(PlaneCurve {
        base: form.field().clone(),
        form,
        degree,
        cache: Arc::new(Mutex::new(HashMap::new())),
        smooth: Arc::new(Mutex::new(None)),
    })
}

impl PlaneCurve {
    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn form(&self) -> &MultiPoly {
        &self.form
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    /// `(d-1)(d-2)/2`.
    pub fn genus(&self) -> u64 {
        let d = self.degree as u64;
        (d.saturating_sub(1) * d.saturating_sub(2)) / 2
    }

    /// Cached smoothness certificate, if [`is_smooth`] has run.
    pub fn smooth_certificate(&self) -> Option<Smoothness> {
        self.smooth.lock().unwrap().clone()
    }

    pub(crate) fn set_smooth_certificate(&self, s: Smoothness) {
        *self.smooth.lock().unwrap() = Some(s);
    }

    /// The form and friends over `F_{q^m}`.
    pub fn over(&self, m: u32) -> Result<Arc<CurveOver>> {
        if let Some(c) = self.cache.lock().unwrap().get(&m) {
            return Ok(c.clone());
        }
        let field = self.base.extension(m)?;
        let form = self.form.embed(&field)?;
        let gradient = [form.partial(0), form.partial(1), form.partial(2)];
        let charts = [form.dehomogenize(0), form.dehomogenize(1), form.dehomogenize(2)];
        let over = Arc::new(CurveOver {
            m,
            field,
            form,
            gradient,
            charts,
        });
        self.cache.lock().unwrap().insert(m, over.clone());
        Ok(over)
    }

    /// The field of definition of `pt` must be `F_{q^m}` for some `m`.
    pub fn contains(&self, pt: &ProjPoint) -> Result<bool> {
        let over = self.over(pt.m)?;
        Ok(over.form.eval(&pt.coords).is_zero())
    }

    /// `Fr(P)`: coordinate-wise `q`-th power.
    pub fn frobenius(&self, pt: &ProjPoint) -> ProjPoint {
        pt.frobenius(self.base.r())
    }

    /// Whether `pt` is rational over `F_{q^s}`.
    pub fn is_rational_over(&self, pt: &ProjPoint, s: u32) -> bool {
        pt.fixed_by(self.base.r() * s)
    }

    /// Smallest `s` such that `pt` is defined over `F_{q^s}`.
    pub fn definition_degree(&self, pt: &ProjPoint) -> u32 {
        (1..=pt.m)
            .filter(|s| pt.m % s == 0)
            .find(|&s| self.is_rational_over(pt, s))
            .unwrap_or(pt.m)
    }

    /// The gradient `(F_0(P), F_1(P), F_2(P))`, i.e. the tangent line at a smooth point.
    pub fn gradient_at(&self, pt: &ProjPoint) -> Result<[Fe; 3]> {
        let over = self.over(pt.m)?;
        Ok([
            over.gradient[0].eval(&pt.coords),
            over.gradient[1].eval(&pt.coords),
            over.gradient[2].eval(&pt.coords),
        ])
    }

    /// Embeds a point over `F_{q^m}` into `F_{q^(m*e)}`.
    pub fn lift_point(&self, pt: &ProjPoint, e: u32) -> Result<ProjPoint> {
        let field = self.base.extension(pt.m * e)?;
        let coords = [
            field.embed(&pt.field, pt.coords[0])?,
            field.embed(&pt.field, pt.coords[1])?,
            field.embed(&pt.field, pt.coords[2])?,
        ];
        ProjPoint::new(&field, pt.m * e, coords)
    }
}

/// A projective point over `F_{q^m}`, normalized so the last nonzero coordinate is 1.
#[derive(Clone)]
pub struct ProjPoint {
    field: Field,
    m: u32,
    coords: [Fe; 3],
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.coords == other.coords
    }
}

impl Eq for ProjPoint {}

impl Hash for ProjPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.r().hash(state);
        self.coords.hash(state);
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<Vec<u32>> = self.coords.iter().map(|&x| self.field.coeffs(x)).collect();
        write!(f, "({:?} : {:?} : {:?})/m={}", c[0], c[1], c[2], self.m)
    }
}

impl ProjPoint {
    pub fn new(field: &Field, m: u32, coords: [Fe; 3]) -> Result<Self> {
        let last = coords
            .iter()
            .rposition(|c| !c.is_zero())
            .ok_or_else(|| Error::BadElement("all coordinates are zero".into()))?;
        let inv = field.inv(coords[last]);
        Ok(ProjPoint {
            field: field.clone(),
            m,
            coords: coords.map(|c| field.mul(c, inv)),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn coords(&self) -> [Fe; 3] {
        self.coords
    }

    /// Index of the last nonzero coordinate (which equals 1).
    pub fn chart(&self) -> usize {
        self.coords.iter().rposition(|c| !c.is_zero()).unwrap()
    }

    /// Affine coordinates in the chart `X_k = 1`; `None` when `X_k` vanishes.
    pub fn affine(&self, k: usize) -> Option<(Fe, Fe)> {
        let f = &self.field;
        let inv = f.try_inv(self.coords[k])?;
        let (a, b) = chart_vars(k);
        Some((f.mul(self.coords[a], inv), f.mul(self.coords[b], inv)))
    }

    /// Coordinate-wise `p^s` power.
    pub fn frobenius(&self, s: u32) -> ProjPoint {
        ProjPoint {
            field: self.field.clone(),
            m: self.m,
            coords: self.coords.map(|c| self.field.frobenius(c, s)),
        }
    }

    pub fn fixed_by(&self, s: u32) -> bool {
        self.coords.iter().all(|&c| self.field.in_subfield(c, s))
    }

    /// Canonical sort key: affine chart `X2 = 1` first, then `(a : 1 : 0)`, then `(1 : 0 : 0)`.
    pub fn sort_key(&self) -> (u8, u32, u32) {
        let tier = if !self.coords[2].is_zero() {
            0
        } else if !self.coords[1].is_zero() {
            1
        } else {
            2
        };
        (tier, self.field.index(self.coords[0]), self.field.index(self.coords[1]))
    }

    pub fn coeff_vectors(&self) -> [Vec<u32>; 3] {
        self.coords.map(|c| self.field.coeffs(c))
    }
}
