use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{CurveOver, PlaneCurve, ProjPoint};
use crate::algebra::upoly;
use crate::algebra::Fe;
use crate::config::Config;
use crate::error::{Error, Result};

pub(crate) fn checked_order(q: u64, m: u32, limit: u64, what: &'static str) -> Result<u64> {
    let needed = (q as u128).checked_pow(m).unwrap_or(u128::MAX);
    if needed > limit as u128 {
        return Err(Error::Capacity {
            what,
            needed,
            limit: limit as u128,
        });
    }
    Ok(needed as u64)
}

/// Points `(a : b : 1)` with the given first coordinate.
fn affine_column(over: &CurveOver, a: Fe, seed: u64) -> Result<Vec<ProjPoint>> {
    let k = &over.field;
    let slice = over.form.slice(1, &[a, Fe::ZERO, Fe::ONE]);
    let ys = if slice.is_empty() {
        k.elements().collect()
    } else {
        upoly::roots(k, &slice, seed)?
    };
    Ok(ys
        .into_iter()
        .map(|b| ProjPoint {
            field: k.clone(),
            m: over.m,
            coords: [a, b, Fe::ONE],
        })
        .collect())
}

/// Every point of `c` over `F_{q^m}`, in canonical order.
pub fn enumerate_points(c: &PlaneCurve, m: u32, cfg: &Config) -> Result<Vec<ProjPoint>> {
    let qm = checked_order(c.q(), m, cfg.capacity, "field elements to enumerate")?;
    let over = c.over(m)?;
    let k = &over.field;
    let columns = cfg.executor.flat_map_range(qm as usize, |i| {
        vec![affine_column(&over, k.from_index(i as u32), cfg.seed ^ i as u64)]
    });
    let mut pts = Vec::new();
    for col in columns {
        pts.extend(col?);
    }
    let at_infinity = over.form.slice(0, &[Fe::ZERO, Fe::ONE, Fe::ZERO]);
    let xs = if at_infinity.is_empty() {
        k.elements().collect()
    } else {
        upoly::roots(k, &at_infinity, cfg.seed)?
    };
    pts.extend(xs.into_iter().map(|a| ProjPoint {
        field: k.clone(),
        m,
        coords: [a, Fe::ONE, Fe::ZERO],
    }));
    let corner = [Fe::ONE, Fe::ZERO, Fe::ZERO];
    if over.form.eval(&corner).is_zero() {
        pts.push(ProjPoint {
            field: k.clone(),
            m,
            coords: corner,
        });
    }
    pts.sort_by_key(ProjPoint::sort_key);
    Ok(pts)
}

/// Smallest `m` whose Hasse-Weil lower bound `q^m + 1 - 2g q^(m/2)` guarantees
/// `wanted` points over `F_{q^m}`.
pub fn sampling_extension(c: &PlaneCurve, wanted: u64, cfg: &Config) -> Result<u32> {
    let q = c.q() as f64;
    let g = c.genus() as f64;
    for m in 1..=64u32 {
        let qm = q.powi(m as i32);
        let lower = qm + 1.0 - 2.0 * g * qm.sqrt();
        if lower >= wanted as f64 {
            checked_order(c.q(), m, cfg.capacity.min(crate::algebra::field::MAX_FIELD_ORDER), "field elements for sampling")?;
            return Ok(m);
        }
    }
    Err(Error::Capacity {
        what: "field elements for sampling",
        needed: u128::MAX,
        limit: cfg.capacity as u128,
    })
}

/// `count` distinct affine points over `F_{q^m}` drawn from a seeded generator,
/// returned in canonical order.
pub fn sample_points(c: &PlaneCurve, m: u32, count: usize, seed: u64) -> Result<Vec<ProjPoint>> {
    let over = c.over(m)?;
    let k = &over.field;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = BTreeSet::new();
    let mut out = Vec::new();
    let attempts = 200 * count + 1000;
    for _ in 0..attempts {
        if out.len() == count {
            break;
        }
        let a = k.from_index(rng.gen_range(0..k.q() as u32));
        let col = affine_column(&over, a, rng.gen())?;
        if col.is_empty() {
            continue;
        }
        let pt = col[rng.gen_range(0..col.len())].clone();
        if found.insert(pt.sort_key()) {
            out.push(pt);
        }
    }
    if out.len() < count {
        return Err(Error::Capacity {
            what: "distinct sample points",
            needed: count as u128,
            limit: out.len() as u128,
        });
    }
    out.sort_by_key(ProjPoint::sort_key);
    Ok(out)
}
