//! Sylvester resultants of bivariate polynomials, eliminating one variable.

use super::field::{Fe, Field};
use super::mpoly::MultiPoly;
use super::upoly;

/// Coefficients of `f` in `X_elim`, each a dense polynomial in the other variable.
fn coefficient_polys(f: &MultiPoly, elim: usize) -> Vec<Vec<Fe>> {
    let keep = 1 - elim;
    let deg = f.degree_in(elim).map_or(0, |d| d as usize + 1);
    let mut out = vec![Vec::new(); deg];
    for (e, c) in f.terms() {
        let slot: &mut Vec<Fe> = &mut out[e[elim] as usize];
        let i = e[keep] as usize;
        if slot.len() <= i {
            slot.resize(i + 1, Fe::ZERO);
        }
        slot[i] = f.field().add(slot[i], *c);
    }
    for s in &mut out {
        upoly::trim(s);
    }
    out
}

/// `Res_{X_elim}(f, g)` as a dense polynomial in the remaining variable of a
/// two-variable pair.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, elim: usize) -> Vec<Fe> {
    assert_eq!(f.nvars(), 2);
    assert!(elim < 2);
    let k = f.field();
    let a = coefficient_polys(f, elim);
    let b = coefficient_polys(g, elim);
    sylvester_det(k, &a, &b)
}

/// Resultant of two polynomials whose coefficients are polynomials (low degree first).
pub fn sylvester_det(k: &Field, a: &[Vec<Fe>], b: &[Vec<Fe>]) -> Vec<Fe> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 && n == 0 {
        return vec![Fe::ONE];
    }
    let size = m + n;
    let mut mat = vec![vec![Vec::<Fe>::new(); size]; size];
    for row in 0..n {
        for (i, c) in a.iter().rev().enumerate() {
            mat[row][row + i] = c.clone();
        }
    }
    for row in 0..m {
        for (i, c) in b.iter().rev().enumerate() {
            mat[n + row][row + i] = c.clone();
        }
    }
    bareiss_det(k, mat)
}

/// Determinant of a matrix over `K[x]` by fraction-free elimination.
pub fn bareiss_det(k: &Field, mut mat: Vec<Vec<Vec<Fe>>>) -> Vec<Fe> {
    let size = mat.len();
    let mut negate = false;
    let mut prev = vec![Fe::ONE];
    for col in 0..size {
        if mat[col][col].is_empty() {
            match (col + 1..size).find(|&r| !mat[r][col].is_empty()) {
                Some(r) => {
                    mat.swap(col, r);
                    negate = !negate;
                }
                None => return Vec::new(),
            }
        }
        if col + 1 == size {
            break;
        }
        let pivot = mat[col][col].clone();
        for i in col + 1..size {
            let lead = mat[i][col].clone();
            for j in col + 1..size {
                let num = upoly::sub(
                    k,
                    &upoly::mul(k, &pivot, &mat[i][j]),
                    &upoly::mul(k, &lead, &mat[col][j]),
                );
                let (q, r) = upoly::divrem(k, &num, &prev);
                debug_assert!(r.is_empty(), "Bareiss division must be exact");
                mat[i][j] = q;
            }
            mat[i][col] = Vec::new();
        }
        prev = pivot;
    }
    let det = mat[size - 1][size - 1].clone();
    if negate {
        upoly::scale(k, &det, k.from_int(-1))
    } else {
        det
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::make_field;

    // Oracle: plain Gaussian elimination over the field on the Sylvester matrix of
    // the specializations at x = a.
    fn numeric_resultant(k: &Field, f: &[Fe], g: &[Fe]) -> Fe {
        let m = f.len() - 1;
        let n = g.len() - 1;
        let size = m + n;
        let mut mat = vec![vec![Fe::ZERO; size]; size];
        for row in 0..n {
            for (i, &c) in f.iter().rev().enumerate() {
                mat[row][row + i] = c;
            }
        }
        for row in 0..m {
            for (i, &c) in g.iter().rev().enumerate() {
                mat[n + row][row + i] = c;
            }
        }
        let mut det = Fe::ONE;
        for col in 0..size {
            let Some(piv) = (col..size).find(|&r| !mat[r][col].is_zero()) else {
                return Fe::ZERO;
            };
            if piv != col {
                mat.swap(piv, col);
                det = k.neg(det);
            }
            det = k.mul(det, mat[col][col]);
            let inv = k.inv(mat[col][col]);
            for r in col + 1..size {
                let factor = k.mul(mat[r][col], inv);
                for c in col..size {
                    let v = k.mul(factor, mat[col][c]);
                    mat[r][c] = k.sub(mat[r][c], v);
                }
            }
        }
        det
    }

    #[test]
    fn specializes_like_numeric_determinant() {
        let k = make_field(7, 1).unwrap();
        // f = y^3 + x y + x^2 + 1, g = 2 y^2 + x^3 y + 3
        let f = MultiPoly::from_int_terms(&k, 2, &[([0, 3, 0], 1), ([1, 1, 0], 1), ([2, 0, 0], 1), ([0, 0, 0], 1)]);
        let g = MultiPoly::from_int_terms(&k, 2, &[([0, 2, 0], 2), ([3, 1, 0], 1), ([0, 0, 0], 3)]);
        let res = resultant(&f, &g, 1);
        for a in k.elements() {
            let fa = f.slice(1, &[a, Fe::ZERO]);
            let ga = g.slice(1, &[a, Fe::ZERO]);
            assert_eq!(upoly::eval(&k, &res, a), numeric_resultant(&k, &fa, &ga));
        }
    }

    #[test]
    fn common_factor_gives_zero() {
        let k = make_field(5, 1).unwrap();
        let h = MultiPoly::from_int_terms(&k, 2, &[([0, 1, 0], 1), ([1, 0, 0], 1)]);
        let f = h.mul(&MultiPoly::from_int_terms(&k, 2, &[([0, 1, 0], 1), ([0, 0, 0], 2)]));
        let g = h.mul(&MultiPoly::from_int_terms(&k, 2, &[([2, 0, 0], 1), ([0, 1, 0], 3)]));
        assert!(resultant(&f, &g, 1).is_empty());
    }
}
