//! Dense linear algebra over a coefficient field.
//!
//! Pivots are tested with [`is_unit`], so over a reducible modulus the first
//! zero divisor met is reported and the caller can split.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::coeff::{Coeff, QPoly, Rational};
use crate::error::{Error, Result};
use crate::field::is_unit;

pub type Matrix = Vec<Vec<Coeff>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Result<Vec<usize>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut found = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            if is_unit(&row[c])? {
                found = Some(i);
                break;
            }
        }
        let Some(i) = found else { continue };
        m.swap(r, i);
        let inv = m[r][c].inv()?;
        for e in m[r].iter_mut() {
            *e = &*e * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (e, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *e = &*e - &(&f * p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub fn rank(m: &Matrix) -> Result<usize> {
    let mut a = m.clone();
    Ok(rref(&mut a)?.len())
}

/// A basis of `{v : m·v = 0}`.
pub fn kernel(m: &Matrix, cols: usize) -> Result<Vec<Vec<Coeff>>> {
    let mut a = m.clone();
    let pivots = rref(&mut a)?;
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Coeff::zero(); cols];
        v[free] = Coeff::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -&a[r][free];
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Solves `m·v = b`, returning one solution if any.
pub fn solve(m: &Matrix, b: &[Coeff]) -> Result<Option<Vec<Coeff>>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Matrix = m.iter().zip(b).map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect()).collect();
    let pivots = rref(&mut a)?;
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut v = vec![Coeff::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        v[p] = a[r][cols].clone();
    }
    Ok(Some(v))
}

/// Determinant of a square integer matrix (fraction-free elimination).
pub fn det_int(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut sign = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * prev
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Rational], ys: &[Rational]) -> QPoly {
    let n = xs.len();
    let mut dd: Vec<Rational> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = QPoly::constant(dd[n - 1].clone());
    for i in (0..n - 1).rev() {
        let lin = QPoly::new(vec![-xs[i].clone(), Rational::one()]);
        p = p.mul(&lin).add(&QPoly::constant(dd[i].clone()));
    }
    p
}

fn int_rows(m: &[Vec<QPoly>]) -> Vec<Vec<Vec<BigInt>>> {
    m.iter()
        .map(|row| {
            let l = row
                .iter()
                .flat_map(|q| q.coeffs().iter())
                .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
            row.iter().map(|q| q.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()).collect()
        })
        .collect()
}

fn eval_int(p: &[BigInt], t: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * t + c)
}

fn values_at(rows: &[Vec<Vec<BigInt>>], t: i64) -> Vec<Vec<BigInt>> {
    let t = BigInt::from(t);
    rows.iter().map(|r| r.iter().map(|p| eval_int(p, &t)).collect()).collect()
}

fn minor(vals: &[Vec<BigInt>], rows: &[usize]) -> BigInt {
    let sub: Vec<Vec<BigInt>> = rows.iter().map(|&r| vals[r].clone()).collect();
    det_int(&sub)
}

/// For a tall matrix over `ℚ[t]`, a nonzero polynomial vanishing wherever the
/// columns become dependent (the gcd of several maximal minors), or `None`
/// when they are dependent over `ℚ(t)`.
pub fn rank_drop_polynomial(m: &[Vec<QPoly>]) -> Result<Option<QPoly>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if cols == 0 || rows < cols {
        return Err(Error::Degenerate("need at least as many rows as columns".into()));
    }
    let ints = int_rows(m);
    let row_deg: Vec<usize> = m.iter().map(|r| r.iter().filter_map(QPoly::degree).max().unwrap_or(0)).collect();
    let mut bound: Vec<usize> = row_deg.clone();
    bound.sort_unstable_by(|a, b| b.cmp(a));
    let deg_bound: usize = bound[..cols].iter().sum();
    // a point where the columns are independent, with a basis of rows there
    let mut basis = None;
    for t0 in 0..=deg_bound as i64 {
        let vals = values_at(&ints, t0);
        let mut chosen: Vec<usize> = Vec::new();
        for r in 0..rows {
            let mut trial = chosen.clone();
            trial.push(r);
            let sub: Matrix = trial.iter().map(|&i| vals[i].iter().map(|x| Coeff::Rat(Rational::from_integer(x.clone()))).collect()).collect();
            if rank(&sub)? == trial.len() {
                chosen = trial;
            }
            if chosen.len() == cols {
                break;
            }
        }
        if chosen.len() == cols {
            basis = Some((t0, vals, chosen));
            break;
        }
    }
    let Some((_, vals, chosen)) = basis else {
        return Ok(None);
    };
    let mut sets = vec![chosen.clone()];
    for extra in (0..rows).filter(|r| !chosen.contains(r)) {
        for j in 0..cols {
            let mut s = chosen.clone();
            s[j] = extra;
            if !minor(&vals, &s).is_zero() {
                sets.push(s);
                break;
            }
        }
    }
    let mut g = QPoly::zero();
    for s in &sets {
        let d: usize = s.iter().map(|&r| row_deg[r]).sum();
        let xs: Vec<Rational> = (0..=d as i64).map(|x| Rational::from_integer(x.into())).collect();
        let ys: Vec<Rational> = (0..=d as i64).map(|x| Rational::from_integer(minor(&values_at(&ints, x), s))).collect();
        g = g.gcd(&interpolate(&xs, &ys));
        if g.degree() == Some(0) {
            break;
        }
    }
    Ok(Some(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Coeff::from(x)).collect()).collect()
    }

    #[test]
    fn kernel_and_solve() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a).unwrap(), 2);
        let k = kernel(&a, 3).unwrap();
        assert_eq!(k.len(), 1);
        for row in &a {
            let s = row.iter().zip(&k[0]).fold(Coeff::zero(), |s, (x, y)| &s + &(x * y));
            assert!(s.is_zero());
        }
        let b = [Coeff::from(4), Coeff::from(8), Coeff::from(2)];
        let v = solve(&a, &b).unwrap().unwrap();
        assert_eq!(v, vec![Coeff::from(2), Coeff::from(1), Coeff::zero()]);
        assert!(solve(&a, &[Coeff::from(1), Coeff::from(1), Coeff::from(1)]).unwrap().is_none());
    }

    #[test]
    fn rank_drops_over_polynomials() {
        // [[1, t], [t, 1], [0, t − 1]] drops rank only at t = 1
        let q = QPoly::from_ints;
        let a = vec![vec![q(&[1]), q(&[0, 1])], vec![q(&[0, 1]), q(&[1])], vec![q(&[]), q(&[-1, 1])]];
        assert_eq!(rank_drop_polynomial(&a).unwrap().unwrap().monic(), q(&[-1, 1]));
        let dep = vec![vec![q(&[1]), q(&[0, 1])], vec![q(&[0, 2]), q(&[0, 0, 2])]];
        assert!(rank_drop_polynomial(&dep).unwrap().is_none());
        let xs: Vec<Rational> = (0..4).map(|x| Rational::from_integer(x.into())).collect();
        let ys: Vec<Rational> = xs.iter().map(|x| x * x * x - x).collect();
        assert_eq!(interpolate(&xs, &ys), q(&[0, -1, 0, 1]));
    }
}
