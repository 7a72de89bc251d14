//! Dense univariate polynomials over [`Coeff`], used wherever a single
//! variable is singled out (eliminants, tangent cones, series coefficients).

use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::{Coeff, QPoly, Rational};
use crate::error::{Error, Result};

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPoly(Vec<Coeff>);

impl UPoly {
    pub fn new(mut c: Vec<Coeff>) -> Self {
        while c.last().is_some_and(Coeff::is_zero) {
            c.pop();
        }
        UPoly(c)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Coeff) -> Self {
        UPoly::new(vec![c])
    }

    pub fn x() -> Self {
        UPoly(vec![Coeff::zero(), Coeff::one()])
    }

    pub fn from_qpoly(q: &QPoly) -> Self {
        UPoly::new(q.coeffs().iter().cloned().map(Coeff::Rat).collect())
    }

    /// The rational polynomial, if every coefficient is rational.
    pub fn to_qpoly(&self) -> Option<QPoly> {
        let mut out = Vec::with_capacity(self.0.len());
        for c in &self.0 {
            out.push(c.as_rational()?.clone());
        }
        Some(QPoly::new(out))
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Coeff {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Coeff {
        self.0.last().cloned().unwrap_or_default()
    }

    /// Order of vanishing at 0 (`None` for the zero polynomial).
    pub fn valuation(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        UPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Coeff::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(out)
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = UPoly::constant(Coeff::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.0.len() - 1;
        if self.0.len() <= dd {
            return Ok((UPoly::zero(), self.clone()));
        }
        let inv = d.lc().inv()?;
        let mut r = self.0.clone();
        let mut q = vec![Coeff::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] = &r[idx] - &(&c * dj);
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        Ok(self.scale(&self.lc().inv()?))
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Result<Self> {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b)?.1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Self {
        UPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &Coeff::from(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Coeff) -> Coeff {
        let mut acc = Coeff::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Self) -> Self {
        let mut acc = UPoly::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(g).add(&UPoly::constant(c.clone()));
        }
        acc
    }

    /// Squarefree decomposition by Yun's algorithm: monic, pairwise coprime,
    /// squarefree factors with multiplicities, product equal to `self` up to a constant.
    pub fn squarefree(&self) -> Result<Vec<(UPoly, usize)>> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return Ok(out);
        }
        let f = self.monic()?;
        let df = f.derivative();
        let a = f.gcd(&df)?;
        let mut b = f.divrem(&a)?.0;
        let c = df.divrem(&a)?.0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let a = b.gcd(&d)?;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a)?.0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            let c = d.divrem(&a)?.0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        Ok(out)
    }

    pub fn squarefree_part(&self) -> Result<Self> {
        let mut acc = UPoly::constant(Coeff::one());
        for (f, _) in self.squarefree()? {
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    /// Rational roots when all coefficients are rational.
    pub fn rational_roots(&self) -> Vec<Rational> {
        self.to_qpoly().map(|q| q.rational_roots()).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_of_products() {
        let a = UPoly::from_qpoly(&QPoly::from_ints(&[-1, 1]));
        let b = UPoly::from_qpoly(&QPoly::from_ints(&[2, 0, 1]));
        let c = UPoly::from_qpoly(&QPoly::from_ints(&[5, 1]));
        let g = a.mul(&b).gcd(&b.mul(&c)).unwrap();
        assert_eq!(g, b);
    }

    #[test]
    fn yun_decomposition() {
        let x = UPoly::x();
        let xm1 = x.sub(&UPoly::constant(Coeff::one()));
        let p = x.pow(3).mul(&xm1);
        let sf = p.squarefree().unwrap();
        assert_eq!(sf, vec![(xm1, 1), (x, 3)]);
    }
}
