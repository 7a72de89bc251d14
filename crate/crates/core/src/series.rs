//! Truncated univariate power series.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::upoly::UPoly;

/// A power series known modulo `var^(order+1)`; coefficients past the
/// truncation order are unknown, not zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries1D {
    var: String,
    coeffs: Vec<Coeff>,
    order: usize,
}

/// Result of an order-of-vanishing query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vanishing {
    /// Smallest exponent with a nonzero coefficient.
    Exact(usize),
    /// Every known coefficient vanishes; the true order exceeds the truncation `order`.
    Beyond { order: usize },
    /// The exact zero polynomial.
    Infinite,
}

impl PowerSeries1D {
    pub fn new(var: &str, mut coeffs: Vec<Coeff>, order: usize) -> Self {
        coeffs.resize(order + 1, Coeff::zero());
        PowerSeries1D { var: var.to_string(), coeffs, order }
    }

    pub fn zero(var: &str, order: usize) -> Self {
        PowerSeries1D::new(var, Vec::new(), order)
    }

    /// The series of the variable itself.
    pub fn variable(var: &str, order: usize) -> Self {
        let mut c = vec![Coeff::zero(); order + 1];
        if order >= 1 {
            c[1] = Coeff::one();
        }
        PowerSeries1D { var: var.to_string(), coeffs: c, order }
    }

    pub fn constant(var: &str, c: Coeff, order: usize) -> Self {
        PowerSeries1D::new(var, vec![c], order)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeffs(&self) -> &[Coeff] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Coeff {
        &self.coeffs[i]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let o = order.min(self.order);
        PowerSeries1D::new(&self.var, self.coeffs[..=o].to_vec(), o)
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.var != o.var {
            return Err(Error::VariableMismatch("series in different variables".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.order.min(o.order);
        Ok(PowerSeries1D::new(&self.var, (0..=n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect(), n))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let n = self.order.min(o.order);
        Ok(PowerSeries1D::new(&self.var, (0..=n).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect(), n))
    }

    /// Product; the truncation is pessimistic, accounting for known leading zeros.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let va = self.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(self.order + 1);
        let vb = o.coeffs.iter().position(|c| !c.is_zero()).unwrap_or(o.order + 1);
        let n = (self.order + vb).min(o.order + va);
        let mut out = vec![Coeff::zero(); n + 1];
        for i in 0..=self.order.min(n) {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=o.order.min(n - i) {
                out[i + j] = &out[i + j] + &(&self.coeffs[i] * &o.coeffs[j]);
            }
        }
        Ok(PowerSeries1D::new(&self.var, out, n))
    }

    /// Inverse of a series with invertible constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeffs[0].inv()?;
        let n = self.order;
        let mut out = vec![Coeff::zero(); n + 1];
        out[0] = c0.clone();
        for k in 1..=n {
            let mut s = Coeff::zero();
            for j in 1..=k {
                s = &s + &(&self.coeffs[j] * &out[k - j]);
            }
            out[k] = -&(&s * &c0);
        }
        Ok(PowerSeries1D::new(&self.var, out, n))
    }

    pub fn vanishing(&self) -> Vanishing {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => Vanishing::Exact(i),
            None => Vanishing::Beyond { order: self.order },
        }
    }

    /// `p(images)`, one series per variable of `p`.
    pub fn compose(p: &Poly, images: &[PowerSeries1D]) -> Result<Self> {
        if images.len() != p.nvars() {
            return Err(Error::VariableMismatch("one series per variable required".into()));
        }
        let first = images.first().ok_or(Error::TruncationUnderflow)?;
        for s in images {
            first.check(s)?;
        }
        let order = images.iter().map(|s| s.order).min().unwrap_or(0);
        let mut acc = PowerSeries1D::zero(&first.var, order);
        let mut powers: Vec<Vec<PowerSeries1D>> = images
            .iter()
            .map(|s| vec![PowerSeries1D::constant(&s.var, Coeff::one(), s.order), s.clone()])
            .collect();
        for (m, c) in p.terms() {
            let mut t = PowerSeries1D::constant(&first.var, c.clone(), order);
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&images[i])?;
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e])?;
            }
            acc = acc.add(&t)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for PowerSeries1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}*{}", self.var)?,
                _ => write!(f, "{c}*{}^{i}", self.var)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O({}^{})", self.var, self.order + 1)
    }
}

/// Order of vanishing of a univariate polynomial at 0.
pub fn order_of_vanishing_poly(p: &UPoly) -> Vanishing {
    match p.valuation() {
        Some(v) => Vanishing::Exact(v),
        None => Vanishing::Infinite,
    }
}

/// Solves `q(x(y), y) ≡ 0 mod y^(order+1)` for `x(y)` with `x(0) = 0`, where
/// `q` is a polynomial in two variables `(x, y)` (in that order). Newton
/// iteration doubling the precision at each step.
pub fn implicit_series_solve(q: &Poly, order: usize) -> Result<PowerSeries1D> {
    if q.nvars() != 2 {
        return Err(Error::VariableMismatch("expected a polynomial in (x, y)".into()));
    }
    let yname = q.vars().name(1).to_string();
    let origin = [Coeff::zero(), Coeff::zero()];
    if !q.eval(&origin).is_zero() {
        return Err(Error::ImplicitFunction("q(0,0) is not zero".into()));
    }
    let qx = q.derivative(0);
    if qx.eval(&origin).is_zero() {
        return Err(Error::ImplicitFunction("dq/dx vanishes at the origin".into()));
    }
    let mut x = PowerSeries1D::zero(&yname, 0);
    let mut prec = 1usize;
    while prec < order + 1 {
        prec = (2 * prec).min(order + 1);
        let n = prec - 1;
        let xs = PowerSeries1D::new(&yname, x.coeffs.clone(), n);
        let ys = PowerSeries1D::variable(&yname, n);
        let num = PowerSeries1D::compose(q, &[xs.clone(), ys.clone()])?;
        let den = PowerSeries1D::compose(&qx, &[xs.clone(), ys])?;
        let step = num.mul(&den.inverse()?)?;
        x = xs.sub(&step)?.truncate(n);
    }
    Ok(PowerSeries1D::new(&yname, x.coeffs, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Vars;
    use crate::text::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s, &Vars::new(&["x", "y"])).unwrap()
    }

    fn ints(s: &PowerSeries1D) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                let q = c.as_rational().unwrap();
                assert!(q.is_integer());
                i64::try_from(q.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn parabola_branch() {
        let s = implicit_series_solve(&p("x + y^2"), 7).unwrap();
        assert_eq!(ints(&s), vec![0, 0, -1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn geometric_branch() {
        // x(1+y) = -y^2  =>  x = -y^2/(1+y)
        let s = implicit_series_solve(&p("x + y^2 + x*y"), 7).unwrap();
        assert_eq!(ints(&s), vec![0, 0, -1, 1, -1, 1, -1, 1]);
    }

    #[test]
    fn trivial_branch() {
        let s = implicit_series_solve(&p("x"), 5).unwrap();
        assert_eq!(s.vanishing(), Vanishing::Beyond { order: 5 });
    }

    #[test]
    fn hypothesis_failures() {
        assert!(matches!(implicit_series_solve(&p("x + 1"), 3), Err(Error::ImplicitFunction(_))));
        assert!(matches!(implicit_series_solve(&p("y^2 + x^2"), 3), Err(Error::ImplicitFunction(_))));
    }

    #[test]
    fn saddle_node_restriction_has_order_seven() {
        // x(y) on Q = 0, then P(x(y), y) for the saddle-node normal form.
        let q = p("x + y^2 - x^2*y");
        let pp = p("x^2 + x*y^2");
        let s = implicit_series_solve(&q, 10).unwrap();
        let r = PowerSeries1D::compose(&pp, &[s, PowerSeries1D::variable("y", 10)]).unwrap();
        assert_eq!(r.vanishing(), Vanishing::Exact(7));
    }

    #[test]
    fn vanishing_of_polynomials() {
        let u = p("y^3 - y^5").to_upoly(1).unwrap();
        assert_eq!(order_of_vanishing_poly(&u), Vanishing::Exact(3));
        assert_eq!(order_of_vanishing_poly(&UPoly::zero()), Vanishing::Infinite);
        let z = PowerSeries1D::zero("y", 7);
        assert_eq!(z.vanishing(), Vanishing::Beyond { order: 7 });
    }
}
