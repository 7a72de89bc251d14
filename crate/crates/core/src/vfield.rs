//! Polynomial vector fields as derivations.

use alloc::vec::Vec;
use core::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::{Poly, Vars};

/// `Σ comps[i] ∂/∂vars[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    comps: Vec<Poly>,
}

impl VectorField {
    pub fn new(comps: Vec<Poly>) -> Result<Self> {
        let Some(first) = comps.first() else {
            return Err(Error::VariableMismatch("a vector field needs components".into()));
        };
        if comps.len() != first.nvars() || comps.iter().any(|c| c.vars() != first.vars()) {
            return Err(Error::VariableMismatch("one component per variable of a common ring".into()));
        }
        Ok(VectorField { comps })
    }

    pub fn zero(vars: &Vars) -> Self {
        VectorField { comps: (0..vars.len()).map(|_| Poly::zero(vars)).collect() }
    }

    /// `∂/∂vars[i]`.
    pub fn partial(vars: &Vars, i: usize) -> Self {
        let mut v = VectorField::zero(vars);
        v.comps[i] = Poly::one(vars);
        v
    }

    /// The radial (Euler) field `Σ x_i ∂/∂x_i`.
    pub fn radial(vars: &Vars) -> Self {
        VectorField { comps: (0..vars.len()).map(|i| Poly::var(vars, i)).collect() }
    }

    pub fn vars(&self) -> &Vars {
        self.comps[0].vars()
    }

    pub fn comps(&self) -> &[Poly] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &Poly {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly::is_zero)
    }

    /// Derivative of `p` along the field.
    pub fn apply(&self, p: &Poly) -> Poly {
        let mut acc = Poly::zero(p.vars());
        for (i, c) in self.comps.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(c * &p.derivative(i));
            }
        }
        acc
    }

    /// Contraction with the 1-form `Σ form[i] dx_i`.
    pub fn contract(&self, form: &[Poly]) -> Poly {
        let mut acc = Poly::zero(self.vars());
        for (c, a) in self.comps.iter().zip(form) {
            acc = &acc + &(c * a);
        }
        acc
    }

    pub fn bracket(&self, o: &Self) -> Result<Self> {
        if self.vars() != o.vars() {
            return Err(Error::VariableMismatch("fields on different rings".into()));
        }
        let comps = self.comps.iter().zip(&o.comps).map(|(a, b)| &self.apply(b) - &o.apply(a)).collect();
        Ok(VectorField { comps })
    }

    pub fn add(&self, o: &Self) -> Self {
        VectorField { comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        VectorField { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    /// `p·self`.
    pub fn mul_poly(&self, p: &Poly) -> Self {
        VectorField { comps: self.comps.iter().map(|a| a * p).collect() }
    }

    /// The constant `c` with `self = c·o`, if any; `None` when `o` is zero.
    pub fn proportional_to(&self, o: &Self) -> Option<Coeff> {
        let (i, lead) = o.comps.iter().enumerate().find_map(|(i, c)| c.leading_term().map(|(m, a)| (i, (m.clone(), a.clone()))))?;
        let ratio = self.comps[i].coeff(&lead.0 .0).checked_div(&lead.1).ok()?;
        self.comps.iter().zip(&o.comps).all(|(a, b)| *a == b.scale(&ratio)).then_some(ratio)
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})*d/d{}", self.vars().name(i))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::parse_poly;
    use alloc::vec;

    #[test]
    fn brackets() {
        let v = Vars::new(&["x", "y"]);
        let xdx = VectorField::new(vec![Poly::var(&v, 0), Poly::zero(&v)]).unwrap();
        let dx = VectorField::partial(&v, 0);
        assert_eq!(xdx.bracket(&dx).unwrap(), dx.scale(&Coeff::from(-1)));

        let w = Vars::new(&["X", "Y", "Z"]);
        let q = |s: &str| parse_poly(s, &w).unwrap();
        let z = VectorField::new(vec![q("X*Y - Z^2"), q("Y^2"), q("X*Z + 3*Y*Z")]).unwrap();
        assert_eq!(VectorField::radial(&w).bracket(&z).unwrap(), z);
    }
}
