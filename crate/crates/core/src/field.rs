//! Working at the roots of a rational polynomial without factoring it.
//!
//! Computations run over `ℚ[t]/(m)` for a squarefree `m`. When an inversion
//! meets a zero divisor, `m` is split along the reported factor and both
//! halves are retried, so every piece that comes back is one on which the
//! computation made uniform decisions.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::{Coeff, NumberField, QPoly, Rational};
use crate::error::{Error, Result};
use crate::poly::{resultant, Monomial, Poly, Vars};
use crate::upoly::UPoly;

/// A root of the squarefree polynomial `m`: either rational or the generator of `ℚ[t]/(m)`.
pub fn root_of(m: &QPoly, name: &str) -> Result<Coeff> {
    let m = m.monic();
    match m.degree() {
        Some(1) => Ok(Coeff::Rat(-m.coeff(0))),
        Some(d) if d >= 2 => Ok(NumberField::new(m, name)?.generator()),
        _ => Err(Error::Degenerate("no roots to adjoin".into())),
    }
}

/// Whether `c` is a unit; a nonzero zero divisor is reported as an error.
pub fn is_unit(c: &Coeff) -> Result<bool> {
    if c.is_zero() {
        return Ok(false);
    }
    c.inv()?;
    Ok(true)
}

/// Runs `f` at a root of `m`, splitting `m` whenever `f` hits a zero divisor
/// of `ℚ[t]/(m)`. Returns the pieces (monic factors of `m`) with their results.
pub fn at_roots<T>(m: &QPoly, name: &str, mut f: impl FnMut(&QPoly, Coeff) -> Result<T>) -> Result<Vec<(QPoly, T)>> {
    let mut out = Vec::new();
    let mut stack = vec![m.monic()];
    while let Some(m) = stack.pop() {
        let t = root_of(&m, name)?;
        match f(&m, t) {
            Ok(v) => out.push((m, v)),
            Err(Error::ZeroDivisor { factor }) => {
                let g = factor.monic();
                let (h, r) = m.divrem(&g);
                if !r.is_zero() || g.degree().unwrap_or(0) == 0 || h.degree().unwrap_or(0) == 0 {
                    return Err(Error::ZeroDivisor { factor });
                }
                stack.push(h.monic());
                stack.push(g);
            }
            Err(e) => return Err(e),
        }
    }
    out.sort_by_key(|a| (a.0.degree(), a.0.to_string()));
    Ok(out)
}

/// Result of adjoining a root `y` of `g ∈ K[y]` to `K = ℚ[t]/(m)`.
#[derive(Clone, Debug)]
pub struct Adjoined {
    /// The new field, or `None` when everything stays in the old one.
    pub field: Option<NumberField>,
    /// Image of the old generator `t` (`None` when the old field was ℚ).
    pub t: Option<Coeff>,
    /// The adjoined root.
    pub root: Coeff,
}

impl Adjoined {
    /// Maps an element of the old field into the new one.
    pub fn lift(&self, c: &Coeff) -> Coeff {
        match (c, &self.t) {
            (Coeff::Rat(_), _) => c.clone(),
            (Coeff::Alg(r, _), Some(t)) => UPoly::from_qpoly(r).eval(t),
            (Coeff::Alg(..), None) => c.clone(),
        }
    }
}

fn lift_to_bivariate(g: &UPoly, vars: &Vars, shift: &Rational) -> Poly {
    // G(s, t) = g(s − shift·t; t), coefficients of g read as polynomials in t.
    let s = Poly::var(vars, 0);
    let t = Poly::var(vars, 1);
    let arg = &s - &t.scale(&Coeff::Rat(shift.clone()));
    let mut acc = Poly::zero(vars);
    for c in g.coeffs().iter().rev() {
        let ct = Poly::from_qpoly(vars, 1, &c.residue());
        acc = &(&acc * &arg) + &ct;
    }
    acc
}

/// Adjoins a root of the nonconstant `g` (coefficients in one field or in ℚ).
/// A rational root is preferred; otherwise a primitive element `s = y + c·t`
/// is used, whose minimal data `M(s) = Res_t(m(t), g(s − c t))` is made squarefree.
pub fn adjoin_root(g: &UPoly, name: &str) -> Result<Adjoined> {
    let g = g.squarefree_part()?;
    let d = g.degree().ok_or(Error::Degenerate("cannot adjoin a root of a constant".into()))?;
    if d == 0 {
        return Err(Error::Degenerate("cannot adjoin a root of a constant".into()));
    }
    let base = crate::coeff::common_field(g.coeffs().iter());
    if d == 1 {
        let root = -&g.coeff(0).checked_div(&g.coeff(1))?;
        return Ok(Adjoined { field: base.clone(), t: base.map(|k| k.generator()), root });
    }
    let Some(k) = base else {
        let q = g.to_qpoly().unwrap();
        if let Some(r) = q.rational_roots().into_iter().next() {
            return Ok(Adjoined { field: None, t: None, root: Coeff::Rat(r) });
        }
        let field = NumberField::new(q.monic(), name)?;
        return Ok(Adjoined { root: field.generator(), field: Some(field), t: None });
    };
    let vars = Vars::new(&["s", "t"]);
    let m = Poly::from_qpoly(&vars, 1, k.modulus());
    for c in 0..32i64 {
        let shift = Rational::from_integer(c.into());
        let big = lift_to_bivariate(&g, &vars, &shift);
        let res = resultant(&m, &big, 1)?;
        let mut mm = res.to_upoly(0)?.to_qpoly().ok_or(Error::Unsupported("non-rational resultant".into()))?.monic();
        if mm.gcd(&mm.derivative()).degree() != Some(0) {
            continue;
        }
        loop {
            let field = match mm.degree() {
                Some(1) => None,
                _ => Some(NumberField::new(mm.clone(), name)?),
            };
            let s = root_of(&mm, name)?;
            // gcd over the new field of m(T) and G(s, T) in T
            let sub = |p: &Poly| -> UPoly {
                let cs = p.coeffs_in(1);
                UPoly::new(cs.iter().map(|c| c.to_upoly(0).map(|u| u.eval(&s)).unwrap_or_default()).collect())
            };
            let h = sub(&m).gcd(&sub(&big));
            match h {
                Ok(h) if h.degree() == Some(1) => {
                    let t = -&h.coeff(0);
                    let root = &s - &(&t * &Coeff::Rat(shift.clone()));
                    return Ok(Adjoined { field, t: Some(t), root });
                }
                Ok(_) => break,
                Err(Error::ZeroDivisor { factor }) => mm = factor.monic(),
                Err(e) => return Err(e),
            }
        }
    }
    Err(Error::Unsupported("no primitive element found".into()))
}

/// `Res_t(m(t), p)`: up to a constant, the product of the conjugates of `p`
/// over the roots of `m` (coefficients of `p` read in `ℚ[t]/(m)`).
pub fn norm(p: &Poly, m: &QPoly) -> Result<Poly> {
    if p.is_rational() {
        return Ok(p.clone());
    }
    let n = p.nvars();
    let mut names: Vec<String> = p.vars().names().to_vec();
    names.push("t_".into());
    let ext = Vars::from_strings(names);
    let mut lifted = Poly::zero(&ext);
    for (mono, c) in p.terms() {
        let mut e = Monomial::one(n + 1);
        e.0[..n].copy_from_slice(&mono.0);
        let r = Poly::from_qpoly(&ext, n, &c.residue());
        lifted = &lifted + &r.mul_monomial(&e);
    }
    let res = resultant(&Poly::from_qpoly(&ext, n, m), &lifted, n)?;
    Ok(Poly::from_terms(p.vars(), res.terms().map(|(mono, c)| (Monomial(mono.0[..n].iter().copied().collect()), c.clone()))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use num_traits::Signed;

    #[test]
    fn splitting_along_zero_divisors() {
        // (t − 1)(t² − 2): decide whether t² = 2
        let m = QPoly::from_ints(&[2, -2, -1, 1]);
        let pieces = at_roots(&m, "t", |_, t| {
            let d = &(&t * &t) - &Coeff::from(2);
            is_unit(&d)
        })
        .unwrap();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].0, QPoly::from_ints(&[-1, 1]));
        assert!(pieces[0].1);
        assert_eq!(pieces[1].0, QPoly::from_ints(&[-2, 0, 1]));
        assert!(!pieces[1].1);
    }

    #[test]
    fn square_root_over_a_quadratic_field() {
        // adjoin y with y² = t over ℚ(t), t² = 2: y is a fourth root of 2
        let k = NumberField::new(QPoly::from_ints(&[-2, 0, 1]), "t").unwrap();
        let t = k.generator();
        let g = UPoly::new(vec![-&t, Coeff::zero(), Coeff::one()]);
        let a = adjoin_root(&g, "s").unwrap();
        assert_eq!(a.field.as_ref().unwrap().degree(), 4);
        let y = &a.root;
        assert_eq!(&(y * y) - &a.t.clone().unwrap(), Coeff::zero());
        assert_eq!(a.lift(&(&t * &t)), Coeff::from(2));
    }

    #[test]
    fn rational_roots_are_kept_rational() {
        let g = UPoly::from_qpoly(&QPoly::from_ints(&[-4, 0, 1]));
        assert_eq!(adjoin_root(&g, "s").unwrap().root.as_rational().unwrap().abs(), rat(2, 1));
        let g = UPoly::from_qpoly(&QPoly::from_ints(&[-4, 0, 0, 1]));
        let a = adjoin_root(&g, "s").unwrap();
        assert_eq!(a.root.pow(3), Coeff::from(4));
    }
}
