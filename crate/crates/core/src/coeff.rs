//! Scalars: exact rationals and elements of simple extensions ℚ[t]/(m(t)).
//!
//! Extension arithmetic never factors the modulus. A failed inversion reports a
//! proper factor of `m` through [`Error::ZeroDivisor`], which lets callers split
//! the computation along that factor and retry.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact square root of a rational, if it exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    rational_root(q, 2)
}

/// Exact `k`-th root of a rational, if it exists in ℚ.
pub fn rational_root(q: &Rational, k: u32) -> Option<Rational> {
    if q.is_zero() {
        return Some(Rational::zero());
    }
    if q.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return rational_root(&-q, k).map(|r| -r);
    }
    let n = q.numer().nth_root(k);
    let d = q.denom().nth_root(k);
    if num_traits::pow(n.clone(), k as usize) == *q.numer()
        && num_traits::pow(d.clone(), k as usize) == *q.denom()
    {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub(crate) fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Dense univariate polynomial over ℚ, lowest degree first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly(Vec<Rational>);

impl QPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn constant(c: Rational) -> Self {
        QPoly::new(vec![c])
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        QPoly(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        QPoly::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rational {
        self.0.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.0.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QPoly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::new(out)
    }

    /// Quotient and remainder; panics on a zero divisor polynomial.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "QPoly division by zero");
        let dd = d.0.len() - 1;
        let inv = d.lc().recip();
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (QPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = &r[i] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.0.iter().enumerate() {
                let idx = i - dd + j;
                r[idx] -= &c * dj;
            }
            q[i - dd] = c;
        }
        r.truncate(dd);
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero only if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        if self.degree().unwrap_or(0).min(o.degree().unwrap_or(0)) >= 4 {
            return crate::modular::gcd(self, o);
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s)` with `s·self ≡ g (mod m)` and `g = gcd(self, m)` monic.
    pub fn gcd_cofactor(&self, m: &Self) -> (Self, Self) {
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::constant(Rational::one()));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv))
    }

    pub fn derivative(&self) -> Self {
        QPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Rational roots, each listed once, in increasing order.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return roots;
        }
        // Clear denominators to an integer polynomial.
        let mut l = BigInt::one();
        for c in &self.0 {
            l = l.lcm(c.denom());
        }
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * &l).to_integer()).collect();
        let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
        if low > 0 {
            roots.push(Rational::zero());
        }
        let a0 = ints[low].abs();
        let an = ints.last().cloned().unwrap_or_default().abs();
        // Coefficients too large to enumerate divisors: only the root 0 is reported.
        let (Some(ps), Some(qs)) = (small_divisors(&a0), small_divisors(&an)) else {
            return roots;
        };
        let reduced = QPoly::new(self.0[low..].to_vec());
        for p in &ps {
            for q in &qs {
                if !p.gcd(q).is_one() {
                    continue;
                }
                for sign in [1, -1] {
                    let r = Rational::new(p * BigInt::from(sign), q.clone());
                    if reduced.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    /// A squarefree polynomial as its rational linear factors followed by the
    /// remaining cofactor, if that has positive degree.
    pub fn split_rational(&self) -> Vec<QPoly> {
        let mut rest = self.clone();
        let mut out = Vec::new();
        for r in self.rational_roots() {
            let lin = QPoly::new(vec![-r, Rational::one()]);
            rest = rest.divrem(&lin).0;
            out.push(lin);
        }
        if rest.degree().unwrap_or(0) > 0 {
            out.push(rest);
        }
        out
    }

    /// Squarefree decomposition (Yun); returns monic factors with multiplicities.
    pub fn squarefree(&self) -> Vec<(QPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.divrem(&a).0;
        let mut c = df.divrem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.divrem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.divrem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn display_in(&self, var: &str) -> String {
        let mut s = String::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => alloc::format!("{var}^{i}"),
            };
            if i == 0 || !a.is_one() {
                s.push_str(&RatDisplay(&a).to_string());
                if i > 0 {
                    s.push('*');
                }
            }
            s.push_str(&mono);
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}

/// Divisors of `n` (positive), or `None` when `n` is too large to enumerate.
fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    use num_traits::ToPrimitive;
    let v = n.to_u64()?;
    if v > 1_000_000_000_000 {
        return None;
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    while i * i <= v {
        if v % i == 0 {
            out.push(BigInt::from(i));
            if i * i != v {
                out.push(BigInt::from(v / i));
            }
        }
        i += 1;
        if i > 2_000_000 {
            return None;
        }
    }
    Some(out)
}

struct RatDisplay<'a>(&'a Rational);

impl fmt::Display for RatDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(self.0, f)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("t"))
    }
}

#[derive(Debug)]
struct FieldData {
    modulus: QPoly,
    name: String,
}

/// A simple extension ℚ[t]/(m(t)) with `m` monic of degree ≥ 2.
///
/// `m` need not be irreducible; see the module docs.
#[derive(Clone, Debug)]
pub struct NumberField(Arc<FieldData>);

impl NumberField {
    pub fn new(modulus: QPoly, name: &str) -> Result<Self> {
        if modulus.degree().unwrap_or(0) < 2 {
            return Err(Error::Degenerate("extension modulus must have degree at least 2".into()));
        }
        Ok(NumberField(Arc::new(FieldData { modulus: modulus.monic(), name: name.into() })))
    }

    pub fn modulus(&self) -> &QPoly {
        &self.0.modulus
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn degree(&self) -> usize {
        self.0.modulus.degree().unwrap_or(0)
    }

    /// The class of `t`.
    pub fn generator(&self) -> Coeff {
        self.element(QPoly::t())
    }

    pub fn element(&self, rep: QPoly) -> Coeff {
        Coeff::from_residue(rep.rem(self.modulus()), self)
    }
}

impl PartialEq for NumberField {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.modulus == o.0.modulus && self.0.name == o.0.name)
    }
}

impl Eq for NumberField {}

/// A scalar: a rational, or a non-rational element of a [`NumberField`].
///
/// Elements whose residue is constant are always stored as `Rat`, so equality
/// is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coeff {
    Rat(Rational),
    Alg(QPoly, NumberField),
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl From<Rational> for Coeff {
    fn from(q: Rational) -> Self {
        Coeff::Rat(q)
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::Rat(int(n))
    }
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff::Rat(Rational::zero())
    }

    pub fn one() -> Self {
        Coeff::Rat(Rational::one())
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Coeff::Rat(rat(n, d))
    }

    fn from_residue(rep: QPoly, field: &NumberField) -> Self {
        if rep.degree().unwrap_or(0) == 0 {
            Coeff::Rat(rep.coeff(0))
        } else {
            Coeff::Alg(rep, field.clone())
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Coeff::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Coeff::Rat(q) if q.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coeff::Rat(q) => Some(q),
            Coeff::Alg(..) => None,
        }
    }

    pub fn field(&self) -> Option<&NumberField> {
        match self {
            Coeff::Rat(_) => None,
            Coeff::Alg(_, k) => Some(k),
        }
    }

    /// Residue polynomial in `t` (a constant for rationals).
    pub fn residue(&self) -> QPoly {
        match self {
            Coeff::Rat(q) => QPoly::constant(q.clone()),
            Coeff::Alg(r, _) => r.clone(),
        }
    }

    fn binop(&self, o: &Self, f: impl Fn(&QPoly, &QPoly) -> QPoly) -> Coeff {
        let field = match (self.field(), o.field()) {
            (Some(a), Some(b)) => {
                assert!(a == b, "mixing elements of different number fields");
                a
            }
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!(),
        };
        let r = f(&self.residue(), &o.residue()).rem(field.modulus());
        Coeff::from_residue(r, field)
    }

    pub fn inv(&self) -> Result<Coeff> {
        match self {
            Coeff::Rat(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Coeff::Rat(q.recip()))
                }
            }
            Coeff::Alg(r, k) => {
                let (g, s) = r.gcd_cofactor(k.modulus());
                if g.degree() != Some(0) {
                    return Err(Error::ZeroDivisor { factor: g });
                }
                Ok(Coeff::from_residue(s.rem(k.modulus()), k))
            }
        }
    }

    pub fn checked_div(&self, o: &Self) -> Result<Coeff> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> Coeff {
        let mut base = self.clone();
        let mut acc = Coeff::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Maps an element of ℚ[t]/(m) to ℚ[t]/(m₁) where `m₁` divides `m`.
    /// For a linear factor use [`Coeff::specialize_at`] instead.
    pub fn reduce_to(&self, target: &NumberField) -> Coeff {
        match self {
            Coeff::Rat(_) => self.clone(),
            Coeff::Alg(r, _) => target.element(r.clone()),
        }
    }

    /// Evaluates the residue at a rational root of the modulus.
    pub fn specialize_at(&self, root: &Rational) -> Coeff {
        match self {
            Coeff::Rat(_) => self.clone(),
            Coeff::Alg(r, _) => Coeff::Rat(r.eval(root)),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rat(q) => fmt_rational(q, f),
            Coeff::Alg(r, k) => write!(f, "({})", r.display_in(k.name())),
        }
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a + b),
            _ => self.binop(o, QPoly::add),
        }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a - b),
            _ => self.binop(o, QPoly::sub),
        }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            (Coeff::Rat(a), Coeff::Alg(r, k)) | (Coeff::Alg(r, k), Coeff::Rat(a)) => {
                Coeff::from_residue(r.scale(a), k)
            }
            _ => self.binop(o, QPoly::mul),
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        match self {
            Coeff::Rat(a) => Coeff::Rat(-a),
            Coeff::Alg(r, k) => Coeff::Alg(r.scale(&-Rational::one()), k.clone()),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Coeff {
            type Output = Coeff;
            fn $m(self, o: Coeff) -> Coeff {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

/// Picks the common number field of a set of scalars, if any.
pub fn common_field<'a>(cs: impl IntoIterator<Item = &'a Coeff>) -> Option<NumberField> {
    cs.into_iter().find_map(|c| c.field().cloned())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_in_quadratic_field() {
        let k = NumberField::new(QPoly::from_ints(&[-2, 0, 1]), "s").unwrap();
        let s = k.generator();
        let a = &s + &Coeff::one();
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert_eq!(&s * &s, Coeff::from(2));
    }

    #[test]
    fn zero_divisor_reports_factor() {
        // t^2 - 1 = (t-1)(t+1)
        let k = NumberField::new(QPoly::from_ints(&[-1, 0, 1]), "t").unwrap();
        let a = &k.generator() - &Coeff::one();
        match a.inv() {
            Err(Error::ZeroDivisor { factor }) => assert_eq!(factor, QPoly::from_ints(&[-1, 1])),
            other => panic!("expected zero divisor, got {other:?}"),
        }
    }

    #[test]
    fn squarefree_of_repeated_quadratic() {
        // (t^2-2)^2 (t+1)
        let a = QPoly::from_ints(&[-2, 0, 1]);
        let p = a.mul(&a).mul(&QPoly::from_ints(&[1, 1]));
        let sf = p.squarefree();
        assert_eq!(sf, vec![(QPoly::from_ints(&[1, 1]), 1), (a, 2)]);
    }

    #[test]
    fn rational_roots_found() {
        // (2t-1)(t+3)(t^2+1)
        let p = QPoly::from_ints(&[-1, 2])
            .mul(&QPoly::from_ints(&[3, 1]))
            .mul(&QPoly::from_ints(&[1, 0, 1]));
        assert_eq!(p.rational_roots(), vec![int(-3), rat(1, 2)]);
    }

    #[test]
    fn roots_of_rationals() {
        assert_eq!(rational_root(&rat(-27, 8), 3), Some(rat(-3, 2)));
        assert_eq!(rational_sqrt(&int(2)), None);
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
    }
}
