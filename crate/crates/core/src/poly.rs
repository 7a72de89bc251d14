//! Sparse multivariate polynomials over [`Coeff`] in graded-lex order, with
//! exact division, gcd, subresultant resultants and substitution.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use crate::coeff::{common_field, Coeff, NumberField, QPoly};
use crate::error::{Error, Result};
use crate::upoly::UPoly;

pub type Exps = SmallVec<[u16; 4]>;

/// Exponent vector ordered graded-lexicographically (total degree first,
/// then lexicographic with the first variable most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Exps);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    /// `self / o` if `o` divides `self`.
    pub fn div(&self, o: &Self) -> Option<Self> {
        let mut out = Exps::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(Monomial(out))
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree().cmp(&o.degree()).then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Ordered variable names shared between polynomials of one ring.
#[derive(Clone, Debug)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new(names: &[&str]) -> Self {
        Vars(names.iter().map(|s| s.to_string()).collect::<Vec<_>>().into())
    }

    pub fn from_strings(names: Vec<String>) -> Self {
        Vars(names.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }
}

impl PartialEq for Vars {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || self.0 == o.0
    }
}

impl Eq for Vars {}

/// A polynomial: finitely many nonzero terms over an ordered variable list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Coeff) -> Self {
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Poly::constant(vars, Coeff::one())
    }

    /// The `i`-th variable.
    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut m = Monomial::one(vars.len());
        m.0[i] = 1;
        Poly::monomial(vars, m, Coeff::one())
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        let i = vars
            .index(name)
            .ok_or_else(|| Error::VariableMismatch(alloc::format!("no variable {name}")))?;
        Ok(Poly::var(vars, i))
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Coeff) -> Self {
        debug_assert_eq!(m.0.len(), vars.len());
        let mut p = Poly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> Self {
        let mut p = Poly::zero(vars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u16]) -> Coeff {
        self.terms.get(&Monomial(exps.into())).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> Coeff {
        self.coeff(&Monomial::one(self.nvars()).0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Coeff> {
        self.is_constant().then(|| self.constant_term())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().next().map(Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> Option<usize> {
        self.terms.keys().map(|m| m.0[i] as usize).max()
    }

    pub fn uses_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] > 0)
    }

    pub fn used_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.uses_var(i)).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: usize) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Coeff {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// The number field of the coefficients, if any is irrational.
    pub fn field(&self) -> Option<NumberField> {
        common_field(self.terms.values())
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&Coeff) -> Coeff) -> Self {
        Poly::from_terms(&self.vars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        self.map_coeffs(|a| a * c)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Result<Self> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        Ok(self.scale(&self.leading_coeff().inv()?))
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.vars);
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

    fn check_ring(&self, o: &Self) {
        assert!(self.vars == o.vars, "polynomials from different rings: {:?} vs {:?}", self.vars, o.vars);
    }

    pub fn derivative(&self, i: usize) -> Self {
        Poly::from_terms(
            &self.vars,
            self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
                let mut e = m.clone();
                let k = e.0[i];
                e.0[i] -= 1;
                (e, c * &Coeff::from(k as i64))
            }),
        )
    }

    /// Exact quotient; errors if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::NotDivisible)
        }
    }

    /// Multivariate division by a single divisor (graded-lex leading terms).
    /// The remainder is zero whenever `d` divides `self`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        self.check_ring(d);
        let (lm, lc) = d.leading_term().ok_or(Error::DivisionByZero)?;
        let (lm, inv) = (lm.clone(), lc.inv()?);
        let mut q = Poly::zero(&self.vars);
        let mut rem = Poly::zero(&self.vars);
        let mut p = self.clone();
        while let Some((m, c)) = p.terms.pop_last() {
            match m.div(&lm) {
                Some(t) => {
                    let f = &c * &inv;
                    // subtract f*t*d without its leading term (already removed)
                    for (dm, dc) in d.terms.iter().rev().skip(1) {
                        p.add_term(dm.mul(&t), -&(&f * dc));
                    }
                    q.add_term(t, f);
                }
                None => {
                    rem.add_term(m, c);
                }
            }
        }
        Ok((q, rem))
    }

    pub fn divides(&self, p: &Self) -> Result<bool> {
        Ok(p.div_rem(self)?.1.is_zero())
    }

    /// Evaluates at a point (one value per variable).
    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.0.iter().zip(point) {
                if *e > 0 {
                    t = &t * &x.pow(*e as u32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes `images[i]` for variable `i`; all images live in one target ring.
    pub fn compose(&self, images: &[Poly]) -> Self {
        assert_eq!(images.len(), self.nvars());
        let target = images.first().map(|p| p.vars.clone()).unwrap_or_else(|| self.vars.clone());
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|p| vec![Poly::one(&p.vars), p.clone()]).collect();
        let mut acc = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e];
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes the named variables, keeping the others.
    pub fn substitute(&self, assignment: &[(&str, Poly)]) -> Result<Self> {
        let mut images: Vec<Poly> = (0..self.nvars()).map(|i| Poly::var(&self.vars, i)).collect();
        let target = assignment.first().map(|(_, p)| p.vars.clone()).unwrap_or_else(|| self.vars.clone());
        if target != self.vars {
            images = Vec::with_capacity(self.nvars());
            for name in self.vars.names() {
                match assignment.iter().find(|(n, _)| n == name) {
                    Some((_, p)) => images.push(p.clone()),
                    None => images.push(Poly::var_named(&target, name)?),
                }
            }
            return Ok(self.compose(&images));
        }
        for (name, p) in assignment {
            let i = self
                .vars
                .index(name)
                .ok_or_else(|| Error::VariableMismatch(alloc::format!("no variable {name}")))?;
            if p.vars != self.vars {
                return Err(Error::VariableMismatch("substitution images must share one ring".into()));
            }
            images[i] = p.clone();
        }
        Ok(self.compose(&images))
    }

    /// Re-expresses the polynomial over a ring whose variables include all used ones.
    pub fn embed(&self, target: &Vars) -> Result<Self> {
        if *target == self.vars {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.nvars());
        for (i, name) in self.vars.names().iter().enumerate() {
            match target.index(name) {
                Some(j) => map.push(Some(j)),
                None if !self.uses_var(i) => map.push(None),
                None => return Err(Error::VariableMismatch(alloc::format!("{name} is not in the target ring"))),
            }
        }
        Ok(Poly::from_terms(
            target,
            self.terms.iter().map(|(m, c)| {
                let mut e = Monomial::one(target.len());
                for (i, j) in map.iter().enumerate() {
                    if let Some(j) = j {
                        e.0[*j] += m.0[i];
                    }
                }
                (e, c.clone())
            }),
        ))
    }

    /// Coefficients with respect to variable `i` (index = power); each
    /// coefficient stays in the same ring with exponent 0 in `i`.
    pub fn coeffs_in(&self, i: usize) -> Vec<Poly> {
        let d = self.degree_in(i).unwrap_or(0);
        let mut out = vec![Poly::zero(&self.vars); if self.is_zero() { 0 } else { d + 1 }];
        for (m, c) in &self.terms {
            let mut e = m.clone();
            let k = e.0[i] as usize;
            e.0[i] = 0;
            out[k].add_term(e, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: &Vars, i: usize, cs: &[Poly]) -> Self {
        let mut acc = Poly::zero(vars);
        for (k, c) in cs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut e = m.clone();
                e.0[i] += k as u16;
                acc.add_term(e, a.clone());
            }
        }
        acc
    }

    /// Dense univariate view in variable `i`; errors if another variable occurs.
    pub fn to_upoly(&self, i: usize) -> Result<UPoly> {
        if (0..self.nvars()).any(|j| j != i && self.uses_var(j)) {
            return Err(Error::NotUnivariate);
        }
        Ok(UPoly::new(self.coeffs_in(i).iter().map(Poly::constant_term).collect()))
    }

    pub fn from_upoly(vars: &Vars, i: usize, u: &UPoly) -> Self {
        let cs: Vec<Poly> = u.coeffs().iter().map(|c| Poly::constant(vars, c.clone())).collect();
        Poly::from_coeffs_in(vars, i, &cs)
    }

    pub fn from_qpoly(vars: &Vars, i: usize, q: &QPoly) -> Self {
        Poly::from_upoly(vars, i, &UPoly::from_qpoly(q))
    }

    /// `(X,Y,...)^d · p(x/Z, ...)`: homogenizes with respect to an extra variable
    /// that must already exist in the ring.
    pub fn homogenize(&self, h: usize) -> Self {
        let d = self.total_degree().unwrap_or(0);
        Poly::from_terms(
            &self.vars,
            self.terms.iter().map(|(m, c)| {
                let mut e = m.clone();
                e.0[h] += (d - m.degree()) as u16;
                (e, c.clone())
            }),
        )
    }

    /// Largest power of variable `i` dividing the polynomial.
    pub fn var_valuation(&self, i: usize) -> usize {
        self.terms.keys().map(|m| m.0[i] as usize).min().unwrap_or(0)
    }

    /// Divides by `var_i^k` (exponents must allow it).
    pub fn shift_down(&self, i: usize, k: usize) -> Self {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut e = m.clone();
                    e.0[i] -= k as u16;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Canonical scaling: leading coefficient 1 (no-op on zero).
    pub fn normalized(&self) -> Result<Self> {
        self.monic()
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        self.check_ring(o);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self.check_ring(o);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        self.check_ring(o);
        let mut out = Poly::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|c| -c)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, o: Poly) -> Poly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Display for Poly {
    /// Canonical text: terms by decreasing graded-lex order, explicit `*` and `^`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c {
                Coeff::Rat(q) if q < &num_rational::BigRational::from_integer(0.into()) => (true, Coeff::Rat(-q)),
                _ => (false, c.clone()),
            };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut first = true;
            if m.degree() == 0 || !mag.is_one() {
                write!(f, "{mag}")?;
                first = false;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                f.write_str(self.vars.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Univariate-in-one-variable algorithms over the remaining variables.

fn lead(cs: &[Poly]) -> &Poly {
    cs.last().expect("nonzero")
}

fn trim(mut cs: Vec<Poly>) -> Vec<Poly> {
    while cs.last().is_some_and(Poly::is_zero) {
        cs.pop();
    }
    cs
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`, in coefficient form.
fn prem(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let db = b.len() - 1;
    let mut r: Vec<Poly> = a.to_vec();
    if r.len() < b.len() {
        return r;
    }
    let lb = lead(b).clone();
    let mut steps = r.len() - db;
    while r.len() >= b.len() && !r.is_empty() {
        let lr = lead(&r).clone();
        let shift = r.len() - 1 - db;
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (j, bj) in b.iter().enumerate() {
            let idx = shift + j;
            r[idx] = &r[idx] - &(&lr * bj);
        }
        r = trim(r);
        steps -= 1;
    }
    for _ in 0..steps {
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
    }
    r
}

/// Gcd of a family of polynomials, normalized to leading coefficient 1.
pub fn gcd_many<'a>(vars: &Vars, ps: impl IntoIterator<Item = &'a Poly>) -> Result<Poly> {
    let mut g = Poly::zero(vars);
    for p in ps {
        g = gcd(&g, p)?;
        if g.is_constant() && !g.is_zero() {
            return Ok(Poly::one(vars));
        }
    }
    Ok(g)
}

/// Polynomial gcd (recursive primitive PRS), normalized to leading coefficient 1.
pub fn gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    a.check_ring(b);
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() || certainly_coprime(a, b) {
        return Ok(Poly::one(a.vars()));
    }
    // main variable: the last one used by either
    let v = (0..a.nvars()).rev().find(|&i| a.uses_var(i) || b.uses_var(i)).unwrap();
    if !a.uses_var(v) {
        return gcd(a, &content(b, v)?);
    }
    if !b.uses_var(v) {
        return gcd(&content(a, v)?, b);
    }
    let ca = content(a, v)?;
    let cb = content(b, v)?;
    let c = gcd(&ca, &cb)?;
    let mut pa = a.div_exact(&ca)?.coeffs_in(v);
    let mut pb = b.div_exact(&cb)?.coeffs_in(v);
    if pa.len() < pb.len() {
        core::mem::swap(&mut pa, &mut pb);
    }
    loop {
        let r = prem(&pa, &pb);
        if r.is_empty() {
            break;
        }
        if r.len() == 1 {
            pb = vec![Poly::one(a.vars())];
            break;
        }
        let rp = Poly::from_coeffs_in(a.vars(), v, &r);
        let rc = content(&rp, v)?;
        pa = pb;
        pb = rp.div_exact(&rc)?.coeffs_in(v);
    }
    let g = Poly::from_coeffs_in(a.vars(), v, &pb);
    let g = g.div_exact(&content(&g, v)?)?;
    (&c * &g).monic()
}

/// Specialization certificate: if for every shared variable `v` some point
/// keeps `lc_v(a)` nonzero and makes the univariate gcd constant, then no
/// common factor involves `v`. `false` means "not proven".
fn certainly_coprime(a: &Poly, b: &Poly) -> bool {
    let n = a.nvars();
    for v in (0..n).filter(|&v| a.uses_var(v) && b.uses_var(v)) {
        let mut proven = false;
        for k in 0..4i64 {
            let point: Vec<Coeff> = (0..n).map(|i| Coeff::from((i as i64 + 1) * (k + 2) - 3 * k)).collect();
            let spec = |p: &Poly| UPoly::new(p.coeffs_in(v).iter().map(|c| c.eval(&point)).collect());
            let ua = spec(a);
            if ua.degree() != a.degree_in(v) {
                continue;
            }
            match ua.gcd(&spec(b)) {
                Ok(g) if g.degree() == Some(0) => {
                    proven = true;
                    break;
                }
                Ok(_) => return false,
                Err(_) => continue,
            }
        }
        if !proven {
            return false;
        }
    }
    true
}

/// Content with respect to variable `v`: gcd of the coefficients in `v`.
pub fn content(p: &Poly, v: usize) -> Result<Poly> {
    let cs = p.coeffs_in(v);
    gcd_many(p.vars(), cs.iter().filter(|c| !c.is_zero()))
}

/// Resultant `Res_v(p, q)` by the subresultant pseudo-remainder sequence.
pub fn resultant(p: &Poly, q: &Poly, v: usize) -> Result<Poly> {
    p.check_ring(q);
    let vars = p.vars().clone();
    if p.is_zero() || q.is_zero() {
        return Ok(Poly::zero(&vars));
    }
    let mut a = p.coeffs_in(v);
    let mut b = q.coeffs_in(v);
    let mut sign = false;
    if a.len() < b.len() {
        if (a.len() - 1) % 2 == 1 && (b.len() - 1) % 2 == 1 {
            sign = !sign;
        }
        core::mem::swap(&mut a, &mut b);
    }
    if b.len() == 1 {
        let r = lead(&b).pow((a.len() - 1) as u32);
        return Ok(if sign { -r } else { r });
    }
    let mut g = Poly::one(&vars);
    let mut h = Poly::one(&vars);
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return Ok(Poly::zero(&vars));
        }
        let div = &g * &h.pow(delta as u32);
        b = r.iter().map(|c| c.div_exact(&div)).collect::<Result<Vec<_>>>()?;
        g = lead(&a).clone();
        // h <- g^delta / h^(delta-1)
        h = if delta == 0 {
            h.clone()
        } else {
            g.pow(delta as u32).div_exact(&h.pow((delta - 1) as u32))?
        };
        if b.len() == 1 {
            let da = a.len() - 1;
            let lb = lead(&b).clone();
            let res = if da == 0 {
                h
            } else {
                lb.pow(da as u32).div_exact(&h.pow((da - 1) as u32))?
            };
            return Ok(if sign { -res } else { res });
        }
    }
}

/// Squarefree decomposition of a univariate polynomial (in whichever single
/// variable it uses). Factors are monic; multiplicities ascending.
pub fn squarefree_decomposition(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    let used = p.used_vars();
    if used.len() > 1 {
        return Err(Error::NotUnivariate);
    }
    let Some(&v) = used.first() else {
        return Ok(Vec::new());
    };
    let u = p.to_upoly(v)?;
    Ok(u.squarefree()?.into_iter().map(|(f, m)| (Poly::from_upoly(p.vars(), v, &f), m)).collect())
}

/// Product of the distinct irreducible factors of `p`, `p / gcd(p, ∂p)`.
pub fn radical(p: &Poly) -> Result<Poly> {
    if p.is_constant() {
        return Ok(Poly::one(p.vars()));
    }
    let ds: Vec<Poly> = (0..p.nvars()).map(|i| p.derivative(i)).collect();
    let g = gcd_many(p.vars(), core::iter::once(p).chain(ds.iter()))?;
    p.div_exact(&g)
}
