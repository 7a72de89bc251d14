//! Flex polynomial, invariant lines and curves, integrating factors and
//! Darboux first integrals.
//!
//! The flex polynomial of a foliation with dual field `Z = (E, F, G)` is
//!
//! ```text
//!     | X  E  Z(E) |
//! H = | Y  F  Z(F) |
//!     | Z  G  Z(G) |
//! ```
//!
//! Its zero set is the closure of the ordinary inflection points of leaves
//! together with the invariant lines, so for degree ≥ 2 every invariant line
//! is a linear factor of `H`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::coeff::{Coeff, QPoly, Rational};
use crate::error::{Error, Result};
use crate::field::{at_roots, is_unit, norm};
use crate::foliation::{xyz, Chart, Foliation};
use crate::linalg::{kernel, rank_drop_polynomial};
use crate::poly::{gcd, radical, resultant, Monomial, Poly, Vars};
use crate::upoly::UPoly;
use crate::vfield::VectorField;

/// Largest degree of the elimination polynomial the curve search will split.
pub const ELIMINATION_BOUND: usize = 60;

/// A linear factor of `H`, possibly one of a conjugate family: its
/// coefficients live in `ℚ[t]/(factor)` (rational when `factor` is linear).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineFactor {
    pub factor: QPoly,
    pub line: Poly,
    pub invariant: bool,
}

impl LineFactor {
    /// The product of the conjugates, a rational polynomial.
    pub fn rational_form(&self) -> Result<Poly> {
        radical(&norm(&self.line, &self.factor)?)?.monic()
    }

    pub fn is_rational(&self) -> bool {
        self.line.is_rational()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlexReport {
    pub h: Poly,
    pub lines: Vec<LineFactor>,
    /// `H` with every invariant line removed.
    pub reduced: Poly,
}

impl FlexReport {
    /// No ordinary inflection points: `H` is a product of invariant lines.
    pub fn flex_is_empty(&self) -> bool {
        self.reduced.is_constant()
    }

    pub fn invariant_lines(&self) -> Vec<&LineFactor> {
        self.lines.iter().filter(|l| l.invariant).collect()
    }
}

/// The flex polynomial `H`, homogeneous of degree `3N`.
pub fn flex_polynomial(f: &Foliation) -> Result<Poly> {
    let z = f.dual_vector_field()?;
    let v = xyz();
    let col: Vec<[Poly; 3]> = (0..3).map(|i| [Poly::var(&v, i), z.comp(i).clone(), z.apply(z.comp(i))]).collect();
    let m = |r: usize, c: usize| &col[r][c];
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| &(m(r1, c1) * m(r2, c2)) - &(m(r1, c2) * m(r2, c1));
    let h = &(&(m(0, 0) * &minor(1, 2, 1, 2)) - &(m(0, 1) * &minor(1, 2, 0, 2))) + &(m(0, 2) * &minor(1, 2, 0, 1));
    Ok(h)
}

/// `H`, its linear factors with invariance verdicts, and the reduced flex locus.
pub fn flex_determinant(f: &Foliation) -> Result<FlexReport> {
    let h = flex_polynomial(f)?;
    if h.is_zero() {
        return Err(Error::Degenerate("the flex polynomial vanishes identically".into()));
    }
    let z = f.dual_vector_field()?;
    let lines = linear_factors(&h, &z)?;
    let mut reduced = h.clone();
    for l in lines.iter().filter(|l| l.invariant) {
        let r = l.rational_form()?;
        while let Ok((q, rem)) = reduced.div_rem(&r) {
            if !rem.is_zero() {
                break;
            }
            reduced = q;
        }
    }
    Ok(FlexReport { h, lines, reduced: reduced.normalized()? })
}

/// Every invariant line; complete for degree ≥ 2.
pub fn invariant_lines(f: &Foliation) -> Result<Vec<LineFactor>> {
    Ok(flex_determinant(f)?.lines.into_iter().filter(|l| l.invariant).collect())
}

/// Whether every coefficient vanishes; a zero divisor is reported.
fn vanishes(p: &Poly) -> Result<bool> {
    for (_, c) in p.terms() {
        if is_unit(c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coefficients of `p` with respect to the variables from `first` on, as
/// polynomials in the earlier variables (a ring of its own).
fn coefficient_system(p: &Poly, first: usize) -> Vec<Poly> {
    let names: Vec<String> = p.vars().names()[..first].to_vec();
    let params = Vars::from_strings(names);
    let mut groups: alloc::collections::BTreeMap<Vec<u16>, Poly> = alloc::collections::BTreeMap::new();
    for (m, c) in p.terms() {
        let key = m.0[first..].to_vec();
        let mono = Monomial(m.0[..first].iter().copied().collect());
        let e = groups.entry(key).or_insert_with(|| Poly::zero(&params));
        e.add_term(mono, c.clone());
    }
    groups.into_values().filter(|q| !q.is_zero()).collect()
}

fn qpoly_of(p: &Poly) -> Result<QPoly> {
    let u = if p.is_constant() { UPoly::constant(p.constant_term()) } else { p.to_upoly(0)? };
    u.to_qpoly().ok_or_else(|| Error::Unsupported("irrational coefficients".into()))
}

/// Line `aX + bY + cZ` as a polynomial.
fn line_poly(a: Coeff, b: Coeff, c: Coeff) -> Poly {
    let v = xyz();
    let t = [a, b, c];
    let mut p = Poly::zero(&v);
    for (i, k) in t.iter().enumerate() {
        p = &p + &Poly::var(&v, i).scale(k);
    }
    p
}

/// Restriction of `p` to the line through the images, parametrized over `xyz`.
fn restrict(p: &Poly, images: &[Poly; 3]) -> Poly {
    p.compose(images)
}

/// Verdict for the line `l` with parametrization `images`: `l | Z(l)`.
fn line_invariant(z: &VectorField, l: &Poly, images: &[Poly; 3]) -> Result<bool> {
    vanishes(&restrict(&z.apply(l), images))
}

/// Linear factors of a rational homogeneous `h` in `X, Y, Z`.
///
/// Lines are searched in three families, `Z = 0`, `X = cZ` and `Y = aX + cZ`.
/// For the last one `a = s − k·c` with a shift `k` making `s` separate the lines.
pub fn linear_factors(h: &Poly, z: &VectorField) -> Result<Vec<LineFactor>> {
    if !h.is_rational() {
        return Err(Error::Unsupported("linear factors of an irrational polynomial".into()));
    }
    let v = xyz();
    let (vx, vy, vz) = (Poly::var(&v, 0), Poly::var(&v, 1), Poly::var(&v, 2));
    let mut out = Vec::new();

    // Z = 0
    let images = [vx.clone(), vy.clone(), Poly::zero(&v)];
    if restrict(h, &images).is_zero() {
        let l = vz.clone();
        let invariant = line_invariant(z, &l, &images)?;
        out.push(LineFactor { factor: QPoly::from_ints(&[0, 1]), line: l, invariant });
    }

    // X = cZ
    let ring = Vars::new(&["c", "Y", "Z"]);
    let sub = [Poly::var(&ring, 0) * Poly::var(&ring, 2), Poly::var(&ring, 1), Poly::var(&ring, 2)];
    let mut g = QPoly::zero();
    for e in coefficient_system(&h.compose(&sub), 1) {
        g = g.gcd(&qpoly_of(&e)?);
    }
    if g.degree().unwrap_or(0) > 0 {
        for piece in squarefree_part(&g).split_rational() {
            let lines = at_roots(&piece, "c", |_, c| {
                let images = [vz.scale(&c), vy.clone(), vz.clone()];
                let l = &vx - &vz.scale(&c);
                Ok((line_invariant(z, &l, &images)?, l))
            })?;
            out.extend(lines.into_iter().map(|(factor, (invariant, line))| LineFactor { factor, line, invariant }));
        }
    }

    // Y = aX + cZ, a = s − k c
    for k in 0..16i64 {
        match slope_family(h, z, k) {
            Ok(lines) => {
                out.extend(lines);
                return Ok(out);
            }
            Err(Error::Inconclusive(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Inconclusive("no separating shift for the lines of H".into()))
}

fn slope_family(h: &Poly, z: &VectorField, k: i64) -> Result<Vec<LineFactor>> {
    let v = xyz();
    let (vx, vy, vz) = (Poly::var(&v, 0), Poly::var(&v, 1), Poly::var(&v, 2));
    let ring = Vars::new(&["s", "c", "X", "Z"]);
    let (s, c, x, zz) = (Poly::var(&ring, 0), Poly::var(&ring, 1), Poly::var(&ring, 2), Poly::var(&ring, 3));
    let a = &s - &c.scale(&Coeff::from(k));
    let sub = [x.clone(), &(&a * &x) + &(&c * &zz), zz.clone()];
    let mut eqs = coefficient_system(&h.compose(&sub), 2);
    eqs.sort_by_key(|e| e.total_degree());
    let Some(first) = eqs.first().cloned() else {
        return Err(Error::Degenerate("H vanishes on every line".into()));
    };
    if first.is_constant() {
        return Ok(Vec::new());
    }
    let mut r = QPoly::zero();
    for e in &eqs[1..] {
        let res = resultant(&first, e, 1)?;
        if !res.is_zero() {
            r = r.gcd(&qpoly_of(&res)?);
        }
    }
    if r.is_zero() {
        return Err(Error::Degenerate("H has infinitely many linear factors".into()));
    }
    if r.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let mut pieces = Vec::new();
    for piece in squarefree_part(&r).split_rational() {
        pieces.extend(at_roots(&piece, "s", |_, sv| {
            let mut g = UPoly::zero();
            for e in &eqs {
                let cs: Vec<Coeff> = e.coeffs_in(1).iter().map(|q| eval_in(q, 0, &sv)).collect();
                g = g.gcd(&UPoly::new(cs))?;
            }
            let g = if g.is_zero() { g } else { g.squarefree_part()? };
            match g.degree() {
                None => Err(Error::Degenerate("H has infinitely many linear factors".into())),
                Some(0) => Ok(None),
                Some(1) => {
                    let cv = (-&g.coeff(0)).checked_div(&g.coeff(1))?;
                    let av = &sv - &(&cv * &Coeff::from(k));
                    let images = [vx.clone(), &vx.scale(&av) + &vz.scale(&cv), vz.clone()];
                    let l = &(&vy - &vx.scale(&av)) - &vz.scale(&cv);
                    Ok(Some((line_invariant(z, &l, &images)?, l)))
                }
                Some(_) => Err(Error::Inconclusive("shift does not separate".into())),
            }
        })?);
    }
    Ok(pieces
        .into_iter()
        .filter_map(|(factor, r)| r.map(|(invariant, line)| LineFactor { factor, line, invariant }))
        .collect())
}

/// `q / gcd(q, q')`: each root once.
fn squarefree_part(q: &QPoly) -> QPoly {
    q.divrem(&q.gcd(&q.derivative())).0
}

/// Value of a polynomial in variable `i` alone at `x`.
fn eval_in(p: &Poly, i: usize, x: &Coeff) -> Coeff {
    match p.to_upoly(i) {
        Ok(u) => u.eval(x),
        Err(_) => p.constant_term(),
    }
}

/// The components of the foliation's 1-form over `vars`: homogeneous or a chart.
fn form_over(f: &Foliation, vars: &Vars) -> Result<Vec<Poly>> {
    if *vars == xyz() {
        return Ok(f.components().to_vec());
    }
    for ch in Chart::ALL {
        if ch.vars() == *vars {
            let a = f.affine(ch);
            return Ok(vec![a.p().clone(), a.q().clone()]);
        }
    }
    Err(Error::VariableMismatch(format!("{vars:?} is neither X, Y, Z nor a chart")))
}

/// `Some(K)` with `Z(c) = K·c` (homogeneous `c`) or `v(c) = K·c` for the chart
/// field `v = (Q, −P)`, when `c` is invariant.
pub fn verify_invariant_curve(f: &Foliation, c: &Poly) -> Result<Option<Poly>> {
    if c.is_zero() {
        return Err(Error::Degenerate("the zero polynomial is not a curve".into()));
    }
    let vars = c.vars().clone();
    let image = if vars == xyz() {
        f.dual_vector_field()?.apply(c)
    } else {
        let pq = form_over(f, &vars)?;
        &(&pq[1] * &c.derivative(0)) - &(&pq[0] * &c.derivative(1))
    };
    match image.div_rem(c) {
        Ok((k, r)) if r.is_zero() => Ok(Some(k)),
        Ok(_) => Ok(None),
        Err(e) => Err(e),
    }
}

/// `g·dω − dg ∧ ω = 0`, i.e. `ω/g` is closed.
pub fn verify_integrating_factor(f: &Foliation, g: &Poly) -> Result<bool> {
    if g.is_zero() {
        return Err(Error::Degenerate("zero integrating factor".into()));
    }
    let w = form_over(f, g.vars())?;
    let n = w.len();
    for i in 0..n {
        for j in i + 1..n {
            let dw = &w[j].derivative(i) - &w[i].derivative(j);
            let dgw = &(&g.derivative(i) * &w[j]) - &(&g.derivative(j) * &w[i]);
            if !(&(g * &dw) - &dgw).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Π fᵢ^λᵢ · exp(g/h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DarbouxFunction {
    vars: Vars,
    powers: Vec<(Poly, Rational)>,
    exp: Option<(Poly, Poly)>,
}

impl DarbouxFunction {
    pub fn new(vars: Vars, powers: Vec<(Poly, Rational)>, exp: Option<(Poly, Poly)>) -> Result<Self> {
        let all = powers.iter().map(|(p, _)| p).chain(exp.iter().flat_map(|(g, h)| [g, h]));
        for p in all {
            if *p.vars() != vars {
                return Err(Error::VariableMismatch("all parts must share one ring".into()));
            }
        }
        if powers.iter().any(|(p, _)| p.is_zero()) || exp.as_ref().is_some_and(|(_, h)| h.is_zero()) {
            return Err(Error::Degenerate("zero factor or denominator".into()));
        }
        if powers.is_empty() && exp.is_none() {
            return Err(Error::Degenerate("empty function".into()));
        }
        Ok(DarbouxFunction { vars, powers, exp })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn powers(&self) -> &[(Poly, Rational)] {
        &self.powers
    }

    pub fn exponential(&self) -> Option<&(Poly, Poly)> {
        self.exp.as_ref()
    }

    /// `dF/F` with denominators cleared: `Σ λᵢ (Π_{j≠i} fⱼ) h² dfᵢ + (Π fⱼ)(h dg − g dh)`.
    pub fn log_differential(&self) -> Vec<Poly> {
        let v = &self.vars;
        let one = Poly::one(v);
        let (g, h) = self.exp.clone().unwrap_or_else(|| (Poly::zero(v), one.clone()));
        let h2 = &h * &h;
        let all = self.powers.iter().fold(one.clone(), |acc, (f, _)| &acc * f);
        (0..v.len())
            .map(|i| {
                let mut acc = &all * &(&(&h * &g.derivative(i)) - &(&g * &h.derivative(i)));
                for (k, (fk, l)) in self.powers.iter().enumerate() {
                    let others = self.powers.iter().enumerate().filter(|(j, _)| *j != k).fold(one.clone(), |a, (_, (f, _))| &a * f);
                    acc = &acc + &(&(&others * &h2) * &fk.derivative(i)).scale(&Coeff::Rat(l.clone()));
                }
                acc
            })
            .collect()
    }
}

impl fmt::Display for DarbouxFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if !self.powers.is_empty() {
            let items: Vec<String> = self.powers.iter().map(|(p, l)| format!("({p})^{l}")).collect();
            parts.push(format!("prod[{}]", items.join(", ")));
        }
        if let Some((g, h)) = &self.exp {
            parts.push(format!("exp(({g})/({h}))"));
        }
        f.write_str(&parts.join("*"))
    }
}

/// `ω ∧ dF = 0`: `F` is constant on the leaves.
pub fn verify_first_integral(f: &Foliation, func: &DarbouxFunction) -> Result<bool> {
    let w = form_over(f, func.vars())?;
    let t = func.log_differential();
    if t.iter().all(Poly::is_zero) {
        return Ok(false);
    }
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if !(&(&w[i] * &t[j]) - &(&w[j] * &t[i])).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// An invariant curve, possibly one of a conjugate family over `ℚ[t]/(factor)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantCurve {
    pub factor: QPoly,
    /// Homogeneous in `X, Y, Z`.
    pub curve: Poly,
    /// `Z(curve) = cofactor·curve`.
    pub cofactor: Poly,
    /// Product of the distinct conjugates of `curve`.
    pub rational: Poly,
}

impl InvariantCurve {
    pub fn degree(&self) -> usize {
        self.curve.total_degree().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSearch {
    pub max_degree: usize,
    pub curves: Vec<InvariantCurve>,
    /// Every irreducible invariant curve of degree ≤ `max_degree` is listed.
    pub complete: bool,
    /// Invariant curves of degree ≤ `max_degree` pass through every point.
    pub family: bool,
    pub note: Option<String>,
}

fn monomials(d: usize) -> Vec<Monomial> {
    let mut out = Vec::new();
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push(Monomial([i as u16, j as u16, (d - i - j) as u16].into_iter().collect()));
        }
    }
    out
}

fn cross(a: &[Poly; 3], b: &[Poly; 3]) -> [Poly; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// A line `A + tB` free of singular points and not invariant.
fn transversal(z: &VectorField) -> Result<([Coeff; 3], [Coeff; 3])> {
    let tv = Vars::new(&["t"]);
    let t = Poly::var(&tv, 0);
    for k in 0..64i64 {
        let a = [Coeff::from((k * 7) % 11 - 5), Coeff::from((k * 5) % 13 - 6), Coeff::one()];
        let b = [Coeff::one(), Coeff::from((k * 3) % 7 - 3), Coeff::zero()];
        let pt: [Poly; 3] = core::array::from_fn(|i| &Poly::constant(&tv, a[i].clone()) + &t.scale(&b[i]));
        let zp: [Poly; 3] = core::array::from_fn(|i| z.comp(i).compose(&pt));
        let cr = cross(&zp, &pt);
        let mut g = QPoly::zero();
        for c in &cr {
            g = g.gcd(&qpoly_of(c)?);
        }
        if g.degree() != Some(0) {
            continue;
        }
        let zb: Vec<Coeff> = (0..3).map(|i| z.comp(i).eval(&b)).collect();
        let bp: [Poly; 3] = core::array::from_fn(|i| Poly::constant(&tv, b[i].clone()));
        let zbp: [Poly; 3] = core::array::from_fn(|i| Poly::constant(&tv, zb[i].clone()));
        if cross(&zbp, &bp).iter().all(Poly::is_zero) {
            continue;
        }
        let l = line_poly(
            &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
            &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
            &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
        );
        if z.apply(&l).compose(&pt).is_zero() {
            continue;
        }
        return Ok((a, b));
    }
    Err(Error::Inconclusive("no transversal line found".into()))
}

/// Searches the irreducible invariant curves of degree ≤ `d` (1 ≤ d ≤ 3) of a rational foliation.
///
/// Each such curve meets a fixed transversal line `A + tB` at a regular point,
/// where it contains the leaf. The leaf through `A + tB` lies on a curve of
/// degree ≤ d exactly when the matrix `(Z^k mⱼ)(A + tB)` (monomials `mⱼ` of
/// degree d, `k` up to two more than their number) loses rank, a condition on `t` alone.
pub fn search_invariant_curves(f: &Foliation, d: usize) -> Result<CurveSearch> {
    if !(1..=3).contains(&d) {
        return Err(Error::Precondition(format!("degree bound {d} is outside 1..=3")));
    }
    if !f.is_rational() {
        return Err(Error::Unsupported("curve search needs rational coefficients".into()));
    }
    let z = f.dual_vector_field()?;
    let v = xyz();
    let monos = monomials(d);
    let cols = monos.len();
    let rows = cols + 2;
    let mut jets: Vec<Vec<Poly>> = vec![Vec::with_capacity(cols); rows];
    for m in &monos {
        let mut cur = Poly::monomial(&v, m.clone(), Coeff::one());
        for row in jets.iter_mut() {
            let next = z.apply(&cur);
            row.push(cur);
            cur = next;
        }
    }
    let (a, b) = transversal(&z)?;
    let tv = Vars::new(&["t"]);
    let t = Poly::var(&tv, 0);
    let pt: [Poly; 3] = core::array::from_fn(|i| &Poly::constant(&tv, a[i].clone()) + &t.scale(&b[i]));
    let mut mat = Vec::with_capacity(rows);
    for row in &jets {
        let mut r = Vec::with_capacity(cols);
        for p in row {
            r.push(qpoly_of(&p.compose(&pt))?);
        }
        mat.push(r);
    }
    let mut search = CurveSearch { max_degree: d, curves: Vec::new(), complete: true, family: false, note: None };
    let Some(r) = rank_drop_polynomial(&mat)? else {
        search.complete = false;
        search.family = true;
        search.note = Some(format!("every leaf lies on an invariant curve of degree at most {d}"));
        return Ok(search);
    };
    // points on lower-degree invariant curves give high multiplicities; only the roots matter
    let pieces = r.squarefree();
    let width: usize = pieces.iter().filter_map(|(p, _)| p.degree()).sum();
    if width > ELIMINATION_BOUND {
        search.complete = false;
        search.note = Some(format!("elimination polynomial with {width} distinct roots exceeds the bound"));
        return Ok(search);
    }
    let mut found: Vec<InvariantCurve> = Vec::new();
    let mut consider = |c: Option<InvariantCurve>| {
        if let Some(c) = c {
            if !found.iter().any(|o| o.rational == c.rational) {
                found.push(c);
            }
        }
    };
    for (piece, _) in pieces {
        if piece.degree().unwrap_or(0) == 0 {
            continue;
        }
        for (factor, c) in at_roots(&piece, "t", |m, tv| {
            let p: [Coeff; 3] = core::array::from_fn(|i| &a[i] + &(&tv * &b[i]));
            curve_through(f, &jets, &monos, &p, m)
        })? {
            consider(c.map(|c| InvariantCurve { factor, ..c }));
        }
    }
    consider(curve_through(f, &jets, &monos, &b, &QPoly::from_ints(&[0, 1]))?);
    found.sort_by_key(|c| (c.degree(), c.rational.to_string()));
    search.curves = found;
    Ok(search)
}

/// The invariant curve of degree ≤ d containing the leaf through `p`, if any.
fn curve_through(f: &Foliation, jets: &[Vec<Poly>], monos: &[Monomial], p: &[Coeff; 3], m: &QPoly) -> Result<Option<InvariantCurve>> {
    let v = xyz();
    let mat: Vec<Vec<Coeff>> = jets.iter().map(|row| row.iter().map(|q| q.eval(p)).collect()).collect();
    let ker = kernel(&mat, monos.len())?;
    if ker.is_empty() {
        return Ok(None);
    }
    let polys: Vec<Poly> = ker
        .iter()
        .map(|vec| Poly::from_terms(&v, monos.iter().cloned().zip(vec.iter().cloned()).filter(|(_, c)| !c.is_zero())))
        .collect();
    let mut c = polys[0].clone();
    for q in &polys[1..] {
        c = gcd(&c, q)?;
    }
    if c.is_constant() {
        return Ok(None);
    }
    let c = c.monic()?;
    let Some(cofactor) = verify_invariant_curve(f, &c)? else {
        return Ok(None);
    };
    let rational = if c.is_rational() { c.clone() } else { radical(&norm(&c, m)?)?.monic()? };
    let factor = if c.is_rational() { QPoly::from_ints(&[0, 1]) } else { m.clone() };
    Ok(Some(InvariantCurve { factor, curve: c, cofactor, rational }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::ClassId;
    use crate::text::{parse_curve, parse_darboux, parse_foliation};

    fn fol(s: &str) -> Foliation {
        parse_foliation(s).unwrap()
    }

    #[test]
    fn flex_of_the_models() {
        // ω₁: the only inflection line is Y = 0
        let r = flex_determinant(&ClassId::F1.foliation().unwrap()).unwrap();
        assert_eq!(r.h.total_degree(), Some(6));
        let flex: Vec<_> = r.lines.iter().filter(|l| !l.invariant).collect();
        assert_eq!(flex.len(), 1);
        assert_eq!(flex[0].line, parse_curve("Y").unwrap());
        assert_eq!(radical(&r.reduced).unwrap().monic().unwrap(), parse_curve("Y").unwrap());

        let r5 = flex_determinant(&ClassId::F5.foliation().unwrap()).unwrap();
        assert!(r5.flex_is_empty());
        let lines: Vec<Poly> = r5.invariant_lines().iter().map(|l| l.line.clone()).collect();
        assert!(lines.contains(&parse_curve("X").unwrap()));
        assert!(lines.contains(&parse_curve("Y").unwrap()));

        let rj = flex_determinant(&ClassId::FJ.foliation().unwrap()).unwrap();
        assert!(!rj.flex_is_empty());
        assert!(rj.invariant_lines().is_empty());
        assert!(invariant_lines(&ClassId::F4.foliation().unwrap()).unwrap().is_empty());
    }

    #[test]
    fn invariant_curves_by_cofactor() {
        let f5 = ClassId::F5.foliation().unwrap();
        assert!(verify_invariant_curve(&f5, &parse_curve("y").unwrap()).unwrap().is_some());
        let f0 = ClassId::F0(Rational::from_integer(3.into())).foliation().unwrap();
        let k = verify_invariant_curve(&f0, &parse_curve("5*x + y^2").unwrap()).unwrap().unwrap();
        assert!(k.total_degree().unwrap_or(0) <= 2);
        assert!(verify_invariant_curve(&f0, &parse_curve("x + y^2").unwrap()).unwrap().is_none());
        let fj = ClassId::FJ.foliation().unwrap();
        assert!(verify_invariant_curve(&fj, &parse_curve("x - 1").unwrap()).unwrap().is_none());
    }

    #[test]
    fn integrating_factors() {
        assert!(verify_integrating_factor(&ClassId::F1.foliation().unwrap(), &parse_curve("x^4").unwrap()).unwrap());
        assert!(verify_integrating_factor(&ClassId::F3.foliation().unwrap(), &parse_curve("x^3*y").unwrap()).unwrap());
        assert!(verify_integrating_factor(&fol("y*dx + (-2*x + y^2)*dy"), &parse_curve("y^3").unwrap()).unwrap());
        assert!(!verify_integrating_factor(&ClassId::F1.foliation().unwrap(), &parse_curve("x^3").unwrap()).unwrap());
    }

    #[test]
    fn first_integrals() {
        let check = |f: ClassId, s: &str| verify_first_integral(&f.foliation().unwrap(), &parse_darboux(s).unwrap()).unwrap();
        assert!(check(ClassId::F3, "prod[(y)^1, (x)^-1]*exp((y^2 - 2*x)/(2*x^2))"));
        assert!(check(ClassId::F5, "exp((y^2 - x)/(x*y))"));
        assert!(check(ClassId::F6, "prod[(x), (y + z), (y)^-1, (x + z)^-1]"));
        assert!(!check(ClassId::F6, "prod[(x), (y + z)]"));
        let d = parse_darboux("prod[(x)^1/2, (y)^(-1)]*exp(y)").unwrap();
        assert_eq!(d.to_string(), "prod[(x)^1/2, (y)^-1]*exp((y)/(1))");
        assert!(parse_darboux("prod[x]").is_err());
        assert!(parse_darboux("sin(x)").is_err());
    }

    #[test]
    fn curve_search() {
        let s = search_invariant_curves(&ClassId::F1.foliation().unwrap(), 1).unwrap();
        assert!(s.complete);
        let rs: Vec<Poly> = s.curves.iter().map(|c| c.rational.clone()).collect();
        assert_eq!(rs, vec![parse_curve("X").unwrap()]);

        let f0 = ClassId::F0(Rational::from_integer(1.into())).foliation().unwrap();
        let s = search_invariant_curves(&f0, 2).unwrap();
        assert!(s.curves.iter().any(|c| c.rational == parse_curve("3*X*Z + Y^2").unwrap().monic().unwrap()));
        for c in &s.curves {
            assert!(verify_invariant_curve(&f0, &c.curve).unwrap().is_some());
        }
    }
}
