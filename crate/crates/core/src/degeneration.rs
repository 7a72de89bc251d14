//! Limits along one-parameter subgroups `φ_ε = (ε^{w₁}x, ε^{w₂}y)`.
//!
//! `ε^{−k} φ_ε*ω` is a polynomial family in `ε` whose value at `ε = 0` is the
//! limit; when that limit has the same degree it lies in the closure of the
//! orbit. Property (P) at a flex point makes the weights `(3, 1)` produce the
//! cuspidal model `F1`; at a simple singular point the weights `(2, 1)` give
//! `y dx + (λx + y²) dy`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::classify::classify_single_singularity;
use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::field::{adjoin_root, at_roots, is_unit};
use crate::foliation::{xyz, Chart, Foliation};
use crate::invariants::{flex_determinant, invariant_lines, LineFactor};
use crate::models::{recognize_normal_form, ClassId};
use crate::poly::{gcd, Monomial, Poly, Vars};
use crate::projective::ProjectiveMap;
use crate::singular::{baum_bott, chart_of, local_form, local_jet, JetType};
use crate::upoly::UPoly;

/// How a limit was identified with a named form: `limit.pullback(map)` is the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identification {
    pub class: ClassId,
    pub map: ProjectiveMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerationTrace {
    /// Applied before the subgroup.
    pub pre: ProjectiveMap,
    pub weights: (i64, i64),
    /// Lowest power of `ε` in `φ_ε*(pre*ω)`.
    pub k: i64,
    /// `ε^{−k} φ_ε*(pre*ω)` in the chart `z = 1`, over `x, y, e`.
    pub family: (Poly, Poly),
    pub limit: Foliation,
    pub degree_preserving: bool,
    pub identified: Option<Identification>,
    /// `λ` of `y dx + (λx + y²) dy`, when the target is that family.
    pub lambda: Option<Coeff>,
    pub steps: Vec<String>,
}

impl DegenerationTrace {
    /// The family at a nonzero value of `ε`.
    pub fn family_at(&self, eps: &Coeff) -> Result<Foliation> {
        let v = Chart::Z.vars();
        let at = |p: &Poly| -> Result<Poly> {
            let images = [Poly::var(&v, 0), Poly::var(&v, 1), Poly::constant(&v, eps.clone())];
            Ok(p.compose(&images))
        };
        affine_foliation(&at(&self.family.0)?, &at(&self.family.1)?)
    }

    pub fn target_name(&self) -> Option<String> {
        match (&self.identified, &self.lambda) {
            (Some(id), _) => Some(format!("{}", id.class)),
            // algebraic values already print inside parentheses
            (None, Some(l @ Coeff::Alg(..))) => Some(format!("F0{l}")),
            (None, Some(l)) => Some(format!("F0({l})")),
            _ => None,
        }
    }
}

fn family_vars() -> Vars {
    Vars::new(&["x", "y", "e"])
}

/// `P dx + Q dy` in the chart `z = 1` after removing a common factor.
fn affine_foliation(p: &Poly, q: &Poly) -> Result<Foliation> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::ZeroForm);
    }
    let g = gcd(p, q)?;
    let (p, q) = if g.is_constant() { (p.clone(), q.clone()) } else { (p.div_exact(&g)?, q.div_exact(&g)?) };
    Foliation::from_affine(&p, &q, Chart::Z)
}

/// `diag(ε^{w₁}, ε^{w₂}, 1)` at a concrete nonzero `ε`.
pub fn subgroup_at(weights: (i64, i64), eps: &Coeff) -> Result<ProjectiveMap> {
    let pw = |w: i64| -> Result<Coeff> {
        let e = eps.pow(w.unsigned_abs() as u32);
        if w < 0 {
            e.inv()
        } else {
            Ok(e)
        }
    };
    ProjectiveMap::diagonal(pw(weights.0)?, pw(weights.1)?, Coeff::one())
}

/// Expands `φ_ε*(pre*ω)` in `ε` and keeps the lowest coefficient.
pub fn monomial_limit(f: &Foliation, pre: &ProjectiveMap, weights: (i64, i64)) -> Result<DegenerationTrace> {
    if weights == (0, 0) {
        return Err(Error::Degenerate("weights (0, 0) give the trivial subgroup".into()));
    }
    let g = f.pullback(pre)?;
    let a = g.affine(Chart::Z);
    let (w1, w2) = weights;
    // x^i y^j dx picks up ε^{w₁ i + w₂ j + w₁}; dy terms end in w₂
    let exps = |p: &Poly, last: i64| -> Vec<(Monomial, Coeff, i64)> {
        p.terms().map(|(m, c)| (m.clone(), c.clone(), w1 * m.0[0] as i64 + w2 * m.0[1] as i64 + last)).collect()
    };
    let (tp, tq) = (exps(a.p(), w1), exps(a.q(), w2));
    let k = tp.iter().chain(&tq).map(|t| t.2).min().ok_or(Error::ZeroForm)?;
    let fv = family_vars();
    let lift = |ts: &[(Monomial, Coeff, i64)]| {
        Poly::from_terms(&fv, ts.iter().map(|(m, c, e)| (Monomial([m.0[0], m.0[1], (e - k) as u16].into_iter().collect()), c.clone())))
    };
    let family = (lift(&tp), lift(&tq));
    let v = Chart::Z.vars();
    let lowest = |ts: &[(Monomial, Coeff, i64)]| Poly::from_terms(&v, ts.iter().filter(|t| t.2 == k).map(|(m, c, _)| (m.clone(), c.clone())));
    let limit = affine_foliation(&lowest(&tp), &lowest(&tq))?;
    let degree_preserving = limit.degree() == f.degree();
    let identified = recognize_normal_form(&limit).map(|class| Identification { class, map: ProjectiveMap::identity() });
    Ok(DegenerationTrace {
        pre: pre.clone(),
        weights,
        k,
        family,
        limit,
        degree_preserving,
        identified,
        lambda: None,
        steps: vec![format!("limit along weights ({w1}, {w2}) with valuation {k}")],
    })
}

/// Property (P) in the chart `z = 1`: with `ω = A dx + B dy + φ(x dy − y dx)`,
/// `A(0) = α ≠ 0`, `B(0) = B_y(0) = 0` and `β = B_yy(0)/2 ≠ 0`. Returns `(α, β)`.
pub fn property_p(f: &Foliation) -> Result<Option<(Coeff, Coeff)>> {
    let s = f.affine(Chart::Z).split();
    let alpha = s.a.constant_term();
    let beta = s.b.coeff(&[0, 2]);
    let holds = is_unit(&alpha)? && is_unit(&beta)? && s.b.constant_term().is_zero() && s.b.coeff(&[0, 1]).is_zero();
    Ok(holds.then_some((alpha, beta)))
}

/// `limit.pullback(map) = F1` for `α dx + β y² dy`: `(X, Y, Z) = (−(β/α) Z', Y', X')`.
fn f1_map(alpha: &Coeff, beta: &Coeff) -> Result<ProjectiveMap> {
    let (o, z) = (Coeff::one, Coeff::zero);
    ProjectiveMap::new([[z(), z(), -&beta.checked_div(alpha)?], [z(), o(), z()], [o(), z(), z()]])
}

/// Columns `e1, e2, m`: the chart origin goes to `m`, the axes to the directions `e1, e2`.
fn frame_at(chart: Chart, u0: &Coeff, v0: &Coeff, e1: [Coeff; 2], e2: [Coeff; 2]) -> Result<ProjectiveMap> {
    let m = chart.lift(u0.clone(), v0.clone());
    let dir = |e: &[Coeff; 2]| {
        let (i, j) = chart.indices();
        let mut d: [Coeff; 3] = Default::default();
        d[i] = e[0].clone();
        d[j] = e[1].clone();
        d
    };
    let (d1, d2) = (dir(&e1), dir(&e2));
    ProjectiveMap::new(core::array::from_fn(|r| [d1[r].clone(), d2[r].clone(), m[r].clone()]))
}

/// The flex-point trace at the chart point `(u0, v0)`, if property (P) holds there.
fn flex_trace(f: &Foliation, u0: &Coeff, v0: &Coeff) -> Result<Option<DegenerationTrace>> {
    let a = f.affine(Chart::Z);
    let pt = [u0.clone(), v0.clone()];
    let (p, q) = (a.p().eval(&pt), a.q().eval(&pt));
    if !is_unit(&p)? && !is_unit(&q)? {
        return Ok(None);
    }
    // the leaf direction (Q, −P) becomes the y-axis
    let tangent = [q.clone(), -&p];
    let other = if is_unit(&tangent[1])? { [Coeff::one(), Coeff::zero()] } else { [Coeff::zero(), Coeff::one()] };
    let pre = frame_at(Chart::Z, u0, v0, other, tangent)?;
    let Some((alpha, beta)) = property_p(&f.pullback(&pre)?)? else {
        return Ok(None);
    };
    let mut trace = monomial_limit(f, &pre, (3, 1))?;
    let map = f1_map(&alpha, &beta)?;
    if trace.k != 3 || trace.limit.pullback(&map)? != ClassId::F1.foliation()? {
        return Err(Error::Verification("the (3, 1) limit at a (P) point is not F1".into()));
    }
    trace.identified = Some(Identification { class: ClassId::F1, map });
    trace.steps.insert(0, format!("flex point ({u0}, {v0}) moved to the origin, leaf tangent to x = 0"));
    trace.steps.push(format!("property (P) with alpha = {alpha}, beta = {beta}"));
    Ok(Some(trace))
}

/// Small rationals in a fixed order: 0, 1, −1, 2, −2, 1/2, ...
fn grid(n: usize) -> Vec<Rational> {
    let mut out = vec![Rational::from_integer(0.into())];
    for k in 1..=n as i64 {
        for v in [Rational::from_integer(k.into()), Rational::from_integer((-k).into()), Rational::new(1.into(), (k + 1).into()), Rational::new((-1).into(), (k + 1).into())] {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    out
}

/// Degeneration onto `F1` from an ordinary flex point. Rational flex points on
/// lines `y = c` are tried first; then the points of such a line are taken in
/// the extension fields cut out by the reduced flex locus.
pub fn degenerate_to_f1(f: &Foliation) -> Result<DegenerationTrace> {
    let report = flex_determinant(f)?;
    if report.flex_is_empty() {
        return Err(Error::Precondition("the reduced flex locus is empty".into()));
    }
    let v = Chart::Z.vars();
    let r = Chart::Z.restrict(&report.reduced);
    let cs = grid(4);
    for extension in [false, true] {
        for c in &cs {
            let images = [Poly::var(&v, 0), Poly::constant(&v, Coeff::Rat(c.clone()))];
            let line = r.compose(&images);
            if line.is_zero() || line.is_constant() {
                continue;
            }
            let Some(u) = line.to_upoly(0)?.to_qpoly() else {
                continue;
            };
            let yc = Coeff::Rat(c.clone());
            if !extension {
                for x0 in u.rational_roots() {
                    if let Some(t) = flex_trace(f, &Coeff::Rat(x0), &yc)? {
                        return Ok(t);
                    }
                }
                continue;
            }
            let sqf = u.squarefree().into_iter().map(|(p, _)| p).filter(|p| p.degree().unwrap_or(0) > 1);
            for piece in sqf {
                for (_, t) in at_roots(&piece, "a", |_, x0| flex_trace(f, &x0, &yc))? {
                    if let Some(t) = t {
                        return Ok(t);
                    }
                }
            }
        }
    }
    Err(Error::Inconclusive("no ordinary flex point found on the searched lines".into()))
}

/// `f ∈ Σ`: the reduced flex locus is empty.
pub fn in_sigma(f: &Foliation) -> Result<bool> {
    Ok(flex_determinant(f)?.flex_is_empty())
}

/// `y dx + (λx + y²) dy` for any `λ`.
pub fn f0_form(lambda: &Coeff) -> Result<Foliation> {
    let v = Chart::Z.vars();
    let (x, y) = (Poly::var(&v, 0), Poly::var(&v, 1));
    Foliation::from_affine(&y, &(&x.scale(lambda) + &(&y * &y)), Chart::Z)
}

/// Degeneration onto `y dx + (λx + y²) dy` at a simple singular point. Both
/// eigen-directions are tried for the `y`-axis; a direction along an invariant
/// line (`γ = 0`) is skipped, and the `γ` test is checked against the list of
/// invariant lines.
pub fn degenerate_to_f0(f: &Foliation, point: &[Coeff; 3]) -> Result<DegenerationTrace> {
    let (chart, p, q) = local_form(f, point)?;
    let (jet, _) = local_jet(&p, &q)?;
    if jet != JetType::NonDegenerate {
        return Err(Error::Precondition(format!("the point is {jet}, not simple")));
    }
    let (_, u0, v0) = chart_of(point)?;
    // eigenvalues of the linear part of (Q, −P)
    let l = crate::singular::linear_part(&p, &q);
    let tr = &l[0][0] + &l[1][1];
    let det = &(&l[0][0] * &l[1][1]) - &(&l[0][1] * &l[1][0]);
    let charpoly = UPoly::new(vec![det.clone(), -&tr, Coeff::one()]);
    let adj = adjoin_root(&charpoly, "r")?;
    let l1 = adj.root.clone();
    let l2 = &adj.lift(&tr) - &l1;
    let lift = |c: &Coeff| adj.lift(c);
    let lm: [[Coeff; 2]; 2] = core::array::from_fn(|i| core::array::from_fn(|j| lift(&l[i][j])));
    let eigvec = |ev: &Coeff| -> Result<Option<[Coeff; 2]>> {
        // a nonzero row (a, b) of L − ev gives the kernel vector (b, −a)
        let rows = [(&lm[0][0] - ev, lm[0][1].clone()), (lm[1][0].clone(), &lm[1][1] - ev)];
        for (a, b) in rows {
            if is_unit(&a)? || is_unit(&b)? {
                return Ok(Some([b, -&a]));
            }
        }
        Ok(None)
    };
    let c = |a: i64, b: i64| [Coeff::from(a), Coeff::from(b)];
    let bases: Vec<([Coeff; 2], [Coeff; 2])> = match (eigvec(&l1)?, eigvec(&l2)?) {
        // scalar 1-jet: every basis diagonalizes it
        (None, None) => vec![(c(1, 0), c(0, 1)), (c(0, 1), c(1, 0)), (c(1, 1), c(1, -1)), (c(1, -1), c(1, 1)), (c(1, 2), c(2, -1))],
        (Some(e1), Some(e2)) if l1 != l2 => vec![(e1.clone(), e2.clone()), (e2, e1)],
        _ => return Err(Error::Unsupported("the 1-jet is a Jordan block and cannot be diagonalized".into())),
    };
    let (u0, v0) = (lift(&u0), lift(&v0));
    let lines = if f.is_rational() { Some(invariant_lines(f)?) } else { None };
    let bb = lift(&baum_bott(f, point)?);
    for (ex, ey) in bases {
        let pre = frame_at(chart, &u0, &v0, ex.clone(), ey.clone())?;
        let g = f.pullback(&pre)?.affine(Chart::Z);
        let alpha = g.p().coeff(&[0, 1]);
        let beta = g.q().coeff(&[1, 0]);
        let gamma = g.q().coeff(&[0, 2]);
        if !is_unit(&alpha)? || !is_unit(&beta)? {
            return Err(Error::Verification("the 1-jet is not diagonal in the eigenbasis".into()));
        }
        let rational = [&u0, &v0, &ey[0], &ey[1]].iter().all(|c| c.as_rational().is_some());
        let along_invariant = match &lines {
            Some(ls) if rational => Some(line_through_is_invariant(chart, &u0, &v0, &ey, ls)?),
            _ => None,
        };
        if along_invariant.is_some_and(|inv| inv != gamma.is_zero()) {
            return Err(Error::Verification("gamma = 0 disagrees with the invariant-line test".into()));
        }
        if gamma.is_zero() {
            continue;
        }
        let mut trace = monomial_limit(f, &pre, (2, 1))?;
        let lambda = beta.checked_div(&alpha)?;
        // α y dx + (βx + γy²) dy pulled back by x ↦ (γ/α) x
        let map = ProjectiveMap::diagonal(gamma.checked_div(&alpha)?, Coeff::one(), Coeff::one())?;
        if trace.k != 3 || trace.limit.pullback(&map)? != f0_form(&lambda)? {
            return Err(Error::Verification("the (2, 1) limit is not y dx + (lambda x + y^2) dy".into()));
        }
        let expected = &(&Coeff::from(2) - &lambda) - &lambda.inv()?;
        if expected != bb {
            return Err(Error::Verification(format!("BB = {bb} but 2 - lambda - 1/lambda = {expected}")));
        }
        trace.identified = lambda.as_rational().map(|l| Identification { class: ClassId::F0(l.clone()), map: map.clone() });
        trace.lambda = Some(lambda.clone());
        trace.steps.insert(0, String::from("simple singular point moved to the origin, 1-jet diagonalized"));
        trace.steps.push(format!("lambda = {lambda}, BB = {bb}"));
        return Ok(trace);
    }
    Err(Error::Precondition("every eigen-direction lies along an invariant line".into()))
}

/// Whether the line through `(u0, v0)` in direction `d` is one of the rational invariant lines.
fn line_through_is_invariant(chart: Chart, u0: &Coeff, v0: &Coeff, d: &[Coeff; 2], lines: &[LineFactor]) -> Result<bool> {
    let v = xyz();
    let (i, j) = chart.indices();
    let var = |k: usize| Poly::var(&v, k);
    let w = var(chart.hidden());
    // d₁(u − u0 w) − d₀(v − v0 w)
    let line = &(&var(i) - &w.scale(u0)).scale(&d[1]) - &(&var(j) - &w.scale(v0)).scale(&d[0]);
    for lf in lines.iter().filter(|l| l.invariant && l.is_rational()) {
        if proportional(&line, &lf.line)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn proportional(a: &Poly, b: &Poly) -> Result<bool> {
    let (Some((m, ca)), false) = (a.leading_term(), b.is_zero()) else {
        return Ok(false);
    };
    let cb = b.coeff(&m.0);
    if cb.is_zero() {
        return Ok(false);
    }
    Ok(*a == b.scale(&ca.checked_div(&cb)?))
}

/// A scripted degeneration: either a subgroup limit or an explicit family
/// `ω_ε` (over `x, y, e`) whose members for `ε ≠ 0` lie in the source orbit.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Witness {
    Subgroup { pre: ProjectiveMap, weights: (i64, i64), to: ClassId, map: ProjectiveMap },
    Family { p: Poly, q: Poly, from: ClassId, to: ClassId, map: ProjectiveMap },
}

/// Replays a witness from `source` and checks the limit against its target model.
pub fn replay(source: &Foliation, w: &Witness) -> Result<DegenerationTrace> {
    match w {
        Witness::Subgroup { pre, weights, to, map } => {
            let mut t = monomial_limit(source, pre, *weights)?;
            if !t.degree_preserving || t.limit.pullback(map)? != to.foliation()? {
                return Err(Error::Verification(format!("the limit is not {to}")));
            }
            t.identified = Some(Identification { class: to.clone(), map: map.clone() });
            Ok(t)
        }
        Witness::Family { p, q, from, to, map } => {
            let fv = family_vars();
            if *p.vars() != fv || *q.vars() != fv {
                return Err(Error::VariableMismatch("a family lives over x, y, e".into()));
            }
            let v = Chart::Z.vars();
            let at = |p: &Poly, e: Coeff| p.compose(&[Poly::var(&v, 0), Poly::var(&v, 1), Poly::constant(&v, e)]);
            let limit = affine_foliation(&at(p, Coeff::zero()), &at(q, Coeff::zero()))?;
            if limit.pullback(map)? != to.foliation()? {
                return Err(Error::Verification(format!("the limit is not {to}")));
            }
            let mut sample = None;
            for e in [Coeff::frac(1, 7), Coeff::from(2)] {
                let g = affine_foliation(&at(p, e.clone()), &at(q, e))?;
                if from.is_single_singularity_model() && classify_single_singularity(&g)?.class != *from {
                    return Err(Error::Verification(format!("a member of the family is not {from}")));
                }
                sample = Some(g);
            }
            let sample = sample.ok_or(Error::ZeroForm)?;
            Ok(DegenerationTrace {
                pre: ProjectiveMap::identity(),
                weights: (0, 0),
                k: 0,
                family: (p.clone(), q.clone()),
                degree_preserving: limit.degree() == sample.degree(),
                limit,
                identified: Some(Identification { class: to.clone(), map: map.clone() }),
                lambda: None,
                steps: vec![String::from("explicit family evaluated at e = 0")],
            })
        }
    }
}
