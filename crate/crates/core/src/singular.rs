//! Singular points, Milnor numbers, jet types and Baum–Bott indices.
//!
//! The singular locus is found in a generic projective frame: a map `T` from a
//! fixed deterministic list is applied so that no singular point lies on the
//! line `Z = 0`, `P` is monic in `y`, and distinct singular points have distinct
//! `x`-coordinates. Then the squarefree factors of `Res_y(P, Q)` are the orbits
//! and their multiplicities are the Milnor numbers.

use alloc::format;
use alloc::vec::Vec;

use crate::coeff::{Coeff, QPoly};
use crate::error::{Error, Result};
use crate::field::{at_roots, is_unit};
use crate::foliation::{xyz, Chart, Foliation};
use crate::poly::{gcd_many, resultant, Poly};
use crate::projective::ProjectiveMap;
use crate::upoly::UPoly;

/// Classification of the 1-jet of `ω` at a singular point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum JetType {
    /// Linear part of the dual field invertible.
    NonDegenerate,
    /// 1-jet conjugate to `x dy`.
    SaddleNode,
    /// 1-jet conjugate to `y dy`.
    Nilpotent,
    /// Vanishing 1-jet; `lines` counts the distinct lines of the tangent cone.
    NullOneJet { lines: usize },
}

impl JetType {
    pub fn name(&self) -> &'static str {
        match self {
            JetType::NonDegenerate => "non-degenerate",
            JetType::SaddleNode => "saddle-node",
            JetType::Nilpotent => "nilpotent",
            JetType::NullOneJet { .. } => "null 1-jet",
        }
    }
}

impl core::fmt::Display for JetType {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            JetType::NullOneJet { lines } => write!(f, "null 1-jet ({lines} line{})", if *lines == 1 { "" } else { "s" }),
            j => f.write_str(j.name()),
        }
    }
}

/// One Galois orbit of singular points (a single point when `size == 1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularOrbit {
    /// Squarefree polynomial over ℚ satisfied by the `x`-coordinate in the generic frame.
    pub factor: QPoly,
    pub size: usize,
    pub milnor: usize,
    /// Homogeneous coordinates in the original frame, over `ℚ[t]/(factor)`.
    pub point: [Coeff; 3],
    /// First chart (order Z, Y, X) containing the point, and its coordinates there.
    pub chart: Chart,
    pub coords: (Coeff, Coeff),
    pub jet: JetType,
    pub baum_bott: Option<Coeff>,
}

impl SingularOrbit {
    pub fn is_rational(&self) -> bool {
        self.size == 1
    }

    /// The factor written in the variable `x`.
    pub fn factor_text(&self) -> alloc::string::String {
        self.factor.display_in("x")
    }
}

/// All singular orbits of a foliation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityReport {
    pub degree: usize,
    /// The generic frame used: singular points of `T*ω` map to those of `ω` under `T`.
    pub frame: ProjectiveMap,
    pub orbits: Vec<SingularOrbit>,
}

impl SingularityReport {
    /// `Σ size × μ`.
    pub fn total_milnor(&self) -> usize {
        self.orbits.iter().map(|o| o.size * o.milnor).sum()
    }

    /// `N² + N + 1`.
    pub fn expected_total(&self) -> usize {
        self.degree * self.degree + self.degree + 1
    }

    pub fn bezout_holds(&self) -> bool {
        self.total_milnor() == self.expected_total()
    }

    pub fn point_count(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }
}

const FRAME_ATTEMPTS: usize = 24;

/// Deterministic sequence of frames: the identity, then small integer matrices.
pub fn frame_candidate(k: usize) -> ProjectiveMap {
    if k == 0 {
        return ProjectiveMap::identity();
    }
    let mut state = 0x9e37_79b9_7f4a_7c15u64.wrapping_mul(k as u64 + 1);
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 5) as i64 - 2
    };
    loop {
        let m = [[1, next(), next()], [next(), 1, next()], [next(), next(), 1]];
        if let Ok(t) = ProjectiveMap::from_ints(m) {
            return t;
        }
    }
}

/// `p(x + u0, y + v0)` for a polynomial in two variables.
pub fn translate(p: &Poly, u0: &Coeff, v0: &Coeff) -> Poly {
    let v = p.vars();
    let images = [
        &Poly::var(v, 0) + &Poly::constant(v, u0.clone()),
        &Poly::var(v, 1) + &Poly::constant(v, v0.clone()),
    ];
    p.compose(&images)
}

fn no_singular_point_at_infinity(g: &Foliation) -> Result<bool> {
    let v = xyz();
    let images = [Poly::var(&v, 0), Poly::var(&v, 1), Poly::zero(&v)];
    let restricted: Vec<Poly> = g.components().iter().map(|p| p.compose(&images)).collect();
    Ok(gcd_many(&v, restricted.iter())?.is_constant())
}

/// Chart containing the point, with its affine coordinates there.
pub fn chart_of(point: &[Coeff; 3]) -> Result<(Chart, Coeff, Coeff)> {
    for ch in Chart::ALL {
        let h = &point[ch.hidden()];
        if is_unit(h)? {
            let hi = h.inv()?;
            let (i, j) = ch.indices();
            return Ok((ch, &point[i] * &hi, &point[j] * &hi));
        }
    }
    Err(Error::Precondition("the zero vector is not a point".into()))
}

/// `(P, Q)` of the foliation in the chart of `point`, translated so that the point is the origin.
pub fn local_form(f: &Foliation, point: &[Coeff; 3]) -> Result<(Chart, Poly, Poly)> {
    let (ch, u0, v0) = chart_of(point)?;
    let a = f.affine(ch);
    Ok((ch, translate(a.p(), &u0, &v0), translate(a.q(), &u0, &v0)))
}

/// The linear part `L = [[Q_x, Q_y], [−P_x, −P_y]]` of the tangent field `(Q, −P)` at the origin.
pub fn linear_part(p: &Poly, q: &Poly) -> [[Coeff; 2]; 2] {
    [[q.coeff(&[1, 0]), q.coeff(&[0, 1])], [-p.coeff(&[1, 0]), -p.coeff(&[0, 1])]]
}

fn trace_det(l: &[[Coeff; 2]; 2]) -> (Coeff, Coeff) {
    let tr = &l[0][0] + &l[1][1];
    let det = &(&l[0][0] * &l[1][1]) - &(&l[0][1] * &l[1][0]);
    (tr, det)
}

/// Jet type and, when non-degenerate, the Baum–Bott index of the germ `(P, Q)` at the origin.
pub fn local_jet(p: &Poly, q: &Poly) -> Result<(JetType, Option<Coeff>)> {
    if is_unit(&p.constant_term())? || is_unit(&q.constant_term())? {
        return Err(Error::NotSingular);
    }
    let l = linear_part(p, q);
    let mut null = true;
    for c in l.iter().flatten() {
        if is_unit(c)? {
            null = false;
        }
    }
    if null {
        let (_, lines) = tangent_cone(p, q)?;
        return Ok((JetType::NullOneJet { lines }, None));
    }
    let (tr, det) = trace_det(&l);
    if is_unit(&det)? {
        let bb = (&tr * &tr).checked_div(&det)?;
        return Ok((JetType::NonDegenerate, Some(bb)));
    }
    if is_unit(&tr)? {
        Ok((JetType::SaddleNode, None))
    } else {
        Ok((JetType::Nilpotent, None))
    }
}

/// Lowest homogeneous part of `xP + yQ` at the origin and its number of distinct
/// linear factors, `deg C − deg gcd(C, C_x, C_y)`.
pub fn tangent_cone(p: &Poly, q: &Poly) -> Result<(Poly, usize)> {
    let v = p.vars();
    let w = &(&Poly::var(v, 0) * p) + &(&Poly::var(v, 1) * q);
    let k = w.min_degree().ok_or(Error::Degenerate("tangent cone is identically zero".into()))?;
    let c = w.homogeneous_part(k);
    let g = gcd_many(v, [&c, &c.derivative(0), &c.derivative(1)])?;
    let lines = k - g.total_degree().unwrap_or(0);
    Ok((c, lines))
}

/// Jet type of `f` at a singular point.
pub fn jet_type(f: &Foliation, point: &[Coeff; 3]) -> Result<JetType> {
    let (_, p, q) = local_form(f, point)?;
    Ok(local_jet(&p, &q)?.0)
}

/// `tr(L)²/det(L)` at a non-degenerate singular point.
pub fn baum_bott(f: &Foliation, point: &[Coeff; 3]) -> Result<Coeff> {
    let (_, p, q) = local_form(f, point)?;
    match local_jet(&p, &q)? {
        (_, Some(bb)) => Ok(bb),
        (j, None) => Err(Error::Degenerate(format!("Baum–Bott index needs a non-degenerate point, found {j}"))),
    }
}

/// Intersection multiplicity of `P = 0` and `Q = 0` at `point` (Fulton's algorithm).
pub fn milnor_fulton(p: &Poly, q: &Poly, point: &[Coeff; 2]) -> Result<usize> {
    if p.nvars() != 2 || q.vars() != p.vars() {
        return Err(Error::VariableMismatch("expected P and Q in two common variables".into()));
    }
    let n1 = p.total_degree().unwrap_or(0).max(q.total_degree().unwrap_or(0)).max(1);
    let cap = 10 * n1 * n1;
    let p = translate(p, &point[0], &point[1]);
    let q = translate(q, &point[0], &point[1]);
    let mut steps = 0;
    fulton(p, q, &mut steps, cap)
}

fn at_y0(p: &Poly) -> Result<UPoly> {
    match p.coeffs_in(1).first() {
        Some(c) => c.to_upoly(0),
        None => Ok(UPoly::zero()),
    }
}

fn order_at_zero(u: &UPoly) -> Result<usize> {
    for (i, c) in u.coeffs().iter().enumerate() {
        if is_unit(c)? {
            return Ok(i);
        }
    }
    Err(Error::CommonComponent)
}

fn fulton(mut p: Poly, mut q: Poly, steps: &mut usize, cap: usize) -> Result<usize> {
    let mut acc = 0;
    loop {
        *steps += 1;
        if *steps > cap {
            return Err(Error::CommonComponent);
        }
        if is_unit(&p.constant_term())? || is_unit(&q.constant_term())? {
            return Ok(acc);
        }
        let mut px = at_y0(&p)?;
        let mut qx = at_y0(&q)?;
        match (px.degree(), qx.degree()) {
            (None, None) => return Err(Error::CommonComponent),
            (None, Some(_)) => {
                // P = y·P₁: I(P, Q) = I(y, Q) + I(P₁, Q)
                acc += order_at_zero(&qx)?;
                p = p.shift_down(1, 1);
            }
            (Some(_), None) => {
                acc += order_at_zero(&px)?;
                q = q.shift_down(1, 1);
            }
            (Some(r), Some(s)) => {
                let (r, s) = if r > s {
                    core::mem::swap(&mut p, &mut q);
                    core::mem::swap(&mut px, &mut qx);
                    (s, r)
                } else {
                    (r, s)
                };
                let lp = px.lc();
                is_unit(&lp)?;
                let lq = qx.lc();
                let mut shift = crate::poly::Monomial::one(2);
                shift.0[0] = (s - r) as u16;
                q = &q.scale(&lp) - &p.mul_monomial(&shift).scale(&lq);
            }
        }
    }
}

/// Orbits of common zeros of `P, Q` as `(squarefree factor in x, multiplicity)`
/// from `Res_y(P, Q)`. One of `P, Q` must have a constant leading coefficient in `y`.
pub fn milnor_resultant(p: &Poly, q: &Poly) -> Result<Vec<(QPoly, usize)>> {
    if p.nvars() != 2 || q.vars() != p.vars() {
        return Err(Error::VariableMismatch("expected P and Q in two common variables".into()));
    }
    let monic = |f: &Poly| f.coeffs_in(1).last().is_some_and(|c| c.is_constant());
    if !monic(p) && !monic(q) {
        return Err(Error::Precondition("neither P nor Q has a constant leading coefficient in y".into()));
    }
    let res = resultant(p, q, 1)?;
    if res.is_zero() {
        return Err(Error::CommonComponent);
    }
    let r = res.to_upoly(0)?.to_qpoly().ok_or(Error::Unsupported("singular loci over number fields".into()))?;
    Ok(r.squarefree())
}

/// The complete singular locus with per-orbit Milnor numbers, jet types and Baum–Bott indices.
pub fn singular_points(f: &Foliation) -> Result<SingularityReport> {
    if !f.is_rational() {
        return Err(Error::Unsupported("singular loci of foliations over number fields".into()));
    }
    for k in 0..FRAME_ATTEMPTS {
        let t = frame_candidate(k);
        let g = f.pullback(&t)?;
        if !no_singular_point_at_infinity(&g)? {
            continue;
        }
        let n = g.degree();
        let a = g.affine(Chart::Z);
        let (p, q) = (a.p(), a.q());
        if p.coeff(&[0, (n + 1) as u16]).is_zero() {
            continue;
        }
        if let Some(orbits) = orbits_in_frame(f, p, q, &t)? {
            return Ok(SingularityReport { degree: f.degree(), frame: t, orbits });
        }
    }
    Err(Error::ShearExhausted(FRAME_ATTEMPTS))
}

fn orbits_in_frame(f: &Foliation, p: &Poly, q: &Poly, t: &ProjectiveMap) -> Result<Option<Vec<SingularOrbit>>> {
    let mut orbits = Vec::new();
    let split = milnor_resultant(p, q)?.into_iter().flat_map(|(m, mu)| m.split_rational().into_iter().map(move |f| (f, mu)));
    for (factor, mu) in split {
        let pieces = at_roots(&factor, "t", |m, x0| {
            let py = UPoly::new(p.coeffs_in(1).iter().map(|c| c.to_upoly(0).map(|u| u.eval(&x0))).collect::<Result<_>>()?);
            let qy = UPoly::new(q.coeffs_in(1).iter().map(|c| c.to_upoly(0).map(|u| u.eval(&x0))).collect::<Result<_>>()?);
            let g = py.gcd(&qy)?.squarefree_part()?;
            if g.degree() != Some(1) {
                return Ok(None);
            }
            let y0 = -&g.coeff(0).checked_div(&g.coeff(1))?;
            let (jet, bb) = local_jet(&translate(p, &x0, &y0), &translate(q, &x0, &y0))?;
            let raw = t.apply(&[x0.clone(), y0.clone(), Coeff::one()]);
            let (chart, u, v) = chart_of(&raw)?;
            let point = chart.lift(u.clone(), v.clone());
            Ok(Some(SingularOrbit {
                factor: m.clone(),
                size: m.degree().unwrap_or(1),
                milnor: mu,
                point,
                chart,
                coords: (u, v),
                jet,
                baum_bott: bb,
            }))
        })?;
        for (_, o) in pieces {
            match o {
                Some(o) => orbits.push(o),
                None => return Ok(None),
            }
        }
    }
    // sanity: every reported point is singular for the original foliation
    for o in &orbits {
        let (_, lp, lq) = local_form(f, &o.point)?;
        if !lp.constant_term().is_zero() || !lq.constant_term().is_zero() {
            return Err(Error::Verification(format!("computed point {:?} is not singular", o.coords)));
        }
    }
    orbits.sort_by_key(|o| (o.chart, o.factor_text()));
    Ok(Some(orbits))
}

/// Whether `Σ size × μ = N² + N + 1`.
pub fn bezout_check(f: &Foliation) -> Result<(bool, SingularityReport)> {
    let r = singular_points(f)?;
    Ok((r.bezout_holds(), r))
}

/// Formats a point of an orbit for reports.
pub fn point_text(o: &SingularOrbit) -> alloc::string::String {
    let names = o.chart.vars();
    format!("{}: ({}, {}) = ({}, {})", o.chart, names.name(0), names.name(1), o.coords.0, o.coords.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_affine, parse_poly};
    use alloc::string::ToString;
    use alloc::vec;

    fn fol(s: &str) -> Foliation {
        parse_affine(s).unwrap().to_foliation().unwrap()
    }

    fn mus(r: &SingularityReport) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = r.orbits.iter().map(|o| (o.size, o.milnor)).collect();
        v.sort();
        v
    }

    #[test]
    fn single_singularity_of_the_cusp_form() {
        let r = singular_points(&fol("x^2*dx + y^2*(x*dy - y*dx)")).unwrap();
        assert_eq!(mus(&r), vec![(1, 7)]);
        assert_eq!(r.orbits[0].point, [Coeff::zero(), Coeff::zero(), Coeff::one()]);
        assert_eq!(r.orbits[0].jet, JetType::NullOneJet { lines: 1 });
    }

    #[test]
    fn two_singularities() {
        let r = singular_points(&fol("x^2*dy + y^2*(x*dy - y*dx)")).unwrap();
        assert_eq!(mus(&r), vec![(1, 1), (1, 6)]);
        assert!(r.bezout_holds());
    }

    #[test]
    fn jouanolou_has_seven_simple_points() {
        let r = singular_points(&fol("(x^2*y - 1)*dx + (y^2 - x^3)*dy")).unwrap();
        assert_eq!(r.point_count(), 7);
        assert!(r.orbits.iter().all(|o| o.milnor == 1 && o.jet == JetType::NonDegenerate));
        assert!(r.bezout_holds());
    }

    #[test]
    fn radial_pencil_and_degree_three() {
        let r = singular_points(&fol("-y*dx + x*dy")).unwrap();
        assert_eq!(r.total_milnor(), 1);
        let bb = r.orbits[0].baum_bott.clone().unwrap();
        assert_eq!(bb, Coeff::from(4));
        let r = singular_points(&fol("-(x + y^2 - x^2*y)*dx + x*(x + y^2)*dy")).unwrap();
        assert_eq!(r.total_milnor(), 13);
    }

    #[test]
    fn fulton_examples() {
        let v = Chart::Z.vars();
        let p = |s: &str| parse_poly(s, &v).unwrap();
        let o = [Coeff::zero(), Coeff::zero()];
        assert_eq!(milnor_fulton(&p("-y"), &p("x"), &o).unwrap(), 1);
        assert_eq!(milnor_fulton(&p("x^2 - y^3"), &p("x*y^2"), &o).unwrap(), 7);
        assert_eq!(milnor_fulton(&p("-y^3"), &p("x^2 + x*y^2"), &o).unwrap(), 6);
        assert_eq!(milnor_fulton(&p("x*y"), &p("x^2"), &o), Err(Error::CommonComponent));
    }

    #[test]
    fn jets() {
        let saddle_node = fol("(x^2 + x*y^2)*dx + (x + y^2 - x^2*y)*dy");
        let o = [Coeff::zero(), Coeff::zero(), Coeff::one()];
        assert_eq!(jet_type(&saddle_node, &o).unwrap(), JetType::SaddleNode);
        assert_eq!(jet_type(&fol("y*dx + 2*x*dy + x^2*dx"), &o).unwrap(), JetType::NonDegenerate);
        let v = Chart::Z.vars();
        let (cone, lines) = tangent_cone(&parse_poly("0", &v).unwrap(), &parse_poly("x*(y - x)", &v).unwrap()).unwrap();
        assert_eq!((cone.to_string().as_str(), lines), ("-x^2*y + x*y^2", 3));
        // F0(λ) at the origin: BB = −(1 − λ)²/λ
        let f0 = fol("y*dx + (-2*x + y^2)*dy");
        assert_eq!(baum_bott(&f0, &o).unwrap(), Coeff::frac(9, 2));
    }
}
