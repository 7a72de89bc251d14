//! Normal forms of quadratic foliations with a single singular point.
//!
//! Such a foliation is conjugate to exactly one of `F1..F4`. The singular
//! point has Milnor number 7, and its 1-jet is either a saddle-node (giving
//! `F4`) or zero. A zero 1-jet has a tangent cone made of two lines (`F3`) or
//! of one line (`F1` or `F2`, depending on whether the linear coefficient of
//! the cone's companion term vanishes). Each step below is a projective map,
//! and the composite is checked at the end by pulling the input back.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use alloc::format;

use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::field::{adjoin_root, is_unit};
use crate::foliation::{Chart, Foliation};
use crate::models::ClassId;
use crate::poly::{gcd_many, Poly};
use crate::projective::ProjectiveMap;
use crate::singular::{local_jet, singular_points, tangent_cone, JetType};
use crate::upoly::UPoly;

/// A class together with the map realizing it: `pullback(input, map)` is the model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationCertificate {
    pub class: ClassId,
    pub map: ProjectiveMap,
    pub verified: bool,
    pub steps: Vec<String>,
}

struct Run {
    g: Foliation,
    t: ProjectiveMap,
    steps: Vec<String>,
}

impl Run {
    fn apply(&mut self, s: &ProjectiveMap, step: &str) -> Result<()> {
        self.g = self.g.pullback(s)?;
        self.t = self.t.compose(s)?;
        self.steps.push(step.into());
        Ok(())
    }

    fn note(&mut self, step: &str) {
        self.steps.push(step.into());
    }

    /// `(P, Q)` in the chart `z = 1`.
    fn pq(&self) -> (Poly, Poly) {
        let a = self.g.affine(Chart::Z);
        (a.p().clone(), a.q().clone())
    }

    /// `A`, `B` and `φ` of `ω = A dx + B dy + φ(x dy − y dx)` in the chart `z = 1`.
    fn split(&self) -> (Poly, Poly, Poly) {
        let s = self.g.affine(Chart::Z).split();
        (s.a, s.b, s.phi)
    }
}

fn c(p: &Poly, i: u16, j: u16) -> Coeff {
    p.coeff(&[i, j])
}

fn div(a: &Coeff, b: &Coeff) -> Result<Coeff> {
    a.checked_div(b)
}

fn z() -> Coeff {
    Coeff::zero()
}

fn o() -> Coeff {
    Coeff::one()
}

/// `[X:Y:Z] ↦ [X : Y : Z + a·X + b·Y]`, i.e. `(x, y) ↦ (x, y)/(1 + a x + b y)`.
fn homography(a: Coeff, b: Coeff) -> Result<ProjectiveMap> {
    ProjectiveMap::new([[o(), z(), z()], [z(), o(), z()], [a, b, o()]])
}

/// A map sending the origin of `z = 1` to `p`.
fn to_origin(p: &[Coeff; 3]) -> Result<ProjectiveMap> {
    let [x, y, w] = p.clone();
    if !w.is_zero() {
        return Ok(ProjectiveMap::translation(div(&x, &w)?, div(&y, &w)?));
    }
    if !y.is_zero() {
        return ProjectiveMap::new([[o(), z(), x], [z(), z(), y], [z(), o(), w]]);
    }
    ProjectiveMap::new([[z(), z(), x], [o(), z(), y], [z(), o(), w]])
}

/// The linear change `(x', y') = (l1, l2)` written as a pullback map (old coordinates in terms of new).
fn new_coordinates(l1: &Poly, l2: &Poly) -> Result<ProjectiveMap> {
    ProjectiveMap::linear([[c(l1, 1, 0), c(l1, 0, 1)], [c(l2, 1, 0), c(l2, 0, 1)]])?.inverse()
}

/// Classifies a quadratic foliation with a single singular point.
pub fn classify_single_singularity(f: &Foliation) -> Result<ClassificationCertificate> {
    if f.degree() != 2 {
        return Err(Error::Precondition(format!("degree {} instead of 2", f.degree())));
    }
    let report = singular_points(f)?;
    if report.point_count() != 1 {
        return Err(Error::Precondition(format!("{} singular points instead of one", report.point_count())));
    }
    let orbit = &report.orbits[0];
    if orbit.milnor != 7 {
        return Err(Error::Precondition(format!("Milnor number {} instead of 7", orbit.milnor)));
    }
    let mut run = Run { g: f.clone(), t: ProjectiveMap::identity(), steps: Vec::new() };
    run.apply(&to_origin(&orbit.point)?, "translate the singular point to the origin")?;
    let (p, q) = run.pq();
    let class = match local_jet(&p, &q)?.0 {
        JetType::Nilpotent => {
            return Err(Error::Impossible(
                "a single singular point of a quadratic foliation cannot have a nilpotent linear part".into(),
            ))
        }
        JetType::NonDegenerate => {
            return Err(Error::Impossible("a non-degenerate point has Milnor number 1, not 7".into()));
        }
        JetType::SaddleNode => saddle_node(&mut run)?,
        JetType::NullOneJet { lines: 3 } => {
            return Err(Error::Impossible(
                "a single singular point with zero 1-jet cannot have a tangent cone of three distinct lines".into(),
            ))
        }
        JetType::NullOneJet { lines: 2 } => two_lines(&mut run)?,
        JetType::NullOneJet { lines: 1 } => one_line(&mut run)?,
        JetType::NullOneJet { lines } => {
            return Err(Error::Impossible(format!("tangent cone with {lines} lines")));
        }
    };
    let model = class.foliation()?;
    if f.pullback(&run.t)? != model {
        return Err(Error::Verification(format!("the composed map does not conjugate the input to {class}")));
    }
    Ok(ClassificationCertificate { class, map: run.t, verified: true, steps: run.steps })
}

fn saddle_node(run: &mut Run) -> Result<ClassId> {
    // 1-jet ℓ·(r dx + s dy): take (ℓ, r x + s y) as new coordinates
    let (p, q) = run.pq();
    let (p1, q1) = (p.homogeneous_part(1), q.homogeneous_part(1));
    let v = p.vars().clone();
    let (x, y) = (Poly::var(&v, 0), Poly::var(&v, 1));
    let (l, second) = if p1.is_zero() {
        (q1, y.clone())
    } else {
        let s = if c(&p1, 1, 0).is_zero() { div(&c(&q1, 0, 1), &c(&p1, 0, 1))? } else { div(&c(&q1, 1, 0), &c(&p1, 1, 0))? };
        (p1, &x + &y.scale(&s))
    };
    run.apply(&new_coordinates(&l, &second)?, "saddle-node: bring the 1-jet to x dy")?;

    let (p, q) = run.pq();
    let unit = c(&q, 1, 0);
    if !p.homogeneous_part(1).is_zero() || q.homogeneous_part(1) != x.scale(&unit) {
        return Err(Error::Verification("1-jet is not x dy".into()));
    }
    if c(&q, 0, 2).is_zero() {
        return Err(Error::Impossible("the strong separatrix x = 0 would be invariant".into()));
    }
    run.note("saddle-node: x = 0 is not invariant (b02 != 0)");

    let mut moved = false;
    for k in 1..=16i64 {
        let y0 = if k % 2 == 1 { Coeff::from(k.div_euclid(2) + 1) } else { Coeff::from(-(k / 2)) };
        let y0 = if k > 8 { div(&o(), &y0)? } else { y0 };
        let (p, q) = run.pq();
        let pt = [z(), y0.clone()];
        let (dx, dy) = (q.eval(&pt), -&p.eval(&pt));
        if dx.is_zero() {
            continue;
        }
        let m = ProjectiveMap::new([[-&(&y0 * &dx), z(), z()], [z(), y0.clone(), z()], [dy, o(), o()]])?;
        let g = run.g.pullback(&m)?;
        let s = g.affine(Chart::Z).split();
        if c(&s.phi, 0, 2).is_zero() && !c(&s.b, 0, 2).is_zero() {
            run.apply(&m, "saddle-node: send a point of x = 0 and its tangent to infinity (phi02 = 0)")?;
            moved = true;
            break;
        }
    }
    if !moved {
        return Err(Error::Inconclusive("no point of x = 0 normalizes phi02".into()));
    }

    let (_, b, _) = run.split();
    let b02 = div(&c(&b, 0, 2), &c(&b, 1, 0))?;
    run.apply(&ProjectiveMap::diagonal(b02, o(), o())?, "saddle-node: scale b02 to 1")?;

    let (a, b, phi) = run.split();
    let u = c(&b, 1, 0);
    let n = |p: &Poly, i, j| div(&c(p, i, j), &u);
    let (a20, b11) = (n(&a, 2, 0)?, n(&b, 1, 1)?);
    let ok = n(&b, 0, 2)?.is_one()
        && n(&a, 0, 2)?.is_zero()
        && n(&a, 1, 1)?.is_zero()
        && n(&phi, 1, 1)? == -&a20
        && n(&phi, 2, 0)? == -&(&a20 * &b11)
        && n(&b, 2, 0)?.is_zero()
        && !a20.is_zero();
    if !ok {
        return Err(Error::Verification("the order-7 conditions on the saddle-node coefficients fail".into()));
    }
    run.note("saddle-node: order-7 conditions a02 = a11 = 0, phi11 = -a20, phi20 = -a20*b11");

    // (β²x, βy) with β³ = 1/a20
    let a20 = a20.as_rational().ok_or_else(|| Error::Unsupported("irrational a20".into()))?.clone();
    let cube = UPoly::new(vec![Coeff::Rat(-a20.recip()), z(), z(), o()]);
    let beta = adjoin_root(&cube, "b")?.root;
    run.apply(&ProjectiveMap::diagonal(&beta * &beta, beta, o())?, "saddle-node: scale a20 to 1")?;

    let (_, b, _) = run.split();
    let b11 = div(&c(&b, 1, 1), &c(&b, 1, 0))?;
    run.apply(&homography(z(), -&b11)?, "saddle-node: (x/(1 - b11*y), y/(1 - b11*y))")?;
    Ok(ClassId::F4)
}

/// The cone `x A + y B` of the current form, with its gcd against its partials.
fn cone(run: &Run) -> Result<(Poly, Poly)> {
    let (p, q) = run.pq();
    let (cn, _) = tangent_cone(&p, &q)?;
    let g = gcd_many(cn.vars(), [&cn, &cn.derivative(0), &cn.derivative(1)])?;
    Ok((cn, g))
}

fn rational(c: &Coeff, what: &str) -> Result<Rational> {
    c.as_rational().cloned().ok_or_else(|| Error::Unsupported(format!("irrational {what}")))
}

fn two_lines(run: &mut Run) -> Result<ClassId> {
    // cone l1² l2: new coordinates (l1, l2)
    let (cn, l1) = cone(run)?;
    let l2 = cn.div_exact(&(&l1 * &l1))?;
    run.apply(&new_coordinates(&l1, &l2)?, "two-line cone: send the double line to x = 0 and the simple one to y = 0")?;

    let (a, b, phi) = run.split();
    let kappa = c(&a, 1, 1);
    if !b.is_zero() || a != a.homogeneous_part(2) || a.len() != 1 || kappa.is_zero() {
        return Err(Error::Impossible("the quadratic part should reduce to x*y dx".into()));
    }
    let (p20, p02) = (c(&phi, 2, 0), c(&phi, 0, 2));
    if p20.is_zero() || p02.is_zero() {
        return Err(Error::Impossible("phi20 and phi02 must both be nonzero".into()));
    }
    run.note("two-line cone: 1-jet of the cone is x*y dx");

    // (κ/φ20 · x, κ/√(φ20 φ02) · y)
    let prod = rational(&(&p20 * &p02), "phi20*phi02")?;
    let sq = UPoly::new(vec![Coeff::Rat(-prod), z(), o()]);
    let root = adjoin_root(&sq, "s")?.root;
    run.apply(&ProjectiveMap::diagonal(div(&kappa, &p20)?, div(&kappa, &root)?, o())?, "two-line cone: scale phi20 and phi02 to 1")?;

    let (a, _, phi) = run.split();
    let p11 = div(&c(&phi, 1, 1), &c(&a, 1, 1))?;
    run.apply(&homography(z(), p11)?, "two-line cone: (x/(1 + phi11*y), y/(1 + phi11*y))")?;
    Ok(ClassId::F3)
}

fn one_line(run: &mut Run) -> Result<ClassId> {
    // cone l³: new coordinates with l = x
    let (cn, g) = cone(run)?;
    let l = cn.div_exact(&g)?;
    let v = l.vars().clone();
    let (x, y) = (Poly::var(&v, 0), Poly::var(&v, 1));
    let other = if c(&l, 1, 0).is_zero() { x } else { y };
    run.apply(&new_coordinates(&l, &other)?, "one-line cone: send the line to x = 0")?;

    // x³(λ dx/x + d((αxy + βy²)/x²)) + φ(x dy − y dx)
    let (a, b, phi) = run.split();
    let lambda = c(&a, 2, 0);
    let psi = b.div_exact(&Poly::var(&v, 0))?;
    if lambda.is_zero() || !c(&psi, 0, 1).is_zero() {
        return Err(Error::Impossible("the quadratic part should reduce to lambda*x^2 dx + alpha*x(x dy - y dx)".into()));
    }
    let p02 = c(&phi, 0, 2);
    if p02.is_zero() {
        return Err(Error::Impossible("phi02 must be nonzero".into()));
    }
    run.note("one-line cone: beta = 0 and phi02 != 0");

    let d = ProjectiveMap::diagonal(&lambda * &(&p02 * &p02), &lambda * &p02, o())?;
    run.apply(&d, "one-line cone: scale lambda and phi02 to 1")?;

    let (a, _, phi) = run.split();
    let u = c(&a, 2, 0);
    let k = div(&c(&phi, 1, 1), &(&u + &u))?;
    let shear = ProjectiveMap::linear([[o(), z()], [-&k, o()]])?;
    run.apply(&shear, "one-line cone: shear (x, y - phi11/2*x) to kill phi11")?;

    let (a, b, phi) = run.split();
    let u = c(&a, 2, 0);
    let alpha = div(&c(&b, 2, 0), &u)?;
    let p20 = div(&c(&phi, 2, 0), &u)?;
    if !is_unit(&alpha)? {
        run.apply(&homography(z(), p20)?, "one-line cone, alpha = 0: (x/(1 + phi20*y), y/(1 + phi20*y))")?;
        return Ok(ClassId::F1);
    }
    let h = homography(-&div(&p20, &alpha)?, z())?;
    run.apply(&h, "one-line cone, alpha != 0: (x/(1 - phi20/alpha*x), y/(1 - phi20/alpha*x))")?;
    run.apply(&ProjectiveMap::diagonal(alpha.pow(3), alpha.pow(2), o())?, "one-line cone, alpha != 0: scale (alpha^3*x, alpha^2*y)")?;
    Ok(ClassId::F2)
}

impl ClassificationCertificate {
    pub fn summary(&self) -> String {
        let mut s = format!("{} via {}", self.class, self.map);
        for st in &self.steps {
            s.push_str("\n  ");
            s.push_str(st);
        }
        s
    }
}

impl core::fmt::Display for ClassificationCertificate {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.summary())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use crate::text::parse_foliation;

    fn classify(s: &str) -> ClassificationCertificate {
        classify_single_singularity(&parse_foliation(s).unwrap()).unwrap()
    }

    #[test]
    fn models_classify_to_themselves() {
        for id in [ClassId::F1, ClassId::F2, ClassId::F3, ClassId::F4] {
            let cert = classify_single_singularity(&id.foliation().unwrap()).unwrap();
            assert_eq!(cert.class, id);
            assert!(cert.verified);
        }
        let c4 = classify(&ClassId::F4.form_text());
        assert_eq!(c4.map, ProjectiveMap::identity(), "{c4}");
    }

    #[test]
    fn prenormal_one_line_form() {
        let cert = classify("x^2*dx + (x + 2*x^2 + y^2)*(x*dy - y*dx)");
        assert_eq!(cert.class, ClassId::F2);
        assert!(cert.steps.iter().any(|s| s.contains("alpha != 0")));
        let cert = classify("x^2*dx + (3*x^2 + x*y + y^2)*(x*dy - y*dx)");
        assert_eq!(cert.class, ClassId::F1);
    }

    #[test]
    fn conjugates_classify_back() {
        let t = ProjectiveMap::from_ints([[1, 2, -1], [0, 1, 3], [2, -1, 1]]).unwrap();
        for id in [ClassId::F1, ClassId::F2, ClassId::F3, ClassId::F4] {
            let f = id.foliation().unwrap().pullback(&t).unwrap();
            let cert = classify_single_singularity(&f).unwrap();
            assert_eq!(cert.class, id, "{cert}");
            assert_eq!(f.pullback(&cert.map).unwrap(), id.foliation().unwrap());
        }
    }

    #[test]
    fn refuses_other_foliations() {
        let f = ClassId::FJ.foliation().unwrap();
        assert!(matches!(classify_single_singularity(&f), Err(Error::Precondition(_))));
        let f = ClassId::F5.foliation().unwrap();
        assert!(matches!(classify_single_singularity(&f), Err(Error::Precondition(_))));
    }

    #[test]
    fn certificates_mention_their_steps() {
        let cert = classify(&ClassId::F3.form_text());
        assert_eq!(cert.steps.first().map(String::as_str), Some("translate the singular point to the origin"));
        assert!(cert.to_string().starts_with("F3 via"));
        let _ = cert.map.to_string();
    }
}
