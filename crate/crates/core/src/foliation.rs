//! Foliations of the projective plane: homogeneous and affine presentations.
//!
//! A degree-`N` foliation is `ω = a dX + b dY + c dZ` with `a, b, c` homogeneous
//! of degree `N+1`, `aX + bY + cZ = 0` and no common factor. Values are kept in
//! a canonical scaling so that derived equality is equality up to a scalar.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::{gcd, gcd_many, Monomial, Poly, Vars};
use crate::projective::ProjectiveMap;
use crate::vfield::VectorField;

/// The homogeneous ring `ℚ[X, Y, Z]`.
pub fn xyz() -> Vars {
    Vars::new(&["X", "Y", "Z"])
}

/// An affine chart `X_h = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Chart {
    /// `Z = 1`, coordinates `(x, y)`.
    Z,
    /// `Y = 1`, coordinates `(x, z)`.
    Y,
    /// `X = 1`, coordinates `(y, z)`.
    X,
}

impl Chart {
    pub const ALL: [Chart; 3] = [Chart::Z, Chart::Y, Chart::X];

    /// Index of the homogeneous coordinate set to 1.
    pub fn hidden(self) -> usize {
        match self {
            Chart::Z => 2,
            Chart::Y => 1,
            Chart::X => 0,
        }
    }

    /// Homogeneous indices of the two chart coordinates.
    pub fn indices(self) -> (usize, usize) {
        match self {
            Chart::Z => (0, 1),
            Chart::Y => (0, 2),
            Chart::X => (1, 2),
        }
    }

    pub fn vars(self) -> Vars {
        match self {
            Chart::Z => Vars::new(&["x", "y"]),
            Chart::Y => Vars::new(&["x", "z"]),
            Chart::X => Vars::new(&["y", "z"]),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Chart::Z => "Z=1",
            Chart::Y => "Y=1",
            Chart::X => "X=1",
        }
    }

    /// Dehomogenization `p(…, X_h = 1, …)` into the chart ring.
    pub fn restrict(self, p: &Poly) -> Poly {
        let cv = self.vars();
        let (i, j) = self.indices();
        let mut images = vec![Poly::zero(&cv); 3];
        images[i] = Poly::var(&cv, 0);
        images[j] = Poly::var(&cv, 1);
        images[self.hidden()] = Poly::one(&cv);
        p.compose(&images)
    }

    /// `X_h^d · p(X_i/X_h, X_j/X_h)` for `d ≥ deg p`.
    pub fn homogenize(self, p: &Poly, d: usize) -> Poly {
        let v = xyz();
        let (i, j) = self.indices();
        let h = self.hidden();
        Poly::from_terms(
            &v,
            p.terms().map(|(m, c)| {
                let mut e = Monomial::one(3);
                e.0[i] = m.0[0];
                e.0[j] = m.0[1];
                e.0[h] = (d - m.degree()) as u16;
                (e, c.clone())
            }),
        )
    }

    /// Homogeneous coordinates of a chart point.
    pub fn lift(self, u: Coeff, v: Coeff) -> [Coeff; 3] {
        let (i, j) = self.indices();
        let mut p: [Coeff; 3] = Default::default();
        p[i] = u;
        p[j] = v;
        p[self.hidden()] = Coeff::one();
        p
    }

    /// First chart (in the order Z, Y, X) containing the point, with its chart coordinates.
    pub fn of_point(p: &[Coeff; 3]) -> Result<(Chart, Coeff, Coeff)> {
        for ch in Chart::ALL {
            let h = &p[ch.hidden()];
            if !h.is_zero() {
                let hi = h.inv()?;
                let (i, j) = ch.indices();
                return Ok((ch, &p[i] * &hi, &p[j] * &hi));
            }
        }
        Err(Error::Precondition("the zero vector is not a point".into()))
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A projective foliation `a dX + b dY + c dZ` in canonical scaling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Foliation {
    abc: [Poly; 3],
    degree: usize,
}

impl Foliation {
    /// Validates the Euler identity, removes common factors and rescales.
    pub fn new(a: Poly, b: Poly, c: Poly) -> Result<Self> {
        let v = xyz();
        let abc = [a.embed(&v)?, b.embed(&v)?, c.embed(&v)?];
        if abc.iter().all(Poly::is_zero) {
            return Err(Error::ZeroForm);
        }
        let euler = &(&(&abc[0] * &Poly::var(&v, 0)) + &(&abc[1] * &Poly::var(&v, 1))) + &(&abc[2] * &Poly::var(&v, 2));
        if !euler.is_zero() {
            return Err(Error::NotEuler);
        }
        let g = gcd_many(&v, abc.iter())?;
        Foliation::canonical(abc, g)
    }

    fn canonical(abc: [Poly; 3], g: Poly) -> Result<Self> {
        let abc = if g.is_constant() {
            abc
        } else {
            [abc[0].div_exact(&g)?, abc[1].div_exact(&g)?, abc[2].div_exact(&g)?]
        };
        let mut d = None;
        for p in abc.iter().filter(|p| !p.is_zero()) {
            if !p.is_homogeneous() || d.is_some_and(|d| Some(d) != p.total_degree()) {
                return Err(Error::Degenerate("components are not homogeneous of one degree".into()));
            }
            d = p.total_degree();
        }
        let d = d.unwrap_or(0);
        if d == 0 {
            return Err(Error::Degenerate("constant components".into()));
        }
        let lead = abc.iter().find(|p| !p.is_zero()).unwrap().leading_coeff().inv()?;
        Ok(Foliation { abc: abc.map(|p| p.scale(&lead)), degree: d - 1 })
    }

    /// Builds the foliation of `P du + Q dv` in the given chart.
    pub fn from_affine(p: &Poly, q: &Poly, chart: Chart) -> Result<Self> {
        if p.nvars() != 2 || q.nvars() != 2 || p.vars() != q.vars() {
            return Err(Error::VariableMismatch("expected P and Q in the two chart variables".into()));
        }
        if p.is_zero() && q.is_zero() {
            return Err(Error::ZeroForm);
        }
        let g = gcd(p, q)?;
        if !g.is_constant() {
            return Err(Error::CommonFactor(alloc::format!("{g}")));
        }
        let d = p.total_degree().unwrap_or(0).max(q.total_degree().unwrap_or(0));
        let v = xyz();
        let (i, j) = chart.indices();
        let h = chart.hidden();
        let ph = chart.homogenize(p, d);
        let qh = chart.homogenize(q, d);
        let xh = Poly::var(&v, h);
        let mut abc = [Poly::zero(&v), Poly::zero(&v), Poly::zero(&v)];
        abc[i] = &xh * &ph;
        abc[j] = &xh * &qh;
        abc[h] = -(&(&Poly::var(&v, i) * &ph) + &(&Poly::var(&v, j) * &qh));
        let [a, b, c] = abc;
        Foliation::new(a, b, c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> &[Poly; 3] {
        &self.abc
    }

    pub fn a(&self) -> &Poly {
        &self.abc[0]
    }

    pub fn b(&self) -> &Poly {
        &self.abc[1]
    }

    pub fn c(&self) -> &Poly {
        &self.abc[2]
    }

    pub fn is_rational(&self) -> bool {
        self.abc.iter().all(Poly::is_rational)
    }

    /// The affine presentation in a chart.
    pub fn affine(&self, chart: Chart) -> AffineFoliation {
        let (i, j) = chart.indices();
        AffineFoliation { chart, p: chart.restrict(&self.abc[i]), q: chart.restrict(&self.abc[j]), degree: self.degree }
    }

    /// `T*ω`: `(a', b', c')(X) = Mᵀ·(a, b, c)(M·X)`.
    pub fn pullback(&self, t: &ProjectiveMap) -> Result<Self> {
        let v = xyz();
        let images = t.images(&v);
        let moved: Vec<Poly> = self.abc.iter().map(|p| p.compose(&images)).collect();
        let comp = |r: usize| {
            let mut acc = Poly::zero(&v);
            for (s, ps) in moved.iter().enumerate() {
                acc = &acc + &ps.scale(t.entry(s, r));
            }
            acc
        };
        // an automorphism keeps the components coprime
        Foliation::canonical([comp(0), comp(1), comp(2)], Poly::one(&v))
    }

    /// The homogeneous field `Z` with `ω = i_R i_Z (dX∧dY∧dZ)`, i.e. `(a, b, c) = Z × R`.
    pub fn dual_vector_field(&self) -> Result<VectorField> {
        let v = xyz();
        let [a, b, c] = &self.abc;
        // c = r·X + q·Y with q free of X
        let mut r = Poly::zero(&v);
        let mut qy = Poly::zero(&v);
        for (m, k) in c.terms() {
            if m.0[0] > 0 {
                let mut e = m.clone();
                e.0[0] -= 1;
                r.add_term(e, k.clone());
            } else {
                qy.add_term(m.clone(), k.clone());
            }
        }
        let y = Poly::var(&v, 1);
        let q = qy.div_exact(&y).map_err(|_| Error::NotEuler)?;
        let p = (a + &(&r * &Poly::var(&v, 2))).div_exact(&y).map_err(|_| Error::NotEuler)?;
        let check = -(&(&p * &Poly::var(&v, 0)) + &(&q * &Poly::var(&v, 2)));
        if check != *b {
            return Err(Error::NotEuler);
        }
        let z = VectorField::new(vec![q, -r, -p])?;
        if z.proportional_to(&VectorField::radial(&v)).is_some() || z.is_zero() {
            return Err(Error::Degenerate("dual field collinear with the radial field".into()));
        }
        Ok(z)
    }

    /// `ω(W) = aW₁ + bW₂ + cW₃` for a field on `ℂ³`.
    pub fn contract(&self, w: &VectorField) -> Poly {
        w.contract(&self.abc)
    }
}

impl fmt::Display for Foliation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_form(f, &self.abc, &["dX", "dY", "dZ"])
    }
}

fn write_form(f: &mut fmt::Formatter<'_>, comps: &[Poly], diffs: &[&str]) -> fmt::Result {
    let mut first = true;
    for (p, d) in comps.iter().zip(diffs) {
        if p.is_zero() {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        write!(f, "({p})*{d}")?;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// `P du + Q dv` in a chart, together with the projective degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFoliation {
    chart: Chart,
    p: Poly,
    q: Poly,
    degree: usize,
}

/// `ω = A du + B dv + φ(u dv − v du)` with `deg A, deg B ≤ N` and `φ` homogeneous of degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub a: Poly,
    pub b: Poly,
    pub phi: Poly,
}

impl AffineFoliation {
    pub fn new(p: Poly, q: Poly, chart: Chart) -> Result<Self> {
        let cv = chart.vars();
        let (p, q) = (p.embed(&cv)?, q.embed(&cv)?);
        let degree = Foliation::from_affine(&p, &q, chart)?.degree;
        Ok(AffineFoliation { chart, p, q, degree })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn vars(&self) -> &Vars {
        self.p.vars()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn to_foliation(&self) -> Result<Foliation> {
        Foliation::from_affine(&self.p, &self.q, self.chart)
    }

    pub fn split(&self) -> Split {
        let n = self.degree;
        let u = Poly::var(self.vars(), 0);
        let v = Poly::var(self.vars(), 1);
        let top = self.q.homogeneous_part(n + 1);
        let phi = if top.is_zero() { top } else { top.div_exact(&u).expect("top part of Q divisible by u") };
        Split { a: &self.p + &(&v * &phi), b: &self.q - &(&u * &phi), phi }
    }

    /// Whether the line at infinity of the chart is invariant (`φ ≡ 0`).
    pub fn line_at_infinity_invariant(&self) -> bool {
        self.split().phi.is_zero()
    }

    /// The tangent field `(Q, −P)`.
    pub fn vector_field(&self) -> VectorField {
        VectorField::new(vec![self.q.clone(), -&self.p]).unwrap()
    }

    /// `−Q du + P dv`, whose leaves are orthogonal to those of `ω`.
    pub fn orthogonal(&self) -> Result<Self> {
        AffineFoliation::new(-&self.q, self.p.clone(), self.chart)
    }
}

impl fmt::Display for AffineFoliation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.vars();
        let du = alloc::format!("d{}", v.name(0));
        let dv = alloc::format!("d{}", v.name(1));
        write_form(f, &[self.p.clone(), self.q.clone()], &[&du, &dv])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_affine, parse_poly};
    use alloc::string::ToString;

    fn aff(s: &str) -> AffineFoliation {
        parse_affine(s).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(aff("-y*dx + x*dy").degree(), 0);
        assert_eq!(aff("x^2*dx + y^2*(x*dy - y*dx)").degree(), 2);
        assert_eq!(aff("(x^2*y - 1)*dx + (y^2 - x^3)*dy").degree(), 2);
        assert_eq!(aff("x^2*dy + y^2*(x*dy - y*dx)").degree(), 2);
        assert_eq!(aff("-(x + y^2 - x^2*y)*dx + x*(x + y^2)*dy").degree(), 3);
        assert_eq!(aff("dx").degree(), 0);
    }

    #[test]
    fn euler_identity_and_round_trip() {
        let w = aff("x^2*dx + y^2*(x*dy - y*dx)");
        let f = w.to_foliation().unwrap();
        let v = xyz();
        let e = &(&(f.a() * &Poly::var(&v, 0)) + &(f.b() * &Poly::var(&v, 1))) + &(f.c() * &Poly::var(&v, 2));
        assert!(e.is_zero());
        let back = f.affine(Chart::Z);
        assert_eq!(back.to_foliation().unwrap(), f);
        for ch in Chart::ALL {
            assert_eq!(f.affine(ch).to_foliation().unwrap(), f);
        }
    }

    #[test]
    fn common_factors_rejected() {
        let v = Chart::Z.vars();
        let p = parse_poly("x*y", &v).unwrap();
        let q = parse_poly("x^2", &v).unwrap();
        assert!(matches!(Foliation::from_affine(&p, &q, Chart::Z), Err(Error::CommonFactor(_))));
    }

    #[test]
    fn line_at_infinity() {
        assert!(!aff("x^2*dx + y^2*(x*dy - y*dx)").line_at_infinity_invariant());
        assert!(!aff("(x^2*y - 1)*dx + (y^2 - x^3)*dy").line_at_infinity_invariant());
        assert!(aff("(x^2 + y)*dx + (x*y - 1)*dy").line_at_infinity_invariant());
        let s = aff("x^2*dx + y^2*(x*dy - y*dx)").split();
        assert_eq!(s.phi.to_string(), "y^2");
    }

    #[test]
    fn dual_field_in_the_chart() {
        let w = aff("-y^3*dx + (x^2 + x*y^2)*dy");
        let z = w.to_foliation().unwrap().dual_vector_field().unwrap();
        // chart components E − xG, F − yG at Z = 1
        let v = xyz();
        let e = &z.comp(0).clone() - &(&Poly::var(&v, 0) * z.comp(2));
        let f = &z.comp(1).clone() - &(&Poly::var(&v, 1) * z.comp(2));
        let chart = VectorField::new(vec![Chart::Z.restrict(&e), Chart::Z.restrict(&f)]).unwrap();
        assert!(chart.proportional_to(&w.vector_field()).is_some());

        let radial = aff("y*dx - x*dy").to_foliation().unwrap().dual_vector_field().unwrap();
        assert!(radial.comp(0).is_zero() && radial.comp(1).is_zero() && radial.comp(2).is_constant());
    }

    #[test]
    fn pullback_round_trip() {
        let f = aff("x^2*dx + (x + y^2)*(x*dy - y*dx)").to_foliation().unwrap();
        let t = ProjectiveMap::from_ints([[1, 2, 0], [0, 1, -1], [3, 0, 1]]).unwrap();
        let g = f.pullback(&t).unwrap();
        assert_eq!(g.degree(), 2);
        assert_eq!(g.pullback(&t.inverse().unwrap()).unwrap(), f);
        assert_eq!(f.pullback(&ProjectiveMap::identity()).unwrap(), f);
    }

    #[test]
    fn orthogonal_of_saddle_node() {
        let w = aff("(x^2 + x*y^2)*dx + (x + y^2 - x^2*y)*dy");
        let o = w.orthogonal().unwrap();
        assert_eq!(o, aff("-(x + y^2 - x^2*y)*dx + x*(x + y^2)*dy"));
        assert_eq!(o.orthogonal().unwrap().to_foliation().unwrap(), w.to_foliation().unwrap());
    }
}
