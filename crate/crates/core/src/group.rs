//! Infinitesimal symmetries: the Lie algebra of projective vector fields
//! preserving a foliation, solved in the chart `z = 1`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::foliation::{Chart, Foliation};
use crate::invariants::{verify_first_integral, verify_integrating_factor, DarbouxFunction};
use crate::linalg::{kernel, solve, Matrix};
use crate::poly::{gcd, Monomial, Poly};
use crate::projective::ProjectiveMap;
use crate::vfield::VectorField;

/// Names of the coordinates of a projective field in the chart.
pub const BASIS_NAMES: [&str; 8] = ["d/dx", "d/dy", "x*d/dx", "y*d/dx", "x*d/dy", "y*d/dy", "x*R", "y*R"];

/// `∂x, ∂y, x∂x, y∂x, x∂y, y∂y, xR, yR` with `R = x∂x + y∂y`.
pub fn projective_basis() -> [VectorField; 8] {
    let v = Chart::Z.vars();
    let (x, y) = (Poly::var(&v, 0), Poly::var(&v, 1));
    let (o, z) = (Poly::one(&v), Poly::zero(&v));
    let f = |a: &Poly, b: &Poly| VectorField::new(vec![a.clone(), b.clone()]).expect("chart field");
    [
        f(&o, &z),
        f(&z, &o),
        f(&x, &z),
        f(&y, &z),
        f(&z, &x),
        f(&z, &y),
        f(&(&x * &x), &(&x * &y)),
        f(&(&x * &y), &(&y * &y)),
    ]
}

/// The field with the given coordinates.
pub fn field_of(coords: &[Coeff; 8]) -> VectorField {
    let basis = projective_basis();
    let mut acc = VectorField::zero(&Chart::Z.vars());
    for (c, b) in coords.iter().zip(&basis) {
        if !c.is_zero() {
            acc = acc.add(&b.scale(c));
        }
    }
    acc
}

/// Coordinates of `x` in the projective basis, if it is a projective field.
pub fn coordinates(x: &VectorField) -> Result<Option<[Coeff; 8]>> {
    if *x.vars() != Chart::Z.vars() {
        return Err(Error::VariableMismatch("fields live in the chart z = 1".into()));
    }
    let basis = projective_basis();
    let mut monos: Vec<(usize, Monomial)> = Vec::new();
    for f in basis.iter().chain([x]) {
        for (i, c) in f.comps().iter().enumerate() {
            for (m, _) in c.terms() {
                if !monos.contains(&(i, m.clone())) {
                    monos.push((i, m.clone()));
                }
            }
        }
    }
    let mat: Matrix = monos.iter().map(|(i, m)| basis.iter().map(|b| b.comp(*i).coeff(&m.0)).collect()).collect();
    let rhs: Vec<Coeff> = monos.iter().map(|(i, m)| x.comp(*i).coeff(&m.0)).collect();
    Ok(solve(&mat, &rhs)?.map(|v| core::array::from_fn(|k| v[k].clone())))
}

/// `L_X ω ∧ ω` for `ω = P dx + Q dy`, as the coefficient of `dx ∧ dy`.
pub fn lie_derivative_wedge(f: &Foliation, x: &VectorField) -> Poly {
    let a = f.affine(Chart::Z);
    let (p, q) = (a.p(), a.q());
    let (x1, x2) = (x.comp(0), x.comp(1));
    let l1 = &(&x.apply(p) + &(p * &x1.derivative(0))) + &(q * &x2.derivative(0));
    let l2 = &(&x.apply(q) + &(p * &x1.derivative(1))) + &(q * &x2.derivative(1));
    &(&l1 * q) - &(&l2 * p)
}

/// `(i, j, c)` with `[Xᵢ, Xⱼ] = Σ c_k X_k`.
pub type Bracket = (usize, usize, Vec<Coeff>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyAlgebra {
    /// Coordinates of each basis element in [`projective_basis`].
    pub basis: Vec<[Coeff; 8]>,
}

impl IsotropyAlgebra {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn orbit_dimension(&self) -> usize {
        8 - self.basis.len()
    }

    pub fn fields(&self) -> Vec<VectorField> {
        self.basis.iter().map(field_of).collect()
    }

    /// Structure constants: `[Xᵢ, Xⱼ] = Σ c_k X_k` for `i < j`, or `None` if a
    /// bracket leaves the algebra.
    pub fn structure_constants(&self) -> Result<Option<Vec<Bracket>>> {
        let fields = self.fields();
        let n = fields.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let Some(c) = coordinates(&fields[i].bracket(&fields[j])?)? else {
                    return Ok(None);
                };
                let mat: Matrix = (0..8).map(|k| self.basis.iter().map(|b| b[k].clone()).collect()).collect();
                let Some(s) = solve(&mat, &c)? else {
                    return Ok(None);
                };
                out.push((i, j, s));
            }
        }
        Ok(Some(out))
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.structure_constants()?.is_some())
    }

    /// A pair `(X, Y)` with `[X, Y] = Y`, for a non-abelian 2-dimensional algebra.
    pub fn affine_pair(&self) -> Result<Option<(VectorField, VectorField)>> {
        if self.dimension() != 2 {
            return Ok(None);
        }
        let Some(sc) = self.structure_constants()? else {
            return Ok(None);
        };
        let (a, b) = (&sc[0].2[0], &sc[0].2[1]);
        let f = self.fields();
        let y = f[0].scale(a).add(&f[1].scale(b));
        let x = if !b.is_zero() {
            f[0].scale(&b.inv()?)
        } else if !a.is_zero() {
            f[1].scale(&(-&a.inv()?))
        } else {
            return Ok(None);
        };
        let check = x.bracket(&y)?;
        if check != y {
            return Err(Error::Verification("[X, Y] = Y".into()));
        }
        Ok(Some((x, y)))
    }
}

/// Solves `L_X ω ∧ ω = 0` for `X` in the 8-dimensional space of projective fields.
pub fn isotropy_algebra(f: &Foliation) -> Result<IsotropyAlgebra> {
    let images: Vec<Poly> = projective_basis().iter().map(|b| lie_derivative_wedge(f, b)).collect();
    let mut monos: Vec<Monomial> = Vec::new();
    for p in &images {
        for (m, _) in p.terms() {
            if !monos.contains(m) {
                monos.push(m.clone());
            }
        }
    }
    let mat: Matrix = monos.iter().map(|m| images.iter().map(|p| p.coeff(&m.0)).collect()).collect();
    let ker = if mat.is_empty() { (0..8).map(unit).collect() } else { kernel(&mat, 8)? };
    let basis = ker.into_iter().map(|v| core::array::from_fn(|k| v[k].clone())).collect();
    Ok(IsotropyAlgebra { basis })
}

fn unit(k: usize) -> Vec<Coeff> {
    (0..8).map(|i| if i == k { Coeff::one() } else { Coeff::zero() }).collect()
}

pub fn is_symmetry(f: &Foliation, x: &VectorField) -> bool {
    lie_derivative_wedge(f, x).is_zero()
}

/// Whether `T` preserves `f`.
pub fn isotropy_contains(f: &Foliation, t: &ProjectiveMap) -> Result<bool> {
    Ok(f.pullback(t)? == *f)
}

pub fn lie_bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    x.bracket(y)
}

/// The 3×3 matrix `M` whose linear flow `Ẋ = M·X` on `ℂ³` induces `x`.
pub fn linear_matrix(coords: &[Coeff; 8]) -> [[Coeff; 3]; 3] {
    let z = Coeff::zero;
    let c = |k: usize| coords[k].clone();
    [[c(2), c(3), c(0)], [c(4), c(5), c(1)], [-&c(6), -&c(7), z()]]
}

/// The time-`t` flow when it is algebraic: `M` nilpotent (`exp` is a
/// polynomial in `t`), or `M` diagonal with integer entries (then `t` is the
/// multiplicative parameter `s = eᵗ`).
pub fn flow_map(coords: &[Coeff; 8], t: &Rational) -> Result<Option<ProjectiveMap>> {
    let m = linear_matrix(coords);
    let diagonal = (0..3).all(|i| (0..3).all(|j| i == j || m[i][j].is_zero()));
    if diagonal {
        if t.is_zero() {
            return Ok(None);
        }
        let mut d: [Coeff; 3] = core::array::from_fn(|_| Coeff::one());
        for (i, di) in d.iter_mut().enumerate() {
            let Some(e) = m[i][i].as_rational().filter(|e| e.is_integer()) else {
                return Ok(None);
            };
            let k = e.to_integer();
            let k: i32 = i32::try_from(k).map_err(|_| Error::Unsupported("huge weight".into()))?;
            *di = Coeff::Rat(num_traits::Pow::pow(t, k));
        }
        return Ok(Some(ProjectiveMap::diagonal(d[0].clone(), d[1].clone(), d[2].clone())?));
    }
    let mul = |a: &[[Coeff; 3]; 3], b: &[[Coeff; 3]; 3]| -> [[Coeff; 3]; 3] {
        core::array::from_fn(|i| core::array::from_fn(|j| (0..3).fold(Coeff::zero(), |s, k| &s + &(&a[i][k] * &b[k][j]))))
    };
    let m2 = mul(&m, &m);
    let m3 = mul(&m2, &m);
    if m3.iter().flatten().any(|c| !c.is_zero()) {
        return Ok(None);
    }
    let t = Coeff::Rat(t.clone());
    let half = &(&t * &t) * &Coeff::from(Rational::new(1.into(), 2.into()));
    let e: [[Coeff; 3]; 3] = core::array::from_fn(|i| {
        core::array::from_fn(|j| {
            let id = if i == j { Coeff::one() } else { Coeff::zero() };
            &(&id + &(&t * &m[i][j])) + &(&half * &m2[i][j])
        })
    });
    Ok(Some(ProjectiveMap::new(e)?))
}

/// `ω(X)/ω(Y)` in lowest terms, checked to be a nonconstant first integral.
pub fn symmetry_integral(f: &Foliation, x: &VectorField, y: &VectorField) -> Result<(Poly, Poly)> {
    if x.proportional_to(y).is_some() || y.proportional_to(x).is_some() {
        return Err(Error::Degenerate("the symmetries are not independent".into()));
    }
    let a = f.affine(Chart::Z);
    let form = [a.p().clone(), a.q().clone()];
    let (num, den) = (x.contract(&form), y.contract(&form));
    if num.is_zero() || den.is_zero() {
        return Err(Error::Degenerate("a symmetry is tangent to the foliation".into()));
    }
    let g = gcd(&num, &den)?;
    let (num, den) = (num.div_exact(&g)?, den.div_exact(&g)?);
    if num.is_constant() && den.is_constant() {
        return Err(Error::Degenerate("the ratio is constant".into()));
    }
    let func = DarbouxFunction::new(num.vars().clone(), vec![(num.clone(), Rational::from_integer(1.into())), (den.clone(), Rational::from_integer((-1).into()))], None)?;
    if !verify_first_integral(f, &func)? {
        return Err(Error::Verification(String::from("the ratio is not a first integral")));
    }
    Ok((num, den))
}

/// `ω(X)` is an integrating factor whenever `X` is a symmetry transverse to the leaves.
pub fn symmetry_factor(f: &Foliation, x: &VectorField) -> Result<Option<Poly>> {
    let a = f.affine(Chart::Z);
    let g = x.contract(&[a.p().clone(), a.q().clone()]);
    if g.is_zero() {
        return Ok(None);
    }
    Ok(verify_integrating_factor(f, &g)?.then_some(g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::int;
    use crate::models::{f0, ClassId};
    use crate::text::parse_foliation;

    fn dim(c: ClassId) -> usize {
        isotropy_algebra(&c.foliation().unwrap()).unwrap().dimension()
    }

    #[test]
    fn isotropy_dimensions() {
        use ClassId::*;
        let got: Vec<usize> = [F1, F2, F3, F4, F5, F6, F7, FJ].into_iter().map(dim).collect();
        assert_eq!(got, vec![2, 1, 1, 0, 2, 0, 1, 0]);
        assert_eq!(isotropy_algebra(&f0(&Coeff::from(-2)).unwrap()).unwrap().orbit_dimension(), 7);
    }

    #[test]
    fn brackets() {
        let v = Chart::Z.vars();
        let x = Poly::var(&v, 0);
        let xdx = VectorField::new(vec![x.clone(), Poly::zero(&v)]).unwrap();
        let dx = VectorField::partial(&v, 0);
        assert_eq!(lie_bracket(&xdx, &dx).unwrap(), dx.scale(&Coeff::from(-1)));
        let alg = isotropy_algebra(&ClassId::F1.foliation().unwrap()).unwrap();
        assert!(alg.is_closed().unwrap());
        let (x, y) = alg.affine_pair().unwrap().unwrap();
        assert_eq!(lie_bracket(&x, &y).unwrap(), y);
    }

    #[test]
    fn flows_preserve_the_foliation() {
        let f = ClassId::F1.foliation().unwrap();
        let alg = isotropy_algebra(&f).unwrap();
        for b in &alg.basis {
            for t in [int(2), int(-3), Rational::new(1.into(), 5.into())] {
                if let Some(map) = flow_map(b, &t).unwrap() {
                    assert!(isotropy_contains(&f, &map).unwrap(), "{map}");
                }
            }
        }
        let g = ProjectiveMap::from_ints([[27, 0, 0], [0, 9, 0], [2, 0, 1]]).unwrap();
        assert!(isotropy_contains(&f, &g).unwrap());
        let h = ProjectiveMap::from_ints([[1, 2, 0], [0, 1, 0], [0, 0, 1]]).unwrap();
        assert!(!isotropy_contains(&f, &h).unwrap());
    }

    #[test]
    fn integral_from_two_symmetries() {
        let f = ClassId::F1.foliation().unwrap();
        let c = |v: [i64; 8]| v.map(Coeff::from);
        let x = field_of(&c([0, 0, 3, 0, 0, 2, 0, 0]));
        let y = field_of(&c([0, 0, 0, 0, 0, 0, -1, 0]));
        assert!(is_symmetry(&f, &x) && is_symmetry(&f, &y));
        let (n, d) = symmetry_integral(&f, &x, &y).unwrap();
        assert_eq!(n.total_degree(), Some(3));
        assert_eq!(d.total_degree(), Some(3));
        assert!(symmetry_integral(&f, &x, &x).is_err());
        assert!(symmetry_factor(&f, &x).unwrap().is_some());
        let g = parse_foliation("y*dx - x*dy").unwrap();
        assert_eq!(coordinates(&x).unwrap().unwrap()[2], Coeff::from(3));
        assert!(is_symmetry(&g, &VectorField::radial(&Chart::Z.vars())));
    }
}
