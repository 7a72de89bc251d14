//! Invertible 3×3 matrices modulo scalars.

use alloc::vec::Vec;
use core::fmt;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::poly::{Poly, Vars};

/// A projective transformation `[X:Y:Z] ↦ M·[X:Y:Z]`, normalized so that the
/// first nonzero entry (row-major) is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveMap {
    m: [[Coeff; 3]; 3],
}

fn det3(m: &[[Coeff; 3]; 3]) -> Coeff {
    let minor = |r1: usize, r2: usize, c1: usize, c2: usize| &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1]);
    let t0 = &m[0][0] * &minor(1, 2, 1, 2);
    let t1 = &m[0][1] * &minor(1, 2, 0, 2);
    let t2 = &m[0][2] * &minor(1, 2, 0, 1);
    &(&t0 - &t1) + &t2
}

impl ProjectiveMap {
    pub fn new(m: [[Coeff; 3]; 3]) -> Result<Self> {
        if det3(&m).is_zero() {
            return Err(Error::SingularMap);
        }
        let mut p = ProjectiveMap { m };
        p.normalize()?;
        Ok(p)
    }

    pub fn from_ints(m: [[i64; 3]; 3]) -> Result<Self> {
        ProjectiveMap::new(m.map(|r| r.map(Coeff::from)))
    }

    pub fn identity() -> Self {
        ProjectiveMap::from_ints([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).unwrap()
    }

    /// `(x, y) ↦ (a·x, b·y)` in the chart Z=1.
    pub fn diagonal(a: Coeff, b: Coeff, c: Coeff) -> Result<Self> {
        let z = Coeff::zero;
        ProjectiveMap::new([[a, z(), z()], [z(), b, z()], [z(), z(), c]])
    }

    /// `(x, y) ↦ (x + x0, y + y0)` in the chart Z=1.
    pub fn translation(x0: Coeff, y0: Coeff) -> Self {
        let (o, z) = (Coeff::one, Coeff::zero);
        ProjectiveMap::new([[o(), z(), x0], [z(), o(), y0], [z(), z(), o()]]).unwrap()
    }

    /// `(x, y) ↦ L·(x, y)` in the chart Z=1.
    pub fn linear(l: [[Coeff; 2]; 2]) -> Result<Self> {
        let z = Coeff::zero;
        let [[a, b], [c, d]] = l;
        ProjectiveMap::new([[a, b, z()], [c, d, z()], [z(), z(), Coeff::one()]])
    }

    fn normalize(&mut self) -> Result<()> {
        let lead = self.m.iter().flatten().find(|c| !c.is_zero()).cloned().ok_or(Error::SingularMap)?;
        if !lead.is_one() {
            let inv = lead.inv()?;
            for row in self.m.iter_mut() {
                for c in row.iter_mut() {
                    *c = &*c * &inv;
                }
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> &[[Coeff; 3]; 3] {
        &self.m
    }

    pub fn entry(&self, r: usize, c: usize) -> &Coeff {
        &self.m[r][c]
    }

    pub fn det(&self) -> Coeff {
        det3(&self.m)
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let mut out: [[Coeff; 3]; 3] = Default::default();
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                let mut s = Coeff::zero();
                for k in 0..3 {
                    s = &s + &(&self.m[i][k] * &other.m[k][j]);
                }
                *e = s;
            }
        }
        ProjectiveMap::new(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        let m = &self.m;
        let cof = |r: usize, c: usize| {
            let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
            let cs: Vec<usize> = (0..3).filter(|&j| j != c).collect();
            let d = &(&m[rs[0]][cs[0]] * &m[rs[1]][cs[1]]) - &(&m[rs[0]][cs[1]] * &m[rs[1]][cs[0]]);
            if (r + c) % 2 == 1 {
                -&d
            } else {
                d
            }
        };
        let mut adj: [[Coeff; 3]; 3] = Default::default();
        for (i, row) in adj.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = cof(j, i);
            }
        }
        ProjectiveMap::new(adj)
    }

    /// Image of a point given by homogeneous coordinates.
    pub fn apply(&self, p: &[Coeff; 3]) -> [Coeff; 3] {
        core::array::from_fn(|i| {
            let mut s = Coeff::zero();
            for (k, x) in p.iter().enumerate() {
                s = &s + &(&self.m[i][k] * x);
            }
            s
        })
    }

    /// The linear forms `(M·X)_r` as polynomials in the given three variables.
    pub fn images(&self, vars: &Vars) -> [Poly; 3] {
        core::array::from_fn(|r| {
            let mut p = Poly::zero(vars);
            for s in 0..3 {
                p = &p + &Poly::var(vars, s).scale(&self.m[r][s]);
            }
            p
        })
    }

    /// Whether all entries are rational.
    pub fn is_rational(&self) -> bool {
        self.m.iter().flatten().all(|c| c.as_rational().is_some())
    }
}

impl fmt::Display for ProjectiveMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.m.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}, {}, {}", row[0], row[1], row[2])?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_composes_to_identity() {
        let t = ProjectiveMap::from_ints([[2, 1, 0], [0, 1, 3], [1, 0, 1]]).unwrap();
        let id = t.compose(&t.inverse().unwrap()).unwrap();
        assert_eq!(id, ProjectiveMap::identity());
    }

    #[test]
    fn scalars_are_forgotten() {
        let a = ProjectiveMap::from_ints([[2, 0, 0], [0, 4, 0], [0, 0, 6]]).unwrap();
        let b = ProjectiveMap::from_ints([[1, 0, 0], [0, 2, 0], [0, 0, 3]]).unwrap();
        assert_eq!(a, b);
        assert!(ProjectiveMap::from_ints([[1, 2, 3], [2, 4, 6], [0, 0, 1]]).is_err());
    }
}
