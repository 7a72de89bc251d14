//! Named quadratic foliations, written in the chart `z = 1`.

use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;
use core::str::FromStr;

use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::foliation::{Chart, Foliation};
use crate::text::parse_affine;

/// Identifier of a named foliation. `F0(λ)` is the family `y dx + (λx + y²) dy`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ClassId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    FJ,
    F0(Rational),
}

impl ClassId {
    /// The fixed forms, in the order they are tried during recognition.
    pub const FIXED: [ClassId; 8] =
        [ClassId::F1, ClassId::F2, ClassId::F3, ClassId::F4, ClassId::F5, ClassId::F6, ClassId::F7, ClassId::FJ];

    pub fn form_text(&self) -> String {
        match self {
            ClassId::F1 => "x^2*dx + y^2*(x*dy - y*dx)".into(),
            ClassId::F2 => "x^2*dx + (x + y^2)*(x*dy - y*dx)".into(),
            ClassId::F3 => "x*y*dx + (x^2 + y^2)*(x*dy - y*dx)".into(),
            ClassId::F4 => "(x + y^2 - x^2*y)*dy + x*(x + y^2)*dx".into(),
            ClassId::F5 => "x^2*dy + y^2*(x*dy - y*dx)".into(),
            ClassId::F6 => "y*(y + 1)*dx - x*(x + 1)*dy".into(),
            ClassId::F7 => "y^2*dx + (x^2 - 2*x*y)*dy".into(),
            ClassId::FJ => "(x^2*y - 1)*dx + (y^2 - x^3)*dy".into(),
            ClassId::F0(l) => format!("y*dx + ({l}*x + y^2)*dy"),
        }
    }

    pub fn foliation(&self) -> Result<Foliation> {
        parse_affine(&self.form_text())?.to_foliation()
    }

    pub fn is_single_singularity_model(&self) -> bool {
        matches!(self, ClassId::F1 | ClassId::F2 | ClassId::F3 | ClassId::F4)
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassId::F0(l) => write!(f, "F0({l})"),
            other => f.write_str(match other {
                ClassId::F1 => "F1",
                ClassId::F2 => "F2",
                ClassId::F3 => "F3",
                ClassId::F4 => "F4",
                ClassId::F5 => "F5",
                ClassId::F6 => "F6",
                ClassId::F7 => "F7",
                _ => "FJ",
            }),
        }
    }
}

impl FromStr for ClassId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::Parse { pos: 0, msg: format!("unknown class {t:?}") };
        if let Some(inner) = t.strip_prefix("F0(").and_then(|r| r.strip_suffix(')')) {
            return Rational::from_str(inner.trim()).map(ClassId::F0).map_err(|_| bad());
        }
        ClassId::FIXED.iter().find(|c| c.to_string().eq_ignore_ascii_case(t)).cloned().ok_or_else(bad)
    }
}

/// Identifies `f` with one of the named forms, exactly and up to a scalar.
pub fn recognize_normal_form(f: &Foliation) -> Option<ClassId> {
    if f.degree() != 2 {
        return None;
    }
    if let Some(c) = ClassId::FIXED.iter().find(|c| c.foliation().is_ok_and(|g| g == *f)) {
        return Some(c.clone());
    }
    // y dx + (λx + y²) dy
    let a = f.affine(Chart::Z);
    let (p, q) = (a.p(), a.q());
    let c = p.coeff(&[0, 1]);
    if c.is_zero() || p.len() != 1 || q.len() > 2 || q.coeff(&[0, 2]) != c {
        return None;
    }
    let lx = q.coeff(&[1, 0]);
    if q.len() == 2 && lx.is_zero() {
        return None;
    }
    let lambda = lx.checked_div(&c).ok()?;
    let lambda = lambda.as_rational()?.clone();
    let id = ClassId::F0(lambda);
    id.foliation().is_ok_and(|g| g == *f).then_some(id)
}

/// `F0(λ)` as a foliation, for `λ ≠ 0`.
pub fn f0(lambda: &Coeff) -> Result<Foliation> {
    let l = lambda.as_rational().ok_or_else(|| Error::Unsupported("F0 needs a rational parameter".into()))?;
    ClassId::F0(l.clone()).foliation()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::text::parse_foliation;

    #[test]
    fn named_forms_parse_with_degree_two() {
        for c in ClassId::FIXED {
            assert_eq!(c.foliation().unwrap().degree(), 2, "{c}");
            assert_eq!(recognize_normal_form(&c.foliation().unwrap()), Some(c.clone()));
            assert_eq!(c.to_string().parse::<ClassId>().unwrap(), c);
        }
        assert_eq!("F0(-2)".parse::<ClassId>().unwrap(), ClassId::F0(rat(-2, 1)));
        assert!("F9".parse::<ClassId>().is_err());
    }

    #[test]
    fn recognition_up_to_scalar() {
        let scaled = parse_foliation("5*x^2*dx + 5*y^2*(x*dy - y*dx)").unwrap();
        assert_eq!(recognize_normal_form(&scaled), Some(ClassId::F1));
        let f = parse_foliation("y*dx + (-2*x + y^2)*dy").unwrap();
        assert_eq!(recognize_normal_form(&f), Some(ClassId::F0(rat(-2, 1))));
        let g = parse_foliation("3*y*dx + (x + 3*y^2)*dy").unwrap();
        assert_eq!(recognize_normal_form(&g), Some(ClassId::F0(rat(1, 3))));
        let h = parse_foliation("y*dx + (x + y^2 + x*y)*dy").unwrap();
        assert_eq!(recognize_normal_form(&h), None);
    }
}
