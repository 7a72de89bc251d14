//! Exact algebra for polynomial foliations of the complex projective plane.
//!
//! Everything here is exact: rationals and simple number fields, sparse
//! polynomials, resultants and gcds. On top of that sit the geometric
//! algorithms: singular loci with Milnor numbers, jet types and Baum–Bott
//! indices, normal forms for quadratic foliations with a single singular point,
//! flex determinants and invariant curves, isotropy algebras, and
//! one-parameter degenerations.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod classify;
pub mod coeff;
pub mod degeneration;
pub mod error;
pub mod field;
pub mod foliation;
pub mod group;
pub mod invariants;
pub mod linalg;
pub mod models;
mod modular;
pub mod poly;
pub mod projective;
pub mod series;
pub mod singular;
pub mod text;
pub mod upoly;
pub mod vfield;

pub use coeff::{Coeff, NumberField, QPoly, Rational};
pub use error::{Error, Result};
pub use classify::{classify_single_singularity, ClassificationCertificate};
pub use foliation::{AffineFoliation, Chart, Foliation};
pub use models::{recognize_normal_form, ClassId};
pub use poly::{Monomial, Poly, Vars};
pub use projective::ProjectiveMap;
pub use upoly::UPoly;
pub use vfield::VectorField;
