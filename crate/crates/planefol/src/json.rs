//! Serializable views of the exact results. Every scalar is written as an
//! exact string: rationals as `p/q`, algebraic numbers as a residue in the
//! generator named by `field`.

use serde::Serialize;

use planefol_core::classify::ClassificationCertificate;
use planefol_core::coeff::common_field;
use planefol_core::degeneration::DegenerationTrace;
use planefol_core::group::{IsotropyAlgebra, BASIS_NAMES};
use planefol_core::invariants::{CurveSearch, FlexReport, InvariantCurve, LineFactor};
use planefol_core::singular::{JetType, SingularOrbit, SingularityReport};
use planefol_core::{Chart, Coeff, Foliation, NumberField, Poly, ProjectiveMap};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldJson {
    pub generator: String,
    pub modulus: String,
}

impl From<&NumberField> for FieldJson {
    fn from(k: &NumberField) -> Self {
        FieldJson { generator: k.name().to_string(), modulus: k.modulus().display_in(k.name()) }
    }
}

fn field_of<'a>(cs: impl IntoIterator<Item = &'a Coeff>) -> Option<FieldJson> {
    common_field(cs).as_ref().map(FieldJson::from)
}

fn poly_field(ps: &[&Poly]) -> Option<FieldJson> {
    ps.iter().find_map(|p| p.field()).as_ref().map(FieldJson::from)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormJson {
    pub degree: usize,
    /// `P dx + Q dy` in the chart `Z = 1`.
    pub affine: String,
    /// `A dX + B dY + C dZ`.
    pub homogeneous: String,
    pub field: Option<FieldJson>,
}

impl From<&Foliation> for FormJson {
    fn from(f: &Foliation) -> Self {
        let [a, b, c] = f.components();
        FormJson {
            degree: f.degree(),
            affine: f.affine(Chart::Z).to_string(),
            homogeneous: f.to_string(),
            field: poly_field(&[a, b, c]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MapJson {
    /// Rows of the matrix sending new coordinates to old ones.
    pub matrix: [[String; 3]; 3],
    pub field: Option<FieldJson>,
}

impl From<&ProjectiveMap> for MapJson {
    fn from(t: &ProjectiveMap) -> Self {
        MapJson {
            matrix: t.matrix().clone().map(|row| row.map(|c| c.to_string())),
            field: field_of(t.matrix().iter().flatten()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitJson {
    pub chart: String,
    /// Minimal squarefree polynomial of the orbit, in `x` of the generic frame.
    pub factor: String,
    pub size: usize,
    pub milnor: usize,
    pub point: [String; 3],
    pub coords: [String; 2],
    pub jet: String,
    pub tangent_lines: Option<usize>,
    pub baum_bott: Option<String>,
    pub field: Option<FieldJson>,
}

impl From<&SingularOrbit> for OrbitJson {
    fn from(o: &SingularOrbit) -> Self {
        OrbitJson {
            chart: o.chart.name().to_string(),
            factor: o.factor_text(),
            size: o.size,
            milnor: o.milnor,
            point: o.point.clone().map(|c| c.to_string()),
            coords: [o.coords.0.to_string(), o.coords.1.to_string()],
            jet: o.jet.name().to_string(),
            tangent_lines: match o.jet {
                JetType::NullOneJet { lines } => Some(lines),
                _ => None,
            },
            baum_bott: o.baum_bott.as_ref().map(Coeff::to_string),
            field: field_of(o.point.iter()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingularityJson {
    pub degree: usize,
    pub frame: MapJson,
    /// Sorted by chart, then factor text.
    pub orbits: Vec<OrbitJson>,
    pub point_count: usize,
    pub total_milnor: usize,
    pub expected_total: usize,
    pub bezout_holds: bool,
}

impl From<&SingularityReport> for SingularityJson {
    fn from(r: &SingularityReport) -> Self {
        let mut orbits: Vec<OrbitJson> = r.orbits.iter().map(OrbitJson::from).collect();
        orbits.sort_by(|a, b| (&a.chart, &a.factor).cmp(&(&b.chart, &b.factor)));
        SingularityJson {
            degree: r.degree,
            frame: MapJson::from(&r.frame),
            orbits,
            point_count: r.point_count(),
            total_milnor: r.total_milnor(),
            expected_total: r.expected_total(),
            bezout_holds: r.bezout_holds(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateJson {
    pub class: String,
    /// `pullback(input, map)` equals the model form.
    pub map: MapJson,
    pub verified: bool,
    pub steps: Vec<String>,
}

impl From<&ClassificationCertificate> for CertificateJson {
    fn from(c: &ClassificationCertificate) -> Self {
        CertificateJson { class: c.class.to_string(), map: MapJson::from(&c.map), verified: c.verified, steps: c.steps.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineJson {
    pub line: String,
    pub factor: String,
    pub invariant: bool,
    pub field: Option<FieldJson>,
}

impl From<&LineFactor> for LineJson {
    fn from(l: &LineFactor) -> Self {
        LineJson { line: l.line.to_string(), factor: l.factor.display_in("t"), invariant: l.invariant, field: poly_field(&[&l.line]) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlexJson {
    pub h: String,
    pub lines: Vec<LineJson>,
    /// `H` with the invariant lines removed.
    pub reduced: String,
    pub flex_empty: bool,
    pub h_vanishes: bool,
}

impl From<&FlexReport> for FlexJson {
    fn from(r: &FlexReport) -> Self {
        FlexJson {
            h: r.h.to_string(),
            lines: r.lines.iter().map(LineJson::from).collect(),
            reduced: r.reduced.to_string(),
            flex_empty: r.flex_is_empty(),
            h_vanishes: r.h.is_zero(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveJson {
    pub degree: usize,
    pub curve: String,
    pub cofactor: String,
    pub factor: String,
    /// Product of the conjugates of `curve`.
    pub rational: String,
    pub field: Option<FieldJson>,
}

impl From<&InvariantCurve> for CurveJson {
    fn from(c: &InvariantCurve) -> Self {
        CurveJson {
            degree: c.degree(),
            curve: c.curve.to_string(),
            cofactor: c.cofactor.to_string(),
            factor: c.factor.display_in("t"),
            rational: c.rational.to_string(),
            field: poly_field(&[&c.curve]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSearchJson {
    pub max_degree: usize,
    pub curves: Vec<CurveJson>,
    pub complete: bool,
    pub family: bool,
    pub note: Option<String>,
}

impl From<&CurveSearch> for CurveSearchJson {
    fn from(s: &CurveSearch) -> Self {
        CurveSearchJson {
            max_degree: s.max_degree,
            curves: s.curves.iter().map(CurveJson::from).collect(),
            complete: s.complete,
            family: s.family,
            note: s.note.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotropyJson {
    pub name: Option<String>,
    pub dim_iso: usize,
    pub dim_orbit: usize,
    pub basis_names: [&'static str; 8],
    /// Coordinates of each generator in `basis_names`.
    pub basis: Vec<[String; 8]>,
    pub fields: Vec<String>,
    /// Whether two generators with `[X, Y] = Y` exist (only asked in dimension 2).
    pub affine_pair: Option<bool>,
    pub field: Option<FieldJson>,
}

impl IsotropyJson {
    pub fn new(name: Option<String>, a: &IsotropyAlgebra) -> Self {
        let affine_pair = if a.dimension() == 2 { a.affine_pair().ok().map(|p| p.is_some()) } else { None };
        IsotropyJson {
            name,
            dim_iso: a.dimension(),
            dim_orbit: a.orbit_dimension(),
            basis_names: BASIS_NAMES,
            basis: a.basis.iter().map(|v| v.clone().map(|c| c.to_string())).collect(),
            fields: a.fields().iter().map(|v| v.to_string()).collect(),
            affine_pair,
            field: field_of(a.basis.iter().flatten()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentificationJson {
    pub class: String,
    pub map: MapJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceJson {
    pub pre: MapJson,
    /// `φ_ε = (ε^w1 x, ε^w2 y)`.
    pub weights: [i64; 2],
    pub k: i64,
    /// `ε^(−k) φ_ε*(pre*ω)` as `[P, Q]` over `x, y, e`.
    pub family: [String; 2],
    pub limit: FormJson,
    pub degree_preserving: bool,
    pub identification: Option<IdentificationJson>,
    pub lambda: Option<String>,
    pub target: Option<String>,
    pub steps: Vec<String>,
}

impl From<&DegenerationTrace> for TraceJson {
    fn from(t: &DegenerationTrace) -> Self {
        TraceJson {
            pre: MapJson::from(&t.pre),
            weights: [t.weights.0, t.weights.1],
            k: t.k,
            family: [t.family.0.to_string(), t.family.1.to_string()],
            limit: FormJson::from(&t.limit),
            degree_preserving: t.degree_preserving,
            identification: t
                .identified
                .as_ref()
                .map(|i| IdentificationJson { class: i.class.to_string(), map: MapJson::from(&i.map) }),
            lambda: t.lambda.as_ref().map(Coeff::to_string),
            target: t.target_name(),
            steps: t.steps.clone(),
        }
    }
}
