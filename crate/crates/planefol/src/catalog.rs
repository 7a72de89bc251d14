//! Named foliations with known facts attached, each checked by computation.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use planefol_core::coeff::{NumberField, QPoly, Rational};
use planefol_core::degeneration::{degenerate_to_f1, replay, Witness};
use planefol_core::group::{isotropy_algebra, isotropy_contains};
use planefol_core::invariants::{
    flex_determinant, invariant_lines, search_invariant_curves, verify_first_integral, verify_integrating_factor,
};
use planefol_core::singular::singular_points;
use planefol_core::text::{parse_curve, parse_darboux, parse_foliation, parse_poly};
use planefol_core::{ClassId, Coeff, Error, Foliation, Poly, ProjectiveMap, Result, Vars};

use crate::json::TraceJson;

/// A checkable fact about a catalog entry.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Fact {
    Degree(usize),
    /// Sorted `(orbit size, μ)` pairs of the singular locus.
    Singularities(Vec<(usize, usize)>),
    FirstIntegral(String),
    /// `ω/g` is closed, `g` written in the chart `z = 1`.
    IntegratingFactor(String),
    IsotropyDimension(usize),
    /// The map preserves the foliation.
    Symmetry { label: String, map: ProjectiveMap },
    /// `true` when the reduced flex locus is empty.
    FlexEmpty(bool),
    /// The reduced flex locus is exactly this curve (homogeneous, up to a scalar).
    FlexLocus(String),
    /// The invariant lines, as homogeneous curves up to scalars, in any order.
    InvariantLines(Vec<String>),
    /// The curve search to this degree is complete and finds no curve.
    NoInvariantCurves(usize),
    /// The curve search to this degree finds this curve.
    InvariantCurve { max_degree: usize, curve: String },
    /// `pullback(entry, map)` is the model `class`.
    Conjugate { class: ClassId, map: ProjectiveMap },
    Witness(Witness),
    /// The flex route produces a limit in the orbit of `F1`.
    DegeneratesToF1,
}

impl Fact {
    pub fn kind(&self) -> &'static str {
        match self {
            Fact::Degree(_) => "degree",
            Fact::Singularities(_) => "singularities",
            Fact::FirstIntegral(_) => "first-integral",
            Fact::IntegratingFactor(_) => "integrating-factor",
            Fact::IsotropyDimension(_) => "isotropy-dimension",
            Fact::Symmetry { .. } => "symmetry",
            Fact::FlexEmpty(_) => "flex",
            Fact::FlexLocus(_) => "flex-locus",
            Fact::InvariantLines(_) => "invariant-lines",
            Fact::NoInvariantCurves(_) => "no-invariant-curves",
            Fact::InvariantCurve { .. } => "invariant-curve",
            Fact::Conjugate { .. } => "conjugate",
            Fact::Witness(_) => "degeneration",
            Fact::DegeneratesToF1 => "degeneration",
        }
    }

    pub fn statement(&self) -> String {
        match self {
            Fact::Degree(n) => format!("degree {n}"),
            Fact::Singularities(v) => {
                let parts: Vec<String> = v.iter().map(|(s, m)| format!("{s}x(mu={m})")).collect();
                format!("singular orbits {}", parts.join(" + "))
            }
            Fact::FirstIntegral(s) => format!("first integral {s}"),
            Fact::IntegratingFactor(g) => format!("d(omega/({g})) = 0"),
            Fact::IsotropyDimension(d) => format!("dim iso = {d}, dim orbit = {}", 8 - d),
            Fact::Symmetry { label, map } => format!("{label} = {map} preserves the foliation"),
            Fact::FlexEmpty(true) => "reduced flex locus empty".into(),
            Fact::FlexEmpty(false) => "reduced flex locus nonempty".into(),
            Fact::FlexLocus(c) => format!("reduced flex locus is {c} = 0"),
            Fact::InvariantLines(ls) => format!("invariant lines {{{}}}", ls.join(", ")),
            Fact::NoInvariantCurves(d) => format!("no invariant curve of degree <= {d}"),
            Fact::InvariantCurve { max_degree, curve } => format!("{curve} = 0 among invariant curves of degree <= {max_degree}"),
            Fact::Conjugate { class, map } => format!("conjugate to {class} by {map}"),
            Fact::Witness(Witness::Subgroup { pre, weights, to, .. }) => {
                format!("degenerates on {to}: pre {pre}, weights ({}, {})", weights.0, weights.1)
            }
            Fact::Witness(Witness::Family { p, q, to, .. }) => format!("degenerates on {to} along ({p})*dx + ({q})*dy"),
            Fact::DegeneratesToF1 => "degenerates on F1 through an ordinary flex point".into(),
        }
    }

    /// Checks the fact; `Ok(false)` or an error both mean it does not hold.
    pub fn check(&self, f: &Foliation) -> Result<bool> {
        match self {
            Fact::Degree(n) => Ok(f.degree() == *n),
            Fact::Singularities(v) => {
                let r = singular_points(f)?;
                let mut got: Vec<(usize, usize)> = r.orbits.iter().map(|o| (o.size, o.milnor)).collect();
                got.sort_unstable();
                Ok(&got == v && r.bezout_holds())
            }
            Fact::FirstIntegral(s) => verify_first_integral(f, &parse_darboux(s)?),
            Fact::IntegratingFactor(g) => verify_integrating_factor(f, &parse_curve(g)?),
            Fact::IsotropyDimension(d) => {
                let a = isotropy_algebra(f)?;
                Ok(a.dimension() == *d && a.is_closed()? && (a.dimension() != 2 || a.affine_pair()?.is_some()))
            }
            Fact::Symmetry { map, .. } => isotropy_contains(f, map),
            Fact::FlexEmpty(e) => Ok(flex_determinant(f)?.flex_is_empty() == *e),
            Fact::FlexLocus(c) => {
                let r = flex_determinant(f)?;
                proportional(&r.reduced, &parse_poly(c, &planefol_core::foliation::xyz())?)
            }
            Fact::InvariantLines(ls) => {
                let got = invariant_lines(f)?;
                if got.len() != ls.len() || got.iter().any(|l| !l.is_rational()) {
                    return Ok(false);
                }
                let xyz = planefol_core::foliation::xyz();
                for s in ls {
                    let want = parse_poly(s, &xyz)?;
                    let mut found = false;
                    for l in &got {
                        found |= proportional(&l.line, &want)?;
                    }
                    if !found {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Fact::NoInvariantCurves(d) => {
                let s = search_invariant_curves(f, *d)?;
                Ok(s.complete && !s.family && s.curves.is_empty())
            }
            Fact::InvariantCurve { max_degree, curve } => {
                let s = search_invariant_curves(f, *max_degree)?;
                let want = parse_poly(curve, &planefol_core::foliation::xyz())?;
                for c in &s.curves {
                    if proportional(&c.rational, &want)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
            Fact::Conjugate { class, map } => Ok(f.pullback(map)? == class.foliation()?),
            Fact::Witness(w) => replay(f, w).map(|_| true),
            Fact::DegeneratesToF1 => {
                let t = degenerate_to_f1(f)?;
                Ok(t.identified.is_some_and(|i| i.class == ClassId::F1) && t.degree_preserving)
            }
        }
    }
}

fn proportional(a: &Poly, b: &Poly) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Ok(a.is_zero() && b.is_zero());
    }
    Ok(a.monic()? == b.embed(a.vars())?.monic()?)
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub form: String,
    pub facts: Vec<Fact>,
}

impl CatalogEntry {
    pub fn foliation(&self) -> Result<Foliation> {
        parse_foliation(&self.form)
    }
}

fn map(m: [[i64; 3]; 3]) -> ProjectiveMap {
    ProjectiveMap::from_ints(m).expect("invertible catalog matrix")
}

fn sym(label: &str, m: [[i64; 3]; 3]) -> Fact {
    Fact::Symmetry { label: label.into(), map: map(m) }
}

fn fi(s: &str) -> Fact {
    Fact::FirstIntegral(s.into())
}

fn family(p: &str, q: &str) -> (Poly, Poly) {
    let v = Vars::new(&["x", "y", "e"]);
    (parse_poly(p, &v).expect("family"), parse_poly(q, &v).expect("family"))
}

/// The order-3 symmetries `(jx : j²y : z)` and `(j²x : jy : z)`, `j² + j + 1 = 0`.
fn cube_roots_of_unity() -> Vec<Fact> {
    let k = NumberField::new(QPoly::from_ints(&[1, 1, 1]), "j").expect("field");
    let j = k.generator();
    let j2 = &j * &j;
    let d = |a: &Coeff, b: &Coeff| ProjectiveMap::diagonal(a.clone(), b.clone(), Coeff::one()).expect("invertible");
    vec![
        Fact::Symmetry { label: "(jx : j^2y : z)".into(), map: d(&j, &j2) },
        Fact::Symmetry { label: "(j^2x : jy : z)".into(), map: d(&j2, &j) },
    ]
}

fn f0_entry(l: &Rational) -> CatalogEntry {
    let id = ClassId::F0(l.clone());
    let mut facts = vec![Fact::Degree(2), Fact::Singularities(vec![(1, 1), (1, 6)]), sym("(4x, 2y)", [[4, 0, 0], [0, 2, 0], [0, 0, 1]])];
    let minus = |n: i64| *l == Rational::from_integer(n.into());
    if minus(-1) {
        facts.extend([
            Fact::IntegratingFactor("y^2".into()),
            fi("exp((x + y^2)/(y))"),
            Fact::IsotropyDimension(2),
            Fact::Conjugate { class: ClassId::F5, map: map([[0, 0, -1], [0, 1, 0], [1, 0, 0]]) },
        ]);
    } else if minus(-2) {
        facts.extend([Fact::IntegratingFactor("y^3".into()), fi("prod[(y)]*exp((x)/(y^2))"), Fact::IsotropyDimension(1)]);
    } else {
        let c = l + Rational::from_integer(2.into());
        let conic = format!("({c})*x + y^2");
        facts.extend([
            Fact::IntegratingFactor(format!("y*(({c})*x + y^2)")),
            fi(&format!("prod[({conic}), (y)^({l})]")),
            Fact::IsotropyDimension(1),
            Fact::InvariantCurve { max_degree: 2, curve: format!("({c})*X*Z + Y^2") },
        ]);
    }
    CatalogEntry { name: id.to_string(), form: id.form_text(), facts }
}

/// Values of `λ` listed by default.
pub const F0_SAMPLES: [(i64, i64); 5] = [(-2, 1), (-1, 1), (1, 1), (3, 1), (-1, 2)];

/// Every named entry, in display order.
pub fn catalog() -> Vec<CatalogEntry> {
    let e = |name: &str, form: String, facts: Vec<Fact>| CatalogEntry { name: name.into(), form, facts };
    let (f3p, f3q) = family("x*(e*y + (1 - e)*x) - y*(e*x^2 + y^2)", "x*(e*x^2 + y^2)");
    let mut out = vec![
        e(
            "F1",
            ClassId::F1.form_text(),
            vec![
                Fact::Degree(2),
                Fact::Singularities(vec![(1, 7)]),
                fi("exp((y^3 - 3*x^2)/(3*x^3))"),
                fi("exp((y^3 - 3*z)/(3))"),
                Fact::IntegratingFactor("x^4".into()),
                Fact::IsotropyDimension(2),
                sym("(27x : 9y : z + 2x)", [[27, 0, 0], [0, 9, 0], [2, 0, 1]]),
                sym("(8x, 4y)", [[8, 0, 0], [0, 4, 0], [0, 0, 1]]),
                sym("(x/(1 + 3x), y/(1 + 3x))", [[1, 0, 0], [0, 1, 0], [3, 0, 1]]),
                Fact::FlexEmpty(false),
                Fact::FlexLocus("Y".into()),
                Fact::InvariantCurve { max_degree: 1, curve: "X".into() },
            ],
        ),
        e(
            "F2",
            ClassId::F2.form_text(),
            vec![
                Fact::Degree(2),
                Fact::Singularities(vec![(1, 7)]),
                fi("prod[(2*x^2 + x + 2*x*y + y^2), (x)^-2]*exp((-y)/(x))"),
                Fact::IsotropyDimension(1),
                sym("(x : x + y : -3x - 2y + z)", [[1, 0, 0], [1, 1, 0], [-3, -2, 1]]),
                Fact::FlexEmpty(false),
                Fact::Witness(Witness::Subgroup {
                    pre: ProjectiveMap::identity(),
                    weights: (-3, -2),
                    to: ClassId::F1,
                    map: ProjectiveMap::identity(),
                }),
            ],
        ),
        e(
            "F3",
            ClassId::F3.form_text(),
            vec![
                Fact::Degree(2),
                Fact::Singularities(vec![(1, 7)]),
                fi("prod[(y), (x)^-1]*exp((y^2 - 2*x)/(2*x^2))"),
                fi("prod[(y)]*exp((y^2 - 2*z)/(2))"),
                Fact::IntegratingFactor("x^3*y".into()),
                Fact::IsotropyDimension(1),
                sym("(x : y : z + 2x)", [[1, 0, 0], [0, 1, 0], [2, 0, 1]]),
                sym("(x : -y : z)", [[1, 0, 0], [0, -1, 0], [0, 0, 1]]),
                Fact::FlexEmpty(false),
                Fact::Witness(Witness::Family { p: f3p, q: f3q, from: ClassId::F3, to: ClassId::F1, map: ProjectiveMap::identity() }),
            ],
        ),
        e("F4", ClassId::F4.form_text(), {
            let mut v = vec![Fact::Degree(2), Fact::Singularities(vec![(1, 7)]), Fact::IsotropyDimension(0)];
            v.extend(cube_roots_of_unity());
            v.extend([Fact::FlexEmpty(false), Fact::NoInvariantCurves(3), Fact::DegeneratesToF1]);
            v
        }),
        e(
            "F5",
            ClassId::F5.form_text(),
            vec![
                Fact::Degree(2),
                Fact::Singularities(vec![(1, 1), (1, 6)]),
                fi("exp((y^2 - x)/(x*y))"),
                Fact::IsotropyDimension(2),
                sym("(4x, 2y)", [[4, 0, 0], [0, 2, 0], [0, 0, 1]]),
                sym("(x/(1 + 2y), y/(1 + 2y))", [[1, 0, 0], [0, 1, 0], [0, 2, 1]]),
                Fact::FlexEmpty(true),
                Fact::InvariantLines(vec!["X".into(), "Y".into()]),
            ],
        ),
        e(
            "F6",
            ClassId::F6.form_text(),
            vec![
                Fact::Degree(2),
                Fact::Singularities(vec![(1, 1); 7]),
                fi("prod[(x), (y + z), (y)^-1, (x + z)^-1]"),
                Fact::IsotropyDimension(0),
                Fact::FlexEmpty(true),
                Fact::Witness(Witness::Subgroup {
                    pre: map([[1, 0, 0], [0, 1, 0], [0, 0, -1]]),
                    weights: (-1, -1),
                    to: ClassId::F7,
                    map: map([[1, -1, 0], [0, -1, 0], [0, 0, 1]]),
                }),
            ],
        ),
        e(
            "F7",
            ClassId::F7.form_text(),
            vec![
                Fact::Degree(2),
                Fact::Singularities(vec![(1, 1), (1, 1), (1, 1), (1, 4)]),
                fi("prod[(x), (z), (y)^-1, (y - x)^-1]"),
                Fact::IsotropyDimension(1),
                sym("(2x, 2y)", [[2, 0, 0], [0, 2, 0], [0, 0, 1]]),
                Fact::FlexEmpty(true),
                Fact::Witness(Witness::Subgroup {
                    pre: map([[1, 0, 0], [0, 1, 0], [0, -1, 1]]),
                    weights: (-2, -1),
                    to: ClassId::F5,
                    map: ProjectiveMap::identity(),
                }),
            ],
        ),
        e(
            "FJ",
            ClassId::FJ.form_text(),
            vec![
                Fact::Degree(2),
                Fact::Singularities(vec![(1, 1), (6, 1)]),
                Fact::IsotropyDimension(0),
                Fact::FlexEmpty(false),
                Fact::InvariantLines(vec![]),
                Fact::NoInvariantCurves(3),
                Fact::DegeneratesToF1,
            ],
        ),
    ];
    out.extend(F0_SAMPLES.iter().map(|&(n, d)| f0_entry(&Rational::new(n.into(), d.into()))));
    out.extend([
        e(
            "Fprime",
            "y*(x^2 - y^2)*dx + x*(y^2 - x^2 - x)*dy".into(),
            vec![
                Fact::Degree(2),
                fi("exp((x^2 + y^2 + x)/(x*y))"),
                Fact::Singularities(vec![(1, 1), (1, 6)]),
                Fact::IsotropyDimension(2),
                sym("(x/(1 + 2y), y/(1 + 2y))", [[1, 0, 0], [0, 1, 0], [0, 2, 1]]),
                Fact::FlexEmpty(true),
                Fact::Conjugate { class: ClassId::F5, map: map([[1, 0, 0], [0, 1, 0], [-1, 0, -1]]) },
                Fact::Witness(Witness::Subgroup {
                    pre: ProjectiveMap::identity(),
                    weights: (2, 1),
                    to: ClassId::F5,
                    map: map([[-1, 0, 0], [0, 1, 0], [0, 0, 1]]),
                }),
            ],
        ),
        e(
            "F4perp",
            "-(x + y^2 - x^2*y)*dx + x*(x + y^2)*dy".into(),
            vec![
                Fact::Degree(3),
                Fact::Singularities(vec![(1, 2), (1, 2), (1, 7), (2, 1)]),
                Fact::InvariantLines(vec!["X".into(), "Z".into()]),
            ],
        ),
        e(
            "Ftilde",
            "y^7*dx - x*dy".into(),
            vec![Fact::Degree(7), Fact::Singularities(vec![(1, 1), (1, 7), (1, 49)])],
        ),
    ]);
    out
}

/// Looks an entry up by name; `F0(λ)` accepts any nonzero rational `λ`.
pub fn entry(name: &str) -> Result<CatalogEntry> {
    let t = name.trim();
    if let Some(e) = catalog().into_iter().find(|e| e.name.eq_ignore_ascii_case(t)) {
        return Ok(e);
    }
    if let Ok(ClassId::F0(l)) = ClassId::from_str(t) {
        if l != Rational::from_integer(0.into()) {
            return Ok(f0_entry(&l));
        }
    }
    Err(Error::Parse { pos: 0, msg: format!("unknown catalog name {t:?}") })
}

#[derive(Clone, Debug, Serialize)]
pub struct FactResult {
    pub kind: &'static str,
    pub statement: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub form: String,
    pub facts: Vec<FactResult>,
    pub passed: bool,
}

pub fn verify_entry(e: &CatalogEntry) -> EntryReport {
    let f = e.foliation();
    let facts: Vec<FactResult> = e
        .facts
        .par_iter()
        .map(|fact| {
            let (passed, detail) = match f.as_ref().map_err(Clone::clone).and_then(|f| fact.check(f)) {
                Ok(true) => (true, None),
                Ok(false) => (false, Some("does not hold".to_string())),
                Err(err) => (false, Some(err.to_string())),
            };
            FactResult { kind: fact.kind(), statement: fact.statement(), passed, detail }
        })
        .collect();
    let passed = facts.iter().all(|r| r.passed);
    EntryReport { name: e.name.clone(), form: e.form.clone(), facts, passed }
}

/// Checks every fact of every entry.
pub fn verify_catalog(entries: &[CatalogEntry]) -> Vec<EntryReport> {
    entries.par_iter().map(verify_entry).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanRow {
    pub name: String,
    pub dim_iso: usize,
    pub dim_orbit: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitScan {
    pub rows: Vec<ScanRow>,
    pub min_orbit: usize,
    /// Entries attaining the minimum.
    pub minimizers: Vec<String>,
    /// Every minimizer is `F1`, `F5` or verifiably conjugate to one of them.
    pub minimizers_closed: bool,
}

/// Orbit dimensions of the degree-2 entries.
pub fn orbit_dimension_scan(entries: &[CatalogEntry]) -> Result<OrbitScan> {
    let rows: Vec<Result<Option<ScanRow>>> = entries
        .par_iter()
        .map(|e| {
            let f = e.foliation()?;
            if f.degree() != 2 {
                return Ok(None);
            }
            let a = isotropy_algebra(&f)?;
            Ok(Some(ScanRow { name: e.name.clone(), dim_iso: a.dimension(), dim_orbit: a.orbit_dimension() }))
        })
        .collect();
    let rows: Vec<ScanRow> = rows.into_iter().collect::<Result<Vec<_>>>()?.into_iter().flatten().collect();
    let min_orbit = rows.iter().map(|r| r.dim_orbit).min().unwrap_or(8);
    let minimizers: Vec<String> = rows.iter().filter(|r| r.dim_orbit == min_orbit).map(|r| r.name.clone()).collect();
    let mut minimizers_closed = true;
    for name in &minimizers {
        if name == "F1" || name == "F5" {
            continue;
        }
        let e = entries.iter().find(|e| &e.name == name).expect("listed entry");
        let f = e.foliation()?;
        let mut ok = false;
        for fact in &e.facts {
            if let Fact::Conjugate { class, .. } = fact {
                ok |= matches!(class, ClassId::F1 | ClassId::F5) && fact.check(&f)?;
            }
        }
        minimizers_closed &= ok;
    }
    Ok(OrbitScan { rows, min_orbit, minimizers, minimizers_closed })
}

#[derive(Clone, Debug, Serialize)]
pub struct Reach {
    pub target: String,
    /// Entry names from the source to the target.
    pub path: Vec<String>,
    pub trace: TraceJson,
}

/// Orbits reached from an entry by replaying its witnesses, then those of each target.
pub fn closure_report(name: &str) -> Result<Vec<Reach>> {
    let entries = catalog();
    let mut out: Vec<Reach> = Vec::new();
    let mut queue: Vec<(String, Vec<String>)> = vec![(entry(name)?.name, vec![])];
    while let Some((current, path)) = queue.pop() {
        let e = entry(&current)?;
        let f = e.foliation()?;
        for fact in &e.facts {
            let trace = match fact {
                Fact::Witness(w) => replay(&f, w)?,
                Fact::DegeneratesToF1 => degenerate_to_f1(&f)?,
                _ => continue,
            };
            let target = trace.target_name().ok_or_else(|| Error::Verification("unidentified limit".into()))?;
            if out.iter().any(|r| r.target == target) {
                continue;
            }
            let mut p = path.clone();
            p.push(current.clone());
            if entries.iter().any(|x| x.name == target) {
                queue.push((target.clone(), p.clone()));
            }
            p.push(target.clone());
            out.push(Reach { target, path: p, trace: TraceJson::from(&trace) });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        assert_eq!(entry("fj").unwrap().name, "FJ");
        assert_eq!(entry("F0(5/3)").unwrap().name, "F0(5/3)");
        assert!(entry("F0(0)").is_err());
        assert!(entry("F9").is_err());
    }

    #[test]
    fn pencil_closures() {
        let r = closure_report("F6").unwrap();
        let targets: Vec<&str> = r.iter().map(|x| x.target.as_str()).collect();
        assert_eq!(targets, ["F7", "F5"]);
        assert_eq!(r[1].path, ["F6", "F7", "F5"]);
        assert!(closure_report("F5").unwrap().is_empty());
    }
}
