//! Command-line front end. JSON goes to stdout (or `--out`), a short human
//! summary to stderr. Exit status: 0 success, 1 usage or input error,
//! 2 verification failure, 3 inconclusive search.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use planefol_core::degeneration::{degenerate_to_f0, degenerate_to_f1};
use planefol_core::group::isotropy_algebra;
use planefol_core::invariants::{flex_determinant, search_invariant_curves};
use planefol_core::singular::{singular_points, JetType};
use planefol_core::text::{parse_foliation, parse_rational};
use planefol_core::{classify_single_singularity, Chart, Coeff, Error, Foliation};

use crate::catalog::{self, catalog, closure_report, orbit_dimension_scan, verify_catalog};
use crate::config::Config;
use crate::json::{CertificateJson, CurveSearchJson, FlexJson, FormJson, IsotropyJson, LineJson, SingularityJson, TraceJson};
use crate::portrait::{orthogonal_foliation, panel, render_panels};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "planefol", version, about = "Exact analysis of plane polynomial foliations")]
pub struct Cli {
    /// TOML configuration file (portrait parameters).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct Input {
    /// A 1-form such as "x^2*dx + y^2*(x*dy - y*dx)" or "A*dX + B*dY + C*dZ".
    #[arg(long)]
    form: Option<String>,
    /// A catalog name: F1..F7, FJ, F0(λ) with rational λ, Fprime, F4perp, Ftilde.
    #[arg(long)]
    catalog: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    F1,
    F0,
    Auto,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Singular orbits, μ, Bezout, jets, Baum–Bott, isotropy, flex and invariant lines.
    Analyze(Input),
    /// Normal form of a foliation with a single singular point, with its map.
    Classify(Input),
    /// Singular orbits with Milnor numbers.
    Milnor(Input),
    /// Isotropy algebra and orbit dimension.
    Isotropy(Input),
    /// The flex determinant and its invariant lines.
    Flex(Input),
    /// Invariant algebraic curves up to a degree.
    InvariantCurves {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
    },
    /// A degeneration onto F1, onto some F0(λ), or both.
    Degenerate {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Target::Auto)]
        target: Target,
        /// A singular point "u, v" in the chart z = 1 (F0 target only).
        #[arg(long)]
        point: Option<String>,
    },
    /// Real phase portrait as SVG.
    Portrait {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "portrait.svg")]
        svg: PathBuf,
        /// Draw the orthogonal foliation in a second panel.
        #[arg(long)]
        orthogonal: bool,
        /// Also dump the streamlines as JSON.
        #[arg(long)]
        polylines: Option<PathBuf>,
    },
    /// List the catalog, or check every recorded fact with --verify.
    Catalog {
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        name: Option<String>,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Verification(_) => EXIT_VERIFICATION,
            Error::Inconclusive(_) => EXIT_INCONCLUSIVE,
            _ => EXIT_ERROR,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<String> for Failure {
    fn from(message: String) -> Self {
        Failure { code: EXIT_ERROR, message }
    }
}

type Outcome = Result<(Value, i32, String), Failure>;

fn to_value(x: impl Serialize) -> Value {
    serde_json::to_value(x).expect("serializable report")
}

fn load(input: &Input) -> Result<(Option<String>, Foliation), Failure> {
    if let Some(name) = &input.catalog {
        let e = catalog::entry(name)?;
        let f = e.foliation()?;
        return Ok((Some(e.name), f));
    }
    let text = input.form.as_deref().unwrap_or_default();
    parse_foliation(text).map(|f| (None, f)).map_err(|e| match e {
        Error::Parse { pos, ref msg } => {
            let caret = format!("{}^", " ".repeat(text[..pos.min(text.len())].chars().count()));
            Failure { code: EXIT_ERROR, message: format!("parse error at byte {pos}: {msg}\n  {text}\n  {caret}") }
        }
        other => other.into(),
    })
}

fn analyze(input: &Input) -> Outcome {
    let (name, f) = load(input)?;
    let sing = singular_points(&f)?;
    let iso = isotropy_algebra(&f)?;
    let flex = flex_determinant(&f)?;
    let lines: Vec<LineJson> = flex.invariant_lines().into_iter().map(LineJson::from).collect();
    let simple = sing.orbits.iter().filter(|o| o.jet == JetType::NonDegenerate).map(|o| o.size).sum::<usize>();
    let summary = format!(
        "{} singular point(s) in {} orbit(s), {simple} simple; sum mu = {} (expected {}); dim orbit {}; flex {}; {} invariant line(s)",
        sing.point_count(),
        sing.orbits.len(),
        sing.total_milnor(),
        sing.expected_total(),
        iso.orbit_dimension(),
        if flex.flex_is_empty() { "empty" } else { "nonempty" },
        lines.len()
    );
    let v = json!({
        "name": name,
        "form": FormJson::from(&f),
        "singularities": SingularityJson::from(&sing),
        "simple_points": simple,
        "bezout": { "total": sing.total_milnor(), "expected": sing.expected_total(), "holds": sing.bezout_holds() },
        "isotropy": IsotropyJson::new(name.clone(), &iso),
        "flex": { "empty": flex.flex_is_empty(), "h_vanishes": flex.h.is_zero(), "reduced": flex.reduced.to_string() },
        "invariant_lines": lines,
    });
    let code = if sing.bezout_holds() { EXIT_OK } else { EXIT_VERIFICATION };
    Ok((v, code, summary))
}

fn classify(input: &Input) -> Outcome {
    let (_, f) = load(input)?;
    let c = classify_single_singularity(&f)?;
    let code = if c.verified { EXIT_OK } else { EXIT_VERIFICATION };
    let summary = format!("class {}{}", c.class, if c.verified { " (map verified)" } else { " (map NOT verified)" });
    Ok((to_value(CertificateJson::from(&c)), code, summary))
}

fn milnor(input: &Input) -> Outcome {
    let (_, f) = load(input)?;
    let r = singular_points(&f)?;
    let mus: Vec<String> = r.orbits.iter().map(|o| format!("{}x{}", o.size, o.milnor)).collect();
    let summary = format!("mu: {} (sum {}, expected {})", mus.join(" + "), r.total_milnor(), r.expected_total());
    let code = if r.bezout_holds() { EXIT_OK } else { EXIT_VERIFICATION };
    Ok((to_value(SingularityJson::from(&r)), code, summary))
}

fn isotropy(input: &Input) -> Outcome {
    let (name, f) = load(input)?;
    let a = isotropy_algebra(&f)?;
    let summary = format!("dim iso {}, dim orbit {}", a.dimension(), a.orbit_dimension());
    let code = if a.is_closed()? { EXIT_OK } else { EXIT_VERIFICATION };
    Ok((to_value(IsotropyJson::new(name, &a)), code, summary))
}

fn flex(input: &Input) -> Outcome {
    let (_, f) = load(input)?;
    let r = flex_determinant(&f)?;
    let summary = if r.h.is_zero() {
        "H vanishes identically".to_string()
    } else {
        format!("reduced flex locus {}", if r.flex_is_empty() { "empty".to_string() } else { r.reduced.to_string() })
    };
    Ok((to_value(FlexJson::from(&r)), EXIT_OK, summary))
}

fn curves(input: &Input, d: usize) -> Outcome {
    let (_, f) = load(input)?;
    let s = search_invariant_curves(&f, d)?;
    let summary = if s.family {
        format!("invariant curves of degree <= {d} fill the plane")
    } else {
        format!("{} invariant curve(s) of degree <= {d}{}", s.curves.len(), if s.complete { "" } else { " (incomplete)" })
    };
    let code = if s.complete || s.family { EXIT_OK } else { EXIT_INCONCLUSIVE };
    Ok((to_value(CurveSearchJson::from(&s)), code, summary))
}

fn f0_traces(f: &Foliation, point: Option<&str>) -> Result<Vec<Value>, Failure> {
    let points: Vec<[Coeff; 3]> = match point {
        Some(p) => {
            let parts: Vec<&str> = p.split(',').collect();
            if parts.len() != 2 {
                return Err("expected --point \"u, v\"".to_string().into());
            }
            let u = parse_rational(parts[0].trim())?;
            let v = parse_rational(parts[1].trim())?;
            vec![Chart::Z.lift(u.into(), v.into())]
        }
        None => singular_points(f)?
            .orbits
            .into_iter()
            .filter(|o| o.jet == JetType::NonDegenerate)
            .map(|o| o.point)
            .collect(),
    };
    Ok(points
        .iter()
        .map(|p| {
            let at = p.iter().map(Coeff::to_string).collect::<Vec<_>>();
            match degenerate_to_f0(f, p) {
                Ok(t) => json!({ "point": at, "trace": TraceJson::from(&t) }),
                Err(e) => json!({ "point": at, "error": e.to_string() }),
            }
        })
        .collect())
}

fn degenerate(input: &Input, target: Target, point: Option<&str>) -> Outcome {
    let (_, f) = load(input)?;
    let mut v = json!({});
    let mut found = Vec::new();
    let mut inconclusive = false;
    if matches!(target, Target::F1 | Target::Auto) {
        match degenerate_to_f1(&f) {
            Ok(t) => {
                found.push("F1".to_string());
                v["f1"] = to_value(TraceJson::from(&t));
            }
            Err(e) if target == Target::F1 => return Err(e.into()),
            Err(e) => {
                inconclusive |= matches!(e, Error::Inconclusive(_));
                v["f1"] = json!({ "error": e.to_string() });
            }
        }
    }
    if matches!(target, Target::F0 | Target::Auto) {
        let traces = f0_traces(&f, point)?;
        found.extend(traces.iter().filter_map(|t| t["trace"]["target"].as_str().map(String::from)));
        if target == Target::F0 && traces.iter().all(|t| t.get("error").is_some()) {
            let msg = traces.first().and_then(|t| t["error"].as_str()).unwrap_or("no simple singular point").to_string();
            return Err(Failure { code: EXIT_ERROR, message: msg });
        }
        v["f0"] = Value::Array(traces);
    }
    let code = if found.is_empty() && inconclusive { EXIT_INCONCLUSIVE } else { EXIT_OK };
    Ok((v, code, format!("limits: {}", if found.is_empty() { "none".to_string() } else { found.join(", ") })))
}

fn portrait(input: &Input, cfg: &Config, svg: &PathBuf, orthogonal: bool, polylines: Option<&PathBuf>) -> Outcome {
    let (name, f) = load(input)?;
    let title = name.unwrap_or_else(|| "foliation".into());
    let aff = f.affine(Chart::Z);
    let mut panels = vec![panel(&title, &aff, &cfg.portrait)?];
    if orthogonal {
        panels.push(panel(&format!("{title} orthogonal"), &orthogonal_foliation(&aff)?, &cfg.portrait)?);
    }
    std::fs::write(svg, render_panels(&panels, &cfg.portrait)).map_err(|e| format!("{}: {e}", svg.display()))?;
    if let Some(p) = polylines {
        let lines: Vec<_> = panels.iter().map(|p| json!({ "title": p.title, "streamlines": p.lines })).collect();
        let text = serde_json::to_string(&lines).expect("serializable");
        std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    let counts: Vec<usize> = panels.iter().map(|p| p.lines.len()).collect();
    let truncated: usize = panels.iter().map(|p| p.lines.iter().filter(|l| l.truncated).count()).sum();
    let v = json!({ "svg": svg.display().to_string(), "streamlines": counts, "truncated": truncated, "config": cfg.portrait });
    Ok((v, EXIT_OK, format!("wrote {} ({} streamlines)", svg.display(), counts.iter().sum::<usize>())))
}

fn catalog_cmd(verify: bool, name: Option<&str>) -> Outcome {
    let entries = match name {
        Some(n) => vec![catalog::entry(n)?],
        None => catalog(),
    };
    if !verify {
        let list: Vec<Value> = entries
            .iter()
            .map(|e| {
                let facts: Vec<Value> = e.facts.iter().map(|f| json!({ "kind": f.kind(), "statement": f.statement() })).collect();
                json!({ "name": e.name, "form": e.form, "facts": facts })
            })
            .collect();
        return Ok((Value::Array(list), EXIT_OK, format!("{} entries", entries.len())));
    }
    let reports = verify_catalog(&entries);
    let scan = orbit_dimension_scan(&entries)?;
    let mut closures = serde_json::Map::new();
    let mut closure_ok = true;
    for e in &entries {
        if e.facts.iter().any(|f| f.kind() == "degeneration") {
            match closure_report(&e.name) {
                Ok(r) => closures.insert(e.name.clone(), to_value(r)),
                Err(err) => {
                    closure_ok = false;
                    closures.insert(e.name.clone(), json!({ "error": err.to_string() }))
                }
            };
        }
    }
    let failed: Vec<String> = reports
        .iter()
        .flat_map(|r| r.facts.iter().filter(|f| !f.passed).map(move |f| format!("{}: {}", r.name, f.statement)))
        .collect();
    let total: usize = reports.iter().map(|r| r.facts.len()).sum();
    let scan_ok = name.is_some() || (scan.min_orbit == 6 && scan.minimizers_closed);
    let passed = failed.is_empty() && scan_ok && closure_ok;
    let mut summary = format!("{}/{total} facts verified", total - failed.len());
    for f in &failed {
        summary.push_str(&format!("\nFAILED {f}"));
    }
    if !scan_ok {
        summary.push_str(&format!("\nFAILED orbit scan: minimum {} attained by {:?}", scan.min_orbit, scan.minimizers));
    }
    let v = json!({ "passed": passed, "entries": reports, "orbit_scan": scan, "closures": closures });
    Ok((v, if passed { EXIT_OK } else { EXIT_VERIFICATION }, summary))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let cfg = match &cli.config {
        Some(p) => match Config::load(p) {
            Ok(c) => c,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_ERROR;
            }
        },
        None => Config::default(),
    };
    let outcome = match &cli.command {
        Command::Analyze(i) => analyze(i),
        Command::Classify(i) => classify(i),
        Command::Milnor(i) => milnor(i),
        Command::Isotropy(i) => isotropy(i),
        Command::Flex(i) => flex(i),
        Command::InvariantCurves { input, max_degree } => curves(input, *max_degree),
        Command::Degenerate { input, target, point } => degenerate(input, *target, point.as_deref()),
        Command::Portrait { input, svg, orthogonal, polylines } => portrait(input, &cfg, svg, *orthogonal, polylines.as_ref()),
        Command::Catalog { verify, name } => catalog_cmd(*verify, name.as_deref()),
    };
    match outcome {
        Ok((v, code, summary)) => {
            let text = serde_json::to_string_pretty(&v).expect("serializable") + "\n";
            let written = match &cli.out {
                Some(p) => std::fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display())),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_ERROR;
            }
            let _ = writeln!(err, "{summary}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
