//! Real phase portraits in double precision.
//!
//! Leaves are traced as integral curves of the unit direction field
//! `(Q, −P)/|(Q, −P)|` with the Dormand–Prince 5(4) pair, both ways from each
//! seed of a regular grid, and drawn as SVG paths.

use std::fmt::Write as _;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use planefol_core::singular::singular_points;
use planefol_core::{AffineFoliation, Chart, Coeff, Error, Foliation, QPoly, Result};

/// Portrait parameters; every field has a default, so a config file may set any subset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortraitConfig {
    /// `[xmin, xmax, ymin, ymax]`.
    pub viewport: [f64; 4],
    /// Seeds per side of the grid.
    pub seeds: usize,
    pub min_step: f64,
    pub max_step: f64,
    /// Target error in position over a whole streamline.
    pub tolerance: f64,
    pub max_arc_length: f64,
    /// Streamlines stop this close to a singular point.
    pub stop_radius: f64,
    /// Width of one panel in pixels.
    pub width: u32,
}

impl Default for PortraitConfig {
    fn default() -> Self {
        PortraitConfig {
            viewport: [-2.0, 2.0, -2.0, 2.0],
            seeds: 10,
            min_step: 1e-7,
            max_step: 0.05,
            tolerance: 1e-8,
            max_arc_length: 8.0,
            stop_radius: 0.02,
            width: 480,
        }
    }
}

impl PortraitConfig {
    pub fn validate(&self) -> std::result::Result<(), String> {
        let [x0, x1, y0, y1] = self.viewport;
        if !self.viewport.iter().all(|v| v.is_finite()) || x0 >= x1 || y0 >= y1 {
            return Err(format!("viewport {:?} must be finite with min < max", self.viewport));
        }
        if self.seeds < 1 {
            return Err("seeds must be at least 1".into());
        }
        // written so that NaN fails every check
        let positive = |v: f64| v > 0.0;
        if !positive(self.tolerance) {
            return Err("tolerance must be positive".into());
        }
        if !(self.min_step > 0.0 && self.min_step <= self.max_step) {
            return Err("need 0 < min_step <= max_step".into());
        }
        if !positive(self.max_arc_length) || !(positive(self.stop_radius) || self.stop_radius == 0.0) || self.width == 0 {
            return Err("max_arc_length, stop_radius and width must be positive".into());
        }
        Ok(())
    }

    fn contains(&self, p: [f64; 2]) -> bool {
        let [x0, x1, y0, y1] = self.viewport;
        (x0..=x1).contains(&p[0]) && (y0..=y1).contains(&p[1])
    }
}

/// `P dx + Q dy ↦ −Q dx + P dy`.
pub fn orthogonal_foliation(f: &AffineFoliation) -> Result<AffineFoliation> {
    f.orthogonal()
}

fn to_f64(c: &Coeff) -> Result<f64> {
    c.as_rational()
        .and_then(ToPrimitive::to_f64)
        .ok_or_else(|| Error::Unsupported(format!("coefficient {c} is not a real rational")))
}

/// `P` and `Q` compiled to floating point.
#[derive(Clone, Debug)]
pub struct NumericForm {
    p: Vec<(f64, i32, i32)>,
    q: Vec<(f64, i32, i32)>,
}

impl NumericForm {
    pub fn new(f: &AffineFoliation) -> Result<Self> {
        let terms = |poly: &planefol_core::Poly| -> Result<Vec<(f64, i32, i32)>> {
            poly.terms().map(|(m, c)| Ok((to_f64(c)?, m.0[0] as i32, m.0[1] as i32))).collect()
        };
        Ok(NumericForm { p: terms(f.p())?, q: terms(f.q())? })
    }

    pub fn eval(&self, x: f64, y: f64) -> (f64, f64) {
        let ev = |ts: &[(f64, i32, i32)]| ts.iter().map(|&(c, i, j)| c * x.powi(i) * y.powi(j)).sum::<f64>();
        (ev(&self.p), ev(&self.q))
    }

    /// Unit tangent `(Q, −P)/|·|`, or `None` where the form (nearly) vanishes.
    fn direction(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        let (a, b) = self.eval(p[0], p[1]);
        let n = a.hypot(b);
        (n > 1e-14 && n.is_finite()).then(|| [b / n, -a / n])
    }
}

/// Complex roots by the Durand–Kerner iteration, polished on the real axis.
fn real_roots(m: &QPoly) -> Vec<f64> {
    let Some(d) = m.degree().filter(|&d| d > 0) else { return Vec::new() };
    let lc = m.lc().to_f64().unwrap_or(1.0);
    let c: Vec<f64> = m.coeffs().iter().map(|q| q.to_f64().unwrap_or(0.0) / lc).collect();
    let eval = |z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &k| acc * z + k);
    let mut z: Vec<Complex64> = (0..d).map(|k| Complex64::new(0.4, 0.9).powu(k as u32 + 1)).collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let den = (0..d).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let step = eval(z[i]) / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-14 {
            break;
        }
    }
    let dc: Vec<f64> = (1..c.len()).map(|k| c[k] * k as f64).collect();
    let evr = |x: f64, cs: &[f64]| cs.iter().rev().fold(0.0, |acc, &k| acc * x + k);
    let mut out: Vec<f64> = z
        .iter()
        .filter(|w| w.im.abs() < 1e-7 * (1.0 + w.re.abs()))
        .map(|w| {
            let mut x = w.re;
            for _ in 0..3 {
                let dv = evr(x, &dc);
                if dv != 0.0 {
                    x -= evr(x, &c) / dv;
                }
            }
            x
        })
        .collect();
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    out
}

/// Real singular points in the chart `z = 1`, computed exactly then evaluated.
pub fn real_singular_points(f: &Foliation) -> Result<Vec<[f64; 2]>> {
    let report = singular_points(f)?;
    let mut out = Vec::new();
    for o in &report.orbits {
        let roots = if o.size == 1 { vec![0.0] } else { real_roots(&o.factor) };
        for r in roots {
            let at = |c: &Coeff| match c {
                Coeff::Rat(q) => q.to_f64().unwrap_or(f64::NAN),
                Coeff::Alg(res, _) => res.coeffs().iter().rev().fold(0.0, |acc, k| acc * r + k.to_f64().unwrap_or(0.0)),
            };
            let [x, y, z] = [at(&o.point[0]), at(&o.point[1]), at(&o.point[2])];
            if z.abs() > 1e-12 * (x.abs() + y.abs() + z.abs()) {
                out.push([x / z, y / z]);
            }
        }
    }
    out.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Streamline {
    pub seed: [f64; 2],
    pub points: Vec<[f64; 2]>,
    /// The step size fell below `min_step` before a regular stop.
    pub truncated: bool,
}

// Dormand–Prince tableau
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

/// One trial step along the line field, oriented like `prev`; `None` if the
/// field vanishes at a stage.
fn dopri_step(f: &NumericForm, p: [f64; 2], h: f64, prev: [f64; 2]) -> Option<([f64; 2], f64)> {
    let mut k = [[0.0f64; 2]; 7];
    for s in 0..7 {
        let mut q = p;
        for (j, kj) in k.iter().enumerate().take(s) {
            q[0] += h * A[s][j] * kj[0];
            q[1] += h * A[s][j] * kj[1];
        }
        let mut d = f.direction(q)?;
        // keep the orientation continuous: the line field has no sign
        if d[0] * prev[0] + d[1] * prev[1] < 0.0 {
            d = [-d[0], -d[1]];
        }
        k[s] = d;
    }
    let mut y5 = p;
    let mut err = [0.0f64; 2];
    for s in 0..7 {
        for i in 0..2 {
            y5[i] += h * B5[s] * k[s][i];
            err[i] += h * (B5[s] - B4[s]) * k[s][i];
        }
    }
    Some((y5, err[0].abs().max(err[1].abs())))
}

fn trace_half(f: &NumericForm, seed: [f64; 2], sign: f64, cfg: &PortraitConfig, sing: &[[f64; 2]]) -> (Vec<[f64; 2]>, bool) {
    let mut pts = vec![seed];
    let Some(d0) = f.direction(seed) else { return (pts, false) };
    let mut heading = [sign * d0[0], sign * d0[1]];
    let mut p = seed;
    let mut h = cfg.max_step.min(0.01);
    let mut arc = 0.0;
    // error per unit length, so the whole arc stays within `tolerance`
    let per_len = cfg.tolerance / cfg.max_arc_length;
    while arc < cfg.max_arc_length {
        h = h.min(cfg.max_arc_length - arc).max(cfg.min_step.min(cfg.max_arc_length - arc));
        let Some((next, err)) = dopri_step(f, p, h, heading) else { break };
        // leaves bend on the scale of the distance to a singular point, so the
        // error budget shrinks with it
        let near = sing.iter().map(|s| (s[0] - p[0]).hypot(s[1] - p[1])).fold(1.0f64, f64::min);
        let allowed = per_len * h * near;
        if err > allowed && h > cfg.min_step {
            let shrink = 0.9 * (allowed / err).powf(0.2);
            h = (h * shrink.clamp(0.1, 0.9)).max(cfg.min_step);
            continue;
        }
        if err > allowed {
            return (pts, true);
        }
        let step = [next[0] - p[0], next[1] - p[1]];
        let len = step[0].hypot(step[1]);
        if len > 0.0 {
            heading = [step[0] / len, step[1] / len];
        }
        p = next;
        arc += h;
        if !cfg.contains(p) {
            break;
        }
        pts.push(p);
        if sing.iter().any(|s| (s[0] - p[0]).hypot(s[1] - p[1]) < cfg.stop_radius) {
            break;
        }
        let grow = if err == 0.0 { 5.0 } else { (0.9 * (allowed / err).powf(0.2)).clamp(0.2, 5.0) };
        h = (h * grow).min(cfg.max_step);
    }
    (pts, false)
}

/// Streamlines through the seed grid, in seed order.
pub fn integrate_streamlines(f: &AffineFoliation, cfg: &PortraitConfig) -> Result<Vec<Streamline>> {
    cfg.validate().map_err(Error::Degenerate)?;
    let num = NumericForm::new(f)?;
    let sing = match f.chart() {
        Chart::Z => real_singular_points(&f.to_foliation()?).unwrap_or_default(),
        _ => Vec::new(),
    };
    let [x0, x1, y0, y1] = cfg.viewport;
    let n = cfg.seeds;
    let seeds: Vec<[f64; 2]> = (0..n * n)
        .map(|k| {
            let (i, j) = (k % n, k / n);
            [x0 + (x1 - x0) * (i as f64 + 0.5) / n as f64, y0 + (y1 - y0) * (j as f64 + 0.5) / n as f64]
        })
        .collect();
    use rayon::prelude::*;
    Ok(seeds
        .par_iter()
        .filter(|s| !sing.iter().any(|p| (p[0] - s[0]).hypot(p[1] - s[1]) < cfg.stop_radius))
        .map(|&s| {
            let (fwd, t1) = trace_half(&num, s, 1.0, cfg, &sing);
            let (bwd, t2) = trace_half(&num, s, -1.0, cfg, &sing);
            let mut points: Vec<[f64; 2]> = bwd.into_iter().rev().collect();
            points.extend_from_slice(&fwd[1..]);
            Streamline { seed: s, points, truncated: t1 || t2 }
        })
        .collect())
}

/// Largest change of `integral` along any streamline, relative to its size at the seed.
pub fn max_drift(lines: &[Streamline], integral: impl Fn(f64, f64) -> f64) -> f64 {
    lines
        .iter()
        .map(|l| {
            let i0 = integral(l.seed[0], l.seed[1]);
            l.points
                .iter()
                .map(|p| (integral(p[0], p[1]) - i0).abs() / i0.abs().max(1.0))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

/// One drawing: a title, streamlines and the singular points to mark.
#[derive(Clone, Debug)]
pub struct Panel {
    pub title: String,
    pub lines: Vec<Streamline>,
    pub singular: Vec<[f64; 2]>,
}

/// Traces a foliation into a panel.
pub fn panel(title: &str, f: &AffineFoliation, cfg: &PortraitConfig) -> Result<Panel> {
    let lines = integrate_streamlines(f, cfg)?;
    let singular = match f.chart() {
        Chart::Z => real_singular_points(&f.to_foliation()?).unwrap_or_default(),
        _ => Vec::new(),
    };
    Ok(Panel { title: title.to_string(), lines, singular })
}

/// A single-panel SVG of the given streamlines.
pub fn render_svg(lines: &[Streamline], cfg: &PortraitConfig) -> String {
    render_panels(&[Panel { title: String::new(), lines: lines.to_vec(), singular: Vec::new() }], cfg)
}

/// Panels side by side, all with the same viewport.
pub fn render_panels(panels: &[Panel], cfg: &PortraitConfig) -> String {
    let [x0, x1, y0, y1] = cfg.viewport;
    let w = cfg.width as f64;
    let h = (w * (y1 - y0) / (x1 - x0)).round();
    let title_h = 24.0;
    let gap = 16.0;
    let count = panels.len().max(1) as f64;
    let total_w = count * w + (count - 1.0) * gap;
    let total_h = h + title_h;
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{total_w}" height="{total_h}" viewBox="0 0 {total_w} {total_h}">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{total_w}" height="{total_h}" fill="white"/>"#);
    for (i, p) in panels.iter().enumerate() {
        let ox = i as f64 * (w + gap);
        let map = |q: [f64; 2]| (ox + (q[0] - x0) / (x1 - x0) * w, title_h + (y1 - q[1]) / (y1 - y0) * h);
        let _ = writeln!(s, r#"<g id="panel{i}">"#);
        let _ = writeln!(s, r#"<clipPath id="clip{i}"><rect x="{ox}" y="{title_h}" width="{w}" height="{h}"/></clipPath>"#);
        if !p.title.is_empty() {
            let _ = writeln!(
                s,
                r#"<text x="{:.1}" y="17" font-family="serif" font-size="15" text-anchor="middle">{}</text>"#,
                ox + w / 2.0,
                escape(&p.title)
            );
        }
        let _ = writeln!(s, r#"<rect x="{ox}" y="{title_h}" width="{w}" height="{h}" fill="none" stroke="black" stroke-width="1"/>"#);
        let _ = writeln!(s, r#"<g clip-path="url(#clip{i})" fill="none" stroke="steelblue" stroke-width="0.8">"#);
        for l in p.lines.iter().filter(|l| l.points.len() > 1) {
            let mut d = String::new();
            for (k, q) in l.points.iter().enumerate() {
                let (a, b) = map(*q);
                let _ = write!(d, "{}{a:.2} {b:.2}", if k == 0 { "M" } else { " L" });
            }
            let _ = writeln!(s, r#"<path d="{d}"/>"#);
        }
        let _ = writeln!(s, "</g>");
        for q in p.singular.iter().filter(|q| cfg.contains(**q)) {
            let (a, b) = map(*q);
            let _ = writeln!(s, r#"<circle cx="{a:.2}" cy="{b:.2}" r="3" fill="crimson"/>"#);
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use planefol_core::text::parse_affine;

    type Integral = fn(f64, f64) -> f64;

    #[test]
    fn orthogonal_of_f4() {
        let f4 = parse_affine("(x + y^2 - x^2*y)*dy + x*(x + y^2)*dx").unwrap();
        let expected = parse_affine("-(x + y^2 - x^2*y)*dx + x*(x + y^2)*dy").unwrap();
        assert_eq!(orthogonal_foliation(&f4).unwrap(), expected);
        let dx = parse_affine("1*dx").unwrap();
        assert_eq!(orthogonal_foliation(&dx).unwrap(), parse_affine("1*dy").unwrap());
        let back = orthogonal_foliation(&orthogonal_foliation(&f4).unwrap()).unwrap();
        assert_eq!(back.p(), &-f4.p());
    }

    #[test]
    fn radial_leaves_are_straight() {
        let f = parse_affine("-y*dx + x*dy").unwrap();
        let cfg = PortraitConfig { seeds: 4, ..PortraitConfig::default() };
        for l in integrate_streamlines(&f, &cfg).unwrap() {
            for q in &l.points {
                let cross = q[0] * l.seed[1] - q[1] * l.seed[0];
                assert!(cross.abs() < 1e-9, "{cross}");
            }
        }
    }

    #[test]
    fn rational_integrals_are_conserved() {
        let cfg = PortraitConfig::default();
        let cases: [(&str, Integral); 4] = [
            ("x^2*dx + y^2*(x*dy - y*dx)", |x, y| (y.powi(3) - 3.0 * x * x) / (3.0 * x.powi(3))),
            ("x^2*dy + y^2*(x*dy - y*dx)", |x, y| (y * y - x) / (x * y)),
            ("y*(y + 1)*dx - x*(x + 1)*dy", |x, y| x * (y + 1.0) / (y * (x + 1.0))),
            ("y^2*dx + (x^2 - 2*x*y)*dy", |x, y| x / (y * (y - x))),
        ];
        for (form, integral) in cases {
            let lines = integrate_streamlines(&parse_affine(form).unwrap(), &cfg).unwrap();
            assert!(lines.iter().all(|l| !l.truncated));
            let drift = max_drift(&lines, integral);
            assert!(drift < 10.0 * cfg.tolerance, "{form}: {drift:e}");
        }
    }

    #[test]
    fn durand_kerner_roots() {
        let r = real_roots(&QPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(r.len(), 2);
        assert!((r[1] - 2f64.sqrt()).abs() < 1e-12);
        assert!(real_roots(&QPoly::from_ints(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn empty_canvas_is_valid() {
        let svg = render_svg(&[], &PortraitConfig::default());
        assert!(roxmltree::Document::parse(&svg).is_ok());
    }
}
