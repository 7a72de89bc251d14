//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*      // '/' only by nonzero constants
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | decimal | name | '(' expr ')'
//! ```
//! Multiplication must be written explicitly. Errors carry the byte offset.
//!
//! A 1-form is an expression of the same grammar in which the differentials
//! `dx, dy` (chart `Z=1`), `dx, dz` (chart `Y=1`), `dy, dz` (chart `X=1`) or
//! `dX, dY, dZ` (homogeneous) are extra names and every term carries exactly
//! one of them, as in `x^2*dx + (x + y^2)*(x*dy - y*dx)`. Lowercase forms
//! mentioning all of `x, y, z` are read as homogeneous.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::foliation::{AffineFoliation, Chart, Foliation};
use crate::invariants::DarbouxFunction;
use crate::poly::{Poly, Vars};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Name(String),
    Op(char),
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn tokenize(s: &str) -> Result<Vec<(usize, Tok)>> {
    let b = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && b.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let mut num: BigInt = s[start..i].parse().unwrap_or_default();
            let mut den = BigInt::one();
            if i < b.len() && b[i] == b'.' {
                i += 1;
                let fs = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                for ch in s[fs..i].bytes() {
                    num = num * 10 + BigInt::from(ch - b'0');
                    den *= 10;
                }
            }
            out.push((start, Tok::Num(Rational::new(num, den))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Name(s[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(&Tok::Op('/')) {
                let at = self.offset();
                self.pos += 1;
                let d = self.unary()?;
                match d.as_constant() {
                    Some(c) if !c.is_zero() => acc = acc.scale(&c.inv()?),
                    _ => return Err(err(at, "division only by a nonzero constant")),
                }
            } else if matches!(self.peek(), Some(Tok::Name(_) | Tok::Num(_)) | Some(Tok::Op('('))) {
                return Err(err(self.offset(), "expected an operator (write products with '*')"));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Poly> {
        if self.eat('-') {
            return Ok(-&self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.eat('^') {
            let at = self.offset();
            match self.toks.get(self.pos) {
                Some((_, Tok::Num(n))) if n.is_integer() && !n.numer().sign().eq(&num_bigint::Sign::Minus) => {
                    let e: u32 = n
                        .numer()
                        .try_into()
                        .map_err(|_| err(at, "exponent too large"))?;
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(err(at, "expected a nonnegative integer exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let at = self.offset();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(Poly::constant(self.vars, Coeff::Rat(n)))
            }
            Some((_, Tok::Name(name))) => {
                self.pos += 1;
                match self.vars.index(&name) {
                    Some(i) => Ok(Poly::var(self.vars, i)),
                    None => Err(err(at, format!("unknown variable {name:?}"))),
                }
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.offset(), "expected ')'"));
                }
                Ok(e)
            }
            Some((_, t)) => Err(err(at, format!("unexpected token {t:?}"))),
            None => Err(err(at, "unexpected end of input")),
        }
    }
}

/// Parses a polynomial over the given variables.
pub fn parse_poly(s: &str, vars: &Vars) -> Result<Poly> {
    let toks = tokenize(s)?;
    let mut p = Parser { toks, pos: 0, end: s.len(), vars };
    if p.peek().is_none() {
        return Err(err(0, "empty expression"));
    }
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.offset(), "trailing input"));
    }
    Ok(e)
}

/// Parses a rational such as `-3/4` or `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let vars = Vars::new(&[]);
    let p = parse_poly(s, &vars)?;
    match p.as_constant() {
        Some(Coeff::Rat(q)) => Ok(q),
        _ => Err(err(0, "expected a rational number")),
    }
}

/// Coefficients of `dv_k` in a form written over `base ∪ {d base}`.
fn split_differentials(s: &str, base: &[&str]) -> Result<(Vars, Vec<Poly>)> {
    let mut names: Vec<String> = base.iter().map(|b| b.to_string()).collect();
    names.extend(base.iter().map(|b| format!("d{b}")));
    let all = Vars::from_strings(names);
    let form = parse_poly(s, &all)?;
    let n = base.len();
    let bv = Vars::new(base);
    let mut comps = alloc::vec![Poly::zero(&bv); n];
    for (m, c) in form.terms() {
        let ds: Vec<usize> = (0..n).filter(|&k| m.0[n + k] > 0).collect();
        if ds.len() != 1 || m.0[n + ds[0]] != 1 {
            return Err(err(0, "every term of a 1-form must contain exactly one differential"));
        }
        let mut e = crate::poly::Monomial::one(n);
        e.0.copy_from_slice(&m.0[..n]);
        comps[ds[0]].add_term(e, c.clone());
    }
    Ok((bv, comps))
}

fn mentions(s: &str, name: &str) -> bool {
    let b = s.as_bytes();
    s.match_indices(name).any(|(i, _)| {
        let before = i == 0 || !(b[i - 1].is_ascii_alphanumeric() || b[i - 1] == b'_');
        let j = i + name.len();
        let after = j >= b.len() || !(b[j].is_ascii_alphanumeric() || b[j] == b'_');
        before && after
    })
}

/// Parses an affine 1-form; the chart is read off the names used (`Z=1` by default).
pub fn parse_affine(s: &str) -> Result<AffineFoliation> {
    let chart = if mentions(s, "z") || mentions(s, "dz") {
        if mentions(s, "x") || mentions(s, "dx") {
            if mentions(s, "y") || mentions(s, "dy") {
                return Err(err(0, "an affine form uses two of the names x, y, z"));
            }
            Chart::Y
        } else {
            Chart::X
        }
    } else {
        Chart::Z
    };
    let cv = chart.vars();
    let names: Vec<&str> = cv.names().iter().map(String::as_str).collect();
    let (_, comps) = split_differentials(s, &names)?;
    AffineFoliation::new(comps[0].clone(), comps[1].clone(), chart)
}

/// Parses a homogeneous 1-form in `X, Y, Z` (or `x, y, z`).
pub fn parse_homogeneous(s: &str) -> Result<Foliation> {
    let upper = ["X", "Y", "Z", "dX", "dY", "dZ"].iter().any(|n| mentions(s, n));
    let base: [&str; 3] = if upper { ["X", "Y", "Z"] } else { ["x", "y", "z"] };
    let (_, comps) = split_differentials(s, &base)?;
    let v = crate::foliation::xyz();
    let [a, b, c] = [0, 1, 2].map(|k| Poly::from_terms(&v, comps[k].terms().map(|(m, c)| (m.clone(), c.clone()))));
    Foliation::new(a, b, c)
}

/// Parses either presentation.
pub fn parse_foliation(s: &str) -> Result<Foliation> {
    let homogeneous = ["X", "Y", "Z", "dX", "dY", "dZ"].iter().any(|n| mentions(s, n))
        || ["x", "y", "z"].iter().all(|n| mentions(s, n) || mentions(s, &format!("d{n}")));
    if homogeneous {
        parse_homogeneous(s)
    } else {
        parse_affine(s)?.to_foliation()
    }
}

/// Ring for a polynomial or function written in a chart or homogeneously,
/// read off the names used: uppercase or all of `x, y, z` mean homogeneous.
fn function_ring(s: &str) -> (Vars, Vars) {
    let upper = ["X", "Y", "Z"].iter().any(|n| mentions(s, n));
    if upper {
        return (crate::foliation::xyz(), crate::foliation::xyz());
    }
    let (x, y, z) = (mentions(s, "x"), mentions(s, "y"), mentions(s, "z"));
    if x && y && z {
        return (Vars::new(&["x", "y", "z"]), crate::foliation::xyz());
    }
    let chart = match (x, y, z) {
        (_, false, true) if x => Chart::Y,
        (false, _, true) => Chart::X,
        _ => Chart::Z,
    };
    (chart.vars(), chart.vars())
}

fn parse_in(s: &str, ring: &(Vars, Vars), offset: usize) -> Result<Poly> {
    let p = parse_poly(s, &ring.0).map_err(|e| match e {
        Error::Parse { pos, msg } => err(pos + offset, msg),
        other => other,
    })?;
    Ok(if ring.0 == ring.1 { p } else { Poly::from_terms(&ring.1, p.terms().map(|(m, c)| (m.clone(), c.clone()))) })
}

/// Parses a curve: a polynomial in a chart (`x, y` by default) or a homogeneous one.
pub fn parse_curve(s: &str) -> Result<Poly> {
    parse_in(s, &function_ring(s), 0)
}

/// Splits at top-level occurrences of `sep`, with byte offsets.
fn split_top(s: &str, sep: char) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Byte index of the parenthesis closing the one at `open`.
fn closing(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s[open..].char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

fn trim_with_offset(s: &str, at: usize) -> (usize, &str) {
    let lead = s.len() - s.trim_start().len();
    (at + lead, s.trim())
}

/// Parses `prod[(f1)^l1, (f2)^l2, ...]*exp((g)/(h))`; either factor may be
/// omitted, exponents are rationals (default 1) and `exp(g)` means `h = 1`.
pub fn parse_darboux(s: &str) -> Result<DarbouxFunction> {
    let ring = function_ring(s);
    let mut powers = Vec::new();
    let mut exp = None;
    for (at, part) in split_top(s, '*') {
        let (at, part) = trim_with_offset(part, at);
        if let Some(body) = part.strip_prefix("prod[").and_then(|r| r.strip_suffix(']')) {
            for (k, item) in split_top(body, ',') {
                let (k, item) = trim_with_offset(item, at + 5 + k);
                if !item.starts_with('(') {
                    return Err(err(k, "expected a parenthesized factor"));
                }
                let close = closing(item, 0).ok_or_else(|| err(k, "unbalanced parenthesis"))?;
                let f = parse_in(&item[1..close], &ring, k + 1)?;
                let rest = item[close + 1..].trim();
                let l = match rest.strip_prefix('^') {
                    Some(e) => parse_rational(e.trim().trim_start_matches('(').trim_end_matches(')'))
                        .map_err(|_| err(k + close + 1, "expected a rational exponent"))?,
                    None if rest.is_empty() => Rational::one(),
                    None => return Err(err(k + close + 1, "expected ^exponent")),
                };
                powers.push((f, l));
            }
        } else if let Some(body) = part.strip_prefix("exp(").and_then(|r| r.strip_suffix(')')) {
            if exp.is_some() {
                return Err(err(at, "only one exponential factor"));
            }
            let inner = at + 4;
            let quotient = body.starts_with('(')
                && closing(body, 0).is_some_and(|c| body[c + 1..].trim_start().starts_with('/'));
            if quotient {
                let c = closing(body, 0).unwrap();
                let g = parse_in(&body[1..c], &ring, inner + 1)?;
                let rest = body[c + 1..].trim_start().strip_prefix('/').unwrap().trim();
                let h = parse_in(rest, &ring, inner + c + 2)?;
                exp = Some((g, h));
            } else {
                exp = Some((parse_in(body, &ring, inner)?, Poly::one(&ring.1)));
            }
        } else {
            return Err(err(at, "expected prod[...] or exp(...)"));
        }
    }
    DarbouxFunction::new(ring.1, powers, exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_round_trip() {
        let v = Vars::new(&["x", "y"]);
        for s in ["3*x^2 - 1/2*x + y + 7", "x^2*y - 1", "-x^3 + y^2", "0"] {
            assert_eq!(parse_poly(s, &v).unwrap().to_string(), s);
        }
    }

    #[test]
    fn errors_carry_positions() {
        let v = Vars::new(&["x", "y"]);
        assert_eq!(parse_poly("x + 2 z", &v), Err(err(6, "expected an operator (write products with '*')")));
        assert!(matches!(parse_poly("x + w", &v), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(parse_poly("(x + y", &v), Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(parse_poly("x/y", &v), Err(Error::Parse { pos: 1, .. })));
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_rational("0.25").unwrap(), crate::coeff::rat(1, 4));
        assert_eq!(parse_rational("-3/4").unwrap(), crate::coeff::rat(-3, 4));
    }

    #[test]
    fn forms_in_every_presentation() {
        let w = parse_affine("x^2*dx + y^2*(x*dy - y*dx)").unwrap();
        assert_eq!(w.chart(), Chart::Z);
        assert_eq!(w.p().to_string(), "-y^3 + x^2");
        assert_eq!(w.q().to_string(), "x*y^2");
        let h = parse_homogeneous(&w.to_foliation().unwrap().to_string()).unwrap();
        assert_eq!(h, w.to_foliation().unwrap());
        assert_eq!(parse_foliation(&w.to_string()).unwrap(), h);
        assert_eq!(parse_affine("z*dy - y*dz").unwrap().chart(), Chart::X);
        assert_eq!(parse_affine("x^2*dz + dx").unwrap().chart(), Chart::Y);
        let pencil = parse_foliation("y*z*dx - x*z*dy").unwrap();
        assert_eq!(pencil.degree(), 0);
    }

    #[test]
    fn form_errors() {
        assert!(matches!(parse_affine("x*dx*dy"), Err(Error::Parse { .. })));
        assert!(matches!(parse_affine("x + dx"), Err(Error::Parse { .. })));
        assert!(matches!(parse_affine("x^2*dx + (y*dy"), Err(Error::Parse { pos: 14, .. })));
        assert!(matches!(parse_homogeneous("X*dX"), Err(Error::NotEuler)));
    }
}
