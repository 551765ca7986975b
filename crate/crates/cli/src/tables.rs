//! Parsers for the LaTeX tables shipped under `fixtures/tables`.

use bhkzeta_core::intpoly::IntPoly;
use bhkzeta_core::invertible::ExponentMatrix;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub const GROUP_TABLE: &str = include_str!("../fixtures/tables/groups.tex");
pub const F4_ZETA_TABLE: &str = include_str!("../fixtures/tables/f4_zeta.tex");
pub const L2L2_ZETA_TABLE: &str = include_str!("../fixtures/tables/l2l2_zeta.tex");
pub const DEGREE_PATTERNS: &str = include_str!("../fixtures/tables/degree_patterns.tex");

#[derive(Debug, Error, PartialEq, Eq)]
#[error("cannot parse `{text}`: {reason}")]
pub struct ParseError {
    pub text: String,
    pub reason: String,
}

fn err(text: &str, reason: impl Into<String>) -> ParseError {
    ParseError { text: text.trim().to_string(), reason: reason.into() }
}

/// Data rows of a `tabular`: cells split on `&`, rows on `\\`.
fn rows(tex: &str) -> Vec<Vec<String>> {
    let body = tex.split("\\end{tabular}").next().unwrap_or(tex);
    body.split("\\\\")
        .map(|r| {
            r.lines()
                .filter(|l| !l.trim_start().starts_with("\\begin{"))
                .collect::<Vec<_>>()
                .join(" ")
                .replace("\\hline", "")
        })
        .filter(|r| r.contains('&'))
        .map(|r| r.split('&').map(|c| c.trim().to_string()).collect())
        .collect()
}

fn strip_math(s: &str) -> String {
    s.replace('$', "").trim().to_string()
}

fn family_name(cell: &str) -> String {
    let s = cell.replace("\\rule{0pt}{2.5ex}", "");
    let s = s.split("{*}").last().unwrap_or(&s).to_string();
    strip_math(&s).replace("\\mathsf", "").replace(['{', '}', ' ', '_'], "")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRow {
    pub family: String,
    pub matrix: ExponentMatrix,
    /// Printed group as cyclic orders, e.g. `[4, 2]` for `Z/4 × Z/2`.
    pub group: Vec<u64>,
    pub group_tex: String,
}

/// Exponent matrix of `x_0^4 + x_1^3x_2 + … − 4ψx_0⋯x_n`, one row per monomial.
pub fn parse_equation(tex: &str) -> Result<ExponentMatrix, ParseError> {
    let s = strip_math(tex).replace(' ', "");
    let head = s.split("-4\\psi").next().unwrap_or(&s);
    let monomials: Vec<&str> = head.split('+').collect();
    let n = monomials.len();
    let mut out = Vec::with_capacity(n);
    for m in monomials {
        let mut row = vec![0u32; n];
        for factor in m.split("x_").filter(|f| !f.is_empty()) {
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (v, e.parse::<u32>().map_err(|_| err(tex, "bad exponent"))?),
                None => (factor, 1),
            };
            let var: usize = var.parse().map_err(|_| err(tex, "bad variable index"))?;
            if var >= n {
                return Err(err(tex, "variable index out of range"));
            }
            row[var] += exp;
        }
        out.push(row);
    }
    ExponentMatrix::new(out).map_err(|e| err(tex, e.to_string()))
}

/// `(\mathbb{Z}/4\mathbb{Z})^2`, `\mathbb{Z}/4\mathbb{Z} \times \mathbb{Z}/2\mathbb{Z}`, …
pub fn parse_group(tex: &str) -> Result<Vec<u64>, ParseError> {
    let s = strip_math(tex).replace("\\mathbb{Z}", "Z").replace(' ', "");
    let mut out = Vec::new();
    for part in s.split("\\times") {
        let (base, power) = match part.strip_prefix('(') {
            Some(rest) => {
                let (inner, tail) = rest.split_once(')').ok_or_else(|| err(tex, "unbalanced parentheses"))?;
                let k = tail.trim_start_matches('^').trim_matches(|c| c == '{' || c == '}');
                (inner.to_string(), if k.is_empty() { 1 } else { k.parse().map_err(|_| err(tex, "bad power"))? })
            }
            None => (part.to_string(), 1usize),
        };
        let order = base
            .strip_prefix("Z/")
            .and_then(|r| r.strip_suffix('Z'))
            .and_then(|r| r.parse::<u64>().ok())
            .ok_or_else(|| err(tex, "expected Z/nZ"))?;
        out.extend(std::iter::repeat_n(order, power));
    }
    Ok(out)
}

pub fn group_table() -> Result<Vec<GroupRow>, ParseError> {
    rows(GROUP_TABLE)
        .into_iter()
        .skip(1)
        .map(|r| {
            if r.len() != 3 {
                return Err(err(&r.join("&"), "expected three cells"));
            }
            Ok(GroupRow {
                family: family_name(&r[0]),
                matrix: parse_equation(&r[1])?,
                group: parse_group(&r[2])?,
                group_tex: strip_math(&r[2]),
            })
        })
        .collect()
}

/// Invariant factors `d_1 | d_2 | …` of a product of cyclic groups, without 1s.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    use std::collections::BTreeMap;
    let mut primary: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &n in orders {
        for (p, e) in bhkzeta_core::arith::factorize(n) {
            primary.entry(p).or_default().push(p.pow(e));
        }
    }
    let len = primary.values().map(Vec::len).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for powers in primary.values_mut() {
        powers.sort_unstable_by(|a, b| b.cmp(a));
        for (i, pk) in powers.iter().enumerate() {
            out[len - 1 - i] *= pk;
        }
    }
    out
}

/// A printed `P_X` row: the `ψ` values and the factors, or `None` when not smooth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaRow {
    pub psis: Vec<u64>,
    pub factors: Option<Vec<(IntPoly, u32)>>,
    pub tex: String,
}

impl ZetaRow {
    pub fn polynomial(&self) -> Option<IntPoly> {
        self.factors.as_ref().map(|f| f.iter().fold(IntPoly::one(), |acc, (p, k)| &acc * &p.pow(*k)))
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt, ParseError> {
    // `281 ^ { 2 }` style powers of a base
    let s = s.replace(' ', "");
    match s.split_once('^') {
        Some((b, e)) => {
            let b: BigInt = b.parse().map_err(|_| err(whole, "bad base"))?;
            let e: u32 = e.trim_matches(|c| c == '{' || c == '}').parse().map_err(|_| err(whole, "bad power"))?;
            Ok(b.pow(e))
        }
        None if s.is_empty() => Ok(BigInt::one()),
        None => s.parse().map_err(|_| err(whole, "bad integer")),
    }
}

/// `1 - 281 T` or `1 + 462 T + 281 ^ { 2 } T ^ { 2 }`.
pub fn parse_polynomial(tex: &str) -> Result<IntPoly, ParseError> {
    let s = tex.replace(' ', "");
    let mut coeffs: Vec<BigInt> = Vec::new();
    let mut term = String::new();
    let mut sign = 1i32;
    let mut flush = |term: &str, sign: i32| -> Result<(), ParseError> {
        if term.is_empty() {
            return Ok(());
        }
        let (c, k) = match term.find('T') {
            Some(i) => {
                let pow = &term[i + 1..];
                let k = if pow.is_empty() {
                    1
                } else {
                    pow.trim_start_matches('^')
                        .trim_matches(|c| c == '{' || c == '}')
                        .parse::<usize>()
                        .map_err(|_| err(tex, "bad power of T"))?
                };
                (parse_int(&term[..i], tex)?, k)
            }
            None => (parse_int(term, tex)?, 0),
        };
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigInt::zero());
        }
        coeffs[k] += c * sign;
        Ok(())
    };
    let mut depth = 0;
    for ch in s.chars() {
        match ch {
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        if depth == 0 && (ch == '+' || ch == '-') {
            flush(&term, sign)?;
            term.clear();
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            term.push(ch);
        }
    }
    flush(&term, sign)?;
    Ok(IntPoly::new(coeffs))
}

/// `( 1 - 281 T ) ^{ 19 } ( 1 + 78 T + 281 ^ { 2 } T ^ { 2 } )`.
pub fn parse_product(tex: &str) -> Result<Vec<(IntPoly, u32)>, ParseError> {
    let s = strip_math(tex);
    let mut out = Vec::new();
    let mut rest = s.as_str();
    while let Some(open) = rest.find('(') {
        let close = rest[open..].find(')').ok_or_else(|| err(tex, "unbalanced parentheses"))? + open;
        let poly = parse_polynomial(&rest[open + 1..close])?;
        rest = &rest[close + 1..];
        let trimmed = rest.trim_start();
        let mut k = 1;
        if let Some(after) = trimmed.strip_prefix('^') {
            let after = after.trim_start();
            let (num, tail) = match after.strip_prefix('{') {
                Some(a) => a.split_once('}').ok_or_else(|| err(tex, "unbalanced braces"))?,
                None => after.split_at(after.find(|c: char| !c.is_ascii_digit()).unwrap_or(after.len())),
            };
            k = num.trim().parse().map_err(|_| err(tex, "bad exponent"))?;
            rest = tail;
        }
        out.push((poly, k));
    }
    if out.is_empty() {
        return Err(err(tex, "no factors"));
    }
    Ok(out)
}

pub fn parse_zeta_table(tex: &str) -> Result<Vec<ZetaRow>, ParseError> {
    rows(tex)
        .into_iter()
        .filter(|r| !r[0].contains("\\psi"))
        .map(|r| {
            let psis = r[0]
                .split(',')
                .map(|v| v.trim().parse::<u64>().map_err(|_| err(&r[0], "bad psi")))
                .collect::<Result<Vec<_>, _>>()?;
            let factors = if r[1].contains("not smooth") { None } else { Some(parse_product(&r[1])?) };
            Ok(ZetaRow { psis, factors, tex: strip_math(&r[1]) })
        })
        .collect()
}

pub fn f4_zeta_table() -> Result<Vec<ZetaRow>, ParseError> {
    parse_zeta_table(F4_ZETA_TABLE)
}

pub fn l2l2_zeta_table() -> Result<Vec<ZetaRow>, ParseError> {
    parse_zeta_table(L2L2_ZETA_TABLE)
}

/// One piece of a printed factorization pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    /// `(\deg\, d)^{m}`: some factor of degree `d`, to the power `m`.
    Degree { degree: usize, multiplicity: u32 },
    /// An explicit polynomial in `q` and `T`, e.g. `(1-qT)^8`.
    Explicit { tex: String, multiplicity: u32 },
}

impl Piece {
    pub fn multiplicity(&self) -> u32 {
        match self {
            Self::Degree { multiplicity, .. } | Self::Explicit { multiplicity, .. } => *multiplicity,
        }
    }

    /// The explicit polynomial at a given `q`.
    pub fn explicit(&self, q: u64) -> Option<Result<IntPoly, ParseError>> {
        match self {
            Self::Explicit { tex, .. } => Some(parse_polynomial(&tex.replace('q', &q.to_string()))),
            Self::Degree { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternRow {
    pub family: String,
    pub pieces: Vec<Piece>,
    /// `q ≡ residue mod modulus`.
    pub residue: u64,
    pub modulus: u64,
    pub tex: String,
}

impl PatternRow {
    pub fn applies(&self, q: u64) -> bool {
        q % self.modulus == self.residue
    }
}

fn parse_pieces(tex: &str) -> Result<Vec<Piece>, ParseError> {
    let s = strip_math(tex).replace("\\,", " ");
    let mut out = Vec::new();
    let mut rest = s.as_str();
    while let Some(open) = rest.find('(') {
        let close = rest[open..].find(')').ok_or_else(|| err(tex, "unbalanced parentheses"))? + open;
        let inner = rest[open + 1..close].trim().to_string();
        rest = &rest[close + 1..];
        let mut k = 1;
        if let Some(after) = rest.trim_start().strip_prefix('^') {
            let after = after.trim_start();
            let (num, tail) = match after.strip_prefix('{') {
                Some(a) => a.split_once('}').ok_or_else(|| err(tex, "unbalanced braces"))?,
                None => after.split_at(after.find(|c: char| !c.is_ascii_digit()).unwrap_or(after.len())),
            };
            k = num.trim().parse().map_err(|_| err(tex, "bad exponent"))?;
            rest = tail;
        }
        out.push(match inner.strip_prefix("\\deg") {
            Some(d) => Piece::Degree { degree: d.trim().parse().map_err(|_| err(tex, "bad degree"))?, multiplicity: k },
            None => Piece::Explicit { tex: inner, multiplicity: k },
        });
    }
    Ok(out)
}

pub fn degree_patterns() -> Result<Vec<PatternRow>, ParseError> {
    let mut family = String::new();
    rows(DEGREE_PATTERNS)
        .into_iter()
        .skip(1)
        .map(|r| {
            if r.len() != 3 {
                return Err(err(&r.join("&"), "expected three cells"));
            }
            let name = family_name(&r[0]);
            if !name.is_empty() {
                family = name;
            }
            let hyp = strip_math(&r[2]).replace(' ', "");
            let (lhs, m) = hyp.split_once("\\psmod").ok_or_else(|| err(&r[2], "expected a congruence"))?;
            let residue = lhs.trim_start_matches("q\\equiv").parse().map_err(|_| err(&r[2], "bad residue"))?;
            let modulus = m.trim_matches(|c| c == '{' || c == '}').parse().map_err(|_| err(&r[2], "bad modulus"))?;
            Ok(PatternRow {
                family: family.clone(),
                pieces: parse_pieces(&r[1])?,
                residue,
                modulus,
                tex: strip_math(&r[1]),
            })
        })
        .collect()
}
