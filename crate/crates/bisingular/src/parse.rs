//! Text formats for symbols, symbol pairs and K-theory diagrams.
//!
//! Symbol literal grammar (`.sym` files and inline literals): a symbol is a
//! list of triples `j k c` — integer degree, integer frequency, complex
//! coefficient — meaning `Σ c · r^j e^{ikθ}`. Coefficients are exact:
//! `2`, `-1/2`, `i`, `-3i`, `1/2+3/4i`. Triples are newline- or
//! `;`-separated; `#` starts a comment.
//!
//! `.bsym`: an optional `order = [m1, m2]` line, then `term` blocks with
//! `f:` and `g:` inline literals.
//!
//! `.sig`: an optional `order = [m1, m2]` line, then `F k: <literal>` and
//! `G k: <literal>` lines (loop coefficient at frequency `k`).
//!
//! `.kd`: keyword assignments — groups like `Z`, `Z^2`, `Z/2`, `Z + Z/4`, `0`
//! and integer matrices like `[[1, -1], [0, 0]]` — consumed by the K-theory
//! commands (`left.k0 = ...`, `m0 = ...`, `ki.k0 = ...`, `delta = ...`).

use crate::bisym::{BisingularSymbol, Factor, SigmaPair, SymbolValuedLoop};
use crate::ktheory::FGAbGroup;
use crate::scalar::GaussianRational;
use crate::shubin::ShubinSymbol;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("parse error at line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl fmt::Display) -> Self {
        Self {
            line,
            col,
            msg: msg.to_string(),
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parse an exact rational like `3`, `-1/2`.
fn parse_big_rational(s: &str, line: usize, col: usize) -> Result<BigRational, ParseError> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| ParseError::new(line, col, format!("invalid integer `{num}`")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| ParseError::new(line, col, format!("invalid integer `{den}`")))?;
    if d.is_zero() {
        return Err(ParseError::new(line, col, "zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

/// Parse an exact complex literal: `1`, `-2/3`, `i`, `-i`, `3i`, `1+2i`,
/// `1/2-3/4i`.
pub fn parse_complex(s: &str, line: usize, col: usize) -> Result<GaussianRational, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::new(line, col, "empty coefficient"));
    }
    if let Some(body) = t.strip_suffix('i') {
        // purely imaginary or trailing imaginary part; find the split point:
        // last '+'/'-' not at position 0 and not part of '/'-digit sequences
        let mut split = None;
        for (idx, ch) in body.char_indices().skip(1) {
            if ch == '+' || ch == '-' {
                split = Some(idx);
            }
        }
        match split {
            Some(idx) => {
                let re = parse_big_rational(&body[..idx], line, col)?;
                let im_str = &body[idx..];
                let im = match im_str {
                    "+" => BigRational::from_integer(1.into()),
                    "-" => BigRational::from_integer((-1).into()),
                    _ => parse_big_rational(im_str, line, col)?,
                };
                Ok(GaussianRational::new(re, im))
            }
            None => {
                let im = match body {
                    "" => BigRational::from_integer(1.into()),
                    "-" => BigRational::from_integer((-1).into()),
                    _ => parse_big_rational(body, line, col)?,
                };
                Ok(GaussianRational::new(BigRational::zero(), im))
            }
        }
    } else {
        Ok(GaussianRational::new(parse_big_rational(t, line, col)?, BigRational::zero()))
    }
}

/// Parse one `j k c` triple.
fn parse_triple(s: &str, line: usize) -> Result<(i64, i64, GaussianRational), ParseError> {
    let mut parts = s.split_whitespace();
    let j_str = parts
        .next()
        .ok_or_else(|| ParseError::new(line, 1, "expected `j k c` triple"))?;
    let k_str = parts
        .next()
        .ok_or_else(|| ParseError::new(line, 1, "triple is missing the frequency"))?;
    let c_str: Vec<&str> = parts.collect();
    if c_str.is_empty() {
        return Err(ParseError::new(line, 1, "triple is missing the coefficient"));
    }
    let j: i64 = j_str
        .parse()
        .map_err(|_| ParseError::new(line, 1, format!("invalid degree `{j_str}`")))?;
    let k: i64 = k_str
        .parse()
        .map_err(|_| ParseError::new(line, 1, format!("invalid frequency `{k_str}`")))?;
    let c = parse_complex(&c_str.join(""), line, 1)?;
    Ok((j, k, c))
}

/// Parse an inline symbol literal (triples separated by `;`).
pub fn parse_symbol_inline(s: &str, line: usize) -> Result<ShubinSymbol, ParseError> {
    let mut sym = ShubinSymbol::zero();
    for chunk in s.split(';') {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            continue;
        }
        let (j, k, c) = parse_triple(chunk, line)?;
        sym.add_term(j, k, c);
    }
    Ok(sym)
}

/// Parse a `.sym` file: one triple per line (or `;`-separated).
pub fn parse_sym(text: &str) -> Result<ShubinSymbol, ParseError> {
    let mut sym = ShubinSymbol::zero();
    for (i, raw) in text.lines().enumerate() {
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let parsed = parse_symbol_inline(line, i + 1)?;
        sym = &sym + &parsed;
    }
    Ok(sym)
}

fn parse_order_line(line: &str, lineno: usize) -> Result<Option<(i64, i64)>, ParseError> {
    let Some(rest) = line.strip_prefix("order") else {
        return Ok(None);
    };
    let rest = rest.trim_start();
    let Some(rest) = rest.strip_prefix('=') else {
        return Err(ParseError::new(lineno, 1, "expected `order = [m1, m2]`"));
    };
    let rest = rest.trim();
    let inner = rest
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(lineno, 1, "expected `[m1, m2]`"))?;
    let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(ParseError::new(lineno, 1, "expected two orders"));
    }
    let m1: i64 = parts[0]
        .parse()
        .map_err(|_| ParseError::new(lineno, 1, format!("invalid order `{}`", parts[0])))?;
    let m2: i64 = parts[1]
        .parse()
        .map_err(|_| ParseError::new(lineno, 1, format!("invalid order `{}`", parts[1])))?;
    Ok(Some((m1, m2)))
}

/// Parse a `.bsym` file into a bisingular symbol, validating a declared order
/// if present.
pub fn parse_bsym(text: &str) -> Result<BisingularSymbol, ParseError> {
    let mut declared = None;
    let mut terms: Vec<(Option<ShubinSymbol>, Option<ShubinSymbol>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(order) = parse_order_line(line, lineno)? {
            declared = Some(order);
            continue;
        }
        if line == "term" || line == "term:" {
            terms.push((None, None));
            continue;
        }
        if let Some(rest) = line.strip_prefix("f:") {
            let slot = terms
                .last_mut()
                .ok_or_else(|| ParseError::new(lineno, 1, "`f:` outside a term block"))?;
            slot.0 = Some(parse_symbol_inline(rest, lineno)?);
            continue;
        }
        if let Some(rest) = line.strip_prefix("g:") {
            let slot = terms
                .last_mut()
                .ok_or_else(|| ParseError::new(lineno, 1, "`g:` outside a term block"))?;
            slot.1 = Some(parse_symbol_inline(rest, lineno)?);
            continue;
        }
        return Err(ParseError::new(lineno, 1, format!("unexpected line `{line}`")));
    }
    let mut out = BisingularSymbol::zero();
    for (f, g) in terms {
        let f = f.ok_or_else(|| ParseError::new(0, 0, "term without an `f:` block"))?;
        let g = g.ok_or_else(|| ParseError::new(0, 0, "term without a `g:` block"))?;
        out.push_term(f, g);
    }
    if let (Some(decl), Some(actual)) = (declared, out.order()) {
        if decl != actual {
            return Err(ParseError::new(
                0,
                0,
                format!("declared order {decl:?} but terms attain {actual:?}"),
            ));
        }
    }
    Ok(out)
}

/// Parse a `.sig` file into a symbol pair. An `order = [m1, m2]` line fixes
/// the loop grading; otherwise it is inferred from the coefficient orders.
pub fn parse_sig(text: &str) -> Result<SigmaPair, ParseError> {
    let mut declared: Option<(i64, i64)> = None;
    let mut f_entries: BTreeMap<i64, ShubinSymbol> = BTreeMap::new();
    let mut g_entries: BTreeMap<i64, ShubinSymbol> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(order) = parse_order_line(line, lineno)? {
            declared = Some(order);
            continue;
        }
        let (which, rest) = if let Some(rest) = line.strip_prefix('F') {
            (Factor::One, rest)
        } else if let Some(rest) = line.strip_prefix('G') {
            (Factor::Two, rest)
        } else {
            return Err(ParseError::new(lineno, 1, format!("unexpected line `{line}`")));
        };
        let (k_str, lit) = rest
            .split_once(':')
            .ok_or_else(|| ParseError::new(lineno, 1, "expected `F k: <symbol literal>`"))?;
        let k: i64 = k_str
            .trim()
            .parse()
            .map_err(|_| ParseError::new(lineno, 1, format!("invalid frequency `{}`", k_str.trim())))?;
        let sym = parse_symbol_inline(lit, lineno)?;
        let map = match which {
            Factor::One => &mut f_entries,
            Factor::Two => &mut g_entries,
        };
        let slot = map.entry(k).or_insert_with(ShubinSymbol::zero);
        *slot = &*slot + &sym;
    }
    let infer = |entries: &BTreeMap<i64, ShubinSymbol>| {
        entries.values().filter_map(|s| s.order()).max().unwrap_or(0)
    };
    let (m1, m2) = declared.unwrap_or_else(|| (infer(&g_entries), infer(&f_entries)));
    let f_loop = SymbolValuedLoop::from_coeffs(Factor::One, m2, f_entries);
    let g_loop = SymbolValuedLoop::from_coeffs(Factor::Two, m1, g_entries);
    SigmaPair::new(f_loop, g_loop).map_err(|e| ParseError::new(0, 0, e))
}

/// Parse a group literal: `0`, `Z`, `Z^3`, `Z/2`, `Z^2 + Z/2 + Z/4`.
pub fn parse_group(s: &str, lineno: usize) -> Result<FGAbGroup, ParseError> {
    let t = s.trim();
    if t == "0" {
        return Ok(FGAbGroup::trivial());
    }
    let mut rank = 0usize;
    let mut torsion = Vec::new();
    for part in t.split('+') {
        let p = part.trim();
        if p == "Z" {
            rank += 1;
        } else if let Some(r) = p.strip_prefix("Z^") {
            rank += r
                .trim()
                .parse::<usize>()
                .map_err(|_| ParseError::new(lineno, 1, format!("invalid rank `{r}`")))?;
        } else if let Some(d) = p.strip_prefix("Z/") {
            let d: u64 = d
                .trim()
                .parse()
                .map_err(|_| ParseError::new(lineno, 1, format!("invalid torsion order `{d}`")))?;
            if d < 2 {
                return Err(ParseError::new(lineno, 1, "torsion order must be ≥ 2"));
            }
            torsion.push(d);
        } else {
            return Err(ParseError::new(lineno, 1, format!("invalid group part `{p}`")));
        }
    }
    Ok(FGAbGroup { rank, torsion })
}

/// Parse an integer matrix literal `[[1, -1], [0, 0]]`; `[]` is the empty
/// (0-row) matrix.
pub fn parse_int_matrix(s: &str, lineno: usize) -> Result<Vec<Vec<i128>>, ParseError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| ParseError::new(lineno, 1, "expected `[[…], …]`"))?;
    let inner = inner.trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut rows = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for ch in inner.chars() {
        match ch {
            '[' => {
                depth += 1;
                if depth > 1 {
                    return Err(ParseError::new(lineno, 1, "nested rows"));
                }
                current.clear();
            }
            ']' => {
                if depth == 0 {
                    return Err(ParseError::new(lineno, 1, "unbalanced `]`"));
                }
                depth -= 1;
                let row: Result<Vec<i128>, _> = current
                    .split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(|p| {
                        p.parse::<i128>()
                            .map_err(|_| ParseError::new(lineno, 1, format!("invalid entry `{p}`")))
                    })
                    .collect();
                rows.push(row?);
            }
            ',' if depth == 0 => {}
            c => {
                if depth == 1 {
                    current.push(c);
                } else if !c.is_whitespace() {
                    return Err(ParseError::new(lineno, 1, format!("unexpected `{c}`")));
                }
            }
        }
    }
    if depth != 0 {
        return Err(ParseError::new(lineno, 1, "unbalanced `[`"));
    }
    let width = rows.first().map(Vec::len).unwrap_or(0);
    if rows.iter().any(|r| r.len() != width) {
        return Err(ParseError::new(lineno, 1, "ragged matrix rows"));
    }
    Ok(rows)
}

/// A parsed `.kd` document: keyword → group or matrix.
#[derive(Debug, Default)]
pub struct KdDoc {
    pub groups: BTreeMap<String, FGAbGroup>,
    pub matrices: BTreeMap<String, Vec<Vec<i128>>>,
}

impl KdDoc {
    pub fn group(&self, key: &str) -> Result<&FGAbGroup, ParseError> {
        self.groups
            .get(key)
            .ok_or_else(|| ParseError::new(0, 0, format!("missing group `{key}`")))
    }

    pub fn matrix(&self, key: &str) -> Result<&Vec<Vec<i128>>, ParseError> {
        self.matrices
            .get(key)
            .ok_or_else(|| ParseError::new(0, 0, format!("missing matrix `{key}`")))
    }
}

/// Parse a `.kd` diagram file: `key = value` lines where the value is a group
/// literal or an integer matrix.
pub fn parse_kd(text: &str) -> Result<KdDoc, ParseError> {
    let mut doc = KdDoc::default();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ParseError::new(lineno, 1, "expected `key = value`"))?;
        let key = key.trim().to_lowercase();
        let value = value.trim();
        if value.starts_with('[') {
            doc.matrices.insert(key, parse_int_matrix(value, lineno)?);
        } else {
            doc.groups.insert(key, parse_group(value, lineno)?);
        }
    }
    Ok(doc)
}
