//! Text formats for permutations, tuples, relation systems, partial group
//! tables, and labeled image maps.
//!
//! Every format is line-oriented, supports `#` comments and blank lines, and
//! roundtrips: parsing a rendered value reproduces it exactly.
//!
//! * permutation: a degree line `n`, then `oneline: i1 i2 … in` or
//!   `cycles: (a b c)(d e)` (unmentioned points are fixed).
//! * tuple: a degree line, then one permutation line per generator.
//! * system: one `LHS = RHS` relation per line (an empty side is the
//!   identity word).
//! * table: lines `a * b = c`, at most one `unit e`, and `element x` for
//!   labels that appear in no product.
//! * phi: a degree line, then `label: oneline: …` or `label: cycles: …`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::equations::{EquationSystem, ParseError, PermTuple};
use crate::perm::Permutation;
use crate::sofic::{PartialGroupTable, TableError};

/// A parse failure, pointing at the offending line where one exists.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    AtLine { line: usize, message: String },
    #[error("{message}")]
    Whole { message: String },
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> FormatError {
        FormatError::AtLine {
            line,
            message: message.into(),
        }
    }

    fn whole(message: impl Into<String>) -> FormatError {
        FormatError::Whole {
            message: message.into(),
        }
    }
}

/// Output convention for permutation bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermFormat {
    #[default]
    OneLine,
    Cycles,
}

impl FromStr for PermFormat {
    type Err = FormatError;

    fn from_str(text: &str) -> Result<PermFormat, FormatError> {
        match text {
            "oneline" => Ok(PermFormat::OneLine),
            "cycles" => Ok(PermFormat::Cycles),
            other => Err(FormatError::whole(format!(
                "unknown format {other:?} (expected \"oneline\" or \"cycles\")"
            ))),
        }
    }
}

impl fmt::Display for PermFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PermFormat::OneLine => write!(f, "oneline"),
            PermFormat::Cycles => write!(f, "cycles"),
        }
    }
}

/// Non-blank lines with comments stripped, keeping 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                None
            } else {
                Some((i + 1, content))
            }
        })
        .collect()
}

fn parse_degree(line: usize, text: &str) -> Result<usize, FormatError> {
    let n: usize = text
        .parse()
        .map_err(|_| FormatError::at(line, format!("expected a degree, got {text:?}")))?;
    if n == 0 {
        return Err(FormatError::at(line, "degree must be at least 1"));
    }
    Ok(n)
}

/// Parses a permutation body `oneline: …` or `cycles: …` of degree `n`.
fn parse_perm_body(line: usize, text: &str, n: usize) -> Result<Permutation, FormatError> {
    if let Some(rest) = text.strip_prefix("oneline:") {
        let images: Vec<u32> = rest
            .split_whitespace()
            .map(|tok| {
                tok.parse::<u32>()
                    .map_err(|_| FormatError::at(line, format!("bad image {tok:?}")))
            })
            .collect::<Result<_, _>>()?;
        if images.len() != n {
            return Err(FormatError::at(
                line,
                format!("expected {n} images, got {}", images.len()),
            ));
        }
        Permutation::from_images(images).map_err(|e| FormatError::at(line, e.to_string()))
    } else if let Some(rest) = text.strip_prefix("cycles:") {
        let cycles = parse_cycle_text(line, rest)?;
        Permutation::from_cycles(n, &cycles).map_err(|e| FormatError::at(line, e.to_string()))
    } else {
        Err(FormatError::at(
            line,
            format!("expected `oneline:` or `cycles:`, got {text:?}"),
        ))
    }
}

fn parse_cycle_text(line: usize, text: &str) -> Result<Vec<Vec<u32>>, FormatError> {
    let mut cycles = Vec::new();
    let mut current: Option<Vec<u32>> = None;
    let mut token = String::new();
    let flush =
        |current: &mut Option<Vec<u32>>, token: &mut String| -> Result<(), FormatError> {
            if token.is_empty() {
                return Ok(());
            }
            let point: u32 = token
                .parse()
                .map_err(|_| FormatError::at(line, format!("bad point {token:?}")))?;
            token.clear();
            match current {
                Some(cycle) => cycle.push(point),
                None => {
                    return Err(FormatError::at(line, "point outside of a cycle"));
                }
            }
            Ok(())
        };
    for c in text.chars() {
        match c {
            '(' => {
                if current.is_some() {
                    return Err(FormatError::at(line, "nested `(`"));
                }
                current = Some(Vec::new());
            }
            ')' => {
                flush(&mut current, &mut token)?;
                match current.take() {
                    Some(cycle) if cycle.is_empty() => {
                        return Err(FormatError::at(line, "empty cycle"));
                    }
                    Some(cycle) => cycles.push(cycle),
                    None => return Err(FormatError::at(line, "unmatched `)`")),
                }
            }
            c if c.is_whitespace() => flush(&mut current, &mut token)?,
            c if c.is_ascii_digit() => token.push(c),
            other => {
                return Err(FormatError::at(
                    line,
                    format!("unexpected character {other:?} in cycles"),
                ));
            }
        }
    }
    if current.is_some() {
        return Err(FormatError::at(line, "unterminated cycle"));
    }
    if !token.is_empty() {
        return Err(FormatError::at(line, "point outside of a cycle"));
    }
    Ok(cycles)
}

fn render_perm_body(f: &Permutation, format: PermFormat) -> String {
    match format {
        PermFormat::OneLine => {
            let images: Vec<String> = f.images().iter().map(|a| a.to_string()).collect();
            format!("oneline: {}", images.join(" "))
        }
        PermFormat::Cycles => format!("cycles: {}", f.cycle_decomposition()),
    }
}

/// Parses a permutation file: a degree line, then one permutation line.
pub fn parse_permutation(text: &str) -> Result<Permutation, FormatError> {
    let lines = content_lines(text);
    match lines.as_slice() {
        [] => Err(FormatError::whole("empty input: expected a degree line")),
        [(line, _)] => Err(FormatError::at(
            *line,
            "expected a permutation line after the degree",
        )),
        [(dline, dtext), (bline, btext)] => {
            let n = parse_degree(*dline, dtext)?;
            parse_perm_body(*bline, btext, n)
        }
        [_, _, (line, _), ..] => Err(FormatError::at(*line, "unexpected extra content")),
    }
}

pub fn render_permutation(f: &Permutation, format: PermFormat) -> String {
    format!("{}\n{}\n", f.degree(), render_perm_body(f, format))
}

/// Parses a tuple file: a degree line, then one permutation line per
/// generator.
pub fn parse_tuple(text: &str) -> Result<PermTuple, FormatError> {
    let lines = content_lines(text);
    let ((dline, dtext), rest) = lines
        .split_first()
        .ok_or_else(|| FormatError::whole("empty input: expected a degree line"))?;
    let n = parse_degree(*dline, dtext)?;
    if rest.is_empty() {
        return Err(FormatError::at(
            *dline,
            "expected at least one permutation line after the degree",
        ));
    }
    let perms: Vec<Permutation> = rest
        .iter()
        .map(|(line, text)| parse_perm_body(*line, text, n))
        .collect::<Result<_, _>>()?;
    PermTuple::new(perms).map_err(|e| FormatError::whole(e.to_string()))
}

pub fn render_tuple(t: &PermTuple, format: PermFormat) -> String {
    let mut out = format!("{}\n", t.degree());
    for f in t.perms() {
        out.push_str(&render_perm_body(f, format));
        out.push('\n');
    }
    out
}

/// Parses a relation-system file; see [`EquationSystem`]'s `FromStr`.
pub fn parse_system(text: &str) -> Result<EquationSystem, FormatError> {
    text.parse().map_err(|e: ParseError| match &e {
        ParseError::MissingEquals { line } | ParseError::InWord { line, .. } => {
            FormatError::at(*line, e.to_string())
        }
        _ => FormatError::whole(e.to_string()),
    })
}

pub fn render_system(sys: &EquationSystem) -> String {
    format!("{sys}\n")
}

/// Parses a partial group table from `a * b = c`, `unit e`, and `element x`
/// lines.
pub fn parse_table(text: &str) -> Result<PartialGroupTable, FormatError> {
    let mut elements: Vec<String> = Vec::new();
    let mention = |label: &str, elements: &mut Vec<String>| {
        if !elements.iter().any(|l| l == label) {
            elements.push(label.to_string());
        }
    };
    let mut unit: Option<String> = None;
    let mut products: BTreeMap<(String, String), String> = BTreeMap::new();
    let mut product_lines: BTreeMap<(String, String), usize> = BTreeMap::new();

    for (line, text) in content_lines(text) {
        let tokens: Vec<&str> = text.split_whitespace().collect();
        match tokens.as_slice() {
            ["unit", e] => {
                if unit.is_some() {
                    return Err(FormatError::at(line, "duplicate `unit` line"));
                }
                mention(e, &mut elements);
                unit = Some(e.to_string());
            }
            ["element", x] => mention(x, &mut elements),
            [a, "*", b, "=", c] => {
                mention(a, &mut elements);
                mention(b, &mut elements);
                mention(c, &mut elements);
                let key = (a.to_string(), b.to_string());
                if products.contains_key(&key) {
                    return Err(FormatError::at(
                        line,
                        format!("product {a:?} * {b:?} defined twice"),
                    ));
                }
                product_lines.insert(key.clone(), line);
                products.insert(key, c.to_string());
            }
            _ => {
                return Err(FormatError::at(
                    line,
                    "expected `a * b = c`, `unit e`, or `element x`",
                ));
            }
        }
    }
    if elements.is_empty() {
        return Err(FormatError::whole("table declares no elements"));
    }

    PartialGroupTable::new(elements, unit, products).map_err(|e| match &e {
        TableError::BadUnitRow { left, right, .. } => {
            let line = product_lines
                .get(&(left.clone(), right.clone()))
                .copied()
                .unwrap_or(0);
            FormatError::at(line, e.to_string())
        }
        _ => FormatError::whole(e.to_string()),
    })
}

pub fn render_table(table: &PartialGroupTable) -> String {
    let mut out = String::new();
    if let Some(e) = table.unit() {
        out.push_str(&format!("unit {e}\n"));
    }
    for label in table.elements() {
        let mentioned = table.unit() == Some(label.as_str())
            || table
                .products()
                .iter()
                .any(|((a, b), c)| a == label || b == label || c == label);
        if !mentioned {
            out.push_str(&format!("element {label}\n"));
        }
    }
    for ((a, b), c) in table.products() {
        out.push_str(&format!("{a} * {b} = {c}\n"));
    }
    out
}

/// Parses a labeled image map: a degree line, then `label: <permutation>`
/// lines.
pub fn parse_phi(text: &str) -> Result<BTreeMap<String, Permutation>, FormatError> {
    let lines = content_lines(text);
    let ((dline, dtext), rest) = lines
        .split_first()
        .ok_or_else(|| FormatError::whole("empty input: expected a degree line"))?;
    let n = parse_degree(*dline, dtext)?;
    let mut phi = BTreeMap::new();
    for (line, text) in rest {
        let (label, body) = text.split_once(':').ok_or_else(|| {
            FormatError::at(*line, "expected `label: oneline: …` or `label: cycles: …`")
        })?;
        let label = label.trim();
        if label.is_empty() || label.contains(char::is_whitespace) {
            return Err(FormatError::at(
                *line,
                format!("bad label {label:?} (nonempty, no whitespace)"),
            ));
        }
        if phi.contains_key(label) {
            return Err(FormatError::at(*line, format!("duplicate label {label:?}")));
        }
        phi.insert(
            label.to_string(),
            parse_perm_body(*line, body.trim(), n)?,
        );
    }
    if phi.is_empty() {
        return Err(FormatError::at(
            *dline,
            "expected at least one labeled permutation after the degree",
        ));
    }
    Ok(phi)
}

pub fn render_phi(phi: &BTreeMap<String, Permutation>, format: PermFormat) -> String {
    let n = phi
        .values()
        .next()
        .expect("image maps are nonempty")
        .degree();
    let mut out = format!("{n}\n");
    for (label, f) in phi {
        out.push_str(&format!("{label}: {}\n", render_perm_body(f, format)));
    }
    out
}
