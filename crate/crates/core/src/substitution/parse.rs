//! Line-oriented input format.
//!
//! ```text
//! # comment
//! a -> abb
//! b -> aaa
//! lengths: a=1 b=1
//! ```
//!
//! When every symbol on the left is a single character, rule words are read
//! character by character (whitespace ignored); otherwise they are split on
//! whitespace. `lengths: PF` (the default) takes lengths from the
//! Perron–Frobenius eigenvector.

use std::fmt;

use num_traits::Signed;

use super::{Lengths, Substitution};
use crate::exactlin::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    EmptyRule(String),
    DuplicateRule(String),
    UnknownSymbol(String),
    EmptyAlphabet,
    BadLength(String),
    MissingLength(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number, 0 when the error concerns the whole input.
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: ", self.line)?;
        }
        match &self.kind {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::EmptyRule(s) => write!(f, "empty rule for symbol '{s}'"),
            ParseErrorKind::DuplicateRule(s) => write!(f, "duplicate rule for symbol '{s}'"),
            ParseErrorKind::UnknownSymbol(s) => write!(f, "unknown symbol '{s}'"),
            ParseErrorKind::EmptyAlphabet => write!(f, "no rules given"),
            ParseErrorKind::BadLength(m) => write!(f, "bad length: {m}"),
            ParseErrorKind::MissingLength(s) => write!(f, "no length given for symbol '{s}'"),
        }
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

pub fn parse_substitution(text: &str) -> Result<Substitution, ParseError> {
    let mut heads: Vec<(usize, String, String)> = Vec::new();
    let mut lengths_line: Option<(usize, String)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("lengths:") {
            if lengths_line.is_some() {
                return Err(err(line, ParseErrorKind::Syntax("more than one lengths line".into())));
            }
            lengths_line = Some((line, rest.trim().to_string()));
            continue;
        }
        let Some((lhs, rhs)) = content.split_once("->") else {
            return Err(err(line, ParseErrorKind::Syntax(format!("expected 'symbol -> word', got '{content}'"))));
        };
        let lhs = lhs.trim();
        if lhs.is_empty() || lhs.split_whitespace().count() != 1 {
            return Err(err(line, ParseErrorKind::Syntax(format!("bad symbol '{lhs}'"))));
        }
        if heads.iter().any(|(_, s, _)| s == lhs) {
            return Err(err(line, ParseErrorKind::DuplicateRule(lhs.to_string())));
        }
        if rhs.trim().is_empty() {
            return Err(err(line, ParseErrorKind::EmptyRule(lhs.to_string())));
        }
        heads.push((line, lhs.to_string(), rhs.trim().to_string()));
    }
    if heads.is_empty() {
        return Err(err(0, ParseErrorKind::EmptyAlphabet));
    }

    let alphabet: Vec<String> = heads.iter().map(|(_, s, _)| s.clone()).collect();
    let single = alphabet.iter().all(|s| s.chars().count() == 1);
    let mut rules = Vec::with_capacity(heads.len());
    for (line, _, rhs) in &heads {
        let tokens: Vec<String> = if single {
            rhs.chars().filter(|c| !c.is_whitespace()).map(String::from).collect()
        } else {
            rhs.split_whitespace().map(String::from).collect()
        };
        let word = tokens
            .iter()
            .map(|t| alphabet.iter().position(|s| s == t).ok_or_else(|| err(*line, ParseErrorKind::UnknownSymbol(t.clone()))))
            .collect::<Result<Vec<usize>, _>>()?;
        rules.push(word);
    }

    let lengths = match lengths_line {
        None => Lengths::PerronFrobenius,
        Some((_, entry)) if entry.eq_ignore_ascii_case("pf") => Lengths::PerronFrobenius,
        Some((line, entry)) => parse_lengths(line, &entry, &alphabet)?,
    };
    Ok(Substitution::new(alphabet, rules, lengths))
}

fn parse_lengths(line: usize, entry: &str, alphabet: &[String]) -> Result<Lengths, ParseError> {
    let mut values: Vec<Option<Rat>> = vec![None; alphabet.len()];
    for item in entry.split_whitespace() {
        let Some((sym, val)) = item.split_once('=') else {
            return Err(err(line, ParseErrorKind::BadLength(format!("expected 'symbol=value', got '{item}'"))));
        };
        let i = alphabet
            .iter()
            .position(|s| s == sym)
            .ok_or_else(|| err(line, ParseErrorKind::UnknownSymbol(sym.to_string())))?;
        let v: Rat = val.parse().map_err(|_| err(line, ParseErrorKind::BadLength(format!("'{val}' is not a rational"))))?;
        if !v.is_positive() {
            return Err(err(line, ParseErrorKind::BadLength(format!("length of '{sym}' must be positive"))));
        }
        values[i] = Some(v);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| err(line, ParseErrorKind::MissingLength(alphabet[i].clone()))))
        .collect::<Result<Vec<_>, _>>()
        .map(Lengths::Explicit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::rat;

    #[test]
    fn parses_worked_examples() {
        let s = parse_substitution("a -> abb\nb -> aaa").unwrap();
        assert_eq!(s.alphabet(), &["a".to_string(), "b".to_string()]);
        assert_eq!(s.rules(), &[vec![0, 1, 1], vec![0, 0, 0]]);
        let pd = parse_substitution("# period doubling\na -> ab\nb -> aa\n").unwrap();
        assert_eq!(pd.rules(), &[vec![0, 1], vec![0, 0]]);
    }

    #[test]
    fn empty_rule_is_rejected_with_line() {
        let e = parse_substitution("a -> ab\nb ->").unwrap_err();
        assert_eq!(e, ParseError { line: 2, kind: ParseErrorKind::EmptyRule("b".into()) });
    }

    #[test]
    fn unknown_and_duplicate_symbols() {
        let e = parse_substitution("a -> ac\nb -> a").unwrap_err();
        assert_eq!(e.line, 1);
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol("c".into()));
        let e = parse_substitution("a -> ab\nb -> a\na -> b").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.kind, ParseErrorKind::DuplicateRule("a".into()));
        assert!(matches!(parse_substitution("# nothing").unwrap_err().kind, ParseErrorKind::EmptyAlphabet));
    }

    #[test]
    fn multi_character_symbols_and_lengths() {
        let s = parse_substitution("x1 -> x1 y\ny -> x1\nlengths: x1=3/2 y=1").unwrap();
        assert_eq!(s.rules(), &[vec![0, 1], vec![0]]);
        assert_eq!(s.lengths(), &Lengths::Explicit(vec![rat(3, 2), rat(1, 1)]));
        let e = parse_substitution("a -> ab\nb -> a\nlengths: a=1").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingLength("b".into()));
    }
}
