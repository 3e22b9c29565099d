//! Symbolic substitutions: parsing, incidence data, language, collaring and
//! Perron–Frobenius data.

mod collar;
mod language;
mod parse;
mod pf;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactlin::{IntMatrix, Rat};

pub use collar::{collar, CollarError, CollaredSystem};
pub use language::{complexity, factor_language, periodicity_scan, Periodicity};
pub use parse::{parse_substitution, ParseError, ParseErrorKind};
pub(crate) use pf::eigenvectors;
pub use pf::{is_unit_poly, lengths_are_pf, pf_data, pf_data_of, pisot_status, Dilation, PfData, PisotStatus, PISOT_TOLERANCE};

/// Tile lengths attached to the letters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Lengths {
    /// Taken from the left Perron–Frobenius eigenvector of the incidence
    /// matrix.
    PerronFrobenius,
    Explicit(Vec<Rat>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    alphabet: Vec<String>,
    rules: Vec<Vec<usize>>,
    lengths: Lengths,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BorderForcing {
    CommonPrefix,
    CommonSuffix,
    Both,
    None,
}

impl BorderForcing {
    pub fn forces(self) -> bool {
        self != BorderForcing::None
    }
}

impl Substitution {
    /// Build from symbol names and rules given as letter indices.
    ///
    /// Panics if a rule is empty or mentions a letter outside the alphabet;
    /// use [`parse_substitution`] for validated input.
    pub fn new(alphabet: Vec<String>, rules: Vec<Vec<usize>>, lengths: Lengths) -> Self {
        assert!(!alphabet.is_empty(), "empty alphabet");
        assert_eq!(alphabet.len(), rules.len(), "one rule per letter");
        assert!(rules.iter().all(|r| !r.is_empty() && r.iter().all(|&c| c < alphabet.len())));
        if let Lengths::Explicit(l) = &lengths {
            assert_eq!(l.len(), alphabet.len());
        }
        Substitution { alphabet, rules, lengths }
    }

    /// Convenience constructor from single-character rules, e.g.
    /// `[("a", "ab"), ("b", "a")]`.
    pub fn from_rules(rules: &[(&str, &str)]) -> Self {
        let text: String = rules.iter().map(|(a, w)| format!("{a} -> {w}\n")).collect();
        parse_substitution(&text).expect("well-formed rules")
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn rules(&self) -> &[Vec<usize>] {
        &self.rules
    }

    pub fn rule(&self, letter: usize) -> &[usize] {
        &self.rules[letter]
    }

    pub fn lengths(&self) -> &Lengths {
        &self.lengths
    }

    pub fn apply(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&c| self.rules[c].iter().copied()).collect()
    }

    pub fn iterate(&self, word: &[usize], n: usize) -> Vec<usize> {
        (0..n).fold(word.to_vec(), |w, _| self.apply(&w))
    }

    pub fn word_to_string(&self, word: &[usize]) -> String {
        let sep = if self.alphabet.iter().all(|s| s.chars().count() == 1) { "" } else { " " };
        word.iter().map(|&c| self.alphabet[c].as_str()).collect::<Vec<_>>().join(sep)
    }

    /// Common length of all rule words, if constant.
    pub fn constant_length(&self) -> Option<usize> {
        let l = self.rules[0].len();
        self.rules.iter().all(|r| r.len() == l).then_some(l)
    }

    /// `M[i][j]` = occurrences of letter `i` in the rule of letter `j`.
    pub fn incidence_matrix(&self) -> IntMatrix {
        let n = self.size();
        let mut m = IntMatrix::zeros(n, n);
        for (j, rule) in self.rules.iter().enumerate() {
            for &i in rule {
                m[(i, j)] += 1;
            }
        }
        m
    }

    pub fn border_forcing(&self) -> BorderForcing {
        let first = self.rules[0][0];
        let last = *self.rules[0].last().unwrap();
        let prefix = self.rules.iter().all(|r| r[0] == first);
        let suffix = self.rules.iter().all(|r| *r.last().unwrap() == last);
        match (prefix, suffix) {
            (true, true) => BorderForcing::Both,
            (true, false) => BorderForcing::CommonPrefix,
            (false, true) => BorderForcing::CommonSuffix,
            (false, false) => BorderForcing::None,
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, rule) in self.rules.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{} -> {}", self.alphabet[i], self.word_to_string(rule))?;
        }
        Ok(())
    }
}

/// Whether some power `Mᵏ` with `k ≤ N² − 2N + 2` is entrywise positive.
pub fn is_primitive(m: &IntMatrix) -> bool {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return false;
    }
    let base: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] != 0.into()).collect()).collect();
    let bound = n * n - 2 * n + 2;
    let mut power = base.clone();
    for _ in 0..bound {
        if power.iter().all(|r| r.iter().all(|&x| x)) {
            return true;
        }
        power = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| power[i][k] && base[k][j])).collect())
            .collect();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::int_matrix;

    #[test]
    fn incidence_of_worked_examples() {
        let s = Substitution::from_rules(&[("a", "abb"), ("b", "aaa")]);
        assert_eq!(s.incidence_matrix(), int_matrix(&[&[1, 3], &[2, 0]]));
        assert_eq!(s.incidence_matrix().transpose(), int_matrix(&[&[1, 2], &[3, 0]]));
        let pd = Substitution::from_rules(&[("a", "ab"), ("b", "aa")]);
        assert_eq!(pd.incidence_matrix().transpose(), int_matrix(&[&[1, 1], &[2, 0]]));
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive(&int_matrix(&[&[1, 3], &[2, 0]])));
        assert!(!is_primitive(&IntMatrix::identity(2)));
        assert!(!is_primitive(&int_matrix(&[&[0, 1], &[1, 0]])));
        assert!(is_primitive(&int_matrix(&[&[0, 1], &[1, 1]])));
    }

    #[test]
    fn border_forcing_classes() {
        let s = Substitution::from_rules(&[("a", "abb"), ("b", "aaa")]);
        assert_eq!(s.border_forcing(), BorderForcing::CommonPrefix);
        let tm = Substitution::from_rules(&[("a", "ab"), ("b", "ba")]);
        assert_eq!(tm.border_forcing(), BorderForcing::None);
        let pd = Substitution::from_rules(&[("a", "ab"), ("b", "aa")]);
        assert_eq!(pd.border_forcing(), BorderForcing::CommonPrefix);
        let both = Substitution::from_rules(&[("a", "aba"), ("b", "aa")]);
        assert_eq!(both.border_forcing(), BorderForcing::Both);
    }

    #[test]
    fn column_sums_are_rule_lengths() {
        let s = Substitution::from_rules(&[("a", "abb"), ("b", "aaa")]);
        let m = s.incidence_matrix();
        for j in 0..2 {
            let sum: i64 = (0..2).map(|i| i64::try_from(&m[(i, j)]).unwrap()).sum();
            assert_eq!(sum as usize, s.rule(j).len());
        }
    }
}
