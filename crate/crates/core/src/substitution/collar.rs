//! One-sided collars: each tile decorated with its left and right neighbour.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::language::factor_language;
use super::{Lengths, Substitution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollaredSystem {
    /// Allowed 3-letter factors `(left, core, right)` in lexicographic order.
    pub triples: Vec<[usize; 3]>,
    /// The induced substitution on collared letters, named `l(c)r`.
    pub substitution: Substitution,
    /// Collared letter to core letter.
    pub projection: Vec<usize>,
    /// Collared 2-factors `(e, e′)`, read off from allowed 4-factors.
    pub adjacency: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CollarError {
    /// A window of a substituted collared tile is not an allowed 3-factor.
    CollarUndefined { letter: String },
}

impl fmt::Display for CollarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CollarError::CollarUndefined { letter } => write!(f, "collared image of {letter} leaves the language"),
        }
    }
}

impl std::error::Error for CollarError {}

pub fn collar(s: &Substitution) -> Result<CollaredSystem, CollarError> {
    let lang = factor_language(s, 4);
    let triples: Vec<[usize; 3]> = lang.iter().filter(|w| w.len() == 3).map(|w| [w[0], w[1], w[2]]).collect();
    let index = |t: [usize; 3]| triples.iter().position(|&x| x == t);
    let name = |t: &[usize; 3]| {
        let a = s.alphabet();
        format!("{}({}){}", a[t[0]], a[t[1]], a[t[2]])
    };

    let mut rules = Vec::with_capacity(triples.len());
    for t in &triples {
        let left = s.rule(t[0]).len();
        let word = s.apply(t);
        let core_len = s.rule(t[1]).len();
        let mut image = Vec::with_capacity(core_len);
        for i in left..left + core_len {
            let w = [word[i - 1], word[i], word[i + 1]];
            image.push(index(w).ok_or_else(|| CollarError::CollarUndefined { letter: name(t) })?);
        }
        rules.push(image);
    }
    let lengths = match s.lengths() {
        Lengths::PerronFrobenius => Lengths::PerronFrobenius,
        Lengths::Explicit(l) => Lengths::Explicit(triples.iter().map(|t| l[t[1]].clone()).collect()),
    };
    let alphabet = triples.iter().map(name).collect();
    let adjacency = lang
        .iter()
        .filter(|w| w.len() == 4)
        .map(|w| {
            let e = index([w[0], w[1], w[2]]).expect("sub-factor of an allowed word");
            let f = index([w[1], w[2], w[3]]).expect("sub-factor of an allowed word");
            (e, f)
        })
        .collect();
    Ok(CollaredSystem {
        projection: triples.iter().map(|t| t[1]).collect(),
        triples,
        substitution: Substitution::new(alphabet, rules, lengths),
        adjacency,
    })
}

impl CollaredSystem {
    /// Forget the collars of a collared word.
    pub fn project(&self, word: &[usize]) -> Vec<usize> {
        word.iter().map(|&e| self.projection[e]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::is_primitive;

    fn thue_morse() -> Substitution {
        // 1 = x, 1̄ = y
        Substitution::from_rules(&[("x", "xy"), ("y", "yx")])
    }

    #[test]
    fn thue_morse_collared_rules() {
        let tm = thue_morse();
        let c = collar(&tm).unwrap();
        assert_eq!(c.triples.len(), 6);
        // named letters: a = 1(1̄)1, b = 1̄(1̄)1, c = 1(1̄)1̄, ā = 1̄(1)1̄, b̄ = 1(1)1̄, c̄ = 1̄(1)1
        let names = [("a", "x(y)x"), ("b", "y(y)x"), ("c", "x(y)y"), ("A", "y(x)y"), ("B", "x(x)y"), ("C", "y(x)x")];
        let idx = |n: &str| {
            let full = names.iter().find(|(k, _)| *k == n).unwrap().1;
            c.substitution.alphabet().iter().position(|s| s == full).unwrap()
        };
        let expected = [("a", "bC"), ("b", "aC"), ("c", "bA"), ("A", "Bc"), ("B", "Ac"), ("C", "Ba")];
        for (lhs, rhs) in expected {
            let image: Vec<usize> = rhs.chars().map(|ch| idx(&ch.to_string())).collect();
            assert_eq!(c.substitution.rule(idx(lhs)), image.as_slice(), "rule of {lhs}");
        }
    }

    #[test]
    fn collaring_projects_to_base() {
        for s in [thue_morse(), Substitution::from_rules(&[("a", "ab"), ("b", "aa")])] {
            let c = collar(&s).unwrap();
            for (e, t) in c.triples.iter().enumerate() {
                assert_eq!(c.project(c.substitution.rule(e)), s.rule(t[1]));
            }
            assert!(is_primitive(&c.substitution.incidence_matrix()));
        }
    }

    #[test]
    fn adjacency_matches_collared_language() {
        let c = collar(&thue_morse()).unwrap();
        let two: Vec<(usize, usize)> = factor_language(&c.substitution, 2)
            .into_iter()
            .filter(|w| w.len() == 2)
            .map(|w| (w[0], w[1]))
            .collect();
        let mut adj = c.adjacency.clone();
        adj.sort();
        assert_eq!(adj, two);
    }
}
