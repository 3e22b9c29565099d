//! Factor language and complexity of a primitive substitution.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Substitution;

/// Allowed words of length exactly `len`.
///
/// Starts from one window of some iterate `σⁿ(a)` and closes under
/// "windows of `σ(w)`". For a primitive substitution every allowed word of
/// length `len` is a window of `σ(u)` for an allowed `u` of length `len`, so
/// the closure is exactly the set of allowed words.
fn windows(s: &Substitution, len: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    if len == 0 {
        return out;
    }
    if s.rules().iter().all(|r| r.len() == 1) {
        // only the one-letter primitive substitution a -> a
        for a in 0..s.size() {
            out.insert(vec![s.rule(a)[0]; len]);
        }
        return out;
    }
    let mut word = vec![0usize];
    while word.len() < len {
        word = s.apply(&word);
    }
    let mut stack = vec![word[..len].to_vec()];
    out.insert(stack[0].clone());
    while let Some(w) = stack.pop() {
        let image = s.apply(&w);
        for win in image.windows(len) {
            if out.insert(win.to_vec()) {
                stack.push(win.to_vec());
            }
        }
    }
    out
}

/// All allowed factors of length `1..=max_len`.
pub fn factor_language(s: &Substitution, max_len: usize) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for w in windows(s, max_len) {
        for i in 0..w.len() {
            for j in i + 1..=w.len() {
                out.insert(w[i..j].to_vec());
            }
        }
    }
    out
}

/// Complexity function `p(n)` for `n = 1..=max_len`.
pub fn complexity(s: &Substitution, max_len: usize) -> Vec<usize> {
    let lang = factor_language(s, max_len);
    (1..=max_len).map(|n| lang.iter().filter(|w| w.len() == n).count()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Periodicity {
    Aperiodic,
    Periodic,
    Inconclusive,
}

/// Morse–Hedlund scan: `p(n+1) = p(n)` for some `n ≤ bound` means the
/// subshift is periodic; strict growth on the whole scanned range (with at
/// least two comparisons) is reported as aperiodic.
pub fn periodicity_scan(s: &Substitution, bound: usize) -> Periodicity {
    if bound == 0 {
        return Periodicity::Inconclusive;
    }
    let p = complexity(s, bound + 1);
    if p.windows(2).any(|w| w[1] == w[0]) {
        return Periodicity::Periodic;
    }
    let growing = p.windows(2).all(|w| w[1] > w[0]) && p.iter().enumerate().all(|(i, &c)| c > i + 1);
    if growing && bound >= 2 {
        Periodicity::Aperiodic
    } else {
        Periodicity::Inconclusive
    }
}
