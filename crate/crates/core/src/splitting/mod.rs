//! Splitting of the two exact sequences
//!
//! ```text
//! 0 → E  →θ H¹ → coker θ → 0        (seq3)
//! 0 → Inf →  H¹ →τ freq   → 0        (seq1)
//! ```
//!
//! A sequence splits iff the subgroup is a retract of `H¹`. Every
//! homomorphism `G → Q` extends uniquely to a linear map on the ambient
//! space, so a retraction is a rational matrix and the search for one is a
//! localized feasibility problem. Infeasibility comes with a single prime.

mod seq1;
mod seq3;

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dirlimit::DlGroup;
use crate::exactlin::poly::{int_char_poly, integer_roots};
use crate::exactlin::primes::prime_factors;
use crate::exactlin::{Certificate, Int, LocalConstraint, Normalization, Rat, RatMatrix, RatVector};

pub use seq1::decide_split_seq1;
pub use seq3::{decide_split_seq3, multiplicity_criterion};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Subgroup is `0` or all of `G`.
    Trivial,
    /// `det Ā = ±1` on `ER / Q·g_θ`.
    C1,
    /// The cokernel limit is finitely generated.
    C2,
    /// Non-unit eigenvalues have the same multiplicity in `Ã` and in the dilation.
    Multiplicity,
    /// `freq` finitely generated.
    FiniteFreq,
    /// Localized search for a retraction.
    C3,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Criterion::Trivial => "trivial",
            Criterion::C1 => "C1",
            Criterion::C2 => "C2",
            Criterion::Multiplicity => "multiplicity",
            Criterion::FiniteFreq => "finite-freq",
            Criterion::C3 => "C3",
        };
        f.write_str(s)
    }
}

/// One step of the decision: `Some(true)` means the criterion proves
/// splitting, `Some(false)` non-splitting, `None` that it is inconclusive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionRecord {
    pub criterion: Criterion,
    pub outcome: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// Retraction `r` in ambient coordinates: `r(G) ⊆ H`, `r|_H = id`.
    pub retraction: RatMatrix,
    /// For seq3, the functional `w` with `r = g_θ·w`.
    pub functional: Option<RatVector>,
    /// Generator sweep `Ã⁻ⁿΣ`, `n ≤ depth`, checked.
    pub depth: usize,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Obstruction {
    pub prime: Option<Int>,
    /// The constraint named by the certificate and its meaning.
    pub constraint: usize,
    pub label: String,
    pub constraints: Vec<LocalConstraint>,
    pub labels: Vec<String>,
    pub normalization: Normalization,
    pub certificate: Certificate,
}

impl Obstruction {
    /// Recheck the infeasibility argument from the stored system.
    pub fn verify(&self) -> bool {
        self.certificate.verify(&self.constraints, &self.normalization)
            && self.certificate.prime() == self.prime.as_ref()
            && self.prime.as_ref().is_none_or(|p| {
                let c = &self.constraints[self.constraint];
                !(&c.modulus % p).is_zero()
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Splits(Witness),
    DoesNotSplit(Obstruction),
    Undecided(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitVerdict {
    pub outcome: Outcome,
    pub trail: Vec<CriterionRecord>,
    /// Every conclusive criterion in the trail points the same way.
    pub criteria_agree: bool,
}

impl SplitVerdict {
    fn new(outcome: Outcome, trail: Vec<CriterionRecord>) -> Self {
        let verdict = match &outcome {
            Outcome::Splits(_) => Some(true),
            Outcome::DoesNotSplit(_) => Some(false),
            Outcome::Undecided(_) => None,
        };
        let criteria_agree = trail.iter().filter_map(|r| r.outcome).all(|o| Some(o) == verdict);
        SplitVerdict { outcome, trail, criteria_agree }
    }

    pub fn splits(&self) -> Option<bool> {
        match self.outcome {
            Outcome::Splits(_) => Some(true),
            Outcome::DoesNotSplit(_) => Some(false),
            Outcome::Undecided(_) => None,
        }
    }

    pub fn certificate_prime(&self) -> Option<&Int> {
        match &self.outcome {
            Outcome::DoesNotSplit(o) => o.prime.as_ref(),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Splits(w) => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for SplitVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.outcome {
            Outcome::Splits(w) => write!(f, "Splits (verified to depth {})", w.depth),
            Outcome::DoesNotSplit(o) => match &o.prime {
                Some(p) => write!(f, "DoesNotSplit (prime {p}: {})", o.label),
                None => write!(f, "DoesNotSplit ({})", o.label),
            },
            Outcome::Undecided(r) => write!(f, "Undecided ({r})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitOptions {
    pub seed: u64,
    pub samples: usize,
    pub max_level: u32,
    /// Depth of the generator sweep; `None` means `3d`.
    pub verify_depth: Option<usize>,
}

impl Default for SplitOptions {
    fn default() -> Self {
        SplitOptions { seed: 0, samples: 200, max_level: 6, verify_depth: None }
    }
}

/// Check a retraction on `H` given by its membership test and generators.
fn verify_retraction(
    g: &DlGroup,
    r: &RatMatrix,
    in_sub: &dyn Fn(&[Rat]) -> bool,
    sub_generators: &[RatVector],
    opts: &SplitOptions,
) -> Result<Witness, String> {
    for h in sub_generators {
        if r.mul_vec(h) != *h {
            return Err("retraction moves a generator of the subgroup".into());
        }
    }
    let depth = opts.verify_depth.unwrap_or(3 * g.dim());
    for n in 0..=depth {
        for x in g.stage_generators(n as u32) {
            if !in_sub(&r.mul_vec(&x)) {
                return Err(format!("image of a stage-{n} generator leaves the subgroup"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.samples {
        if g.dim() == 0 {
            break;
        }
        let x = g.sample(&mut rng, opts.max_level, 9);
        if !in_sub(&r.mul_vec(&x.value)) {
            return Err("image of a sampled member leaves the subgroup".into());
        }
    }
    Ok(Witness { retraction: r.clone(), functional: None, depth, samples: opts.samples })
}

fn finish(
    g: &DlGroup,
    r: RatMatrix,
    functional: Option<RatVector>,
    in_sub: &dyn Fn(&[Rat]) -> bool,
    sub_generators: &[RatVector],
    opts: &SplitOptions,
) -> Outcome {
    match verify_retraction(g, &r, in_sub, sub_generators, opts) {
        Ok(w) => Outcome::Splits(Witness { functional, ..w }),
        Err(e) => Outcome::Undecided(format!("witness failed verification: {e}")),
    }
}

/// Sum of the generalized eigenspaces `ker(Ã − μ)ᵈ` over the integer
/// eigenvalues `μ` selected by `keep`. `None` if some eigenvalue is not an
/// integer.
fn generalized_eigenspace(a: &RatMatrix, t: &crate::exactlin::IntMatrix, keep: impl Fn(&Int) -> bool) -> Option<Vec<RatVector>> {
    let d = a.rows();
    if d == 0 {
        return Some(Vec::new());
    }
    let roots = integer_roots(&int_char_poly(t));
    if roots.iter().map(|(_, m)| m).sum::<usize>() != d {
        return None;
    }
    let mut span = Vec::new();
    for (mu, _) in roots.iter().filter(|(mu, _)| keep(mu)) {
        let shifted = a.sub(&RatMatrix::identity(d).scale(&Rat::from_integer(mu.clone())));
        span.extend(shifted.pow(d as u32).kernel());
    }
    Some(span)
}

/// Every prime of `n` divides `m`.
fn primes_within(n: &Int, m: &Int) -> bool {
    prime_factors(n).iter().all(|p| (m % p).is_zero())
}

fn solve_error(cert: Certificate, constraints: Vec<LocalConstraint>, labels: Vec<String>, norm: Normalization) -> Outcome {
    let (prime, constraint) = match &cert {
        Certificate::Prime { prime, constraint, .. } => (Some(prime.clone()), *constraint),
        Certificate::InconsistentNormalization => (None, 0),
    };
    let label = match &cert {
        Certificate::Prime { .. } => labels[constraint].clone(),
        Certificate::InconsistentNormalization => "normalization cannot be met".into(),
    };
    Outcome::DoesNotSplit(Obstruction { prime, constraint, label, constraints, labels, normalization: norm, certificate: cert })
}

#[cfg(test)]
mod tests;
