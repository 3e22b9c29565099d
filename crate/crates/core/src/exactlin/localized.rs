//! Feasibility of linear forms constrained to localizations `Z[1/m]`.
//!
//! Find `t ∈ Qⁿ` with `⟨c, t⟩ = r` and `⟨a_k, t⟩ ∈ Z[1/m_k]` for every k.
//! The problem is local: at each prime `p` only the constraints with
//! `p ∤ m_k` matter, and they ask for `p`-integrality. After parametrizing
//! the normalization hyperplane, each local problem is a congruence system
//! solved through the Smith form; local solutions are glued with the
//! Chinese remainder theorem.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{dot, rat_from_int, Int, IntMatrix, Rat, RatMatrix, RatVector};
use super::primes::{crt, in_localization, mod_inverse, pow, prime_factors, valuation};
use super::smith::smith_normal_form;

/// `⟨form, t⟩ ∈ Z[1/modulus]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalConstraint {
    pub form: RatVector,
    pub modulus: Int,
}

impl LocalConstraint {
    pub fn new(form: RatVector, modulus: Int) -> Self {
        assert!(modulus.is_positive(), "localization modulus must be positive");
        LocalConstraint { form, modulus }
    }

    pub fn holds(&self, t: &[Rat]) -> bool {
        in_localization(&dot(&self.form, t), &self.modulus)
    }
}

/// `⟨c, t⟩ = r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Normalization {
    pub c: RatVector,
    pub r: Rat,
}

/// Proof that no `t` satisfies the system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// `c = 0` but `r ≠ 0`.
    InconsistentNormalization,
    /// `Σ coeffᵢ·⟨a_kᵢ, t⟩ = multiplier·r = value` for every `t` on the
    /// normalization hyperplane, with integer coefficients and `p ∤ m_kᵢ`.
    /// Each summand is `p`-integral but `v_p(value) < 0`.
    Prime {
        prime: Int,
        /// The constraint contributing the most negative valuation.
        constraint: usize,
        combination: Vec<(usize, Int)>,
        multiplier: Rat,
        value: Rat,
    },
}

impl Certificate {
    pub fn prime(&self) -> Option<&Int> {
        match self {
            Certificate::Prime { prime, .. } => Some(prime),
            Certificate::InconsistentNormalization => None,
        }
    }

    /// Independent re-check of the infeasibility argument.
    pub fn verify(&self, constraints: &[LocalConstraint], norm: &Normalization) -> bool {
        match self {
            Certificate::InconsistentNormalization => norm.c.iter().all(Zero::is_zero) && !norm.r.is_zero(),
            Certificate::Prime { prime, constraint, combination, multiplier, value } => {
                let n = norm.c.len();
                let mut sum = vec![Rat::zero(); n];
                for (k, coeff) in combination {
                    let Some(con) = constraints.get(*k) else { return false };
                    if (&con.modulus % prime).is_zero() || con.form.len() != n {
                        return false;
                    }
                    for (s, a) in sum.iter_mut().zip(&con.form) {
                        *s += a * rat_from_int(coeff);
                    }
                }
                let proportional = sum.iter().zip(&norm.c).all(|(s, c)| *s == multiplier * c);
                proportional
                    && *value == multiplier * &norm.r
                    && valuation(prime, value).is_some_and(|v| v < 0)
                    && combination.iter().any(|(k, _)| k == constraint)
            }
        }
    }
}

fn solve_inner(constraints: &[LocalConstraint], norm: &Normalization) -> Result<RatVector, Certificate> {
    let n = norm.c.len();
    assert!(constraints.iter().all(|k| k.form.len() == n), "constraint of wrong length");

    // t = t0 + K s
    let (t0, kernel) = match norm.c.iter().position(|x| !x.is_zero()) {
        Some(i) => {
            let mut t0 = vec![Rat::zero(); n];
            t0[i] = &norm.r / &norm.c[i];
            let c = RatMatrix::from_rows(vec![norm.c.clone()]);
            (t0, c.kernel())
        }
        None if norm.r.is_zero() => (vec![Rat::zero(); n], RatMatrix::identity(n).col_vecs()),
        None => return Err(Certificate::InconsistentNormalization),
    };
    let f = kernel.len();
    let alpha: Vec<Rat> = constraints.iter().map(|k| dot(&k.form, &t0)).collect();
    let beta: Vec<RatVector> =
        constraints.iter().map(|k| kernel.iter().map(|col| dot(&k.form, col)).collect()).collect();

    let mut bad: Vec<Int> = Vec::new();
    for (a, b) in alpha.iter().zip(&beta) {
        for x in std::iter::once(a).chain(b) {
            for p in prime_factors(x.denom()) {
                if !bad.contains(&p) {
                    bad.push(p);
                }
            }
        }
    }
    bad.sort();

    let mut residues: Vec<(Vec<Rat>, Int, u32, u32)> = Vec::new();
    for p in &bad {
        let active: Vec<usize> = (0..constraints.len()).filter(|&k| !(&constraints[k].modulus % p).is_zero()).collect();
        match local_solution(p, &active, &alpha, &beta, f) {
            Ok((sp, e)) => {
                let fp = sp
                    .iter()
                    .filter_map(|x| valuation(p, x))
                    .map(|v| (-v).max(0) as u32)
                    .max()
                    .unwrap_or(0);
                residues.push((sp, p.clone(), fp, e));
            }
            Err(cert) => return Err(cert),
        }
    }

    // s = X / P with X ≡ P·s_p (mod p^{f_p + e_p}) for each bad prime
    let big_p = residues.iter().fold(Int::one(), |acc, (_, p, fp, _)| acc * pow(p, *fp));
    let s: Vec<Rat> = (0..f)
        .map(|j| {
            let congruences: Vec<(Int, Int)> = residues
                .iter()
                .map(|(sp, p, fp, e)| {
                    let modulus = pow(p, fp + e);
                    let target = &sp[j] * rat_from_int(&big_p);
                    let inv = mod_inverse(target.denom(), &modulus).unwrap_or_else(Int::zero);
                    ((target.numer() * inv).mod_floor(&modulus), modulus)
                })
                .collect();
            Rat::new(crt(&congruences), big_p.clone())
        })
        .collect();

    let mut t = t0;
    for (sj, col) in s.iter().zip(&kernel) {
        for (ti, ci) in t.iter_mut().zip(col) {
            *ti += sj * ci;
        }
    }
    assert!(constraints.iter().all(|k| k.holds(&t)), "glued solution violates a constraint");
    assert_eq!(dot(&norm.c, &t), norm.r);
    Ok(t)
}

/// Solve `α_k + β_k·s ∈ Z_(p)` for the active constraints. Returns the local
/// solution and the exponent `e` such that any `s′ ≡ s (mod p^e)` also works.
fn local_solution(
    p: &Int,
    active: &[usize],
    alpha: &[Rat],
    beta: &[RatVector],
    f: usize,
) -> Result<(Vec<Rat>, u32), Certificate> {
    if active.is_empty() {
        return Ok((vec![Rat::zero(); f], 0));
    }
    let l = active.iter().fold(Int::one(), |acc, &k| {
        beta[k].iter().chain(std::iter::once(&alpha[k])).fold(acc, |a, x| a.lcm(x.denom()))
    });
    let lr = rat_from_int(&l);
    let rows: Vec<Vec<Int>> =
        active.iter().map(|&k| beta[k].iter().map(|x| (x * &lr).to_integer()).collect()).collect();
    let b = if f == 0 { IntMatrix::zeros(active.len(), 0) } else { IntMatrix::from_rows(rows) };
    let snf = smith_normal_form(&b);
    let rank = snf.rank();
    let u = snf.u.to_rat();
    let a_act: Vec<Rat> = active.iter().map(|&k| alpha[k].clone()).collect();
    let gamma = u.mul_vec(&a_act);

    for (i, g) in gamma.iter().enumerate().skip(rank) {
        if valuation(p, g).is_some_and(|v| v < 0) {
            let combination: Vec<(usize, Int)> = (0..active.len())
                .filter(|&j| !snf.u[(i, j)].is_zero())
                .map(|j| (active[j], snf.u[(i, j)].clone()))
                .collect();
            let constraint = combination
                .iter()
                .min_by_key(|(k, coeff)| {
                    valuation(p, &(&alpha[*k] * rat_from_int(coeff))).unwrap_or(i64::MAX)
                })
                .map(|(k, _)| *k)
                .expect("nonempty combination");
            return Err(Certificate::Prime {
                prime: p.clone(),
                constraint,
                combination,
                multiplier: Rat::zero(),
                value: g.clone(),
            });
        }
    }
    let z: Vec<Rat> = (0..f)
        .map(|i| if i < rank { -(&gamma[i] * &lr) / rat_from_int(&snf.s[(i, i)]) } else { Rat::zero() })
        .collect();
    let s = snf.v.to_rat().mul_vec(&z);
    let e = super::primes::int_valuation(p, &l);
    Ok((s, e))
}

/// Fill in the normalization multiplier of a prime certificate.
fn finalize(cert: Certificate, constraints: &[LocalConstraint], norm: &Normalization) -> Certificate {
    match cert {
        Certificate::Prime { prime, constraint, combination, value, .. } => {
            let n = norm.c.len();
            let mut sum = vec![Rat::zero(); n];
            for (k, coeff) in &combination {
                for (s, a) in sum.iter_mut().zip(&constraints[*k].form) {
                    *s += a * rat_from_int(coeff);
                }
            }
            let multiplier = match norm.c.iter().position(|x| !x.is_zero()) {
                Some(i) => &sum[i] / &norm.c[i],
                None => Rat::zero(),
            };
            Certificate::Prime { prime, constraint, combination, multiplier, value }
        }
        other => other,
    }
}

/// A witness `t`, or a certificate that none exists.
pub fn solve_localized(constraints: &[LocalConstraint], norm: &Normalization) -> Result<RatVector, Certificate> {
    solve_inner(constraints, norm).map_err(|c| finalize(c, constraints, norm))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int, rat};

    fn con(form: &[(i64, i64)], m: i64) -> LocalConstraint {
        LocalConstraint::new(form.iter().map(|&(a, b)| rat(a, b)).collect(), int(m))
    }

    #[test]
    fn prime_five_obstruction() {
        let cs = vec![con(&[(3, 5)], 3), con(&[(2, 5)], 3)];
        let norm = Normalization { c: vec![rat(1, 1)], r: rat(1, 1) };
        let cert = solve_localized(&cs, &norm).unwrap_err();
        assert_eq!(cert.prime(), Some(&int(5)));
        assert!(cert.verify(&cs, &norm));
    }

    #[test]
    fn trivial_integer_solution() {
        let cs = vec![con(&[(1, 1)], 1)];
        let norm = Normalization { c: vec![rat(1, 1)], r: rat(1, 1) };
        assert_eq!(solve_localized(&cs, &norm).unwrap(), vec![rat(1, 1)]);
    }

    #[test]
    fn two_variable_witness() {
        let cs = vec![con(&[(-1, 2), (1, 1)], 2), con(&[(1, 2), (0, 1)], 2)];
        let norm = Normalization { c: vec![rat(1, 1), rat(2, 1)], r: rat(1, 1) };
        let t = solve_localized(&cs, &norm).unwrap();
        assert!(cs.iter().all(|c| c.holds(&t)));
        assert_eq!(dot(&norm.c, &t), rat(1, 1));
    }

    #[test]
    fn inconsistent_normalization() {
        let norm = Normalization { c: vec![rat(0, 1)], r: rat(1, 1) };
        let cert = solve_localized(&[], &norm).unwrap_err();
        assert_eq!(cert, Certificate::InconsistentNormalization);
        assert!(cert.verify(&[], &norm));
    }

    #[test]
    fn gluing_across_primes() {
        // t/6 ∈ Z[1/3] forces 2 | t; t/10 ∈ Z[1/2] forces 5 | t; t ≡ 1 mod nothing else
        let cs = vec![con(&[(1, 6), (0, 1)], 3), con(&[(1, 10), (0, 1)], 2), con(&[(1, 1), (1, 7)], 1)];
        let norm = Normalization { c: vec![rat(0, 1), rat(1, 1)], r: rat(7, 1) };
        let t = solve_localized(&cs, &norm).unwrap();
        assert!(cs.iter().all(|c| c.holds(&t)));
    }
}
