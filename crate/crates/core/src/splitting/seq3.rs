//! Is `θ(E)` a direct summand of `H¹`?

use num_traits::{One, Signed, Zero};

use super::{
    finish, generalized_eigenspace, primes_within, solve_error, Criterion, CriterionRecord, Outcome, SplitOptions,
    SplitVerdict,
};
use crate::dirlimit::DlGroup;
use crate::exactlin::lattice::clear_denominators;
use crate::exactlin::matrix::{dot, rat_from_int};
use crate::exactlin::poly::{factor_multiplicity, int_char_poly, to_rat_poly};
use crate::exactlin::primes::{in_localization, radical};
use crate::exactlin::smith::{int_det, integer_kernel, smith_normal_form, unimodular_inverse};
use crate::exactlin::{solve_localized, Int, IntMatrix, LocalConstraint, Normalization, Rat, RatMatrix, RatVector};
use crate::spectral::SpectralMode;

pub fn decide_split_seq3(g: &DlGroup, mode: &SpectralMode, g_theta: Option<&RatVector>, opts: &SplitOptions) -> SplitVerdict {
    let d = g.dim();
    match (mode, g_theta) {
        (SpectralMode::IntegerDilation { lambda }, Some(gt)) => integer_case(g, lambda, gt, opts),
        (SpectralMode::IrreduciblePisot { .. }, _) => {
            // θ is onto: the identity is a retraction
            let gens = g.sigma().basis().to_vec();
            let outcome = finish(g, RatMatrix::identity(d), None, &|x| g.contains(x), &gens, opts);
            SplitVerdict::new(outcome, vec![trivial("θ is onto, coker θ = 0")])
        }
        (SpectralMode::IrreducibleNonPisot { .. }, _) => {
            let outcome = finish(g, RatMatrix::zeros(d, d), None, &|x| x.iter().all(Zero::is_zero), &[], opts);
            SplitVerdict::new(outcome, vec![trivial("E = 0")])
        }
        (SpectralMode::Unsupported { reason }, _) => {
            SplitVerdict::new(Outcome::Undecided(format!("unsupported regime: {reason}")), Vec::new())
        }
        (SpectralMode::IntegerDilation { .. }, None) => {
            SplitVerdict::new(Outcome::Undecided("θ image unavailable".into()), Vec::new())
        }
    }
}

fn trivial(detail: &str) -> CriterionRecord {
    CriterionRecord { criterion: Criterion::Trivial, outcome: Some(true), detail: detail.into() }
}

fn integer_case(g: &DlGroup, lambda: &Int, gt: &[Rat], opts: &SplitOptions) -> SplitVerdict {
    let d = g.dim();
    let rad = radical(&lambda.abs());
    let mut trail = Vec::new();

    let h = clear_denominators(&g.sigma_coordinates(gt));
    let c1 = quotient_det(g.t_sigma(), &h, lambda);
    let c1_fires = c1.abs().is_one();
    trail.push(CriterionRecord {
        criterion: Criterion::C1,
        outcome: c1_fires.then_some(true),
        detail: format!("det Ā = {c1}"),
    });
    let c2 = dual_quotient_det(g.t_sigma(), &h);
    trail.push(CriterionRecord {
        criterion: Criterion::C2,
        outcome: c2.as_ref().is_some_and(|x| x.abs().is_one()).then_some(true),
        detail: match &c2 {
            Some(x) => format!("cokernel limit of rank {} with det {x}", d - 1),
            None => "action on the annihilator of g_θ is not integral".into(),
        },
    });
    let mult = multiplicity_criterion(&int_char_poly(g.t_sigma()), &[-lambda.clone(), Int::one()]);
    trail.push(CriterionRecord {
        criterion: Criterion::Multiplicity,
        outcome: (mult == Some(true)).then_some(true),
        detail: match mult {
            Some(true) => "every non-unit eigenvalue matches the dilation".into(),
            Some(false) => "a non-unit eigenvalue of Ã is not an eigenvalue of the dilation".into(),
            None => "no non-unit eigenvalues".into(),
        },
    });

    let on_line = |x: &[Rat]| on_z_line(x, gt, &rad);
    let sub_gens = vec![gt.to_vec()];

    // w must vanish where G is divisible by primes outside λ
    let a = g.a_tilde();
    let foreign = generalized_eigenspace(a, g.t_sigma(), |mu| !mu.is_zero() && !primes_within(mu, &rad));
    let killed = match foreign {
        Some(v) => v,
        None if primes_within(g.det(), &rad) => Vec::new(),
        None => {
            trail.push(CriterionRecord {
                criterion: Criterion::C3,
                outcome: None,
                detail: "irrational eigenvalues with primes outside λ".into(),
            });
            return SplitVerdict::new(Outcome::Undecided("irrational eigenvalues with primes outside λ".into()), trail);
        }
    };
    let free: Vec<RatVector> =
        if killed.is_empty() { RatMatrix::identity(d).row_vecs() } else { RatMatrix::from_columns(d, &killed).transpose().kernel() };

    let mut constraints = Vec::new();
    let mut labels = Vec::new();
    let basis = g.sigma().basis();
    for n in 0..d.max(1) {
        let back = g.a_tilde_inverse().pow(n as u32);
        for (j, b) in basis.iter().enumerate() {
            let x = back.mul_vec(b);
            constraints.push(LocalConstraint::new(free.iter().map(|k| dot(k, &x)).collect(), rad.clone()));
            labels.push(format!("w(Ã^-{n}·b{}) ∈ {}", j + 1, crate::dirlimit::ring_name(&rad)));
        }
    }
    let norm = Normalization { c: free.iter().map(|k| dot(k, gt)).collect(), r: Rat::one() };
    let count = constraints.len();
    let outcome = match solve_localized(&constraints, &norm) {
        Ok(t) => {
            let w: RatVector =
                (0..d).map(|i| free.iter().zip(&t).fold(Rat::zero(), |acc, (k, s)| acc + &k[i] * s)).collect();
            let r = RatMatrix::from_columns(d, std::slice::from_ref(&gt.to_vec()))
                .mul(&RatMatrix::from_rows(vec![w.clone()]));
            finish(g, r, Some(w), &on_line, &sub_gens, opts)
        }
        Err(cert) => solve_error(cert, constraints, labels, norm),
    };
    trail.push(CriterionRecord {
        criterion: Criterion::C3,
        outcome: match &outcome {
            Outcome::Splits(_) => Some(true),
            Outcome::DoesNotSplit(_) => Some(false),
            Outcome::Undecided(_) => None,
        },
        detail: format!("{} constraints, {} filtered directions", count, killed.len()),
    });
    SplitVerdict::new(outcome, trail)
}

/// `x ∈ Z[1/rad]·g`.
fn on_z_line(x: &[Rat], g: &[Rat], rad: &Int) -> bool {
    let Some(i) = g.iter().position(|v| !v.is_zero()) else { return x.iter().all(Zero::is_zero) };
    let c = &x[i] / &g[i];
    x.iter().zip(g).all(|(a, b)| *a == b * &c) && in_localization(&c, rad)
}

/// Extend the primitive `h` to a basis of `Zᵈ`; `T` becomes block
/// triangular with `λ` in the corner and `Ā` below.
fn quotient_det(t: &IntMatrix, h: &[Int], lambda: &Int) -> Int {
    let d = t.rows();
    let snf = smith_normal_form(&IntMatrix::from_columns(d, &[h.to_vec()]));
    let u = snf.u;
    let t2 = u.mul(t).mul(&unimodular_inverse(&u));
    debug_assert_eq!(t2[(0, 0)], *lambda);
    debug_assert!((1..d).all(|i| t2[(i, 0)].is_zero()));
    let rest: Vec<usize> = (1..d).collect();
    let bar = t2.select_rows(&rest).select_cols(&rest);
    if d == 1 {
        Int::one()
    } else {
        int_det(&bar)
    }
}

/// Action on the annihilator lattice of `h`: `W·T = T̄·W`.
fn dual_quotient_det(t: &IntMatrix, h: &[Int]) -> Option<Int> {
    let d = t.rows();
    if d == 1 {
        return Some(Int::one());
    }
    let w = IntMatrix::from_rows(integer_kernel(&IntMatrix::from_rows(vec![h.to_vec()])));
    let wt = w.mul(t);
    let bar_t = w.to_rat().transpose().solve(&wt.to_rat().transpose())?.transpose().to_int()?;
    Some(int_det(&bar_t))
}

/// Write `χ = m^k·R` with `m` the minimal polynomial of the dilation. Splitting
/// holds when each non-unit root has the same multiplicity in `χ` as in the
/// dilation: `k = 1` if the dilation is not a unit, and `R` has only unit
/// roots (`|R(0)| = 1`). `None` when no root of `χ` is a non-unit.
pub fn multiplicity_criterion(chi: &[Int], dilation_min_poly: &[Int]) -> Option<bool> {
    let (k, r) = factor_multiplicity(&to_rat_poly(chi), &to_rat_poly(dilation_min_poly));
    let r0 = r.first().cloned().unwrap_or_else(Rat::zero).abs();
    let m0 = rat_from_int(&dilation_min_poly[0]).abs();
    let dilation_unit = m0.is_one();
    if dilation_unit && r0.is_one() {
        return None;
    }
    Some((dilation_unit || k == 1) && r0.is_one())
}
