//! Is `Inf = ker τ` a direct summand of `H¹`?
//!
//! With `ν(g_θ) = 1`, every linear retraction onto `V = ker ν` has the form
//! `S(x) = (x − ν(x)·g_θ) + ν(x)·u` for some `u ∈ V`. Since `g_θ` is
//! `λ`-divisible in `G`, `u` must be `λ`-divisible in `Inf`, which confines
//! it to the generalized eigenspaces of `Inf` whose eigenvalues are divisible
//! by every prime of `λ`.

use num_traits::{One, Signed, Zero};

use super::{finish, generalized_eigenspace, solve_error, Criterion, CriterionRecord, Outcome, SplitOptions, SplitVerdict};
use crate::dirlimit::DlGroup;
use crate::exactlin::matrix::dot;
use crate::exactlin::primes::{prime_factors, radical};
use crate::exactlin::{solve_localized, LocalConstraint, Normalization, Rat, RatMatrix, RatVector};
use crate::spectral::{SpectralMode, TauData};

pub fn decide_split_seq1(
    g: &DlGroup,
    mode: &SpectralMode,
    g_theta: Option<&RatVector>,
    tau: &TauData,
    opts: &SplitOptions,
) -> SplitVerdict {
    let d = g.dim();
    let inf = &tau.inf;
    let mut trail = Vec::new();
    if let SpectralMode::Unsupported { reason } = mode {
        return SplitVerdict::new(Outcome::Undecided(format!("unsupported regime: {reason}")), trail);
    }
    if inf.rank() == 0 {
        trail.push(CriterionRecord { criterion: Criterion::Trivial, outcome: Some(true), detail: "Inf = 0".into() });
        let outcome = finish(g, RatMatrix::zeros(d, d), None, &|x| x.iter().all(Zero::is_zero), &[], opts);
        return SplitVerdict::new(outcome, trail);
    }
    let finite = g.is_finitely_generated();
    trail.push(CriterionRecord {
        criterion: Criterion::FiniteFreq,
        outcome: finite.then_some(true),
        detail: if finite { "G is finitely generated, so freq is free".into() } else { "freq is λ-divisible".into() },
    });

    let (SpectralMode::IntegerDilation { lambda }, Some(gt), Some(nu)) = (mode, g_theta, tau.rational_nu()) else {
        return SplitVerdict::new(Outcome::Undecided("Inf ≠ 0 outside the integer dilation regime".into()), trail);
    };
    let Some(forms) = inf.group.membership_forms() else {
        trail.push(CriterionRecord {
            criterion: Criterion::C3,
            outcome: None,
            detail: "Inf has irrational eigenvalues".into(),
        });
        return SplitVerdict::new(Outcome::Undecided("Inf has irrational eigenvalues".into()), trail);
    };
    let lambda_primes = prime_factors(&lambda.abs());
    let allowed = generalized_eigenspace(inf.group.a_tilde(), inf.group.t_sigma(), |mu| {
        lambda_primes.iter().all(|p| (mu % p).is_zero())
    })
    .expect("integer eigenvalues");

    // unknowns: coefficients of u on `allowed`, then a homogenizing 1
    let a = allowed.len();
    let mut constraints = Vec::new();
    let mut labels = Vec::new();
    for n in 0..d {
        let back = g.a_tilde_inverse().pow(n as u32);
        for (j, b) in g.sigma().basis().iter().enumerate() {
            let x = back.mul_vec(b);
            let nx = dot(&nu, &x);
            let px: RatVector = x.iter().zip(gt).map(|(xi, gi)| xi - &nx * gi).collect();
            let py = inf.from_ambient(&px).expect("x − ν(x)g_θ lies in ker ν");
            for (k, c) in forms.constraints.iter().enumerate() {
                let mut form: RatVector = allowed.iter().map(|v| &nx * dot(&c.form, v)).collect();
                form.push(dot(&c.form, &py));
                constraints.push(LocalConstraint::new(form, c.modulus.clone()));
                labels.push(format!(
                    "S(Ã^-{n}·b{}) meets Inf condition {} over {}",
                    j + 1,
                    k + 1,
                    crate::dirlimit::ring_name(&c.modulus)
                ));
            }
        }
    }
    let mut c = vec![Rat::zero(); a + 1];
    c[a] = Rat::one();
    let norm = Normalization { c, r: Rat::one() };
    let count = constraints.len();
    let outcome = match solve_localized(&constraints, &norm) {
        Ok(t) => {
            let u_inf: RatVector =
                (0..inf.rank()).map(|i| allowed.iter().zip(&t).fold(Rat::zero(), |acc, (v, s)| acc + &v[i] * s)).collect();
            let u = inf.to_ambient(&u_inf);
            let shift: RatVector = u.iter().zip(gt).map(|(ui, gi)| ui - gi).collect();
            let r = RatMatrix::identity(d)
                .add(&RatMatrix::from_columns(d, &[shift]).mul(&RatMatrix::from_rows(vec![nu.clone()])));
            finish(g, r, None, &|x| inf.contains(x), &inf.generators(), opts)
        }
        Err(cert) => solve_error(cert, constraints, labels, norm),
    };
    trail.push(CriterionRecord {
        criterion: Criterion::C3,
        outcome: outcome_flag(&outcome),
        detail: format!("{count} constraints, {a} free directions for S(g_θ), ring of λ {}", radical(&lambda.abs())),
    });
    SplitVerdict::new(outcome, trail)
}

fn outcome_flag(o: &Outcome) -> Option<bool> {
    match o {
        Outcome::Splits(_) => Some(true),
        Outcome::DoesNotSplit(_) => Some(false),
        Outcome::Undecided(_) => None,
    }
}
