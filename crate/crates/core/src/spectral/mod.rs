//! Eigenvalue group, the embedding `θ : E → H¹`, the Ruelle–Sullivan
//! functional `τ`, frequency module and infinitesimals.

mod checks;

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::apcomplex::{ApComplex, CohPresentation};
use crate::dirlimit::{DlElement, DlGroup, SubGroup};
use crate::exactlin::matrix::rat_from_int;
use crate::exactlin::numfield::pair;
use crate::exactlin::poly::IntPoly;
use crate::exactlin::primes::{in_localization, is_localized_unit, prime_factors, strip_rational};
use crate::exactlin::{Int, NfElem, NumberField, Rat, RatMatrix, RatVector};
use crate::substitution::{eigenvectors, PfData, PisotStatus, Substitution};

pub use checks::{check_invariants, CheckOptions, CheckResult, CheckStatus, InvariantReport};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpectralMode {
    /// Constant-length substitution, `E = Z[1/λ]`.
    IntegerDilation { lambda: Int },
    /// Irreducible characteristic polynomial, Pisot dilation: `θ` is onto.
    IrreduciblePisot { minimal_polynomial: IntPoly },
    /// Irreducible characteristic polynomial, dilation not Pisot: `E = 0`.
    IrreducibleNonPisot { minimal_polynomial: IntPoly },
    Unsupported { reason: String },
}

impl fmt::Display for SpectralMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use crate::exactlin::poly::format_poly;
        match self {
            SpectralMode::IntegerDilation { lambda } => write!(f, "IntegerDilation({lambda})"),
            SpectralMode::IrreduciblePisot { minimal_polynomial } => {
                write!(f, "IrreduciblePisot({})", format_poly(minimal_polynomial, "x"))
            }
            SpectralMode::IrreducibleNonPisot { minimal_polynomial } => {
                write!(f, "IrreducibleNonPisot({})", format_poly(minimal_polynomial, "x"))
            }
            SpectralMode::Unsupported { reason } => write!(f, "Unsupported({reason})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpectralError {
    Unsupported(String),
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::Unsupported(r) => write!(f, "unsupported: {r}"),
        }
    }
}

impl std::error::Error for SpectralError {}

#[derive(Clone, Debug)]
pub struct EigenvalueGroup {
    pub mode: SpectralMode,
    /// Class of the length cochain in ER coordinates, over `Q(λ)`.
    pub length_class: Vec<NfElem>,
    /// `θ(1)`: the length class as a group element (integer dilation only).
    pub g_theta: Option<DlElement>,
}

/// Decide the regime and compute the length class.
pub fn eigenvalue_group(s: &Substitution, y: &ApComplex, p: &CohPresentation, g: &DlGroup, pf: &PfData) -> EigenvalueGroup {
    let edge_lengths: Vec<NfElem> = y.projection.iter().map(|&b| pf.lengths[b].clone()).collect();
    let length_class = push_to_limit(p, g, &pf.field, &edge_lengths);
    let deg = pf.field.degree();
    let mode = if let Some(l) = s.constant_length() {
        debug_assert_eq!(pf.integer_dilation(), Some(Int::from(l)));
        SpectralMode::IntegerDilation { lambda: Int::from(l) }
    } else if deg == s.size() && deg > 1 {
        let m = pf.minimal_polynomial().clone();
        match pf.pisot {
            PisotStatus::Pisot if s.border_forcing().forces() => SpectralMode::IrreduciblePisot { minimal_polynomial: m },
            PisotStatus::Pisot => SpectralMode::Unsupported {
                reason: "irreducible Pisot substitution without a common prefix or suffix".into(),
            },
            PisotStatus::NotPisot => SpectralMode::IrreducibleNonPisot { minimal_polynomial: m },
            PisotStatus::Unknown { tolerance } => SpectralMode::Unsupported {
                reason: format!("Pisot test inconclusive at tolerance {tolerance:e}"),
            },
        }
    } else {
        SpectralMode::Unsupported { reason: "non-constant length with reducible characteristic polynomial".into() }
    };
    let g_theta = match &mode {
        SpectralMode::IntegerDilation { .. } => {
            let ones = vec![Int::one(); y.edge_count()];
            let e = g.embed(&p.class_of_cochain(&ones));
            debug_assert!(length_class.iter().map(NfElem::as_rational).collect::<Option<Vec<_>>>() == Some(e.value.clone()));
            Some(e)
        }
        _ => None,
    };
    EigenvalueGroup { mode, length_class, g_theta }
}

/// `ι` applied coefficientwise to a cochain with entries in `Q(λ)`.
pub fn push_to_limit(p: &CohPresentation, g: &DlGroup, field: &Arc<NumberField>, cochain: &[NfElem]) -> Vec<NfElem> {
    let k = field.degree();
    let d = g.dim();
    let n = p.rank;
    let a_pow = p.a.to_rat().pow(n as u32);
    let back = g.a_tilde_inverse().pow(n as u32);
    let proj = p.projection.to_rat();
    let mut out = vec![NfElem::zero(field); d];
    for j in 0..k {
        let slice: RatVector = cochain.iter().map(|x| x.coefficients()[j].clone()).collect();
        let class = a_pow.mul_vec(&proj.mul_vec(&slice));
        if d == 0 {
            continue;
        }
        let coords = p.er.basis.solve_vec(&class).expect("Aᴺ lands in the eventual range");
        let value = back.mul_vec(&coords);
        let lam_j = NfElem::generator(field).pow(j as u32);
        for i in 0..d {
            out[i] = out[i].add(&lam_j.scale(&value[i]));
        }
    }
    out
}

/// `M·v` for a rational matrix and a vector over `Q(λ)`.
pub fn nf_mul_vec(m: &RatMatrix, v: &[NfElem], field: &Arc<NumberField>) -> Vec<NfElem> {
    (0..m.rows()).map(|i| pair(field, v, m.row(i))).collect()
}

/// Image of `θ` in the integer dilation regime.
#[derive(Clone, Debug)]
pub struct ThetaImage {
    pub lambda: Int,
    /// `G ∩ Q·g_θ`, which equals `Z[1/λ]·h` for the primitive `h ∈ Σ`.
    pub line: SubGroup,
    pub generator: RatVector,
    /// `g_θ = content · generator`.
    pub content: Rat,
}

impl ThetaImage {
    /// `θ(E) = Z[1/λ]·g_θ` is all of `G ∩ Q·g_θ` iff the content is a unit.
    pub fn is_saturated(&self) -> bool {
        is_localized_unit(&self.content, &self.lambda)
    }

    /// Independent route: no `g_θ / q` with `q ∤ λ` prime lies in `G`.
    pub fn saturation_oracle(&self, g: &DlGroup, g_theta: &[Rat]) -> bool {
        let mut primes: Vec<Int> = prime_factors(&self.content.numer().abs());
        primes.extend((2..50).map(Int::from).filter(|q| prime_factors(q).len() == 1 && prime_factors(q)[0] == *q));
        primes.sort();
        primes.dedup();
        primes
            .iter()
            .filter(|q| !(&self.lambda % *q).is_zero())
            .all(|q| !g.contains(&g_theta.iter().map(|x| x / rat_from_int(q)).collect::<Vec<_>>()))
    }

    /// `θ(k·λ⁻ⁿ) = k·Ã⁻ⁿ g_θ`.
    pub fn theta(&self, g: &DlGroup, g_theta: &[Rat], k: &Int, n: u32) -> RatVector {
        let k = rat_from_int(k);
        g.a_tilde_inverse().pow(n).mul_vec(g_theta).iter().map(|x| x * &k).collect()
    }
}

impl fmt::Display for ThetaImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = crate::dirlimit::ring_name(&crate::exactlin::primes::radical(&self.lambda));
        write!(f, "{}·{}", ring, crate::dirlimit::format_vector(&self.generator))
    }
}

pub fn theta_image(g: &DlGroup, eg: &EigenvalueGroup) -> Result<ThetaImage, SpectralError> {
    let (SpectralMode::IntegerDilation { lambda }, Some(gt)) = (&eg.mode, &eg.g_theta) else {
        return Err(SpectralError::Unsupported(format!("θ image in mode {}", eg.mode)));
    };
    let line = g.restrict(std::slice::from_ref(&gt.value)).expect("the length class is an eigenvector");
    let generator = line.generators().remove(0);
    let i = generator.iter().position(|x| !x.is_zero()).expect("nonzero generator");
    let content = &gt.value[i] / &generator[i];
    Ok(ThetaImage { lambda: lambda.clone(), line, generator, content })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Freq {
    /// `generator · Z[1/ring]`.
    Rational { generator: Rat, ring: Int },
    /// The `Z[1/λ]`-span of these values.
    Algebraic { generators: Vec<NfElem> },
}

impl Freq {
    pub fn contains_rational(&self, x: &Rat) -> Option<bool> {
        match self {
            Freq::Rational { generator, ring } => Some(x.is_zero() || in_localization(&(x / generator), ring)),
            Freq::Algebraic { .. } => None,
        }
    }
}

impl fmt::Display for Freq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Freq::Rational { generator, ring } => write!(f, "({generator})·{}", crate::dirlimit::ring_name(ring)),
            Freq::Algebraic { generators } => {
                let parts: Vec<String> = generators.iter().map(|x| x.display("λ")).collect();
                write!(f, "⟨{}⟩", parts.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct TauData {
    pub field: Arc<NumberField>,
    /// Left `λ`-eigenvector of `Ã` with `⟨ν, length class⟩ = 1`.
    pub nu: Vec<NfElem>,
    pub freq: Freq,
    /// `G ∩ ker ν`.
    pub inf: SubGroup,
}

impl TauData {
    pub fn eval(&self, x: &[Rat]) -> NfElem {
        pair(&self.field, &self.nu, x)
    }

    /// `ν` as a rational vector, when it is one.
    pub fn rational_nu(&self) -> Option<RatVector> {
        self.nu.iter().map(NfElem::as_rational).collect()
    }
}

pub fn tau(g: &DlGroup, eg: &EigenvalueGroup, pf: &PfData) -> TauData {
    let field = pf.field.clone();
    let d = g.dim();
    let (nu, _) = eigenvectors(g.a_tilde(), &field);
    let norm = nu.iter().zip(&eg.length_class).fold(NfElem::zero(&field), |acc, (a, b)| acc.add(&a.mul(b)));
    let inv = norm.inv().expect("ν pairs nontrivially with the length class");
    let nu: Vec<NfElem> = nu.iter().map(|x| x.mul(&inv)).collect();

    let values: Vec<NfElem> = g.sigma().basis().iter().map(|b| pair(&field, &nu, b)).collect();
    let freq = match pf.integer_dilation() {
        Some(lambda) => {
            let rats: Vec<Rat> = values.iter().map(|v| v.as_rational().expect("rational ν")).collect();
            Freq::Rational { generator: localized_gcd(&rats, &lambda), ring: crate::exactlin::primes::radical(&lambda) }
        }
        None => Freq::Algebraic { generators: values },
    };

    // ker ν ∩ Qᵈ: every power-basis coefficient of ⟨ν, x⟩ vanishes
    let k = field.degree();
    let rows: Vec<RatVector> = (0..k).map(|j| nu.iter().map(|x| x.coefficients()[j].clone()).collect()).collect();
    let kernel = if d == 0 { Vec::new() } else { RatMatrix::from_rows(rows).kernel() };
    let inf = g.restrict(&kernel).expect("ker ν is invariant");
    TauData { field, nu, freq, inf }
}

/// Generator of the `Z[1/λ]`-module spanned by `values`: strip the primes
/// of `λ`, then gcd of numerators over lcm of denominators.
pub fn localized_gcd(values: &[Rat], lambda: &Int) -> Rat {
    let (mut num, mut den) = (Int::zero(), Int::one());
    for v in values.iter().filter(|v| !v.is_zero()) {
        let s = strip_rational(v, lambda);
        num = num.gcd(s.numer());
        den = den.lcm(s.denom());
    }
    Rat::new(num, den)
}

/// Edge frequencies per unit length, an independent route to `τ` on
/// `H¹(Y)`: `τ(ι[f]) = Σₑ freqₑ·f(e)`.
pub fn edge_frequencies(y: &ApComplex, pf: &PfData) -> Vec<NfElem> {
    let field = &pf.field;
    let (nu, _) = eigenvectors(&y.cochain_map().to_rat(), field);
    let lengths: Vec<NfElem> = y.projection.iter().map(|&b| pf.lengths[b].clone()).collect();
    let norm = nu.iter().zip(&lengths).fold(NfElem::zero(field), |acc, (a, b)| acc.add(&a.mul(b)));
    let inv = norm.inv().expect("frequencies pair nontrivially with lengths");
    nu.iter().map(|x| x.mul(&inv)).collect()
}

/// The class of the indicator cochain of edge `e`.
pub fn edge_class(p: &CohPresentation, edges: usize, e: usize) -> Vec<Int> {
    let f: Vec<Int> = (0..edges).map(|i| if i == e { Int::one() } else { Int::zero() }).collect();
    p.class_of_cochain(&f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apcomplex::{build_ap_complex, Route};
    use crate::exactlin::matrix::{int, rat, rat_vector};
    use crate::substitution::pf_data;

    struct Run {
        g: DlGroup,
        eg: EigenvalueGroup,
        tau: TauData,
    }

    fn run(rules: &[(&str, &str)], route: Route) -> Run {
        let s = Substitution::from_rules(rules);
        let y = build_ap_complex(&s, route).unwrap();
        let p = y.presentation().unwrap();
        let g = DlGroup::from_presentation(&p);
        let pf = pf_data(&s.incidence_matrix());
        let eg = eigenvalue_group(&s, &y, &p, &g, &pf);
        let tau = tau(&g, &eg, &pf);
        Run { g, eg, tau }
    }

    fn up_to_sign(v: &[Rat], w: &[Rat]) -> bool {
        v == w || v.iter().zip(w).all(|(a, b)| *a == -b.clone())
    }

    #[test]
    fn non_splitting_example() {
        let r = run(&[("a", "abb"), ("b", "aaa")], Route::Bouquet);
        assert_eq!(r.eg.mode, SpectralMode::IntegerDilation { lambda: int(3) });
        assert_eq!(r.eg.g_theta.as_ref().unwrap().value, rat_vector(&[(1, 1), (1, 1)]));
        assert_eq!(r.tau.rational_nu().unwrap(), vec![rat(3, 5), rat(2, 5)]);
        assert_eq!(r.tau.freq, Freq::Rational { generator: rat(1, 5), ring: int(3) });
        assert_eq!(r.tau.inf.rank(), 1);
        assert!(up_to_sign(&r.tau.inf.generators()[0], &rat_vector(&[(-2, 1), (3, 1)])));
        assert_eq!(r.tau.inf.group.t_sigma()[(0, 0)], int(-2));
        let th = theta_image(&r.g, &r.eg).unwrap();
        assert_eq!(th.to_string(), "Z[1/3]·(1,1)");
        assert!(th.is_saturated());
    }

    #[test]
    fn period_doubling() {
        let r = run(&[("a", "ab"), ("b", "aa")], Route::Bouquet);
        assert_eq!(r.tau.rational_nu().unwrap(), vec![rat(2, 3), rat(1, 3)]);
        assert_eq!(r.tau.freq, Freq::Rational { generator: rat(1, 3), ring: int(2) });
        assert!(up_to_sign(&r.tau.inf.generators()[0], &rat_vector(&[(1, 1), (-2, 1)])));
        assert_eq!(theta_image(&r.g, &r.eg).unwrap().to_string(), "Z[1/2]·(1,1)");
    }

    #[test]
    fn thue_morse_collared() {
        let r = run(&[("x", "xy"), ("y", "yx")], Route::Collared);
        assert_eq!(r.tau.freq, Freq::Rational { generator: rat(1, 3), ring: int(2) });
        assert_eq!(r.tau.inf.rank(), 1);
        assert_eq!(r.tau.inf.group.t_sigma()[(0, 0)], int(-1));
        let th = theta_image(&r.g, &r.eg).unwrap();
        // the integer content of g_θ depends on the stage-0 lattice; only its
        // class modulo units of Z[1/2] is intrinsic
        assert!(is_localized_unit(&th.content, &int(2)));
        assert!(th.is_saturated());
    }

    #[test]
    fn fibonacci_is_irreducible_pisot() {
        let r = run(&[("a", "ab"), ("b", "a")], Route::Bouquet);
        assert!(matches!(r.eg.mode, SpectralMode::IrreduciblePisot { .. }));
        assert_eq!(r.tau.inf.rank(), 0);
        assert!(r.g.is_finitely_generated());
        assert!(theta_image(&r.g, &r.eg).is_err());
    }

    #[test]
    fn tau_agrees_with_edge_frequencies() {
        for (rules, route) in [
            (vec![("a", "abb"), ("b", "aaa")], Route::Bouquet),
            (vec![("x", "xy"), ("y", "yx")], Route::Collared),
            (vec![("a", "ab"), ("b", "a")], Route::Bouquet),
            (vec![("a", "ab"), ("b", "a")], Route::Collared),
        ] {
            let s = Substitution::from_rules(&rules);
            let y = build_ap_complex(&s, route).unwrap();
            let p = y.presentation().unwrap();
            let g = DlGroup::from_presentation(&p);
            let pf = pf_data(&s.incidence_matrix());
            let eg = eigenvalue_group(&s, &y, &p, &g, &pf);
            let t = tau(&g, &eg, &pf);
            let freqs = edge_frequencies(&y, &pf);
            for e in 0..y.edge_count() {
                let x = g.embed(&edge_class(&p, y.edge_count(), e));
                assert_eq!(t.eval(&x.value), freqs[e], "edge {e}");
            }
        }
    }

    #[test]
    fn localized_gcd_normal_form() {
        assert_eq!(localized_gcd(&[rat(3, 5), rat(2, 5)], &int(3)), rat(1, 5));
        assert_eq!(localized_gcd(&[rat(4, 3), rat(2, 9)], &int(2)), rat(1, 9));
    }

    fn report(r: &Run, g: &DlGroup) -> InvariantReport {
        let gt = r.eg.g_theta.as_ref().map(|e| e.value.clone());
        let th = theta_image(&r.g, &r.eg).ok();
        check_invariants(g, &r.eg.mode, gt.as_ref(), th.as_ref(), &r.tau, &CheckOptions::default())
    }

    #[test]
    fn invariants_hold_on_examples() {
        for (rules, route) in [
            (vec![("a", "abb"), ("b", "aaa")], Route::Bouquet),
            (vec![("a", "ab"), ("b", "aa")], Route::Bouquet),
            (vec![("x", "xy"), ("y", "yx")], Route::Collared),
            (vec![("a", "ab"), ("b", "a")], Route::Bouquet),
        ] {
            let r = run(&rules, route);
            let rep = report(&r, &r.g);
            assert!(rep.all_passed(), "{rules:?}: {:?}", rep.failures());
        }
    }

    #[test]
    fn corrupted_action_is_caught() {
        for rules in [vec![("a", "abb"), ("b", "aaa")], vec![("a", "ab"), ("b", "a")]] {
            let r = run(&rules, Route::Bouquet);
            let mut t = r.g.t_sigma().clone();
            t[(0, 1)] += int(1);
            let bad = DlGroup::from_int_matrix(&t).unwrap();
            assert!(!report(&r, &bad).all_passed(), "{rules:?}");
        }
    }
}
