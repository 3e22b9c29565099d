//! The full analysis of one substitution, from rules to splitting verdicts.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::apcomplex::{build_ap_complex, ApComplex, ApError, CohPresentation, Route};
use crate::dirlimit::{DecomposeError, Decomposition, DlGroup};
use crate::exactlin::{Int, IntMatrix, Rat};
use crate::spectral::{
    check_invariants, edge_class, edge_frequencies, eigenvalue_group, tau, theta_image, CheckOptions, CheckResult,
    CheckStatus, EigenvalueGroup, InvariantReport, TauData, ThetaImage,
};
use crate::splitting::{decide_split_seq1, decide_split_seq3, Outcome, SplitOptions, SplitVerdict};
use crate::substitution::{
    is_primitive, lengths_are_pf, pf_data, periodicity_scan, BorderForcing, Lengths, Periodicity, PfData, Substitution,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalysisOptions {
    /// `None` picks the bouquet when the substitution forces its border.
    pub route: Option<Route>,
    pub periodicity_bound: usize,
    pub verify_depth: Option<usize>,
    pub seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions { route: None, periodicity_bound: 32, verify_depth: None, seed: 0 }
    }
}

/// Why the pipeline stopped before cohomology.
#[derive(Clone, Debug, PartialEq)]
pub enum Halt {
    NotPrimitive,
    Periodic,
    /// Explicit lengths that are not a Perron–Frobenius length vector.
    InvalidLengths,
    Complex(ApError),
}

impl std::fmt::Display for Halt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Halt::NotPrimitive => write!(f, "substitution is not primitive"),
            Halt::Periodic => write!(f, "substitution is periodic"),
            Halt::InvalidLengths => write!(f, "explicit lengths are not proportional to the Perron-Frobenius lengths"),
            Halt::Complex(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub complex: ApComplex,
    pub presentation: CohPresentation,
    pub group: DlGroup,
    pub eigen: EigenvalueGroup,
    pub theta: Option<ThetaImage>,
    pub tau: TauData,
    pub decomposition: Result<Decomposition, DecomposeError>,
    pub seq3: SplitVerdict,
    pub seq1: SplitVerdict,
    pub checks: InvariantReport,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub substitution: Substitution,
    pub options: AnalysisOptions,
    pub incidence: IntMatrix,
    pub primitive: bool,
    pub periodicity: Option<Periodicity>,
    pub border: BorderForcing,
    pub route: Option<Route>,
    pub pf: Option<PfData>,
    pub result: Result<Cohomology, Halt>,
}

impl Analysis {
    pub fn cohomology(&self) -> Option<&Cohomology> {
        self.result.as_ref().ok()
    }

    /// True unless some invariant check failed.
    pub fn checks_passed(&self) -> bool {
        self.cohomology().is_none_or(|c| c.checks.all_passed())
    }
}

pub fn analyze(s: &Substitution, opts: &AnalysisOptions) -> Analysis {
    let m = s.incidence_matrix();
    let primitive = is_primitive(&m);
    let border = s.border_forcing();
    let mut out = Analysis {
        substitution: s.clone(),
        options: *opts,
        incidence: m.clone(),
        primitive,
        periodicity: None,
        border,
        route: None,
        pf: None,
        result: Err(Halt::NotPrimitive),
    };
    if !primitive {
        return out;
    }
    let periodicity = periodicity_scan(s, opts.periodicity_bound);
    out.periodicity = Some(periodicity);
    if periodicity == Periodicity::Periodic {
        out.result = Err(Halt::Periodic);
        return out;
    }
    let pf = pf_data(&m);
    if let Lengths::Explicit(l) = s.lengths() {
        if !lengths_are_pf(&pf, l) {
            out.pf = Some(pf);
            out.result = Err(Halt::InvalidLengths);
            return out;
        }
    }
    let route = opts.route.unwrap_or(if border.forces() { Route::Bouquet } else { Route::Collared });
    out.route = Some(route);
    out.result = cohomology(s, route, &pf, opts).map_err(Halt::Complex);
    out.pf = Some(pf);
    out
}

fn cohomology(s: &Substitution, route: Route, pf: &PfData, opts: &AnalysisOptions) -> Result<Cohomology, ApError> {
    let complex = build_ap_complex(s, route)?;
    let presentation = complex.presentation()?;
    let group = DlGroup::from_presentation(&presentation);
    let eigen = eigenvalue_group(s, &complex, &presentation, &group, pf);
    let theta = theta_image(&group, &eigen).ok();
    let tau = tau(&group, &eigen, pf);
    let decomposition = group.decompose();
    let g_theta = eigen.g_theta.as_ref().map(|e| e.value.clone());

    let split_opts = SplitOptions { seed: opts.seed, verify_depth: opts.verify_depth, ..SplitOptions::default() };
    let seq3 = decide_split_seq3(&group, &eigen.mode, g_theta.as_ref(), &split_opts);
    let seq1 = decide_split_seq1(&group, &eigen.mode, g_theta.as_ref(), &tau, &split_opts);

    let check_opts = CheckOptions { seed: opts.seed, ..CheckOptions::default() };
    let mut checks = check_invariants(&group, &eigen.mode, g_theta.as_ref(), theta.as_ref(), &tau, &check_opts);
    checks.checks.push(result(
        "pf_eigendata",
        pf.verify(&s.incidence_matrix().transpose()),
        "ν·A = λν and A·ℓ = λℓ",
    ));
    let freqs = edge_frequencies(&complex, pf);
    let edges = complex.edge_count();
    let agree = (0..edges).all(|e| tau.eval(&group.embed(&edge_class(&presentation, edges, e)).value) == freqs[e]);
    checks.checks.push(result("tau_edge_frequencies", agree, format!("τ(ι[e]) = freq(e) on {edges} edges")));
    match &decomposition {
        Ok(dec) => {
            let ok = decomposition_agrees(&group, dec, opts.seed);
            checks.checks.push(result("decomposition_membership", ok, "eigenline sum and residue orbits agree"));
        }
        Err(e) => checks.checks.push(CheckResult {
            name: "decomposition_membership".into(),
            status: CheckStatus::Skipped,
            detail: e.to_string(),
        }),
    }
    let certs = [&seq3, &seq1].iter().all(|v| match &v.outcome {
        Outcome::DoesNotSplit(o) => o.verify(),
        _ => true,
    });
    checks.checks.push(result("split_certificates", certs, "obstructions re-verified"));
    checks.checks.push(result(
        "split_criteria_agree",
        seq3.criteria_agree && seq1.criteria_agree,
        "conclusive criteria point the same way",
    ));
    Ok(Cohomology { complex, presentation, group, eigen, theta, tau, decomposition, seq3, seq1, checks })
}

fn result(name: &str, ok: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.into(),
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: detail.into(),
    }
}

/// Membership through the decomposition against the residue orbit, on
/// sampled members and on their fractions.
fn decomposition_agrees(g: &DlGroup, dec: &Decomposition, seed: u64) -> bool {
    if g.dim() == 0 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..50).all(|i| {
        let x = g.sample(&mut rng, 4, 6).value;
        let q = Rat::from_integer(Int::from([2, 3, 5, 7][i % 4]));
        let y: Vec<Rat> = x.iter().map(|v| v / &q).collect();
        dec.contains(&x) && dec.contains(&y) == g.contains(&y)
    })
}
