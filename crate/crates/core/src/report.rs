//! Serializable analysis report. Every exact number is a string (`"3/5"`,
//! `"-2"`), matrices are row-major arrays of such strings.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::apcomplex::Route;
use crate::dirlimit::{format_vector, ring_name, SubGroup};
use crate::exactlin::poly::format_poly;
use crate::exactlin::primes::radical;
use crate::exactlin::{Int, IntMatrix, NfElem, Rat, RatMatrix};
use crate::pipeline::{Analysis, Cohomology, Halt};
use crate::spectral::{CheckResult, Freq, SpectralMode};
use crate::splitting::{Outcome, SplitVerdict};
use crate::substitution::{BorderForcing, Dilation, Lengths, Periodicity, PisotStatus};

pub const SCHEMA_VERSION: u32 = 1;

pub type Matrix = Vec<Vec<String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    NotPrimitive,
    Periodic,
    InvalidLengths,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub input: InputEcho,
    pub status: Status,
    pub error: Option<String>,
    pub flags: Flags,
    pub incidence_matrix: Matrix,
    pub pf: Option<PfReport>,
    pub complex: Option<ComplexReport>,
    pub presentation: Option<PresentationReport>,
    pub decomposition: Option<DecompositionReport>,
    pub eigenvalue_group: Option<EigenReport>,
    pub tau: Option<TauReport>,
    pub seq3: Option<VerdictReport>,
    pub seq1: Option<VerdictReport>,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub alphabet: Vec<String>,
    pub rules: Vec<String>,
    /// `"pf"` or one length per letter.
    pub lengths: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub primitive: bool,
    pub periodicity: Option<String>,
    pub periodicity_bound: usize,
    pub border_forcing: String,
    pub route: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfReport {
    pub dilation: String,
    pub minimal_polynomial: String,
    pub characteristic_polynomial: String,
    /// Letter frequencies, in `Q(λ)` when irrational.
    pub nu: Vec<String>,
    pub lengths: Vec<String>,
    pub pisot: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexReport {
    pub route: String,
    pub edges: usize,
    pub vertices: usize,
    pub h1_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationReport {
    pub a: Matrix,
    pub er_dim: usize,
    /// Columns span the eventual range inside `H¹(Y) ⊗ Q`.
    pub er_basis: Matrix,
    pub a_tilde: Matrix,
    pub a_tilde_char_poly: String,
    pub sigma_basis: Matrix,
    pub det: String,
    pub finitely_generated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub display: Option<String>,
    pub components: Vec<ComponentReport>,
    pub lattice_index: Option<String>,
    pub index: Option<String>,
    pub coset_representatives: Matrix,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub eigenvalue: String,
    pub ring: String,
    pub generators: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EigenReport {
    pub mode: String,
    pub length_class: Vec<String>,
    pub g_theta: Option<Vec<String>>,
    pub theta_image: Option<String>,
    pub theta_content: Option<String>,
    pub coker_theta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauReport {
    pub nu: Vec<String>,
    pub freq: String,
    pub freq_generator: Option<String>,
    pub freq_ring: Option<String>,
    pub inf: String,
    pub inf_rank: usize,
    pub inf_generators: Matrix,
    pub inf_action: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub outcome: String,
    pub summary: String,
    pub retraction: Option<Matrix>,
    pub functional: Option<Vec<String>>,
    pub verified_depth: Option<usize>,
    pub certificate_prime: Option<String>,
    pub certificate_constraint: Option<String>,
    pub certificate_form: Option<Vec<String>>,
    pub certificate_modulus: Option<String>,
    pub certificate_verified: Option<bool>,
    pub reason: Option<String>,
    pub trail: Vec<TrailEntry>,
    pub criteria_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrailEntry {
    pub criterion: String,
    pub outcome: String,
    pub detail: String,
}

fn rat(x: &Rat) -> String {
    x.to_string()
}

fn rats(v: &[Rat]) -> Vec<String> {
    v.iter().map(rat).collect()
}

fn rat_matrix(m: &RatMatrix) -> Matrix {
    m.row_vecs().iter().map(|r| rats(r)).collect()
}

fn int_matrix(m: &IntMatrix) -> Matrix {
    m.row_vecs().iter().map(|r| r.iter().map(Int::to_string).collect()).collect()
}

fn columns(vs: &[Vec<Rat>]) -> Matrix {
    vs.iter().map(|v| rats(v)).collect()
}

fn nf(x: &NfElem) -> String {
    match x.as_rational() {
        Some(r) => rat(&r),
        None => x.display("λ"),
    }
}

fn snake<T: Serialize>(x: &T) -> String {
    serde_json::to_value(x).ok().and_then(|v| v.as_str().map(str::to_owned)).unwrap_or_default()
}

impl AnalysisReport {
    pub fn from_analysis(a: &Analysis) -> Self {
        let s = &a.substitution;
        let lengths = match s.lengths() {
            Lengths::PerronFrobenius => vec!["pf".to_string()],
            Lengths::Explicit(l) => rats(l),
        };
        let input = InputEcho {
            alphabet: s.alphabet().to_vec(),
            rules: s.to_string().lines().map(str::to_owned).collect(),
            lengths,
        };
        let (status, error) = match &a.result {
            Ok(_) => (Status::Ok, None),
            Err(Halt::NotPrimitive) => (Status::NotPrimitive, Some(Halt::NotPrimitive.to_string())),
            Err(Halt::Periodic) => (Status::Periodic, Some(Halt::Periodic.to_string())),
            Err(Halt::InvalidLengths) => (Status::InvalidLengths, Some(Halt::InvalidLengths.to_string())),
            Err(h @ Halt::Complex(_)) => (Status::Error, Some(h.to_string())),
        };
        let flags = Flags {
            primitive: a.primitive,
            periodicity: a.periodicity.map(|p| periodicity_name(p).to_string()),
            periodicity_bound: a.options.periodicity_bound,
            border_forcing: border_name(a.border).to_string(),
            route: a.route.map(|r: Route| r.to_string()),
        };
        let pf = a.pf.as_ref().map(|pf| PfReport {
            dilation: match &pf.dilation {
                Dilation::Integer(l) => l.to_string(),
                Dilation::Algebraic { approx, .. } => format!("{approx:.12}"),
            },
            minimal_polynomial: format_poly(pf.minimal_polynomial(), "x"),
            characteristic_polynomial: format_poly(&pf.char_poly, "x"),
            nu: pf.nu.iter().map(nf).collect(),
            lengths: pf.lengths.iter().map(nf).collect(),
            pisot: match pf.pisot {
                PisotStatus::Pisot => "pisot".into(),
                PisotStatus::NotPisot => "not_pisot".into(),
                PisotStatus::Unknown { tolerance } => format!("unknown (tolerance {tolerance:e})"),
            },
        });
        let mut r = AnalysisReport {
            schema: SCHEMA_VERSION,
            input,
            status,
            error,
            flags,
            incidence_matrix: int_matrix(&a.incidence),
            pf,
            complex: None,
            presentation: None,
            decomposition: None,
            eigenvalue_group: None,
            tau: None,
            seq3: None,
            seq1: None,
            checks: Vec::new(),
        };
        if let Ok(c) = &a.result {
            r.fill(c);
        }
        r
    }

    fn fill(&mut self, c: &Cohomology) {
        let g = &c.group;
        let p = &c.presentation;
        self.complex = Some(ComplexReport {
            route: c.complex.route.to_string(),
            edges: c.complex.edge_count(),
            vertices: c.complex.vertex_count,
            h1_rank: p.rank,
        });
        self.presentation = Some(PresentationReport {
            a: int_matrix(&p.a),
            er_dim: g.dim(),
            er_basis: rat_matrix(&p.er.basis),
            a_tilde: rat_matrix(g.a_tilde()),
            a_tilde_char_poly: format_poly(&crate::exactlin::poly::int_char_poly(g.t_sigma()), "x"),
            sigma_basis: columns(g.sigma().basis()),
            det: g.det().to_string(),
            finitely_generated: g.is_finitely_generated(),
        });
        self.decomposition = Some(match &c.decomposition {
            Ok(d) => DecompositionReport {
                display: Some(d.to_string()),
                components: d
                    .components
                    .iter()
                    .map(|k| ComponentReport {
                        eigenvalue: k.eigenvalue.to_string(),
                        ring: ring_name(&k.ring),
                        generators: columns(&k.generators),
                    })
                    .collect(),
                lattice_index: Some(d.lattice_index.to_string()),
                index: Some(d.index.to_string()),
                coset_representatives: columns(&d.coset_representatives),
                error: None,
            },
            Err(e) => DecompositionReport {
                display: None,
                components: Vec::new(),
                lattice_index: None,
                index: None,
                coset_representatives: Vec::new(),
                error: Some(e.to_string()),
            },
        });
        let coker = match &c.eigen.mode {
            SpectralMode::IntegerDilation { .. } => format!("torsion-free of rank {}", g.dim().saturating_sub(1)),
            SpectralMode::IrreduciblePisot { .. } => "0".into(),
            SpectralMode::IrreducibleNonPisot { .. } => "H¹".into(),
            SpectralMode::Unsupported { .. } => "unknown".into(),
        };
        self.eigenvalue_group = Some(EigenReport {
            mode: c.eigen.mode.to_string(),
            length_class: c.eigen.length_class.iter().map(nf).collect(),
            g_theta: c.eigen.g_theta.as_ref().map(|e| rats(&e.value)),
            theta_image: match (&c.theta, &c.eigen.mode) {
                (Some(t), _) => Some(t.to_string()),
                (None, SpectralMode::IrreduciblePisot { .. }) => Some("H¹".into()),
                (None, SpectralMode::IrreducibleNonPisot { .. }) => Some("0".into()),
                _ => None,
            },
            theta_content: c.theta.as_ref().map(|t| rat(&t.content)),
            coker_theta: coker,
        });
        let (fg, fr) = match &c.tau.freq {
            Freq::Rational { generator, ring } => (Some(rat(generator)), Some(ring_name(ring))),
            Freq::Algebraic { .. } => (None, None),
        };
        self.tau = Some(TauReport {
            nu: c.tau.nu.iter().map(nf).collect(),
            freq: c.tau.freq.to_string(),
            freq_generator: fg,
            freq_ring: fr,
            inf: describe_subgroup(&c.tau.inf),
            inf_rank: c.tau.inf.rank(),
            inf_generators: columns(&c.tau.inf.generators()),
            inf_action: rat_matrix(c.tau.inf.group.a_tilde()),
        });
        self.seq3 = Some(verdict(&c.seq3));
        self.seq1 = Some(verdict(&c.seq1));
        self.checks = c.checks.checks.clone();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn checks_passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn to_text(&self) -> String {
        let mut o = String::new();
        let _ = writeln!(o, "substitution: {}", self.input.rules.join(", "));
        let _ = writeln!(o, "status: {}", snake(&self.status));
        if let Some(e) = &self.error {
            let _ = writeln!(o, "  {e}");
        }
        let f = &self.flags;
        let _ = writeln!(
            o,
            "primitive: {}  periodicity: {} (bound {})  border: {}",
            f.primitive,
            f.periodicity.as_deref().unwrap_or("-"),
            f.periodicity_bound,
            f.border_forcing
        );
        if let Some(pf) = &self.pf {
            let _ = writeln!(o, "dilation: {} (minimal polynomial {}, {})", pf.dilation, pf.minimal_polynomial, pf.pisot);
        }
        if let Some(c) = &self.complex {
            let _ = writeln!(o, "complex: {} route, {} edges, {} vertices, rank H¹(Y) = {}", c.route, c.edges, c.vertices, c.h1_rank);
        }
        if let Some(p) = &self.presentation {
            let _ = writeln!(o, "A = {}", matrix_line(&p.a));
            let _ = writeln!(o, "eventual range: dim {}, Ã = {}, χ = {}", p.er_dim, matrix_line(&p.a_tilde), p.a_tilde_char_poly);
            let _ = writeln!(o, "Σ basis: {}", matrix_line(&p.sigma_basis));
        }
        if let Some(d) = &self.decomposition {
            match (&d.display, &d.error) {
                (Some(s), _) => {
                    let _ = writeln!(o, "H¹(Ω) ⊇ {s}");
                }
                (None, Some(e)) => {
                    let _ = writeln!(o, "decomposition: {e}");
                }
                _ => {}
            }
        }
        if let Some(e) = &self.eigenvalue_group {
            let _ = writeln!(o, "E: {}", e.mode);
            if let Some(t) = &e.theta_image {
                let _ = writeln!(o, "θ(E) = {t}, coker θ: {}", e.coker_theta);
            }
        }
        if let Some(t) = &self.tau {
            let _ = writeln!(o, "ν = ({})", t.nu.join(", "));
            let _ = writeln!(o, "freq = {}", t.freq);
            let _ = writeln!(o, "Inf = {}", t.inf);
        }
        for (name, v) in [("split E: 0 → E → H¹ → coker θ → 0", &self.seq3), ("split Inf: 0 → Inf → H¹ → freq → 0", &self.seq1)] {
            if let Some(v) = v {
                let _ = writeln!(o, "{name}: {}", v.summary);
                let trail: Vec<String> = v.trail.iter().map(|t| format!("{} {}", t.criterion, t.outcome)).collect();
                let _ = writeln!(o, "  criteria: {}", trail.join(", "));
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(o, "checks:");
            for c in &self.checks {
                let _ = writeln!(o, "  {:<26} {:<7} {}", c.name, snake(&c.status), c.detail);
            }
        }
        o
    }
}

fn matrix_line(m: &Matrix) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn periodicity_name(p: Periodicity) -> &'static str {
    match p {
        Periodicity::Aperiodic => "aperiodic",
        Periodicity::Periodic => "periodic",
        Periodicity::Inconclusive => "inconclusive",
    }
}

fn border_name(b: BorderForcing) -> &'static str {
    match b {
        BorderForcing::CommonPrefix => "common_prefix",
        BorderForcing::CommonSuffix => "common_suffix",
        BorderForcing::Both => "both",
        BorderForcing::None => "none",
    }
}

/// `Z[1/m]·v` for rank one, otherwise the generators and the action.
fn describe_subgroup(h: &SubGroup) -> String {
    match h.rank() {
        0 => "0".into(),
        1 => {
            let t = &h.group.t_sigma()[(0, 0)];
            let ring = if t.is_zero() { Int::from(1) } else { radical(&t.abs()) };
            format!("{}·{}", ring_name(&ring), format_vector(&h.generators()[0]))
        }
        k => {
            let gens: Vec<String> = h.generators().iter().map(|v| format_vector(v)).collect();
            format!("rank {k} limit over {} with det {}", gens.join(", "), h.group.det())
        }
    }
}

fn verdict(v: &SplitVerdict) -> VerdictReport {
    let mut r = VerdictReport {
        outcome: match v.outcome {
            Outcome::Splits(_) => "splits",
            Outcome::DoesNotSplit(_) => "does_not_split",
            Outcome::Undecided(_) => "undecided",
        }
        .into(),
        summary: v.to_string(),
        retraction: None,
        functional: None,
        verified_depth: None,
        certificate_prime: None,
        certificate_constraint: None,
        certificate_form: None,
        certificate_modulus: None,
        certificate_verified: None,
        reason: None,
        trail: v
            .trail
            .iter()
            .map(|t| TrailEntry {
                criterion: t.criterion.to_string(),
                outcome: match t.outcome {
                    Some(true) => "splits",
                    Some(false) => "does_not_split",
                    None => "inconclusive",
                }
                .into(),
                detail: t.detail.clone(),
            })
            .collect(),
        criteria_agree: v.criteria_agree,
    };
    match &v.outcome {
        Outcome::Splits(w) => {
            r.retraction = Some(rat_matrix(&w.retraction));
            r.functional = w.functional.as_ref().map(|f| rats(f));
            r.verified_depth = Some(w.depth);
        }
        Outcome::DoesNotSplit(o) => {
            r.certificate_prime = o.prime.as_ref().map(Int::to_string);
            r.certificate_constraint = Some(o.label.clone());
            if let Some(c) = o.constraints.get(o.constraint) {
                r.certificate_form = Some(rats(&c.form));
                r.certificate_modulus = Some(c.modulus.to_string());
            }
            r.certificate_verified = Some(o.verify());
        }
        Outcome::Undecided(reason) => r.reason = Some(reason.clone()),
    }
    r
}
