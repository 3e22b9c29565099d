use tilecoh::apcomplex::{CohPresentation, Route};
use tilecoh::dirlimit::DlGroup;
use tilecoh::exactlin::poly::{format_poly, int_char_poly};
use tilecoh::exactlin::{Int, IntMatrix};
use tilecoh::pipeline::{analyze, AnalysisOptions, Halt};
use tilecoh::report::{AnalysisReport, Status};
use tilecoh::substitution::{parse_substitution, Substitution};

fn corpus(name: &str) -> Substitution {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_substitution(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn report(s: &Substitution) -> AnalysisReport {
    AnalysisReport::from_analysis(&analyze(s, &AnalysisOptions::default()))
}

const CORPUS: [&str; 4] = ["nonsplit.sub", "perdouble.sub", "thuemorse.sub", "fibonacci.sub"];

#[test]
fn json_round_trip_is_exact() {
    for name in CORPUS {
        let r = report(&corpus(name));
        let json = r.to_json();
        let back = AnalysisReport::from_json(&json).unwrap();
        assert_eq!(back, r, "{name}");
        assert_eq!(back.to_json(), json, "{name}");
    }
}

#[test]
fn reports_are_deterministic() {
    for name in CORPUS {
        let s = corpus(name);
        let opts = AnalysisOptions { seed: 42, ..AnalysisOptions::default() };
        let a = AnalysisReport::from_analysis(&analyze(&s, &opts)).to_json();
        let b = AnalysisReport::from_analysis(&analyze(&s, &opts)).to_json();
        assert_eq!(a, b, "{name}");
    }
}

fn parse_matrix(m: &[Vec<String>]) -> IntMatrix {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    IntMatrix::new(rows, cols, m.iter().flatten().map(|x| x.parse::<Int>().unwrap()).collect())
}

/// The printed action on H¹(Y) is enough to rebuild the group.
#[test]
fn report_is_self_contained() {
    for name in CORPUS {
        let r = report(&corpus(name));
        let p = r.presentation.as_ref().unwrap();
        let g = DlGroup::from_presentation(&CohPresentation::from_matrix(&parse_matrix(&p.a)));
        assert_eq!(format_poly(&int_char_poly(g.t_sigma()), "x"), p.a_tilde_char_poly, "{name}");
        assert_eq!(g.det().to_string(), p.det, "{name}");
        assert_eq!(g.dim(), p.er_dim, "{name}");
        let dec = r.decomposition.as_ref().unwrap();
        match g.decompose() {
            Ok(d) => assert_eq!(Some(d.index.to_string()), dec.index, "{name}"),
            Err(_) => assert!(dec.index.is_none(), "{name}"),
        }
    }
}

#[test]
fn forced_route_matches_auto_on_border_forcing_input() {
    let s = corpus("perdouble.sub");
    let auto = analyze(&s, &AnalysisOptions::default());
    let coll = analyze(&s, &AnalysisOptions { route: Some(Route::Collared), ..AnalysisOptions::default() });
    assert_eq!(auto.route, Some(Route::Bouquet));
    let (a, c) = (auto.cohomology().unwrap(), coll.cohomology().unwrap());
    assert_eq!(a.group.det(), c.group.det());
    assert_eq!(a.tau.freq, c.tau.freq);
    assert_eq!(a.seq3.splits(), c.seq3.splits());
    assert_eq!(a.seq1.certificate_prime(), c.seq1.certificate_prime());
    assert!(coll.checks_passed());
}

#[test]
fn non_pisot_input_has_no_eigenvalues_and_splits() {
    let s = Substitution::from_rules(&[("a", "abbb"), ("b", "a")]);
    let a = analyze(&s, &AnalysisOptions::default());
    let r = AnalysisReport::from_analysis(&a);
    assert_eq!(r.status, Status::Ok);
    assert!(r.eigenvalue_group.as_ref().unwrap().mode.starts_with("IrreducibleNonPisot"));
    let c = a.cohomology().unwrap();
    assert_eq!((c.seq3.splits(), c.seq1.splits()), (Some(true), Some(true)));
    assert!(a.checks_passed());
}

#[test]
fn unsupported_regime_is_undecided_not_wrong() {
    let s = Substitution::from_rules(&[("a", "abc"), ("b", "ac"), ("c", "b")]);
    let a = analyze(&s, &AnalysisOptions::default());
    let r = AnalysisReport::from_analysis(&a);
    assert!(r.eigenvalue_group.as_ref().unwrap().mode.starts_with("Unsupported"));
    assert_eq!(r.seq3.as_ref().unwrap().outcome, "undecided");
    assert_eq!(r.seq1.as_ref().unwrap().outcome, "undecided");
    assert!(a.checks_passed());
}

#[test]
fn halts_are_reported_before_cohomology() {
    let periodic = analyze(&Substitution::from_rules(&[("a", "ab"), ("b", "ab")]), &AnalysisOptions::default());
    assert_eq!(periodic.result.as_ref().err(), Some(&Halt::Periodic));
    assert!(periodic.pf.is_none());
    let r = AnalysisReport::from_analysis(&periodic);
    assert_eq!(r.status, Status::Periodic);
    assert!(r.complex.is_none() && r.seq3.is_none());

    let reducible = analyze(&Substitution::from_rules(&[("a", "ab"), ("b", "b")]), &AnalysisOptions::default());
    assert_eq!(reducible.result.as_ref().err(), Some(&Halt::NotPrimitive));

    let bad = parse_substitution("a -> ab\nb -> a\nlengths: a=1 b=1\n").unwrap();
    let r = AnalysisReport::from_analysis(&analyze(&bad, &AnalysisOptions::default()));
    assert_eq!(r.status, Status::InvalidLengths);
}
