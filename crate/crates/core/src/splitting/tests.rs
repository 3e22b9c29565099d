use super::*;
use crate::apcomplex::{build_ap_complex, Route};
use crate::exactlin::matrix::{int, rat, rat_vector};
use crate::spectral::{eigenvalue_group, tau, SpectralMode, TauData};
use crate::substitution::{pf_data, Substitution};

struct Run {
    g: DlGroup,
    mode: SpectralMode,
    gt: Option<RatVector>,
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
    Run { g, mode: eg.mode, gt: eg.g_theta.map(|e| e.value), tau }
}

fn seq3(r: &Run) -> SplitVerdict {
    decide_split_seq3(&r.g, &r.mode, r.gt.as_ref(), &SplitOptions::default())
}

fn seq1(r: &Run) -> SplitVerdict {
    decide_split_seq1(&r.g, &r.mode, r.gt.as_ref(), &r.tau, &SplitOptions::default())
}

fn assert_obstruction(v: &SplitVerdict, p: i64) {
    let Outcome::DoesNotSplit(o) = &v.outcome else { panic!("expected an obstruction, got {v}") };
    assert_eq!(o.prime, Some(int(p)), "{v}");
    assert!(o.verify());
    assert!(v.criteria_agree, "{:?}", v.trail);
}

#[test]
fn non_splitting_example() {
    let r = run(&[("a", "abb"), ("b", "aaa")], Route::Bouquet);
    let v3 = seq3(&r);
    assert_obstruction(&v3, 5);
    let Outcome::DoesNotSplit(o) = &v3.outcome else { unreachable!() };
    // the filter leaves one direction, normalized to w = (3/5, 2/5)
    assert_eq!(o.normalization.c.len(), 1);
    let t = &o.normalization.r / &o.normalization.c[0];
    let w: Vec<Rat> = o.constraints[0].form.iter().map(|f| f * &t).collect();
    assert_eq!(w, vec![rat(3, 5)]);
    assert_obstruction(&seq1(&r), 5);
}

#[test]
fn period_doubling() {
    let r = run(&[("a", "ab"), ("b", "aa")], Route::Bouquet);
    let v3 = seq3(&r);
    assert_eq!(v3.splits(), Some(true), "{v3}");
    assert!(v3.criteria_agree);
    assert!(v3.trail.iter().any(|c| c.criterion == Criterion::C1 && c.outcome == Some(true)));
    assert_obstruction(&seq1(&r), 3);

    // the hand-made witness w = (0, 1) passes the same verification
    let gt = r.gt.clone().unwrap();
    assert_eq!(gt, rat_vector(&[(1, 1), (1, 1)]));
    let w = rat_vector(&[(0, 1), (1, 1)]);
    let m = RatMatrix::from_columns(2, &[gt.clone()]).mul(&RatMatrix::from_rows(vec![w]));
    let on_line = |x: &[Rat]| x[0] == x[1] && crate::exactlin::primes::in_localization(&x[0], &int(2));
    assert!(verify_retraction(&r.g, &m, &on_line, &[gt], &SplitOptions::default()).is_ok());
}

#[test]
fn thue_morse() {
    let r = run(&[("x", "xy"), ("y", "yx")], Route::Collared);
    let v3 = seq3(&r);
    assert_eq!(v3.splits(), Some(true), "{v3}");
    assert!(v3.criteria_agree);
    assert_obstruction(&seq1(&r), 3);
}

#[test]
fn fibonacci_splits_trivially() {
    let r = run(&[("a", "ab"), ("b", "a")], Route::Bouquet);
    for v in [seq3(&r), seq1(&r)] {
        assert_eq!(v.splits(), Some(true), "{v}");
        assert_eq!(v.trail[0].criterion, Criterion::Trivial);
    }
}

#[test]
fn witnesses_are_retractions() {
    for (rules, route) in [
        (vec![("a", "ab"), ("b", "aa")], Route::Bouquet),
        (vec![("x", "xy"), ("y", "yx")], Route::Collared),
    ] {
        let r = run(&rules, route);
        let w = seq3(&r);
        let w = w.witness().unwrap();
        // r∘r = r
        assert_eq!(w.retraction.mul(&w.retraction), w.retraction);
        assert!(w.depth >= 3 * r.g.dim());
    }
}

#[test]
fn tampered_certificate_is_rejected() {
    let r = run(&[("a", "abb"), ("b", "aaa")], Route::Bouquet);
    let Outcome::DoesNotSplit(mut o) = seq3(&r).outcome else { panic!() };
    o.normalization.r = rat(5, 1);
    assert!(!o.verify());
}

#[test]
fn multiplicity_examples() {
    // χ = (x − 3)(x + 2), dilation 3
    assert_eq!(multiplicity_criterion(&[int(-6), int(-1), int(1)], &[int(-3), int(1)]), Some(false));
    // χ = (x − 2)(x + 1), dilation 2
    assert_eq!(multiplicity_criterion(&[int(-2), int(-1), int(1)], &[int(-2), int(1)]), Some(true));
    // χ = (x − 2)², dilation 2 with multiplicity 1
    assert_eq!(multiplicity_criterion(&[int(4), int(-4), int(1)], &[int(-2), int(1)]), Some(false));
    // golden mean: only units
    assert_eq!(multiplicity_criterion(&[int(-1), int(-1), int(1)], &[int(-1), int(-1), int(1)]), None);
}

#[test]
fn non_diagonalizable_integer_action() {
    // T = [[2,1],[0,2]], g = e₁: C1 fails (det Ā = 2) yet G = Z[1/2]² splits
    let g = DlGroup::from_int_matrix(&crate::exactlin::matrix::int_matrix(&[&[2, 1], &[0, 2]])).unwrap();
    let mode = SpectralMode::IntegerDilation { lambda: int(2) };
    let gt = rat_vector(&[(1, 1), (0, 1)]);
    let v = decide_split_seq3(&g, &mode, Some(&gt), &SplitOptions::default());
    assert_eq!(v.splits(), Some(true), "{v}");
}
