//! Membership in `G` as a finite list of localization conditions.
//!
//! Away from the primes of `D = det T` the limit is just `Σ` localized, so
//! `Σ`-coordinates must lie in `Z[1/rad D]`. At a prime `p | D` the Fitting
//! decomposition `Z_pᵈ = N_p ⊕ U_p` (with `T` topologically nilpotent on
//! `N_p`, invertible on `U_p`) gives `G ⊗ Z_p = (N_p ⊗ Q_p) ⊕ U_p`, so `x ∈ G`
//! at `p` iff every form annihilating `N_p` is `p`-integral on `x`. With
//! integer eigenvalues, `N_p` is the sum of generalized eigenspaces of the
//! eigenvalues divisible by `p`.

use num_traits::{One, Signed, Zero};

use super::DlGroup;
use crate::exactlin::lattice::clear_denominators;
use crate::exactlin::matrix::rat_from_int;
use crate::exactlin::poly::{int_char_poly, integer_roots};
use crate::exactlin::primes::{prime_factors, radical};
use crate::exactlin::smith::integer_kernel;
use crate::exactlin::{Int, IntMatrix, LocalConstraint, Rat, RatMatrix, RatVector};

#[derive(Clone, Debug)]
pub struct MembershipForms {
    pub radical: Int,
    /// Constraints on ambient coordinates; `x ∈ G` iff all hold.
    pub constraints: Vec<LocalConstraint>,
}

impl MembershipForms {
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.constraints.iter().all(|c| c.holds(x))
    }
}

/// `None` unless every eigenvalue of `Ã` is an integer.
pub(super) fn membership_forms(g: &DlGroup) -> Option<MembershipForms> {
    let d = g.dim();
    let rad = if g.det.is_zero() { Int::one() } else { radical(&g.det.abs()) };
    if d == 0 {
        return Some(MembershipForms { radical: rad, constraints: Vec::new() });
    }
    let chi = int_char_poly(&g.t);
    let roots = integer_roots(&chi);
    if roots.iter().map(|(_, m)| m).sum::<usize>() != d {
        return None;
    }
    let t = g.t.to_rat();
    let mut constraints: Vec<LocalConstraint> =
        g.b_inv.row_vecs().into_iter().map(|row| LocalConstraint::new(row, rad.clone())).collect();
    for p in prime_factors(&rad) {
        let mut span: Vec<RatVector> = Vec::new();
        for (mu, _) in roots.iter().filter(|(mu, _)| (mu % &p).is_zero()) {
            let shifted = t.sub(&RatMatrix::identity(d).scale(&rat_from_int(mu)));
            span.extend(shifted.pow(d as u32).kernel());
        }
        let n = RatMatrix::from_columns(d, &span);
        // rows w with w·N = 0, a saturated integer basis
        let nt = IntMatrix::from_rows(n.transpose().row_vecs().iter().map(|r| clear_denominators(r)).collect());
        let modulus = &rad / &p;
        for w in integer_kernel(&nt) {
            let w: RatVector = w.iter().map(rat_from_int).collect();
            let form = g.b_inv.vec_mul(&w);
            constraints.push(LocalConstraint::new(form, modulus.clone()));
        }
    }
    debug_assert!(rad.is_positive());
    Some(MembershipForms { radical: rad, constraints })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int, int_matrix, rat_vector};

    #[test]
    fn forms_of_non_splitting_example() {
        let g = DlGroup::from_int_matrix(&int_matrix(&[&[1, 2], &[3, 0]])).unwrap();
        let f = g.membership_forms().unwrap();
        assert_eq!(f.radical, int(6));
        for (x, member) in [
            (rat_vector(&[(1, 1), (0, 1)]), true),
            (rat_vector(&[(-1, 1), (3, 2)]), true),
            (rat_vector(&[(1, 3), (0, 1)]), false),
            (rat_vector(&[(1, 3), (1, 3)]), true),
            (rat_vector(&[(1, 5), (0, 1)]), false),
        ] {
            assert_eq!(f.contains(&x), member, "{x:?}");
            assert_eq!(g.contains(&x), member, "{x:?}");
        }
    }

    #[test]
    fn irrational_eigenvalues_have_no_forms() {
        let g = DlGroup::from_int_matrix(&int_matrix(&[&[1, 1], &[1, 0]])).unwrap();
        assert!(g.membership_forms().is_none());
    }
}
