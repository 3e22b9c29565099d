//! Perron–Frobenius data in exact arithmetic.
//!
//! The eigenvalue `λ` is either an integer or an algebraic integer given by
//! its minimal polynomial; eigenvectors live in `Q(λ)` and are read off the
//! adjugate `adj(λI − A)`, which has rank one at a simple eigenvalue.

use std::sync::Arc;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::exactlin::matrix::rat_from_int;
use crate::exactlin::numfield::{pair, NfElem, NumberField};
use crate::exactlin::poly::{self, integer_roots, int_char_poly, IntPoly};
use crate::exactlin::roots::{disks_disjoint, isolate_roots, largest_real_root, minimal_factor};
use crate::exactlin::{Int, IntMatrix, Rat, RatMatrix};

/// Conjugates closer than this to the unit circle make the Pisot test
/// inconclusive.
pub const PISOT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Dilation {
    Integer(Int),
    Algebraic { minimal_polynomial: IntPoly, approx: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PisotStatus {
    Pisot,
    NotPisot,
    Unknown { tolerance: f64 },
}

#[derive(Clone, Debug)]
pub struct PfData {
    pub field: Arc<NumberField>,
    pub dilation: Dilation,
    /// Left eigenvector of `A`: `ν·A = λν`, normalized by `⟨ν, ℓ⟩ = 1`.
    pub nu: Vec<NfElem>,
    /// Right eigenvector of `A` (tile lengths), normalized by `ℓ₀ = 1`.
    pub lengths: Vec<NfElem>,
    pub pisot: PisotStatus,
    pub char_poly: IntPoly,
}

impl PfData {
    pub fn lambda(&self) -> NfElem {
        NfElem::generator(&self.field)
    }

    pub fn integer_dilation(&self) -> Option<Int> {
        match &self.dilation {
            Dilation::Integer(l) => Some(l.clone()),
            Dilation::Algebraic { .. } => None,
        }
    }

    pub fn minimal_polynomial(&self) -> &IntPoly {
        &self.field.minimal_polynomial
    }

    /// Exact check of both eigenvector equations for `A`.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let ar = a.to_rat();
        let l = self.lambda();
        let n = ar.rows();
        let left_ok = (0..n).all(|j| pair(&self.field, &self.nu, &ar.col(j)) == self.nu[j].mul(&l));
        let right_ok = (0..n).all(|i| pair(&self.field, &self.lengths, ar.row(i)) == self.lengths[i].mul(&l));
        left_ok && right_ok
    }
}

/// Perron–Frobenius data of a substitution with incidence matrix `M`,
/// expressed for the cohomology matrix `A = Mᵀ`.
pub fn pf_data(m: &IntMatrix) -> PfData {
    pf_data_of(&m.transpose())
}

/// Perron–Frobenius data of a primitive nonnegative matrix `A`.
pub fn pf_data_of(a: &IntMatrix) -> PfData {
    assert!(a.is_square() && a.rows() > 0);
    let chi = int_char_poly(a);
    let ar = a.to_rat();
    let field = match rational_pf_root(&ar, &chi) {
        Some(r) => NumberField::new(vec![-r.clone(), Int::one()], rat_to_f64(&rat_from_int(&r))),
        None => {
            let roots = isolate_roots(&chi);
            let idx = largest_real_root(&roots).expect("primitive matrices have a real dominant root");
            let m = minimal_factor(&chi, &roots, idx);
            NumberField::new(m, roots[idx].value.re)
        }
    };
    let (nu, lengths) = eigenvectors(&ar, &field);
    let dilation = match field.rational_root() {
        Some(r) => Dilation::Integer(r.to_integer()),
        None => Dilation::Algebraic { minimal_polynomial: field.minimal_polynomial.clone(), approx: field.approx_root },
    };
    let pisot = pisot_status(&field.minimal_polynomial);
    PfData { field, dilation, nu, lengths, pisot, char_poly: chi }
}

fn rat_to_f64(x: &Rat) -> f64 {
    poly::rat_to_f64(x)
}

/// The largest integer root of `χ` if it carries a positive eigenvector.
fn rational_pf_root(a: &RatMatrix, chi: &[Int]) -> Option<Int> {
    let (r, _) = integer_roots(chi).into_iter().filter(|(r, _)| r.is_positive()).last()?;
    let n = a.rows();
    let shifted = a.sub(&RatMatrix::identity(n).scale(&rat_from_int(&r)));
    let kernel = shifted.kernel();
    if kernel.len() != 1 {
        return None;
    }
    let v = &kernel[0];
    let positive = v.iter().all(Signed::is_positive) || v.iter().all(Signed::is_negative);
    positive.then_some(r)
}

/// Left and right eigenvectors from a nonzero row and column of
/// `adj(λI − A) = Σₖ Mₖ λ^{n−k}`.
pub(crate) fn eigenvectors(a: &RatMatrix, field: &Arc<NumberField>) -> (Vec<NfElem>, Vec<NfElem>) {
    let n = a.rows();
    let cp = poly::faddeev_leverrier(a);
    let lambda = NfElem::generator(field);
    let powers: Vec<NfElem> = (0..n).map(|e| lambda.pow(e as u32)).collect();
    let adj: Vec<Vec<NfElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    cp.adjugate_terms.iter().enumerate().fold(NfElem::zero(field), |acc, (k, mk)| {
                        acc.add(&powers[n - 1 - k].scale(&mk[(i, j)]))
                    })
                })
                .collect()
        })
        .collect();
    let col = (0..n).find(|&j| (0..n).any(|i| !adj[i][j].is_zero())).expect("λ is a simple eigenvalue");
    let row = (0..n).find(|&i| adj[i].iter().any(|x| !x.is_zero())).expect("λ is a simple eigenvalue");
    let right: Vec<NfElem> = (0..n).map(|i| adj[i][col].clone()).collect();
    let pivot = right.iter().find(|x| !x.is_zero()).unwrap().inv().unwrap();
    let right: Vec<NfElem> = right.iter().map(|x| x.mul(&pivot)).collect();
    let left: Vec<NfElem> = adj[row].clone();
    let norm = left.iter().zip(&right).fold(NfElem::zero(field), |acc, (x, y)| acc.add(&x.mul(y)));
    let inv = norm.inv().expect("left and right eigenvectors of a simple eigenvalue pair nontrivially");
    let left = left.iter().map(|x| x.mul(&inv)).collect();
    (left, right)
}

/// Pisot test for the dominant root of a monic irreducible polynomial.
pub fn pisot_status(m: &[Int]) -> PisotStatus {
    let deg = m.len() - 1;
    match deg {
        1 => PisotStatus::Pisot,
        2 => {
            // other root inside (−1, 1) ⇔ m(1) < 0 < m(−1) given a root above 1
            let at1 = poly::eval_int(m, &Int::one());
            let atm1 = poly::eval_int(m, &-Int::one());
            if at1.is_negative() && atm1.is_positive() {
                PisotStatus::Pisot
            } else {
                PisotStatus::NotPisot
            }
        }
        _ => {
            let roots = isolate_roots(m);
            if !disks_disjoint(&roots) {
                return PisotStatus::Unknown { tolerance: PISOT_TOLERANCE };
            }
            let Some(top) = largest_real_root(&roots) else {
                return PisotStatus::Unknown { tolerance: PISOT_TOLERANCE };
            };
            let mut status = PisotStatus::Pisot;
            for (i, r) in roots.iter().enumerate() {
                if i == top {
                    continue;
                }
                let (lo, hi) = r.modulus_bounds();
                if lo >= 1.0 + PISOT_TOLERANCE {
                    return PisotStatus::NotPisot;
                }
                if hi > 1.0 - PISOT_TOLERANCE {
                    status = PisotStatus::Unknown { tolerance: PISOT_TOLERANCE };
                }
            }
            status
        }
    }
}

/// Whether the explicit lengths are a positive multiple of the
/// Perron–Frobenius length vector.
pub fn lengths_are_pf(pf: &PfData, lengths: &[Rat]) -> bool {
    if lengths.len() != pf.lengths.len() || lengths.iter().any(|l| !l.is_positive()) {
        return false;
    }
    let s = &lengths[0];
    pf.lengths.iter().zip(lengths).all(|(l, x)| l.scale(s) == NfElem::from_rat(&pf.field, x.clone()))
}

pub fn is_unit_poly(m: &[Int]) -> bool {
    m[0].abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int, int_matrix, rat};

    fn rationals(v: &[NfElem]) -> Vec<Rat> {
        v.iter().map(|x| x.as_rational().unwrap()).collect()
    }

    #[test]
    fn non_splitting_example() {
        let pf = pf_data_of(&int_matrix(&[&[1, 2], &[3, 0]]));
        assert_eq!(pf.dilation, Dilation::Integer(int(3)));
        assert_eq!(rationals(&pf.nu), vec![rat(3, 5), rat(2, 5)]);
        assert_eq!(rationals(&pf.lengths), vec![rat(1, 1), rat(1, 1)]);
        assert!(pf.verify(&int_matrix(&[&[1, 2], &[3, 0]])));
        assert_eq!(pf.pisot, PisotStatus::Pisot);
    }

    #[test]
    fn period_doubling() {
        let pf = pf_data(&int_matrix(&[&[1, 2], &[1, 0]]));
        assert_eq!(pf.dilation, Dilation::Integer(int(2)));
        assert_eq!(rationals(&pf.nu), vec![rat(2, 3), rat(1, 3)]);
    }

    #[test]
    fn fibonacci_is_pisot() {
        let pf = pf_data_of(&int_matrix(&[&[1, 1], &[1, 0]]));
        assert_eq!(pf.minimal_polynomial(), &vec![int(-1), int(-1), int(1)]);
        assert_eq!(pf.pisot, PisotStatus::Pisot);
        assert!(pf.verify(&int_matrix(&[&[1, 1], &[1, 0]])));
        assert!((pf.field.approx_root - 1.618_033_988_749_895).abs() < 1e-12);
    }

    #[test]
    fn non_pisot_quadratic_and_cubic() {
        // x^2 - 2x - 2 has roots 1 ± √3: Pisot
        assert_eq!(pisot_status(&[int(-2), int(-2), int(1)]), PisotStatus::Pisot);
        // x^2 - 3x - 3 has roots (3 ± √21)/2 ≈ 3.79, −0.79: Pisot
        assert_eq!(pisot_status(&[int(-3), int(-3), int(1)]), PisotStatus::Pisot);
        // x^2 - x - 3: roots ≈ 2.30, −1.30: not Pisot
        assert_eq!(pisot_status(&[int(-3), int(-1), int(1)]), PisotStatus::NotPisot);
        // tribonacci x^3 - x^2 - x - 1 is Pisot
        assert_eq!(pisot_status(&[int(-1), int(-1), int(-1), int(1)]), PisotStatus::Pisot);
        // x^3 - 3x - 3... roots ≈ 2.10, −1.05 ± 0.6i (modulus > 1)
        assert_eq!(pisot_status(&[int(-3), int(-3), int(0), int(1)]), PisotStatus::NotPisot);
    }

    #[test]
    fn irrational_dilation_of_non_constant_length() {
        // a -> aab, b -> ab: M = [[2,1],[1,1]], λ = (3+√5)/2
        let pf = pf_data(&int_matrix(&[&[2, 1], &[1, 1]]));
        assert_eq!(pf.minimal_polynomial(), &vec![int(1), int(-3), int(1)]);
        assert!(pf.verify(&int_matrix(&[&[2, 1], &[1, 1]]).transpose()));
    }
}
