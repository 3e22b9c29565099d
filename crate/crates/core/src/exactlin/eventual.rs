//! Eventual range of an integer endomorphism.

use num_traits::Zero;

use super::lattice::Lattice;
use super::matrix::{IntMatrix, RatMatrix, RatVector};

/// `ER(A) = AᴺQᴺ` with a basis of `ER(A) ∩ Zᴺ` and the restricted map.
#[derive(Clone, Debug)]
pub struct EventualRange {
    /// `N × d` matrix whose columns are the canonical (Hermite-reduced)
    /// basis of `ER(A) ∩ Zᴺ`.
    pub basis: RatMatrix,
    /// Matrix of `A` restricted to the range, in that basis. Invertible over
    /// `Q` and integral.
    pub a_tilde: RatMatrix,
}

impl EventualRange {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of `v ∈ ER(A)` in the range basis, `None` if `v` is not in
    /// the range.
    pub fn coordinates(&self, v: &[super::matrix::Rat]) -> Option<RatVector> {
        if self.dim() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        self.basis.solve_vec(v)
    }

    /// Lift ER coordinates back to `Qᴺ`.
    pub fn lift(&self, x: &[super::matrix::Rat]) -> RatVector {
        self.basis.mul_vec(x)
    }
}

pub fn eventual_range(a: &IntMatrix) -> EventualRange {
    assert!(a.is_square(), "eventual range of a non-square matrix");
    let n = a.rows();
    let ar = a.to_rat();
    let power = ar.pow(n as u32);
    let span = power.column_space();
    let sigma = Lattice::new(n, span).saturate();
    let d = sigma.rank();
    if d == 0 {
        return EventualRange { basis: RatMatrix::zeros(n, 0), a_tilde: RatMatrix::zeros(0, 0) };
    }
    let basis = sigma.basis_matrix();
    let image = ar.mul(&basis);
    let a_tilde = basis.solve(&image).expect("the eventual range is invariant");
    debug_assert!(a_tilde.inverse().is_some());
    EventualRange { basis, a_tilde }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int_matrix, rat};
    use crate::exactlin::poly::int_char_poly;

    #[test]
    fn invertible_matrix_keeps_everything() {
        let a = int_matrix(&[&[1, 2], &[3, 0]]);
        let er = eventual_range(&a);
        assert_eq!(er.basis, RatMatrix::identity(2));
        assert_eq!(er.a_tilde, a.to_rat());
    }

    #[test]
    fn nilpotent_matrix_has_trivial_range() {
        let er = eventual_range(&int_matrix(&[&[0, 1], &[0, 0]]));
        assert_eq!(er.dim(), 0);
    }

    #[test]
    fn singular_matrix_restricts() {
        // rank one: image spanned by (1, 2)
        let a = int_matrix(&[&[1, 1], &[2, 2]]);
        let er = eventual_range(&a);
        assert_eq!(er.dim(), 1);
        assert_eq!(er.a_tilde, RatMatrix::from_rows(vec![vec![rat(3, 1)]]));
        let t = er.a_tilde.to_int().unwrap();
        assert_eq!(int_char_poly(&t), vec![crate::exactlin::matrix::int(-3), crate::exactlin::matrix::int(1)]);
    }
}
