//! Smith and Hermite normal forms over the integers.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, IntMatrix};

/// `U · A · V = S` with `U`, `V` unimodular and `S` diagonal with
/// `d₁ | d₂ | …`, all `dᵢ ≥ 0`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<Int> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).filter(|d| !d.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(u, s, v);
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &-q.clone());
                u.add_row_multiple(i, t, &-q);
                if !s[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &-q.clone());
                v.add_col_multiple(j, t, &-q);
                if !s[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let pivot = s[(t, t)].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&s[(i, j)] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    s.add_row_multiple(t, i, &Int::one());
                    u.add_row_multiple(t, i, &Int::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(u, s, v)
}

fn finish(u: IntMatrix, mut s: IntMatrix, v: IntMatrix) -> SmithDecomposition {
    let mut u = u;
    for t in 0..s.rows().min(s.cols()) {
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithDecomposition { u, s, v }
}

/// Row-style Hermite normal form: returns `(H, T)` with `T · A = H`, `T`
/// unimodular, `H` in echelon form with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`. Zero rows come last.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut t = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&i, &j| h[(i, c)].abs().cmp(&h[(j, c)].abs()));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            t.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = h[(i, c)].div_floor(&h[(r, c)]);
                h.add_row_multiple(i, r, &-q.clone());
                t.add_row_multiple(i, r, &-q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            t.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, c)].div_floor(&h[(r, c)]);
            if !q.is_zero() {
                h.add_row_multiple(i, r, &-q.clone());
                t.add_row_multiple(i, r, &-q);
            }
        }
        r += 1;
    }
    (h, t)
}

/// Nonzero rows of the Hermite normal form: a canonical basis of the row
/// lattice.
pub fn row_lattice_basis(a: &IntMatrix) -> Vec<Vec<Int>> {
    let (h, _) = hermite_normal_form(a);
    h.row_vecs().into_iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect()
}

/// Determinant of an integer matrix by exact rational elimination.
pub fn int_det(a: &IntMatrix) -> Int {
    a.to_rat().det().to_integer()
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &IntMatrix) -> IntMatrix {
    a.to_rat()
        .inverse()
        .and_then(|m| m.to_int())
        .expect("matrix is not unimodular")
}

/// Basis (as columns) of the integer kernel `{x ∈ Zⁿ : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<Int>> {
    let snf = smith_normal_form(a);
    let r = snf.rank();
    (r..a.cols()).map(|j| snf.v.col(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int, int_matrix};

    fn check(a: &IntMatrix) -> SmithDecomposition {
        let d = smith_normal_form(a);
        assert_eq!(d.u.mul(a).mul(&d.v), d.s);
        assert!(int_det(&d.u).abs().is_one());
        assert!(int_det(&d.v).abs().is_one());
        let f = d.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero());
        }
        d
    }

    #[test]
    fn smith_examples() {
        let d = check(&int_matrix(&[&[2, 4], &[6, 8]]));
        assert_eq!(d.s, int_matrix(&[&[2, 0], &[0, 4]]));
        let d = check(&IntMatrix::identity(3));
        assert_eq!(d.s, IntMatrix::identity(3));
        let d = check(&int_matrix(&[&[0]]));
        assert_eq!(d.s, int_matrix(&[&[0]]));
    }

    #[test]
    fn smith_rectangular_and_torsion() {
        let d = check(&int_matrix(&[&[2, 0, 0], &[0, 3, 0]]));
        assert_eq!(d.invariant_factors(), vec![int(1), int(6)]);
        let d = check(&int_matrix(&[&[1, -1], &[-1, 1], &[0, 0]]));
        assert_eq!(d.invariant_factors(), vec![int(1)]);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = int_matrix(&[&[2, 2], &[4, 6]]);
        let (h, t) = hermite_normal_form(&a);
        assert_eq!(t.mul(&a), h);
        assert_eq!(h, int_matrix(&[&[2, 0], &[0, 2]]));
        let b = int_matrix(&[&[4, 6], &[2, 2]]);
        assert_eq!(hermite_normal_form(&b).0, h);
    }

    #[test]
    fn kernel_of_integer_matrix() {
        let k = integer_kernel(&int_matrix(&[&[2, 4, 6]]));
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!((int(2) * &v[0] + int(4) * &v[1] + int(6) * &v[2]).is_zero());
        }
    }
}
