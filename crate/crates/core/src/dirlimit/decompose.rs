//! Eigen-decomposition of a direct limit with diagonalizable integer action.
//!
//! With `Λ_μ = E_μ ∩ Σ` the sum `L = ⊕ Z[1/μ]Λ_μ` is a finite-index subgroup
//! of `G`. Any `x ∈ G` has `Ãⁿx ∈ Σ`, and `Ã⁻ⁿ` maps `Σ ⊆ Σ_L ⊗ Q` into
//! `Σ + L` because on each eigenline it only introduces denominators of `μ`.
//! Hence `G = Σ + L` and `[G : L] = [Σ : Σ ∩ L]`.

use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{all_in_localization, DlGroup};
use crate::exactlin::matrix::{int_vector_to_rat, rat_from_int, rat_vector_to_int, vec_sub};
use crate::exactlin::poly::{int_char_poly, integer_roots};
use crate::exactlin::primes::{pow, radical};
use crate::exactlin::smith::{int_det, unimodular_inverse};
use crate::exactlin::{smith_normal_form, Int, IntMatrix, Lattice, Rat, RatMatrix, RatVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecomposeError {
    IrrationalEigenvalues,
    NotDiagonalizable,
}

impl fmt::Display for DecomposeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecomposeError::IrrationalEigenvalues => write!(f, "action has irrational eigenvalues"),
            DecomposeError::NotDiagonalizable => write!(f, "action is not diagonalizable"),
        }
    }
}

impl std::error::Error for DecomposeError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub eigenvalue: Int,
    /// `m` with ring `Z[1/m]`; `1` for the eigenvalues `±1`.
    pub ring: Int,
    /// Basis of `E_μ ∩ Σ` in ambient coordinates.
    pub generators: Vec<RatVector>,
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Ordered by `|μ|` descending, then `μ` descending.
    pub components: Vec<Component>,
    /// `[Σ : ⊕ Λ_μ]`.
    pub lattice_index: Int,
    /// `[G : L]`.
    pub index: Int,
    /// One representative in `Σ` of each coset of `L` in `G`.
    pub coset_representatives: Vec<RatVector>,
    /// Ambient coordinates to coordinates in the concatenated `Λ` bases.
    to_lambda: RatMatrix,
}

impl Decomposition {
    /// Whether `x` lies in `L = ⊕ Z[1/μ]Λ_μ`.
    pub fn in_eigen_sum(&self, x: &[Rat]) -> bool {
        let c = self.to_lambda.mul_vec(x);
        let mut k = 0;
        self.components.iter().all(|comp| {
            let n = comp.generators.len();
            let ok = all_in_localization(&c[k..k + n], &comp.ring);
            k += n;
            ok
        })
    }

    /// Membership in `G = ⋃ (r + L)`.
    pub fn contains(&self, x: &[Rat]) -> bool {
        self.coset_representatives.iter().any(|r| self.in_eigen_sum(&vec_sub(x, r)))
    }

    /// The coefficients of `x` along each component basis.
    pub fn lambda_coordinates(&self, x: &[Rat]) -> RatVector {
        self.to_lambda.mul_vec(x)
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for c in &self.components {
            for g in &c.generators {
                parts.push(format!("{}·{}", ring_name(&c.ring), format_vector(g)));
            }
        }
        if parts.is_empty() {
            parts.push("0".into());
        }
        write!(f, "{}, index {}", parts.join(" ⊕ "), self.index)
    }
}

/// `Z` or `Z[1/m]`.
pub fn ring_name(m: &Int) -> String {
    if m.is_one() {
        "Z".into()
    } else {
        format!("Z[1/{m}]")
    }
}

/// `(1,-2)`, `(1/2,3)`.
pub fn format_vector(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

pub(super) fn decompose(g: &DlGroup) -> Result<Decomposition, DecomposeError> {
    let d = g.dim();
    if d == 0 {
        return Ok(Decomposition {
            components: Vec::new(),
            lattice_index: Int::one(),
            index: Int::one(),
            coset_representatives: vec![Vec::new()],
            to_lambda: RatMatrix::zeros(0, 0),
        });
    }
    let roots = integer_roots(&int_char_poly(&g.t));
    if roots.iter().map(|(_, m)| m).sum::<usize>() != d {
        return Err(DecomposeError::IrrationalEigenvalues);
    }
    let mut roots = roots;
    roots.sort_by(|(a, _), (b, _)| b.abs().cmp(&a.abs()).then(b.cmp(a)));

    let t = g.t.to_rat();
    let mut components = Vec::new();
    // Λ bases in Σ-coordinates, concatenated
    let mut columns: Vec<Vec<Int>> = Vec::new();
    for (mu, mult) in &roots {
        let kernel = t.sub(&RatMatrix::identity(d).scale(&rat_from_int(mu))).kernel();
        if kernel.len() != *mult {
            return Err(DecomposeError::NotDiagonalizable);
        }
        let lam = Lattice::new(d, kernel).saturate();
        let mut basis = lam.int_basis().expect("saturated lattices are integral");
        for v in basis.iter_mut() {
            if super::points_down(&g.from_sigma_coordinates(&int_vector_to_rat(v))) {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
        }
        let generators = basis.iter().map(|v| g.from_sigma_coordinates(&int_vector_to_rat(v))).collect();
        columns.extend(basis);
        components.push(Component { eigenvalue: mu.clone(), ring: radical(&mu.abs()), generators });
    }
    let c = IntMatrix::from_columns(d, &columns);
    let lattice_index = int_det(&c).abs();
    let c_inv = c.to_rat().inverse().expect("eigenvectors of distinct eigenvalues are independent");
    let to_lambda = c_inv.mul(&g.b_inv);

    // Σ ∩ L = Σ ∩ ⊕ m_μ^{-e} Λ_μ once m_μ^e absorbs every prime power of the lattice index.
    let e = lattice_index.bits() as u32;
    let mut scaled: Vec<RatVector> = Vec::new();
    let mut k = 0;
    for comp in &components {
        let s = Rat::new(Int::one(), pow(&comp.ring, e));
        for col in &columns[k..k + comp.generators.len()] {
            scaled.push(int_vector_to_rat(col).iter().map(|x| x * &s).collect());
        }
        k += comp.generators.len();
    }
    let meet = Lattice::standard(d).intersect(&Lattice::new(d, scaled));
    let meet_basis = meet.int_basis().expect("sublattice of Σ");
    let meet_matrix = IntMatrix::from_columns(d, &meet_basis);
    let index = int_det(&meet_matrix).abs();

    let reps_sigma = coset_representatives(d, &meet_matrix, &index);
    let coset_representatives = reps_sigma.iter().map(|r| g.from_sigma_coordinates(&int_vector_to_rat(r))).collect();
    Ok(Decomposition { components, lattice_index, index, coset_representatives, to_lambda })
}

/// Representatives of `Zᵈ / M Zᵈ` (of order `index`). Multiples of a single
/// unit vector are preferred when one generates the quotient.
fn coset_representatives(d: usize, m: &IntMatrix, index: &Int) -> Vec<Vec<Int>> {
    let n = index.to_usize().expect("index fits in memory");
    let m_inv = m.to_rat().inverse().expect("full rank");
    let in_m = |v: &[Int]| rat_vector_to_int(&m_inv.mul_vec(&int_vector_to_rat(v))).is_some();
    for j in 0..d {
        let unit = |k: usize| -> Vec<Int> { (0..d).map(|i| if i == j { Int::from(k) } else { Int::zero() }).collect() };
        if (1..n).all(|k| !in_m(&unit(k))) {
            return (0..n).map(unit).collect();
        }
    }
    // Zᵈ/MZᵈ ≅ ⊕ Z/sᵢ with generators the columns of U⁻¹ (U M V = S)
    let snf = smith_normal_form(m);
    let u_inv = unimodular_inverse(&snf.u);
    let orders: Vec<usize> = (0..d).map(|i| snf.s[(i, i)].to_usize().expect("small invariant factor")).collect();
    let mut reps = vec![vec![Int::zero(); d]];
    for (i, &order) in orders.iter().enumerate() {
        let gen = u_inv.col(i);
        let mut next = Vec::with_capacity(reps.len() * order);
        for r in &reps {
            for k in 0..order {
                next.push(r.iter().zip(&gen).map(|(a, b)| a + b * Int::from(k)).collect());
            }
        }
        reps = next;
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int, int_matrix, rat_vector};

    fn up_to_sign(v: &[Rat], w: &[Rat]) -> bool {
        v == w || v.iter().zip(w).all(|(a, b)| a == &-b.clone())
    }

    #[test]
    fn non_splitting_example() {
        let g = DlGroup::from_int_matrix(&int_matrix(&[&[1, 2], &[3, 0]])).unwrap();
        let dec = g.decompose().unwrap();
        assert_eq!(dec.components.len(), 2);
        assert_eq!(dec.components[0].eigenvalue, int(3));
        assert_eq!(dec.components[0].ring, int(3));
        assert!(up_to_sign(&dec.components[0].generators[0], &rat_vector(&[(1, 1), (1, 1)])));
        assert_eq!(dec.components[1].eigenvalue, int(-2));
        assert_eq!(dec.components[1].ring, int(2));
        assert!(up_to_sign(&dec.components[1].generators[0], &rat_vector(&[(-2, 1), (3, 1)])));
        assert_eq!(dec.lattice_index, int(5));
        assert_eq!(dec.index, int(5));
        assert_eq!(dec.coset_representatives.len(), 5);
        assert!(dec.to_string().ends_with("index 5"));
    }

    #[test]
    fn period_doubling_and_thue_morse() {
        let pd = DlGroup::from_int_matrix(&int_matrix(&[&[1, 1], &[2, 0]])).unwrap().decompose().unwrap();
        assert_eq!(pd.index, int(3));
        assert_eq!(pd.components[1].ring, int(1));
        assert!(up_to_sign(&pd.components[1].generators[0], &rat_vector(&[(1, 1), (-2, 1)])));
        let tm = DlGroup::from_int_matrix(&int_matrix(&[&[0, 1], &[2, 1]])).unwrap().decompose().unwrap();
        assert_eq!(tm.index, int(3));
        assert!(up_to_sign(&tm.components[0].generators[0], &rat_vector(&[(1, 1), (2, 1)])));
        assert!(up_to_sign(&tm.components[1].generators[0], &rat_vector(&[(1, 1), (-1, 1)])));
    }

    #[test]
    fn group_index_can_be_smaller_than_lattice_index() {
        // Ã = diag(2, 6) on Σ = Z(2,0) + Z(1,1): the eigenlattices Z(2,0),
        // Z(0,2) span an index-2 sublattice, but (1,1) = ½(2,0) + ½(0,2).
        let a = RatMatrix::from_rows(vec![vec![rat(2), rat(0)], vec![rat(0), rat(6)]]);
        let sigma = Lattice::new(2, vec![rat_vector(&[(2, 1), (0, 1)]), rat_vector(&[(1, 1), (1, 1)])]);
        let g = DlGroup::new(a, sigma).unwrap();
        let dec = g.decompose().unwrap();
        assert_eq!(dec.lattice_index, int(2));
        assert_eq!(dec.index, int(1));
    }

    fn rat(n: i64) -> Rat {
        Rat::from_integer(int(n))
    }

    #[test]
    fn non_diagonalizable_is_refused() {
        let g = DlGroup::from_int_matrix(&int_matrix(&[&[2, 1], &[0, 2]])).unwrap();
        assert_eq!(g.decompose().unwrap_err(), DecomposeError::NotDiagonalizable);
        let f = DlGroup::from_int_matrix(&int_matrix(&[&[1, 1], &[1, 0]])).unwrap();
        assert_eq!(f.decompose().unwrap_err(), DecomposeError::IrrationalEigenvalues);
    }

    #[test]
    fn decomposition_membership_matches_residue_orbits() {
        let g = DlGroup::from_int_matrix(&int_matrix(&[&[1, 2], &[3, 0]])).unwrap();
        let dec = g.decompose().unwrap();
        for den in [1, 2, 3, 4, 5, 6, 9, 12] {
            for a in -4..=4 {
                for b in -4..=4 {
                    let x = rat_vector(&[(a, den), (b, den)]);
                    assert_eq!(dec.contains(&x), g.contains(&x), "{x:?}");
                }
            }
        }
    }
}
