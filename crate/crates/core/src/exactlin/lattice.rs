//! Lattices in `Qⁿ`: saturation, intersection and index computations.

use num_traits::{One, Signed, Zero};

use super::matrix::{rat_from_int, Int, IntMatrix, Rat, RatMatrix, RatVector};
use super::smith::{integer_kernel, row_lattice_basis, smith_normal_form, unimodular_inverse};

/// A lattice given by a list of rationally independent basis vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    ambient: usize,
    basis: Vec<RatVector>,
    saturated: bool,
}

impl Lattice {
    /// Lattice spanned by `basis`; panics if the vectors are dependent.
    pub fn new(ambient: usize, basis: Vec<RatVector>) -> Self {
        assert!(basis.iter().all(|v| v.len() == ambient), "basis vector has wrong length");
        if !basis.is_empty() {
            let m = RatMatrix::from_columns(ambient, &basis);
            assert_eq!(m.rank(), basis.len(), "lattice basis is linearly dependent");
        }
        let saturated = basis.is_empty() || is_saturated(ambient, &basis);
        Lattice { ambient, basis, saturated }
    }

    /// `Zⁿ`.
    pub fn standard(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| (0..ambient).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        Lattice { ambient, basis, saturated: true }
    }

    pub fn from_int_columns(ambient: usize, basis: &[Vec<Int>]) -> Self {
        Self::new(ambient, basis.iter().map(|v| v.iter().map(rat_from_int).collect()).collect())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[RatVector] {
        &self.basis
    }

    /// Whether the lattice equals its rational span intersected with `Zⁿ`.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    /// Basis vectors as the columns of an `ambient × rank` matrix.
    pub fn basis_matrix(&self) -> RatMatrix {
        RatMatrix::from_columns(self.ambient, &self.basis)
    }

    /// Integer basis vectors, when all are integral.
    pub fn int_basis(&self) -> Option<Vec<Vec<Int>>> {
        self.basis.iter().map(|v| super::matrix::rat_vector_to_int(v)).collect()
    }

    /// Integer coordinates of `x` in this basis, if `x` is in the lattice.
    pub fn coordinates(&self, x: &[Rat]) -> Option<RatVector> {
        if self.basis.is_empty() {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        self.basis_matrix().solve_vec(x)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.coordinates(x).is_some_and(|c| c.iter().all(|v| v.is_integer()))
    }

    /// `(span L) ∩ Zⁿ` with a canonical Hermite-reduced basis.
    pub fn saturate(&self) -> Lattice {
        if self.basis.is_empty() {
            return Lattice { ambient: self.ambient, basis: Vec::new(), saturated: true };
        }
        let rows: Vec<Vec<Int>> = self.basis.iter().map(|v| clear_denominators(v)).collect();
        let b = IntMatrix::from_rows(rows);
        let snf = smith_normal_form(&b);
        let vinv = unimodular_inverse(&snf.v);
        let k = self.basis.len();
        let sel: Vec<usize> = (0..k).collect();
        let basis = row_lattice_basis(&vinv.select_rows(&sel))
            .into_iter()
            .map(|r| r.iter().map(rat_from_int).collect())
            .collect();
        Lattice { ambient: self.ambient, basis, saturated: true }
    }

    /// The same lattice with its canonical Hermite-reduced basis.
    pub fn canonical(&self) -> Lattice {
        if self.basis.is_empty() {
            return self.clone();
        }
        let scale = RatMatrix::from_columns(self.ambient, &self.basis).denominator_lcm();
        let rows: Vec<Vec<Int>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(|x| (x * rat_from_int(&scale)).to_integer()).collect())
            .collect();
        let s = rat_from_int(&scale);
        let basis = row_lattice_basis(&IntMatrix::from_rows(rows))
            .into_iter()
            .map(|r| r.iter().map(|x| rat_from_int(x) / s.clone()).collect())
            .collect();
        Lattice { ambient: self.ambient, basis, saturated: self.saturated }
    }

    /// `L ∩ M`, canonical basis.
    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.ambient, other.ambient);
        let (k1, k2) = (self.rank(), other.rank());
        if k1 == 0 || k2 == 0 {
            return Lattice { ambient: self.ambient, basis: Vec::new(), saturated: true };
        }
        // x = B1 a = B2 b  ⇔  [B1 | -B2] (a, b) = 0
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|v| v.iter().map(|x| -x.clone()).collect::<Vec<_>>()));
        let m = RatMatrix::from_columns(self.ambient, &cols);
        let scale = rat_from_int(&m.denominator_lcm());
        let mi = m.scale(&scale).to_int().expect("cleared denominators");
        let kernel = integer_kernel(&mi);
        let b1 = self.basis_matrix();
        let vectors: Vec<RatVector> = kernel
            .iter()
            .map(|kv| {
                let a: RatVector = kv[..k1].iter().map(rat_from_int).collect();
                b1.mul_vec(&a)
            })
            .collect();
        if vectors.is_empty() {
            return Lattice { ambient: self.ambient, basis: Vec::new(), saturated: true };
        }
        Lattice { ambient: self.ambient, basis: vectors, saturated: false }.rebuild()
    }

    /// Index `[sup : self]` when `self ⊆ sup` and both have the same rank.
    pub fn index_in(&self, sup: &Lattice) -> Option<Int> {
        if self.rank() != sup.rank() {
            return None;
        }
        let coords: Option<Vec<RatVector>> = self.basis.iter().map(|v| sup.coordinates(v)).collect();
        let m = RatMatrix::from_columns(sup.rank(), &coords?);
        let m = m.to_int()?;
        Some(super::smith::int_det(&m).abs())
    }

    fn rebuild(self) -> Lattice {
        // generators may be dependent; reduce through the Hermite form
        let scale = RatMatrix::from_columns(self.ambient, &self.basis).denominator_lcm();
        let s = rat_from_int(&scale);
        let rows: Vec<Vec<Int>> =
            self.basis.iter().map(|v| v.iter().map(|x| (x * s.clone()).to_integer()).collect()).collect();
        let basis: Vec<RatVector> = row_lattice_basis(&IntMatrix::from_rows(rows))
            .into_iter()
            .map(|r| r.iter().map(|x| rat_from_int(x) / s.clone()).collect())
            .collect();
        let saturated = basis.is_empty() || is_saturated(self.ambient, &basis);
        Lattice { ambient: self.ambient, basis, saturated }
    }
}

/// Primitive integer vector on the ray through `v` (sign preserved).
pub fn clear_denominators(v: &[Rat]) -> Vec<Int> {
    use num_integer::Integer;
    let l = v.iter().fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Int> = v.iter().map(|x| (x * rat_from_int(&l)).to_integer()).collect();
    let g = ints.iter().fold(Int::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

fn is_saturated(ambient: usize, basis: &[RatVector]) -> bool {
    if basis.iter().any(|v| v.iter().any(|x| !x.is_integer())) {
        return false;
    }
    let m = RatMatrix::from_columns(ambient, basis).transpose().to_int().expect("integral");
    let snf = smith_normal_form(&m);
    snf.invariant_factors().iter().all(|d| d.abs().is_one())
}
