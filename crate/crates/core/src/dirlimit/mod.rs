//! The direct limit `G = ⋃ₙ Ã⁻ⁿΣ` of an invertible rational matrix acting
//! on a lattice it preserves.
//!
//! Elements are stored by their value in the ambient coordinates of the
//! eventual range, together with the least `n` such that `Ãⁿx ∈ Σ`.

mod decompose;
mod forms;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::apcomplex::CohPresentation;
use crate::exactlin::matrix::{int_vector_to_rat, rat_from_int, vec_add};
use crate::exactlin::smith::int_det;
use crate::exactlin::{Int, IntMatrix, Lattice, Rat, RatMatrix, RatVector};

pub use decompose::{format_vector, ring_name, Component, DecomposeError, Decomposition};
pub use forms::MembershipForms;

/// Generators are oriented so that their last nonzero coordinate is positive.
fn points_down(v: &[Rat]) -> bool {
    v.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DlError {
    Singular,
    /// `Ã` does not map `Σ` into itself.
    NotInvariant,
    ParentMismatch,
    /// The subspace handed to [`DlGroup::restrict`] is not `Ã`-invariant.
    NotInvariantSubspace,
}

impl fmt::Display for DlError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DlError::Singular => write!(f, "matrix is not invertible"),
            DlError::NotInvariant => write!(f, "matrix does not preserve the lattice"),
            DlError::ParentMismatch => write!(f, "elements belong to different groups"),
            DlError::NotInvariantSubspace => write!(f, "subspace is not invariant"),
        }
    }
}

impl std::error::Error for DlError {}

/// Maps integer classes of `H¹(Y)` into the limit.
#[derive(Clone, Debug)]
struct Source {
    a: IntMatrix,
    /// `N × d`, columns spanning the eventual range.
    er_basis: RatMatrix,
}

#[derive(Clone, Debug)]
pub struct DlGroup {
    a_tilde: RatMatrix,
    a_tilde_inv: RatMatrix,
    sigma: Lattice,
    /// Basis of `Σ` as columns, and its inverse.
    b: RatMatrix,
    b_inv: RatMatrix,
    /// `Ã` in `Σ`-coordinates.
    t: IntMatrix,
    det: Int,
    fingerprint: u64,
    source: Option<Source>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DlElement {
    pub value: RatVector,
    pub level: usize,
    group: u64,
}

impl DlElement {
    pub fn is_zero(&self) -> bool {
        self.value.iter().all(Zero::is_zero)
    }
}

impl DlGroup {
    pub fn new(a_tilde: RatMatrix, sigma: Lattice) -> Result<Self, DlError> {
        let d = a_tilde.rows();
        assert!(a_tilde.is_square() && sigma.ambient() == d && sigma.rank() == d, "Σ must be full rank");
        if d == 0 {
            return Ok(Self::trivial());
        }
        let a_tilde_inv = a_tilde.inverse().ok_or(DlError::Singular)?;
        let b = sigma.basis_matrix();
        let b_inv = b.inverse().expect("full-rank lattice");
        let t = b_inv.mul(&a_tilde).mul(&b).to_int().ok_or(DlError::NotInvariant)?;
        let det = int_det(&t);
        let fingerprint = fingerprint(&a_tilde, &b);
        Ok(DlGroup { a_tilde, a_tilde_inv, sigma, b, b_inv, t, det, fingerprint, source: None })
    }

    fn trivial() -> Self {
        DlGroup {
            a_tilde: RatMatrix::zeros(0, 0),
            a_tilde_inv: RatMatrix::zeros(0, 0),
            sigma: Lattice::standard(0),
            b: RatMatrix::zeros(0, 0),
            b_inv: RatMatrix::zeros(0, 0),
            t: IntMatrix::zeros(0, 0),
            det: Int::one(),
            fingerprint: 0,
            source: None,
        }
    }

    /// `dlim(Zᴺ, A)` realized on the eventual range, `Σ = ER ∩ Zᴺ`.
    pub fn from_presentation(p: &CohPresentation) -> Self {
        let d = p.er.dim();
        let mut g = DlGroup::new(p.er.a_tilde.clone(), Lattice::standard(d)).expect("Ã is invertible and integral");
        g.source = Some(Source { a: p.a.clone(), er_basis: p.er.basis.clone() });
        g
    }

    /// Group of an integer matrix acting on `Zᵈ` (invertible over `Q`).
    pub fn from_int_matrix(t: &IntMatrix) -> Result<Self, DlError> {
        let n = t.rows();
        let mut g = DlGroup::new(t.to_rat(), Lattice::standard(n))?;
        g.source = Some(Source { a: t.clone(), er_basis: RatMatrix::identity(n) });
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.a_tilde.rows()
    }

    pub fn a_tilde(&self) -> &RatMatrix {
        &self.a_tilde
    }

    pub fn a_tilde_inverse(&self) -> &RatMatrix {
        &self.a_tilde_inv
    }

    pub fn sigma(&self) -> &Lattice {
        &self.sigma
    }

    /// `Ã` in the coordinates of the basis of `Σ`.
    pub fn t_sigma(&self) -> &IntMatrix {
        &self.t
    }

    pub fn det(&self) -> &Int {
        &self.det
    }

    /// The chain `Ã⁻ⁿΣ` stabilizes exactly when `|det| = 1`.
    pub fn is_finitely_generated(&self) -> bool {
        self.det.abs().is_one()
    }

    pub fn sigma_coordinates(&self, x: &[Rat]) -> RatVector {
        self.b_inv.mul_vec(x)
    }

    pub fn from_sigma_coordinates(&self, y: &[Rat]) -> RatVector {
        self.b.mul_vec(y)
    }

    /// Least `n` with `Ãⁿx ∈ Σ`, by following residues modulo `Σ`.
    pub fn membership(&self, x: &[Rat]) -> Option<usize> {
        assert_eq!(x.len(), self.dim());
        let mut r = frac(&self.sigma_coordinates(x));
        let mut seen = HashSet::new();
        let t = self.t.to_rat();
        for n in 0.. {
            if r.iter().all(Zero::is_zero) {
                return Some(n);
            }
            if !seen.insert(r.clone()) {
                return None;
            }
            r = frac(&t.mul_vec(&r));
        }
        unreachable!()
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.membership(x).is_some()
    }

    pub fn element(&self, x: &[Rat]) -> Option<DlElement> {
        let level = self.membership(x)?;
        Some(DlElement { value: x.to_vec(), level, group: self.fingerprint })
    }

    pub fn zero(&self) -> DlElement {
        DlElement { value: vec![Rat::zero(); self.dim()], level: 0, group: self.fingerprint }
    }

    /// The map `ι` from integer classes of `H¹(Y)`:
    /// `v ↦ Ã⁻ᵐ·(Aᵐv)` with `m = N`.
    pub fn embed(&self, v: &[Int]) -> DlElement {
        let src = self.source.as_ref().expect("group was not built from a presentation");
        let m = src.a.rows();
        assert_eq!(v.len(), m);
        let pushed = src.a.pow(m as u32).mul_vec(v);
        let coords = if self.dim() == 0 {
            Vec::new()
        } else {
            src.er_basis.solve_vec(&int_vector_to_rat(&pushed)).expect("Aᴺv lies in the eventual range")
        };
        let value = self.a_tilde_inv.pow(m as u32).mul_vec(&coords);
        self.element(&value).expect("embedded classes lie in the limit")
    }

    pub fn has_source(&self) -> bool {
        self.source.is_some()
    }

    fn check(&self, x: &DlElement) -> Result<(), DlError> {
        if x.group == self.fingerprint {
            Ok(())
        } else {
            Err(DlError::ParentMismatch)
        }
    }

    pub fn add(&self, x: &DlElement, y: &DlElement) -> Result<DlElement, DlError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.element(&vec_add(&x.value, &y.value)).expect("closed under addition"))
    }

    pub fn negate(&self, x: &DlElement) -> Result<DlElement, DlError> {
        self.check(x)?;
        Ok(DlElement { value: x.value.iter().map(|v| -v).collect(), level: x.level, group: x.group })
    }

    pub fn sub(&self, x: &DlElement, y: &DlElement) -> Result<DlElement, DlError> {
        self.add(x, &self.negate(y)?)
    }

    pub fn scale(&self, x: &DlElement, k: &Int) -> Result<DlElement, DlError> {
        self.check(x)?;
        let k = rat_from_int(k);
        Ok(self.element(&x.value.iter().map(|v| v * &k).collect::<Vec<_>>()).expect("closed under multiples"))
    }

    pub fn equals(&self, x: &DlElement, y: &DlElement) -> Result<bool, DlError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.value == y.value)
    }

    /// `Ãⁿx` for any integer `n`.
    pub fn act(&self, x: &[Rat], n: i64) -> RatVector {
        let m = if n >= 0 { &self.a_tilde } else { &self.a_tilde_inv };
        m.pow(n.unsigned_abs() as u32).mul_vec(x)
    }

    /// `Ã⁻ⁿ` applied to the basis of `Σ`: generators of the `n`-th stage.
    pub fn stage_generators(&self, n: u32) -> Vec<RatVector> {
        let m = self.a_tilde_inv.pow(n).mul(&self.b);
        m.col_vecs()
    }

    /// `Ã⁻ⁿ·(Σ kᵢbᵢ)` with `n ≤ max_level` and `|kᵢ| ≤ bound`.
    pub fn sample<R: Rng>(&self, rng: &mut R, max_level: u32, bound: i64) -> DlElement {
        let n = rng.gen_range(0..=max_level);
        let k: Vec<Rat> = (0..self.dim()).map(|_| Rat::from_integer(Int::from(rng.gen_range(-bound..=bound)))).collect();
        let x = self.a_tilde_inv.pow(n).mul_vec(&self.b.mul_vec(&k));
        self.element(&x).expect("sampled from a stage")
    }

    /// `G ∩ V` for an `Ã`-invariant rational subspace `V` (columns of
    /// `basis`). Since `Ã` preserves `V`, this is `⋃ Ã⁻ⁿ(Σ ∩ V)`.
    pub fn restrict(&self, basis: &[RatVector]) -> Result<SubGroup, DlError> {
        let d = self.dim();
        if basis.is_empty() {
            return Ok(SubGroup { group: DlGroup::trivial(), embedding: RatMatrix::zeros(d, 0) });
        }
        let k = basis.len();
        let coords: Vec<RatVector> = basis.iter().map(|v| self.sigma_coordinates(v)).collect();
        let sat = Lattice::new(d, coords).saturate();
        let mut embedding = self.b.mul(&sat.basis_matrix());
        for j in 0..k {
            if points_down(&embedding.col(j)) {
                embedding.negate_col(j);
            }
        }
        let image = self.a_tilde.mul(&embedding);
        let restricted = embedding.solve(&image).ok_or(DlError::NotInvariantSubspace)?;
        let group = DlGroup::new(restricted, Lattice::standard(k))?;
        Ok(SubGroup { group, embedding })
    }

    pub fn decompose(&self) -> Result<Decomposition, DecomposeError> {
        decompose::decompose(self)
    }

    pub fn membership_forms(&self) -> Option<MembershipForms> {
        forms::membership_forms(self)
    }
}

/// A subgroup `G ∩ V`, presented as a direct limit in coordinates of a basis
/// of `Σ ∩ V`.
#[derive(Clone, Debug)]
pub struct SubGroup {
    pub group: DlGroup,
    /// `d × k`: subgroup coordinates to ambient coordinates.
    pub embedding: RatMatrix,
}

impl SubGroup {
    pub fn rank(&self) -> usize {
        self.group.dim()
    }

    pub fn to_ambient(&self, y: &[Rat]) -> RatVector {
        self.embedding.mul_vec(y)
    }

    /// Subgroup coordinates of an ambient vector in the span, if any.
    pub fn from_ambient(&self, x: &[Rat]) -> Option<RatVector> {
        if self.rank() == 0 {
            return x.iter().all(Zero::is_zero).then(Vec::new);
        }
        self.embedding.solve_vec(x)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.from_ambient(x).is_some_and(|y| self.group.contains(&y))
    }

    /// Generators of `Σ ∩ V` in ambient coordinates.
    pub fn generators(&self) -> Vec<RatVector> {
        self.embedding.col_vecs()
    }
}

/// Componentwise fractional part in `[0, 1)`.
fn frac(v: &[Rat]) -> RatVector {
    v.iter().map(|x| x - x.floor()).collect()
}

fn fingerprint(a: &RatMatrix, b: &RatMatrix) -> u64 {
    let mut h = DefaultHasher::new();
    a.rows().hash(&mut h);
    for x in a.iter().chain(b.iter()) {
        x.hash(&mut h);
    }
    h.finish()
}

/// Whether the entries of `v` are all in `Z[1/m]`.
pub(crate) fn all_in_localization(v: &[Rat], m: &Int) -> bool {
    v.iter().all(|x| crate::exactlin::primes::in_localization(x, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int, int_matrix, rat, rat_vector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn nonsplit() -> DlGroup {
        DlGroup::from_int_matrix(&int_matrix(&[&[1, 2], &[3, 0]])).unwrap()
    }

    #[test]
    fn membership_examples() {
        let g = nonsplit();
        assert_eq!(g.membership(&rat_vector(&[(1, 1), (0, 1)])), Some(0));
        assert_eq!(g.membership(&rat_vector(&[(-1, 1), (3, 2)])), Some(1));
        assert_eq!(g.membership(&rat_vector(&[(1, 3), (0, 1)])), None);
    }

    #[test]
    fn embedding_and_arithmetic() {
        let g = nonsplit();
        let x = g.embed(&[int(1), int(1)]);
        assert_eq!(x.value, rat_vector(&[(1, 1), (1, 1)]));
        assert_eq!(x.level, 0);
        assert!(g.embed(&[int(0), int(0)]).is_zero());
        let y = g.element(&rat_vector(&[(-2, 1), (3, 1)])).unwrap();
        let s = g.add(&x, &y).unwrap();
        assert_eq!(s.value, rat_vector(&[(-1, 1), (4, 1)]));
        assert_eq!(s.level, 0);
        let h = g.element(&rat_vector(&[(-1, 1), (3, 2)])).unwrap();
        assert_eq!(h.level, 1);
        let hh = g.add(&h, &h).unwrap();
        assert_eq!((hh.value.clone(), hh.level), (rat_vector(&[(-2, 1), (3, 1)]), 0));
        assert!(g.add(&x, &g.negate(&x).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn parent_mismatch_is_detected() {
        let g = nonsplit();
        let f = DlGroup::from_int_matrix(&int_matrix(&[&[1, 1], &[1, 0]])).unwrap();
        assert_eq!(g.add(&g.zero(), &f.zero()).unwrap_err(), DlError::ParentMismatch);
    }

    #[test]
    fn finite_generation() {
        assert!(!nonsplit().is_finitely_generated());
        assert_eq!(nonsplit().det(), &int(-6));
        assert!(DlGroup::from_int_matrix(&int_matrix(&[&[1, 1], &[1, 0]])).unwrap().is_finitely_generated());
        assert!(DlGroup::new(RatMatrix::zeros(0, 0), Lattice::standard(0)).unwrap().is_finitely_generated());
    }

    #[test]
    fn embed_through_singular_presentation() {
        // A = [[1,1],[2,2]]: eventual range spanned by (1,2), Ã = (3)
        let p = CohPresentation::from_matrix(&int_matrix(&[&[1, 1], &[2, 2]]));
        let g = DlGroup::from_presentation(&p);
        assert_eq!(g.dim(), 1);
        // A(1,0) = (1,2), so ι(1,0) = Ã⁻¹·1 = 1/3
        assert_eq!(g.embed(&[int(1), int(0)]).value, vec![rat(1, 3)]);
        assert_eq!(g.embed(&[int(1), int(0)]).level, 1);
    }

    #[test]
    fn chain_index_is_det() {
        let g = nonsplit();
        let stage1 = Lattice::new(2, g.stage_generators(1));
        assert_eq!(g.sigma().index_in(&stage1), Some(int(6)));
    }

    #[test]
    fn eigenline_restriction() {
        let g = nonsplit();
        let sub = g.restrict(&[rat_vector(&[(2, 1), (2, 1)])]).unwrap();
        assert_eq!(sub.generators(), vec![rat_vector(&[(1, 1), (1, 1)])]);
        assert_eq!(sub.group.a_tilde(), &RatMatrix::from_rows(vec![vec![rat(3, 1)]]));
        assert!(sub.contains(&rat_vector(&[(1, 9), (1, 9)])));
        assert!(!sub.contains(&rat_vector(&[(1, 2), (1, 2)])));
    }

    #[test]
    fn samples_are_members() {
        let g = nonsplit();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let x = g.sample(&mut rng, 4, 3);
            assert_eq!(g.membership(&x.value), Some(x.level));
            assert!(x.level <= 4);
        }
    }
}
