//! Anderson–Putnam complexes of one-dimensional substitutions and the
//! induced action on their first cohomology.
//!
//! The complex is a graph: one edge per (collared) letter, vertices glued
//! along allowed two-letter words. Cohomology is the cokernel of
//! `δᵀ : Zⱽ → Zᴱ`, which is free for a connected graph.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::exactlin::smith::unimodular_inverse;
use crate::exactlin::{eventual_range, smith_normal_form, EventualRange, Int, IntMatrix};
use crate::substitution::{collar, factor_language, CollarError, Substitution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// One vertex, one loop per letter. Needs a common prefix or suffix.
    Bouquet,
    /// One edge per allowed 3-letter word.
    Collared,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Bouquet => "bouquet",
            Route::Collared => "collared",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ApError {
    NotBorderForcing,
    Collar(CollarError),
    DisconnectedComplex { components: usize },
    NotCellular,
    /// `Zᴱ / im δᵀ` has torsion; impossible for a graph.
    Torsion { factors: Vec<Int> },
}

impl fmt::Display for ApError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ApError::NotBorderForcing => write!(f, "bouquet route needs a common prefix or suffix"),
            ApError::Collar(e) => write!(f, "{e}"),
            ApError::DisconnectedComplex { components } => {
                write!(f, "complex has {components} components; the language is not that of a primitive substitution")
            }
            ApError::NotCellular => write!(f, "substitution does not preserve the image of the coboundary"),
            ApError::Torsion { factors } => {
                let fs: Vec<String> = factors.iter().map(ToString::to_string).collect();
                write!(f, "internal error: torsion in edge cochains modulo coboundaries ({})", fs.join(", "))
            }
        }
    }
}

impl std::error::Error for ApError {}

impl From<CollarError> for ApError {
    fn from(e: CollarError) -> Self {
        ApError::Collar(e)
    }
}

#[derive(Clone, Debug)]
pub struct ApComplex {
    pub route: Route,
    /// Substitution on edges (the collared one, or the input itself).
    pub edges: Substitution,
    /// Base letter under each edge; the edge length is that letter's length.
    pub projection: Vec<usize>,
    pub vertex_count: usize,
    /// `vertices × edges`, column `e` = head(e) − tail(e).
    pub delta: IntMatrix,
    /// Allowed two-letter words of edges.
    pub adjacency: Vec<(usize, usize)>,
}

impl ApComplex {
    pub fn edge_count(&self) -> usize {
        self.edges.size()
    }

    /// The matrix of `σ*` on edge cochains: `(σ* f)(e) = Σ_{e′ ∈ σ(e)} f(e′)`.
    pub fn cochain_map(&self) -> IntMatrix {
        self.edges.incidence_matrix().transpose()
    }

    pub fn presentation(&self) -> Result<CohPresentation, ApError> {
        h1_presentation(self, &self.cochain_map())
    }
}

pub fn build_ap_complex(s: &Substitution, route: Route) -> Result<ApComplex, ApError> {
    match route {
        Route::Bouquet => bouquet(s),
        Route::Collared => collared(s),
    }
}

fn bouquet(s: &Substitution) -> Result<ApComplex, ApError> {
    if !s.border_forcing().forces() {
        return Err(ApError::NotBorderForcing);
    }
    let n = s.size();
    let adjacency = factor_language(s, 2)
        .into_iter()
        .filter(|w| w.len() == 2)
        .map(|w| (w[0], w[1]))
        .collect();
    Ok(ApComplex {
        route: Route::Bouquet,
        edges: s.clone(),
        projection: (0..n).collect(),
        vertex_count: 1,
        delta: IntMatrix::zeros(1, n),
        adjacency,
    })
}

fn collared(s: &Substitution) -> Result<ApComplex, ApError> {
    let c = collar(s)?;
    let e = c.triples.len();
    // slot 2e is tail(e), slot 2e+1 is head(e)
    let mut uf = UnionFind::new(2 * e);
    for &(a, b) in &c.adjacency {
        uf.union(2 * a + 1, 2 * b);
    }
    let mut label = vec![usize::MAX; 2 * e];
    let mut next = 0;
    for slot in 0..2 * e {
        let root = uf.find(slot);
        if label[root] == usize::MAX {
            label[root] = next;
            next += 1;
        }
        label[slot] = label[root];
    }
    let vertex_count = next;
    let mut delta = IntMatrix::zeros(vertex_count, e);
    for j in 0..e {
        delta[(label[2 * j + 1], j)] += Int::one();
        delta[(label[2 * j], j)] -= Int::one();
    }
    let mut graph = UnionFind::new(vertex_count);
    for j in 0..e {
        graph.union(label[2 * j], label[2 * j + 1]);
    }
    let components = (0..vertex_count).filter(|&v| graph.find(v) == v).count();
    if components != 1 {
        return Err(ApError::DisconnectedComplex { components });
    }
    Ok(ApComplex {
        route: Route::Collared,
        edges: c.substitution,
        projection: c.projection,
        vertex_count,
        delta,
        adjacency: c.adjacency,
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// `H¹(Y) ≅ Zᴺ` with the induced endomorphism and its eventual range.
#[derive(Clone, Debug)]
pub struct CohPresentation {
    pub rank: usize,
    /// Induced action on `H¹(Y)`.
    pub a: IntMatrix,
    /// `N × E`: edge cochain to its class.
    pub projection: IntMatrix,
    /// `E × N`: a cochain representing each basis class (`P·L = I`).
    pub section: IntMatrix,
    pub er: EventualRange,
}

impl CohPresentation {
    /// Presentation directly from an endomorphism of `Zᴺ` (no complex).
    pub fn from_matrix(a: &IntMatrix) -> Self {
        let n = a.rows();
        CohPresentation {
            rank: n,
            a: a.clone(),
            projection: IntMatrix::identity(n),
            section: IntMatrix::identity(n),
            er: eventual_range(a),
        }
    }

    /// Class of an integer edge cochain.
    pub fn class_of_cochain(&self, x: &[Int]) -> Vec<Int> {
        self.projection.mul_vec(x)
    }

    /// Re-express everything in the basis given by the columns of the
    /// unimodular matrix `u` (new coordinates `y = u⁻¹ x`).
    pub fn change_basis(&self, u: &IntMatrix) -> CohPresentation {
        let uinv = unimodular_inverse(u);
        let a = uinv.mul(&self.a).mul(u);
        CohPresentation {
            rank: self.rank,
            er: eventual_range(&a),
            a,
            projection: uinv.mul(&self.projection),
            section: self.section.mul(u),
        }
    }
}

/// `H¹` of the complex with the action induced by the cochain map `sigma`.
pub fn h1_presentation(y: &ApComplex, sigma: &IntMatrix) -> Result<CohPresentation, ApError> {
    presentation_from_cochains(&y.delta, sigma)
}

/// Cokernel of `δᵀ` with the endomorphism induced by `sigma` on `Zᴱ`.
pub fn presentation_from_cochains(delta: &IntMatrix, sigma: &IntMatrix) -> Result<CohPresentation, ApError> {
    let e = delta.cols();
    assert_eq!((sigma.rows(), sigma.cols()), (e, e), "cochain map has the wrong shape");
    let dt = delta.transpose();
    let snf = smith_normal_form(&dt);
    let factors = snf.invariant_factors();
    if factors.iter().any(|d| !d.is_one()) {
        return Err(ApError::Torsion { factors });
    }
    let r = factors.len();
    let (projection, section) = if r == 0 {
        (IntMatrix::identity(e), IntMatrix::identity(e))
    } else {
        let uinv = unimodular_inverse(&snf.u);
        let keep: Vec<usize> = (r..e).collect();
        (snf.u.select_rows(&keep), uinv.select_cols(&keep))
    };
    if !projection.mul(sigma).mul(&dt).is_zero() {
        return Err(ApError::NotCellular);
    }
    let a = projection.mul(sigma).mul(&section);
    debug_assert!(projection.mul(&section) == IntMatrix::identity(e - r));
    Ok(CohPresentation { rank: e - r, er: eventual_range(&a), a, projection, section })
}

/// Convenience: `true` when the cochain is zero.
pub fn is_zero_cochain(x: &[Int]) -> bool {
    x.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int, int_matrix};
    use crate::exactlin::poly::int_char_poly;

    fn thue_morse() -> Substitution {
        Substitution::from_rules(&[("x", "xy"), ("y", "yx")])
    }

    #[test]
    fn thue_morse_complex_counts() {
        let y = build_ap_complex(&thue_morse(), Route::Collared).unwrap();
        assert_eq!(y.edge_count(), 6);
        assert_eq!(y.vertex_count, 4);
        for j in 0..6 {
            let s: Int = (0..4).map(|i| y.delta[(i, j)].clone()).sum();
            assert!(s.is_zero());
        }
        assert_eq!(smith_normal_form(&y.delta).rank(), 3);
    }

    #[test]
    fn thue_morse_matches_printed_coboundary() {
        // rows v, v̄, w, w̄; columns a, b, c, ā, b̄, c̄
        let printed = int_matrix(&[
            &[1, 1, 0, -1, 0, -1],
            &[-1, 0, -1, 1, 1, 0],
            &[0, -1, 1, 0, 0, 0],
            &[0, 0, 0, 0, -1, 1],
        ]);
        let ours = build_ap_complex(&thue_morse(), Route::Collared).unwrap().delta;
        assert_eq!(smith_normal_form(&printed).invariant_factors(), smith_normal_form(&ours).invariant_factors());
    }

    #[test]
    fn thue_morse_presentation() {
        let y = build_ap_complex(&thue_morse(), Route::Collared).unwrap();
        let p = y.presentation().unwrap();
        assert_eq!(p.rank, 3);
        assert_eq!(p.er.dim(), 2);
        let at = p.er.a_tilde.to_int().unwrap();
        assert_eq!(int_char_poly(&at), vec![int(-2), int(-1), int(1)]);
    }

    #[test]
    fn printed_thue_morse_matrices_give_same_invariants() {
        let delta = int_matrix(&[
            &[1, 1, 0, -1, 0, -1],
            &[-1, 0, -1, 1, 1, 0],
            &[0, -1, 1, 0, 0, 0],
            &[0, 0, 0, 0, -1, 1],
        ]);
        // σ_ij = number of tiles i in the supertile of j
        let sigma = int_matrix(&[
            &[0, 1, 0, 0, 0, 1],
            &[1, 0, 1, 0, 0, 0],
            &[0, 0, 0, 1, 1, 0],
            &[0, 0, 1, 0, 1, 0],
            &[0, 0, 0, 1, 0, 1],
            &[1, 1, 0, 0, 0, 0],
        ]);
        let p = presentation_from_cochains(&delta, &sigma.transpose()).unwrap();
        assert_eq!(p.rank, 3);
        assert_eq!(int_char_poly(&p.er.a_tilde.to_int().unwrap()), vec![int(-2), int(-1), int(1)]);
    }

    #[test]
    fn bouquet_of_non_splitting_example() {
        let s = Substitution::from_rules(&[("a", "abb"), ("b", "aaa")]);
        let y = build_ap_complex(&s, Route::Bouquet).unwrap();
        assert_eq!(y.vertex_count, 1);
        assert!(y.delta.is_zero());
        let p = y.presentation().unwrap();
        assert_eq!(p.a, int_matrix(&[&[1, 2], &[3, 0]]));
        assert_eq!(p.er.dim(), 2);
        assert_eq!(p.class_of_cochain(&[int(1), int(1)]), vec![int(1), int(1)]);
        assert!(is_zero_cochain(&p.class_of_cochain(&[int(0), int(0)])));
    }

    #[test]
    fn bouquet_of_period_doubling() {
        let s = Substitution::from_rules(&[("a", "ab"), ("b", "aa")]);
        let p = build_ap_complex(&s, Route::Bouquet).unwrap().presentation().unwrap();
        assert_eq!(p.a, int_matrix(&[&[1, 1], &[2, 0]]));
    }

    #[test]
    fn bouquet_requires_border_forcing() {
        assert_eq!(build_ap_complex(&thue_morse(), Route::Bouquet).unwrap_err(), ApError::NotBorderForcing);
    }

    #[test]
    fn non_invariant_cochain_map_is_rejected() {
        let y = build_ap_complex(&thue_morse(), Route::Collared).unwrap();
        let mut sigma = IntMatrix::zeros(6, 6);
        sigma[(0, 0)] = int(1);
        assert_eq!(h1_presentation(&y, &sigma).unwrap_err(), ApError::NotCellular);
    }

    #[test]
    fn change_of_basis_preserves_invariants() {
        let s = Substitution::from_rules(&[("a", "abb"), ("b", "aaa")]);
        let p = build_ap_complex(&s, Route::Bouquet).unwrap().presentation().unwrap();
        let q = p.change_basis(&int_matrix(&[&[2, 1], &[1, 1]]));
        assert_eq!(int_char_poly(&q.a), int_char_poly(&p.a));
        assert_eq!(q.projection.mul(&q.section), IntMatrix::identity(2));
    }
}
