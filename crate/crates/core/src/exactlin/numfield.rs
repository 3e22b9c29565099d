//! Arithmetic in `Q(λ) = Q[x]/(m)` for a monic irreducible integer
//! polynomial `m`. Degree-one fields are just `Q`.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::{Rat, RatVector};
use super::poly::{self, IntPoly, RatPoly};

/// A number field `Q[x]/(m)` together with an approximation of the chosen
/// real root of `m` (used only for display).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumberField {
    pub minimal_polynomial: IntPoly,
    pub approx_root: f64,
}

impl NumberField {
    pub fn new(minimal_polynomial: IntPoly, approx_root: f64) -> Arc<Self> {
        assert!(minimal_polynomial.len() >= 2, "minimal polynomial must have degree at least one");
        Arc::new(NumberField { minimal_polynomial, approx_root })
    }

    pub fn degree(&self) -> usize {
        self.minimal_polynomial.len() - 1
    }

    fn modulus(&self) -> RatPoly {
        poly::to_rat_poly(&self.minimal_polynomial)
    }

    /// The rational root when the field has degree one.
    pub fn rational_root(&self) -> Option<Rat> {
        (self.degree() == 1).then(|| {
            let m = &self.minimal_polynomial;
            Rat::new(-m[0].clone(), m[1].clone())
        })
    }
}

#[derive(Clone, Debug)]
pub struct NfElem {
    field: Arc<NumberField>,
    /// Reduced representative, ascending coefficients, degree < deg m.
    coeffs: RatPoly,
}

impl PartialEq for NfElem {
    fn eq(&self, other: &Self) -> bool {
        self.field.minimal_polynomial == other.field.minimal_polynomial && self.coeffs == other.coeffs
    }
}

impl NfElem {
    pub fn from_poly(field: &Arc<NumberField>, p: &[Rat]) -> Self {
        let (_, r) = poly::poly_divmod(p, &field.modulus());
        NfElem { field: field.clone(), coeffs: r }
    }

    pub fn from_rat(field: &Arc<NumberField>, x: Rat) -> Self {
        Self::from_poly(field, &[x])
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        NfElem { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Arc<NumberField>) -> Self {
        Self::from_rat(field, Rat::one())
    }

    /// The generator `λ`.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, &[Rat::zero(), Rat::one()])
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    /// Coefficients in the power basis `1, λ, …, λ^{k−1}`, padded to the
    /// field degree.
    pub fn coefficients(&self) -> RatVector {
        let mut c = self.coeffs.clone();
        c.resize(self.field.degree(), Rat::zero());
        c
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The element as a rational, when it lies in `Q`.
    pub fn as_rational(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let c: RatPoly = (0..n)
            .map(|i| {
                self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
                    + other.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
            })
            .collect();
        NfElem { field: self.field.clone(), coeffs: poly::trim(c) }
    }

    pub fn neg(&self) -> Self {
        NfElem { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_poly(&self.field, &poly::poly_mul(&self.coeffs, &other.coeffs))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero(&self.field);
        }
        NfElem { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // invariant: r_i ≡ s_i · self (mod m)
        let (mut r0, mut r1) = (self.field.modulus(), self.coeffs.clone());
        let (mut s0, mut s1): (RatPoly, RatPoly) = (Vec::new(), vec![Rat::one()]);
        while poly::degree(&r1).is_some_and(|d| d > 0) {
            let (q, r) = poly::poly_divmod(&r0, &r1);
            let s = poly::poly_sub(&s0, &poly::poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r1.is_empty() {
            return None;
        }
        let c = r1[0].recip();
        let s: RatPoly = s1.iter().map(|x| x * &c).collect();
        Some(Self::from_poly(&self.field, &s))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(&self.field), |acc, _| acc.mul(self))
    }

    /// Real value at the distinguished root.
    pub fn approx(&self) -> f64 {
        poly::eval_f64(&self.coeffs, self.field.approx_root)
    }

    /// Human-readable form, e.g. `1/2 + 3/4·λ`.
    pub fn display(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(if mono.is_empty() {
                c.to_string()
            } else if c.is_one() {
                mono
            } else {
                format!("{c}·{mono}")
            });
        }
        parts.join(" + ").replace("+ -", "- ")
    }
}

/// `Σ aᵢ xᵢ` for field coefficients `a` and rational `x`.
pub fn pair(field: &Arc<NumberField>, a: &[NfElem], x: &[Rat]) -> NfElem {
    a.iter().zip(x).fold(NfElem::zero(field), |acc, (ai, xi)| acc.add(&ai.scale(xi)))
}
