//! Floating-point root isolation for integer polynomials.
//!
//! Roots are approximated with the Weierstrass (Durand–Kerner) iteration and
//! each approximation carries an inclusion radius. When the inclusion disks
//! are pairwise disjoint each one contains exactly one root. Exact questions
//! (factorization, minimal polynomials) only use these values as a guide and
//! are settled by exact polynomial division.

use num_complex::Complex64;

use super::matrix::Int;
use super::poly::{self, IntPoly};

#[derive(Clone, Copy, Debug)]
pub struct IsolatedRoot {
    pub value: Complex64,
    /// Radius of a disk around `value` that contains a root.
    pub radius: f64,
}

impl IsolatedRoot {
    pub fn modulus_bounds(&self) -> (f64, f64) {
        let m = self.value.norm();
        ((m - self.radius).max(0.0), m + self.radius)
    }
}

fn int_to_f64(x: &Int) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

fn eval(p: &[f64], z: Complex64) -> Complex64 {
    p.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All complex roots of a monic integer polynomial of degree ≥ 1.
pub fn isolate_roots(p: &[Int]) -> Vec<IsolatedRoot> {
    let p = poly::trim(p.to_vec());
    let n = p.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = int_to_f64(&p[n]);
    let coeffs: Vec<f64> = p.iter().map(|c| int_to_f64(c) / lead).collect();
    // Cauchy bound for the initial circle
    let bound = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (bound / 2.0).max(0.5)).collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let num = eval(&coeffs, z[i]);
            let den = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            if den.norm() == 0.0 {
                z[i] += Complex64::new(1e-8, 1e-8);
                delta = f64::INFINITY;
                continue;
            }
            let step = num / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    for _ in 0..3 {
        polish(&coeffs, &mut z);
    }
    (0..n)
        .map(|i| {
            let num = eval(&coeffs, z[i]);
            let den = (0..n).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (z[i] - z[j]));
            let w = if den.norm() == 0.0 { f64::INFINITY } else { (num / den).norm() };
            // Weierstrass inclusion disk, inflated for rounding
            let radius = n as f64 * w + 64.0 * f64::EPSILON * z[i].norm().max(1.0);
            IsolatedRoot { value: z[i], radius }
        })
        .collect()
}

fn polish(coeffs: &[f64], z: &mut [Complex64]) {
    let deriv: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect();
    for zi in z.iter_mut() {
        let d = eval(&deriv, *zi);
        if d.norm() > 0.0 {
            *zi -= eval(coeffs, *zi) / d;
        }
    }
}

/// Whether the inclusion disks are pairwise disjoint, so that every disk
/// isolates exactly one root.
pub fn disks_disjoint(roots: &[IsolatedRoot]) -> bool {
    roots.iter().enumerate().all(|(i, a)| {
        roots[i + 1..].iter().all(|b| (a.value - b.value).norm() > a.radius + b.radius)
    })
}

/// Index of the real root of largest value.
pub fn largest_real_root(roots: &[IsolatedRoot]) -> Option<usize> {
    roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.value.im.abs() <= r.radius.max(1e-9))
        .max_by(|a, b| a.1.value.re.total_cmp(&b.1.value.re))
        .map(|(i, _)| i)
}

/// Smallest-degree monic integer factor of `p` having the root `roots[target]`
/// among its roots, found by trying products over conjugation-closed subsets
/// of the approximate roots and confirming by exact division.
pub fn minimal_factor(p: &[Int], roots: &[IsolatedRoot], target: usize) -> IntPoly {
    let n = roots.len();
    let others: Vec<usize> = (0..n).filter(|&i| i != target).collect();
    let full = poly::trim(p.to_vec());
    if n <= 1 || others.len() > 20 {
        return full;
    }
    let mut best: Option<IntPoly> = None;
    for size in 0..others.len() {
        for mask in 0u32..(1u32 << others.len()) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let mut prod = vec![Complex64::new(1.0, 0.0)];
            let mut members = vec![target];
            members.extend(others.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &i)| i));
            for &i in &members {
                let r = roots[i].value;
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (k, c) in prod.iter().enumerate() {
                    next[k + 1] += *c;
                    next[k] -= *c * r;
                }
                prod = next;
            }
            if prod.iter().any(|c| c.im.abs() > 1e-6 * (1.0 + c.re.abs())) {
                continue;
            }
            let candidate: IntPoly = prod.iter().map(|c| Int::from(c.re.round() as i64)).collect();
            let (_, rem) = poly::poly_divmod(&poly::to_rat_poly(&full), &poly::to_rat_poly(&candidate));
            if rem.is_empty() {
                best = Some(candidate);
                break;
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.unwrap_or(full)
}
