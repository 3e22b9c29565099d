//! Dense univariate polynomials with rational or integer coefficients,
//! stored in ascending order of degree.

use num_traits::{One, Signed, Zero};

use super::matrix::{rat_from_int, Int, IntMatrix, Rat, RatMatrix};
use super::primes::divisors;

pub type RatPoly = Vec<Rat>;
pub type IntPoly = Vec<Int>;

pub fn trim<T: Zero>(mut p: Vec<T>) -> Vec<T> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

pub fn degree<T: Zero>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn poly_mul(a: &[Rat], b: &[Rat]) -> RatPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn poly_sub(a: &[Rat], b: &[Rat]) -> RatPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_else(Rat::zero) - b.get(i).cloned().unwrap_or_else(Rat::zero))
        .collect();
    trim(out)
}

/// Quotient and remainder of `a / b` over Q; panics on a zero divisor.
pub fn poly_divmod(a: &[Rat], b: &[Rat]) -> (RatPoly, RatPoly) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by the zero polynomial");
    let mut r = trim(a.to_vec());
    let lead = b[db].clone();
    let mut q = vec![Rat::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr].clone() / lead.clone();
        let shift = dr - db;
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] -= &c * bc;
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn poly_gcd(a: &[Rat], b: &[Rat]) -> RatPoly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = poly_divmod(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

pub fn monic(p: &[Rat]) -> RatPoly {
    let p = trim(p.to_vec());
    match p.last() {
        Some(l) => {
            let l = l.clone();
            p.into_iter().map(|c| c / l.clone()).collect()
        }
        None => p,
    }
}

pub fn to_rat_poly(p: &[Int]) -> RatPoly {
    p.iter().map(rat_from_int).collect()
}

pub fn to_int_poly(p: &[Rat]) -> Option<IntPoly> {
    p.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}

pub fn eval_int(p: &[Int], x: &Int) -> Int {
    p.iter().rev().fold(Int::zero(), |acc, c| acc * x + c)
}

pub fn eval_f64(p: &[Rat], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + rat_to_f64(c))
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// Characteristic polynomial `det(xI − A)` together with the adjugate
/// coefficients: `adj(xI − A) = Σₖ Mₖ x^{n−k}` for `k = 1..=n`.
///
/// Faddeev–LeVerrier recursion in exact rational arithmetic.
pub struct CharPoly {
    pub coefficients: RatPoly,
    pub adjugate_terms: Vec<RatMatrix>,
}

pub fn faddeev_leverrier(a: &RatMatrix) -> CharPoly {
    assert!(a.is_square());
    let n = a.rows();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut terms = Vec::with_capacity(n);
    let mut m = RatMatrix::zeros(n, n);
    for k in 1..=n {
        let id = RatMatrix::identity(n).scale(&coeffs[n - k + 1]);
        m = a.mul(&m).add(&id);
        let am = a.mul(&m);
        let trace = (0..n).fold(Rat::zero(), |acc, i| acc + am[(i, i)].clone());
        coeffs[n - k] = -trace / Rat::from_integer(Int::from(k));
        terms.push(m.clone());
    }
    CharPoly { coefficients: coeffs, adjugate_terms: terms }
}

pub fn char_poly(a: &RatMatrix) -> RatPoly {
    faddeev_leverrier(a).coefficients
}

/// Characteristic polynomial of an integer matrix (monic, integral).
pub fn int_char_poly(a: &IntMatrix) -> IntPoly {
    to_int_poly(&char_poly(&a.to_rat())).expect("characteristic polynomial of an integer matrix is integral")
}

/// Integer roots of a monic integer polynomial with multiplicities,
/// ascending.
pub fn integer_roots(p: &[Int]) -> Vec<(Int, usize)> {
    let mut p = trim(p.to_vec());
    let mut roots = Vec::new();
    if p.is_empty() {
        return roots;
    }
    let mut zero_mult = 0;
    while p.first().is_some_and(Zero::is_zero) {
        p.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Int::zero(), zero_mult));
    }
    if p.len() <= 1 {
        return roots;
    }
    let c0 = p[0].abs();
    for d in divisors(&c0) {
        for cand in [-d.clone(), d] {
            let mut mult = 0;
            while p.len() > 1 && eval_int(&p, &cand).is_zero() {
                p = synthetic_division(&p, &cand);
                mult += 1;
            }
            if mult > 0 {
                roots.push((cand, mult));
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    roots
}

/// Quotient of `p` by `(x − r)` assuming `r` is a root.
pub fn synthetic_division(p: &[Int], r: &Int) -> IntPoly {
    let n = p.len() - 1;
    let mut q = vec![Int::zero(); n];
    let mut carry = Int::zero();
    for i in (0..n).rev() {
        carry = &p[i + 1] + r * &carry;
        q[i] = carry.clone();
    }
    q
}

/// Multiplicity of `f` as a factor of `p` (both nonzero).
pub fn factor_multiplicity(p: &[Rat], f: &[Rat]) -> (usize, RatPoly) {
    let mut p = trim(p.to_vec());
    let mut k = 0;
    if degree(f).unwrap_or(0) == 0 {
        return (0, p);
    }
    loop {
        let (q, r) = poly_divmod(&p, f);
        if !r.is_empty() {
            return (k, p);
        }
        p = q;
        k += 1;
    }
}

/// Human-readable polynomial in the variable `var`.
pub fn format_poly(p: &[Int], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let a = c.abs();
        let mono = match i {
            0 => a.to_string(),
            1 if a.is_one() => var.to_string(),
            1 => format!("{a}{var}"),
            _ if a.is_one() => format!("{var}^{i}"),
            _ => format!("{a}{var}^{i}"),
        };
        terms.push((sign, mono));
    }
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (k, (sign, mono)) in terms.iter().enumerate() {
        if k == 0 {
            if *sign == "-" {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        s.push_str(mono);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::{int, int_matrix};

    fn ip(c: &[i64]) -> IntPoly {
        c.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(int_char_poly(&int_matrix(&[&[1, 2], &[3, 0]])), ip(&[-6, -1, 1]));
        assert_eq!(int_char_poly(&int_matrix(&[&[0, 1], &[2, 1]])), ip(&[-2, -1, 1]));
        assert_eq!(int_char_poly(&int_matrix(&[&[1, 1], &[1, 0]])), ip(&[-1, -1, 1]));
    }

    #[test]
    fn adjugate_terms_reproduce_adjugate() {
        let a = int_matrix(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]).to_rat();
        let cp = faddeev_leverrier(&a);
        // at x = 0: adj(-A) = M_n and (-A) adj(-A) = det(-A) I = c_0 I
        let adj0 = cp.adjugate_terms.last().unwrap().clone();
        let minus_a = a.scale(&-Rat::one());
        assert_eq!(minus_a.mul(&adj0), RatMatrix::identity(3).scale(&cp.coefficients[0]));
    }

    #[test]
    fn integer_roots_with_multiplicity() {
        // (x-2)^2 (x+1) x
        let p = ip(&[0, 4, 0, -3, 1]);
        assert_eq!(integer_roots(&p), vec![(int(-1), 1), (int(0), 1), (int(2), 2)]);
        assert!(integer_roots(&ip(&[-1, -1, 1])).is_empty());
    }

    #[test]
    fn division_and_gcd() {
        let a = to_rat_poly(&ip(&[-2, -1, 1]));
        let b = to_rat_poly(&ip(&[1, 1]));
        let (q, r) = poly_divmod(&a, &b);
        assert_eq!(q, to_rat_poly(&ip(&[-2, 1])));
        assert!(r.is_empty());
        assert_eq!(poly_gcd(&a, &to_rat_poly(&ip(&[-2, 1]))), to_rat_poly(&ip(&[-2, 1])));
        assert_eq!(format_poly(&ip(&[-1, -1, 1]), "x"), "x^2 - x - 1");
    }
}
