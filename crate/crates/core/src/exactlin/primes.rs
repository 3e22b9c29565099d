//! Prime factorization, p-adic valuations and membership in localizations
//! `Z[1/m]`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{Int, Rat};

/// Prime factorization of `|n|` by trial division, ascending primes.
///
/// Zero and units have no factors.
pub fn factorize(n: &Int) -> Vec<(Int, u32)> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut p = Int::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            let mut e = 0;
            while (&n % &p).is_zero() {
                n /= &p;
                e += 1;
            }
            out.push((p.clone(), e));
        }
        p += if p == Int::from(2) { 1 } else { 2 };
    }
    if n > Int::one() {
        out.push((n, 1));
    }
    out
}

pub fn prime_factors(n: &Int) -> Vec<Int> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Product of the distinct primes dividing `n` (1 for units and zero).
pub fn radical(n: &Int) -> Int {
    prime_factors(n).into_iter().fold(Int::one(), |acc, p| acc * p)
}

/// Exponent of `p` in the nonzero integer `n`.
pub fn int_valuation(p: &Int, n: &Int) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let mut n = n.clone();
    let mut e = 0;
    while (&n % p).is_zero() {
        n /= p;
        e += 1;
    }
    e
}

/// p-adic valuation of a nonzero rational; `None` for zero (infinite).
pub fn valuation(p: &Int, x: &Rat) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    Some(int_valuation(p, x.numer()) as i64 - int_valuation(p, x.denom()) as i64)
}

/// Whether `x` is integral at `p`.
pub fn is_p_integral(p: &Int, x: &Rat) -> bool {
    !(x.denom() % p).is_zero()
}

/// Remove from `n` every prime factor shared with `m`.
pub fn strip_shared(n: &Int, m: &Int) -> Int {
    let mut n = n.clone();
    loop {
        let g = n.gcd(m);
        if g.is_one() {
            return n;
        }
        n /= g;
    }
}

/// Whether `x` lies in `Z[1/m]`: its denominator has no prime outside `m`.
pub fn in_localization(x: &Rat, m: &Int) -> bool {
    strip_shared(x.denom(), m).is_one()
}

/// Whether `x` is a unit of `Z[1/m]`, i.e. numerator and denominator are
/// built from primes of `m` only.
pub fn is_localized_unit(x: &Rat, m: &Int) -> bool {
    !x.is_zero() && in_localization(x, m) && strip_shared(&x.numer().abs(), m).is_one()
}

/// Remove every prime of `m` from numerator and denominator of `x`,
/// keeping the sign.
pub fn strip_rational(x: &Rat, m: &Int) -> Rat {
    if x.is_zero() {
        return x.clone();
    }
    let n = strip_shared(&x.numer().abs(), m);
    let d = strip_shared(x.denom(), m);
    let r = Rat::new(n, d);
    if x.is_negative() {
        -r
    } else {
        r
    }
}

/// Positive divisors of a nonzero integer, ascending.
pub fn divisors(n: &Int) -> Vec<Int> {
    let mut divs = vec![Int::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut pk = Int::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Inverse of `a` modulo `m` (`m > 1`), if it exists, in `[0, m)`.
pub fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    let e = a.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Solve `x ≡ r_i (mod m_i)` for pairwise coprime moduli; result in `[0, ∏m_i)`.
pub fn crt(residues: &[(Int, Int)]) -> Int {
    let mut x = Int::zero();
    let mut modulus = Int::one();
    for (r, m) in residues {
        if m.is_one() {
            continue;
        }
        // x + modulus * k ≡ r (mod m)
        let inv = mod_inverse(&modulus, m).expect("moduli must be pairwise coprime");
        let k = ((r - &x) * inv).mod_floor(m);
        x += &modulus * k;
        modulus *= m;
    }
    x
}

pub fn pow(base: &Int, e: u32) -> Int {
    num_traits::pow(base.clone(), e as usize)
}

pub fn bigint(v: i64) -> BigInt {
    BigInt::from(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::matrix::rat;

    #[test]
    fn factorization_and_radical() {
        assert_eq!(factorize(&bigint(360)), vec![(bigint(2), 3), (bigint(3), 2), (bigint(5), 1)]);
        assert_eq!(radical(&bigint(-12)), bigint(6));
        assert_eq!(radical(&bigint(1)), bigint(1));
        assert_eq!(divisors(&bigint(12)), [1, 2, 3, 4, 6, 12].map(bigint).to_vec());
    }

    #[test]
    fn localization_membership() {
        assert!(in_localization(&rat(7, 9), &bigint(3)));
        assert!(!in_localization(&rat(3, 5), &bigint(3)));
        assert!(in_localization(&rat(3, 1), &bigint(1)));
        assert!(is_localized_unit(&rat(-4, 1), &bigint(2)));
        assert!(!is_localized_unit(&rat(6, 1), &bigint(2)));
        assert_eq!(strip_rational(&rat(-6, 45), &bigint(3)), rat(-2, 5));
        assert_eq!(valuation(&bigint(5), &rat(3, 50)), Some(-2));
    }

    #[test]
    fn chinese_remainders() {
        let x = crt(&[(bigint(2), bigint(3)), (bigint(3), bigint(5)), (bigint(2), bigint(7))]);
        assert_eq!(x, bigint(23));
        assert_eq!(mod_inverse(&bigint(3), &bigint(7)), Some(bigint(5)));
        assert_eq!(mod_inverse(&bigint(2), &bigint(4)), None);
    }
}
