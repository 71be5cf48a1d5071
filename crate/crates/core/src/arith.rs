//! Integer invariants attached to a pair of primes `(p, ell)` and the
//! closed-form group orders used throughout the crate.
//!
//! Everything here is exact. Orders are returned as [`BigUint`] so that
//! formulas such as `ell^((ell^r - 1)/(ell - 1))` never overflow.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the case p = ell = 2 is excluded")]
    BothTwo,
    #[error("p = {0} is not congruent to 3 mod 4")]
    NotThreeModFour(u64),
    #[error("{0}")]
    Domain(String),
}

/// Deterministic trial division; inputs are desk-scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn check_pair(p: u64, ell: u64) -> Result<(), ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if !is_prime(ell) {
        return Err(ArithError::NotPrime(ell));
    }
    if p == 2 && ell == 2 {
        return Err(ArithError::BothTwo);
    }
    Ok(())
}

/// `v_ell(n)` for a nonzero big integer.
pub fn valuation(n: &BigUint, ell: u64) -> u32 {
    assert!(ell >= 2, "valuation base must be at least 2");
    if n.is_zero() {
        panic!("valuation of zero is undefined");
    }
    let base = BigUint::from(ell);
    let mut v = 0;
    let mut n = n.clone();
    while (&n % &base).is_zero() {
        n /= &base;
        v += 1;
    }
    v
}

/// `v_ell(n)` for machine integers.
pub fn valuation_u64(mut n: u64, ell: u64) -> u32 {
    assert!(n != 0 && ell >= 2);
    let mut v = 0;
    while n % ell == 0 {
        n /= ell;
        v += 1;
    }
    v
}

/// `m(p, ell)`: the least `n >= 1` with `ell | p^n - 1`, or `p - 1` when `p = ell`.
pub fn mult_order(p: u64, ell: u64) -> Result<u32, ArithError> {
    check_pair(p, ell)?;
    if p == ell {
        return Ok((p - 1) as u32);
    }
    let base = p % ell;
    let mut acc = base;
    let mut n = 1u32;
    while acc != 1 % ell {
        acc = acc * base % ell;
        n += 1;
    }
    Ok(n)
}

/// `a(p, ell)`: the exponent of `ell` in `p^m - 1`, or `1` when `p = ell`.
pub fn depth_a(p: u64, ell: u64) -> Result<u32, ArithError> {
    let m = mult_order(p, ell)?;
    if p == ell {
        return Ok(1);
    }
    let n = BigUint::from(p).pow(m) - BigUint::one();
    Ok(valuation(&n, ell))
}

/// `c(p, 2) = v_2(p^2 - 1)` for `p = 3 mod 4`. Always at least 3.
pub fn depth_c(p: u64) -> Result<u32, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if p % 4 != 3 {
        return Err(ArithError::NotThreeModFour(p));
    }
    let n = BigUint::from(p).pow(2) - BigUint::one();
    Ok(valuation(&n, 2))
}

/// The invariants `m`, `a` and, when `ell = 2` and `p = 3 mod 4`, `c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTriple {
    pub p: u64,
    pub ell: u64,
    pub m: u32,
    pub a: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<u32>,
}

impl InvariantTriple {
    pub fn compute(p: u64, ell: u64) -> Result<Self, ArithError> {
        let m = mult_order(p, ell)?;
        let a = depth_a(p, ell)?;
        let c = if ell == 2 && p % 4 == 3 {
            Some(depth_c(p)?)
        } else {
            None
        };
        Ok(InvariantTriple { p, ell, m, a, c })
    }
}

/// Base-`ell` digits of `n`, least significant first. Zero has no digits.
pub fn ladic_expansion(mut n: u64, ell: u64) -> Vec<u64> {
    assert!(ell >= 2, "expansion base must be at least 2");
    let mut digits = Vec::new();
    while n > 0 {
        digits.push(n % ell);
        n /= ell;
    }
    digits
}

/// `|W_r(ell)| = ell^((ell^r - 1)/(ell - 1))`.
pub fn wreath_order(ell: u64, r: u32) -> BigUint {
    // (ell^r - 1)/(ell - 1) = 1 + ell + ... + ell^(r-1)
    let mut exponent = BigUint::zero();
    let mut term = BigUint::one();
    for _ in 0..r {
        exponent += &term;
        term *= ell;
    }
    let exponent = exponent
        .to_u32()
        .expect("wreath order exponent exceeds u32");
    BigUint::from(ell).pow(exponent)
}

/// Legendre's formula: `v_ell(n!)`.
pub fn sylow_sym_valuation(n: u64, ell: u64) -> u64 {
    assert!(ell >= 2);
    let mut total = 0;
    let mut q = n / ell;
    while q > 0 {
        total += q;
        q /= ell;
    }
    total
}

/// `|GL_d(F_p)| = prod_{i<d} (p^d - p^i)`.
pub fn gl_order(d: u32, p: u64) -> BigUint {
    let pd = BigUint::from(p).pow(d);
    (0..d)
        .map(|i| &pd - BigUint::from(p).pow(i))
        .fold(BigUint::one(), |acc, x| acc * x)
}

/// Distinct prime divisors of `n`, ascending, by trial division.
pub fn prime_divisors(n: &BigUint) -> Vec<u64> {
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while !n.is_one() && !n.is_zero() {
        let dd = BigUint::from(d);
        if &dd * &dd > n {
            out.push(n.to_u64().expect("prime factor exceeds u64"));
            break;
        }
        if (&n % &dd).is_zero() {
            out.push(d);
            while (&n % &dd).is_zero() {
                n /= &dd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    out
}

/// Exact `log_ell(n)` if `n` is a power of `ell`.
pub fn exact_log(n: &BigUint, ell: u64) -> Option<u32> {
    if n.is_zero() {
        return None;
    }
    let v = valuation(n, ell);
    if BigUint::from(ell).pow(v) == *n {
        Some(v)
    } else {
        None
    }
}

/// Least positive square root of `-1` mod `p`, for `p = 1 mod 4`.
pub fn sqrt_minus_one(p: u64) -> Result<u64, ArithError> {
    if !is_prime(p) {
        return Err(ArithError::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(ArithError::Domain(format!(
            "p = {p} is not congruent to 1 mod 4"
        )));
    }
    (1..p)
        .find(|&x| x * x % p == p - 1)
        .ok_or_else(|| ArithError::Domain(format!("no square root of -1 mod {p}")))
}

/// Multiplicative order of `u` modulo `n`, or `None` if `u` is not a unit.
pub fn unit_order(u: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(1);
    }
    if gcd(u % n, n) != 1 {
        return None;
    }
    let mut acc = u % n;
    let mut k = 1;
    while acc != 1 {
        acc = mul_mod(acc, u, n);
        k += 1;
    }
    Some(k)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of a unit modulo `n`.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % n as i128, n as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(n as i128) as u64)
}

/// Returns `(prime, exponent)` if `n` is a prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let ps = prime_divisors(&BigUint::from(n));
    if ps.len() != 1 {
        return None;
    }
    Some((ps[0], valuation_u64(n, ps[0])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_order(p: u64, ell: u64) -> u32 {
        (1..)
            .find(|&n| (BigUint::from(p).pow(n) - 1u32) % ell == BigUint::zero())
            .unwrap()
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(5, 2), Ok(1));
        assert_eq!(mult_order(2, 7), Ok(3));
        assert_eq!(mult_order(3, 3), Ok(2));
        assert_eq!(naive_order(2, 7), 3);
        assert_eq!(mult_order(2, 2), Err(ArithError::BothTwo));
        assert_eq!(mult_order(4, 3), Err(ArithError::NotPrime(4)));
        assert_eq!(mult_order(5, 9), Err(ArithError::NotPrime(9)));
    }

    #[test]
    fn depth_examples() {
        assert_eq!(depth_a(5, 2), Ok(2));
        assert_eq!(depth_a(7, 3), Ok(1));
        assert_eq!(depth_a(3, 3), Ok(1));
        assert_eq!(depth_c(3), Ok(3));
        assert_eq!(depth_c(7), Ok(4));
        assert_eq!(depth_c(11), Ok(3));
        assert_eq!(depth_c(5), Err(ArithError::NotThreeModFour(5)));
    }

    #[test]
    fn triple_has_c_only_for_two_and_three_mod_four() {
        let t = InvariantTriple::compute(3, 2).unwrap();
        assert_eq!((t.m, t.a, t.c), (1, 1, Some(3)));
        let t = InvariantTriple::compute(5, 2).unwrap();
        assert_eq!((t.m, t.a, t.c), (1, 2, None));
    }

    #[test]
    fn expansions() {
        assert_eq!(ladic_expansion(4, 2), vec![0, 0, 1]);
        assert_eq!(ladic_expansion(0, 3), Vec::<u64>::new());
        assert_eq!(ladic_expansion(10, 3), vec![1, 0, 1]);
    }

    #[test]
    fn orders() {
        assert_eq!(wreath_order(2, 2), BigUint::from(8u32));
        assert_eq!(wreath_order(2, 0), BigUint::from(1u32));
        assert_eq!(wreath_order(3, 2), BigUint::from(81u32));
        assert_eq!(sylow_sym_valuation(4, 2), 3);
        assert_eq!(sylow_sym_valuation(1, 5), 0);
        assert_eq!(sylow_sym_valuation(9, 3), 4);
        assert_eq!(gl_order(2, 5), BigUint::from(480u32));
        assert_eq!(gl_order(2, 3), BigUint::from(48u32));
    }

    #[test]
    fn helpers() {
        assert_eq!(prime_divisors(&BigUint::from(48u32)), vec![2, 3]);
        assert_eq!(prime_divisors(&BigUint::from(1u32)), Vec::<u64>::new());
        assert_eq!(prime_divisors(&BigUint::from(162u32)), vec![2, 3]);
        assert_eq!(sqrt_minus_one(5), Ok(2));
        assert_eq!(sqrt_minus_one(13), Ok(5));
        assert_eq!(inv_mod(2, 9), Some(5));
        assert_eq!(unit_order(8, 9), Some(2));
        assert_eq!(prime_power(81), Some((3, 4)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn order_divides_ell_minus_one() {
        for p in (3..60).filter(|&p| is_prime(p)) {
            for ell in (2..30).filter(|&l| is_prime(l) && l != p) {
                let m = mult_order(p, ell).unwrap() as u64;
                assert_eq!((ell - 1) % m, 0, "m({p},{ell}) = {m}");
                assert_eq!(m as u32, naive_order(p, ell));
            }
        }
    }

    proptest::proptest! {
        #[test]
        fn expansion_reconstructs(n in 0u64..=1_000_000, ell in proptest::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
            let digits = ladic_expansion(n, ell);
            let mut acc = 0u64;
            for &d in digits.iter().rev() {
                proptest::prop_assert!(d < ell);
                acc = acc * ell + d;
            }
            proptest::prop_assert_eq!(acc, n);
        }
    }
}
