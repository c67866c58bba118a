//! Exact integer and rational linear algebra.
//!
//! Everything in this crate runs on arbitrary-precision integers and
//! rationals; there is no floating point anywhere.

pub mod cyclofield;
mod kronecker;
mod matrix;
mod poly;
mod snf;

pub use cyclofield::{moebius, ramanujan_sum, CycloElt, CycloField};
pub use kronecker::{kronecker, kronecker_symbol};
pub use matrix::{IntMatrix, RatMatrix};
pub use poly::{cyclotomic_factorization, cyclotomic_polynomial, NotCyclotomicProduct, Polynomial};
pub use snf::{right_kernel, row_basis, smith_normal_form, SmithForm};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Euler's totient of `n`.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Prime factorisation of `n` as (prime, exponent) pairs, ascending.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Returns `Some((p, k))` when `n = p^k` is a positive prime power.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    if f.len() == 1 {
        Some(f[0])
    } else {
        None
    }
}

pub fn is_prime(n: u64) -> bool {
    matches!(prime_power(n), Some((_, 1)))
}

/// Reduce a rational into `[0, m)` for a positive integer modulus `m`.
pub fn reduce_mod(x: &BigRational, m: u32) -> BigRational {
    let m = BigRational::from_integer(BigInt::from(m));
    let q = (x / &m).floor();
    x - q * m
}

/// Exact p-adic valuation of a nonzero rational.
pub fn padic_val(x: &BigRational, p: u64) -> i64 {
    assert!(!x.is_zero());
    let p = BigInt::from(p);
    let mut v = 0i64;
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    while (&num % &p).is_zero() {
        num /= &p;
        v += 1;
    }
    while (&den % &p).is_zero() {
        den /= &p;
        v -= 1;
    }
    v
}

/// The p-free part of a rational: `x / p^val_p(x)`.
pub fn padic_unit(x: &BigRational, p: u64) -> BigRational {
    let v = padic_val(x, p);
    let pw = BigRational::from_integer(BigInt::from(p)).pow(v as i32);
    x / pw
}

/// Legendre symbol of a p-adic unit rational at an odd prime p.
pub fn legendre_unit(x: &BigRational, p: u64) -> i32 {
    debug_assert_eq!(padic_val(x, p), 0);
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor_big(&pb);
    let den = x.denom().mod_floor_big(&pb);
    let d_inv = mod_inverse(&den, &pb).expect("denominator is a unit");
    let u = (num * d_inv) % &pb;
    kronecker_symbol(&u, &pb)
}

/// Residue of a 2-adic unit rational modulo 2^k (k <= 3 in practice).
pub fn unit_mod_2k(x: &BigRational, k: u32) -> u32 {
    debug_assert_eq!(padic_val(x, 2), 0);
    let m = BigInt::from(1u64 << k);
    let num = x.numer().mod_floor_big(&m);
    let den = x.denom().mod_floor_big(&m);
    let d_inv = mod_inverse(&den, &m).expect("odd denominator");
    let r = (num * d_inv).mod_floor_big(&m);
    let digits = r.to_u64_digits().1;
    if digits.is_empty() {
        0
    } else {
        digits[0] as u32
    }
}

/// Inverse of `a` modulo `m`, when gcd(a, m) = 1.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (g, x, _) = ext_gcd(&a.mod_floor_big(m), m);
    if g.is_one() {
        Some(x.mod_floor_big(m))
    } else {
        None
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if b.is_zero() {
        if a.sign() == num_bigint::Sign::Minus {
            (-a.clone(), -BigInt::one(), BigInt::zero())
        } else {
            (a.clone(), BigInt::one(), BigInt::zero())
        }
    } else {
        let r = a.mod_floor_big(b);
        let q = (a - &r) / b;
        let (g, x1, y1) = ext_gcd(b, &r);
        (g, y1.clone(), x1 - q * y1)
    }
}

pub(crate) trait ModFloor {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        use num_integer::Integer;
        self.mod_floor(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(euler_phi(27), 18);
        assert_eq!(euler_phi(66), 20);
    }

    #[test]
    fn ext_gcd_works() {
        let (g, x, y) = ext_gcd(&big(240), &big(46));
        assert_eq!(g, big(2));
        assert_eq!(big(240) * x + big(46) * y, big(2));
        let (g, x, y) = ext_gcd(&big(-15), &big(35));
        assert_eq!(g, big(5));
        assert_eq!(big(-15) * x + big(35) * y, big(5));
    }

    #[test]
    fn valuations() {
        assert_eq!(padic_val(&rat(12, 5), 2), 2);
        assert_eq!(padic_val(&rat(5, 8), 2), -3);
        assert_eq!(unit_mod_2k(&rat(5, 3), 3), 7); // 5/3 = 5*3^{-1} = 5*3 = 15 = 7 mod 8
        assert_eq!(legendre_unit(&rat(2, 1), 7), 1);
        // 1/2 = 2 mod 3, a non-residue
        assert_eq!(legendre_unit(&rat(1, 2), 3), -1);
    }
}
