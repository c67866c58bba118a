use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use super::ModFloor;

/// Kronecker symbol (a/b), the full extension of the Jacobi symbol.
pub fn kronecker_symbol(a: &BigInt, b: &BigInt) -> i32 {
    if b.is_zero() {
        return if a.magnitude().is_one() { 1 } else { 0 };
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut result = 1i32;
    if b.sign() == Sign::Minus {
        b = -b;
        if a.sign() == Sign::Minus {
            result = -result;
        }
    }
    // strip the even part of b with the (a/2) rule
    let two = BigInt::from(2);
    let mut v = 0u64;
    while (&b % &two).is_zero() {
        b /= &two;
        v += 1;
    }
    if v > 0 {
        if (&a % &two).is_zero() {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.mod_floor_big(&BigInt::from(8));
            let r = r.to_u64_digits().1.first().copied().unwrap_or(0);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
    }
    // now b is odd and positive: Jacobi with reciprocity
    a = a.mod_floor_big(&b);
    while !a.is_zero() {
        let mut v = 0u64;
        while (&a % &two).is_zero() {
            a /= &two;
            v += 1;
        }
        if v % 2 == 1 {
            let r = b.mod_floor_big(&BigInt::from(8));
            let r = r.to_u64_digits().1.first().copied().unwrap_or(0);
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        // quadratic reciprocity
        let a4 = a.mod_floor_big(&BigInt::from(4));
        let b4 = b.mod_floor_big(&BigInt::from(4));
        if a4 == BigInt::from(3) && b4 == BigInt::from(3) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut b);
        a = a.mod_floor_big(&b);
    }
    if b.is_one() {
        result
    } else {
        0
    }
}

/// Convenience wrapper for machine integers.
pub fn kronecker(a: i64, b: i64) -> i32 {
    kronecker_symbol(&BigInt::from(a), &BigInt::from(b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(kronecker(-1, 3), -1);
        assert_eq!(kronecker(2, 7), 1);
        assert_eq!(kronecker(-2, 3), 1);
        assert_eq!(kronecker(0, 5), 0);
        assert_eq!(kronecker(4, 5), 1);
    }

    #[test]
    fn matches_euler_criterion() {
        for p in [3i64, 5, 7, 11, 13, 17, 19, 23].iter().copied() {
            for a in -30..30i64 {
                let expected = if a.rem_euclid(p) == 0 {
                    0
                } else {
                    let mut pow = 1i64;
                    for _ in 0..(p - 1) / 2 {
                        pow = pow * a.rem_euclid(p) % p;
                    }
                    if pow.rem_euclid(p) == 1 {
                        1
                    } else {
                        -1
                    }
                };
                assert_eq!(kronecker(a, p), expected, "({a}/{p})");
            }
        }
    }
}
