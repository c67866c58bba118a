//! Nonemptiness tests for the genus shapes used by the classification:
//! even unimodular, p-elementary, and the mixed 2_II 4_delta shape.

use super::symbol::GenusSymbol;
use crate::exact::kronecker;

/// Shape of the 2-adic decoration of a 2-elementary genus.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TwoShape {
    TypeII,
    Odd { delta: u32 },
}

/// Even unimodular lattices of signature (l+, l-) exist iff the signatures
/// agree mod 8.
pub fn exists_even_unimodular(l_plus: usize, l_minus: usize) -> bool {
    l_plus + l_minus >= 1 && (l_plus as i64 - l_minus as i64).rem_euclid(8) == 0
}

/// Nonemptiness of II_(l+,l-) p^{eps n} for p odd, and of the 2-adic
/// versions II 2_II^{eps n} and II 2^{eps n}_delta.
pub fn exists_p_elementary(
    l_plus: usize,
    l_minus: usize,
    p: u64,
    eps: i32,
    n: usize,
    two: Option<TwoShape>,
) -> bool {
    let rank = l_plus + l_minus;
    if n > rank || rank == 0 {
        return false;
    }
    let diff = l_plus as i64 - l_minus as i64;
    if p != 2 {
        debug_assert!(two.is_none());
        if n == 0 {
            return eps == 1 && diff.rem_euclid(8) == 0;
        }
        if diff.rem_euclid(8) != (2 * eps as i64 - 2 - (p as i64 - 1) * n as i64).rem_euclid(8) {
            return false;
        }
        if n == rank {
            let e = if l_minus % 2 == 0 { 1 } else { kronecker(-1, p as i64) };
            if eps != e {
                return false;
            }
        }
        true
    } else {
        match two.expect("2-adic shape required at p = 2") {
            TwoShape::TypeII => {
                if rank % 2 != 0 || n % 2 != 0 {
                    return false;
                }
                if diff.rem_euclid(8) != (2 - 2 * eps as i64).rem_euclid(8) {
                    return false;
                }
                if (n == 0 || n == rank) && eps != 1 {
                    return false;
                }
                true
            }
            TwoShape::Odd { delta } => {
                if n == 0 {
                    return false;
                }
                if n % 2 != delta as usize % 2 || n % 2 != rank % 2 {
                    return false;
                }
                if diff.rem_euclid(8) != (delta as i64 + 2 - 2 * eps as i64).rem_euclid(8) {
                    return false;
                }
                if n == rank && eps != 1 {
                    return false;
                }
                if n == 1 {
                    if delta % 2 == 0 {
                        return false;
                    }
                    if eps != kronecker(delta as i64, 2) {
                        return false;
                    }
                }
                if n == 2 && diff.rem_euclid(8) == 4 {
                    return false;
                }
                true
            }
        }
    }
}

/// Nonemptiness of II_(l+,l-) 2_II^{eps1 n} 4^{eps2}_delta.
pub fn exists_two_adic_mixed(
    l_plus: usize,
    l_minus: usize,
    eps1: i32,
    n: usize,
    eps2: i32,
    delta: u32,
) -> bool {
    let rank = l_plus + l_minus;
    let diff = l_plus as i64 - l_minus as i64;
    if n % 2 != 0 {
        return false;
    }
    if eps2 != kronecker(delta as i64, 2) {
        return false;
    }
    if rank < n + 1 {
        return false;
    }
    if rank == n + 1 && eps1 != eps2 {
        return false;
    }
    if diff.rem_euclid(8) != (delta as i64 + 2 - 2 * eps1 as i64).rem_euclid(8) {
        return false;
    }
    if n == 0 && eps1 != 1 {
        return false;
    }
    true
}

/// Class count answer: an exact value or a declared unknown.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClassCount {
    Exact(u64),
    Unknown,
}

/// Sufficient uniqueness criteria: indefinite even unimodular genera, and
/// indefinite genera with rank at least two more than the minimal number
/// of generators of the discriminant group, contain a single isometry
/// class. Everything else is reported Unknown.
pub fn class_count(sym: &GenusSymbol) -> ClassCount {
    if sym.rank() == 0 {
        return ClassCount::Exact(1);
    }
    if sym.is_definite() {
        return ClassCount::Unknown;
    }
    if sym.is_unimodular() {
        return ClassCount::Exact(1);
    }
    let length = sym.primes().iter().map(|&p| sym.length_at(p)).max().unwrap_or(0);
    if sym.rank() >= length + 2 {
        return ClassCount::Exact(1);
    }
    ClassCount::Unknown
}

/// Class number of a definite genus of rank at most 2, by enumerating
/// reduced even binary (or unary) forms.
pub fn definite_small_class_count(sym: &GenusSymbol) -> Option<u64> {
    if !sym.is_definite() || sym.rank() > 2 {
        return None;
    }
    if sym.rank() == 1 {
        return Some(1);
    }
    use num_traits::{Signed, ToPrimitive};
    let det = sym.det().abs().to_i64()?;
    // each isometry class of positive even binaries has a unique reduced
    // representative [a b; b c] with 0 <= 2b <= a <= c
    let mut count = 0u64;
    let positive = sym.sig.0 == 2;
    let mut a = 2i64;
    while 3 * a * a <= 4 * det + 4 {
        for b in 0..=(a / 2) {
            let num = det + b * b;
            if num % a != 0 {
                continue;
            }
            let c = num / a;
            if c < a || c % 2 != 0 {
                continue;
            }
            let m = if positive {
                crate::lattice::GramLattice::from_i64(&[vec![a, b], vec![b, c]])
            } else {
                crate::lattice::GramLattice::from_i64(&[vec![-a, b], vec![b, -c]])
            };
            if let Ok(s) = super::symbol_from_lattice(&m) {
                if s == *sym {
                    count += 1;
                }
            }
        }
        a += 2;
    }
    Some(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unimodular_cases() {
        assert!(exists_even_unimodular(2, 18));
        assert!(exists_even_unimodular(1, 1));
        assert!(!exists_even_unimodular(2, 3));
    }

    #[test]
    fn p_elementary_cases() {
        assert!(exists_p_elementary(2, 4, 3, 1, 1, None));
        assert!(exists_p_elementary(2, 0, 3, -1, 1, None));
        assert!(!exists_p_elementary(2, 0, 3, 1, 1, None));
        assert!(exists_p_elementary(2, 2, 2, 1, 2, Some(TwoShape::TypeII)));
    }

    #[test]
    fn mixed_cases() {
        // n = 0, delta = 1: eps2 = +1, possible iff l+ - l- = 1 mod 8
        assert!(!exists_two_adic_mixed(1, 2, 1, 0, 1, 1));
        assert!(exists_two_adic_mixed(2, 1, 1, 0, 1, 1));
        assert!(!exists_two_adic_mixed(2, 1, 1, 1, 1, 1)); // n odd
        assert!(!exists_two_adic_mixed(2, 1, -1, 0, 1, 1)); // n = 0 needs eps1 = +1
    }

    #[test]
    fn class_counts() {
        let u = GenusSymbol::unimodular(2, 18);
        assert_eq!(class_count(&u), ClassCount::Exact(1));
        let s = GenusSymbol::parse("II_(2,4)3^1").unwrap();
        assert_eq!(class_count(&s), ClassCount::Exact(1));
        let d = GenusSymbol::parse("II_(2,0)3^-1").unwrap();
        assert_eq!(class_count(&d), ClassCount::Unknown);
        assert_eq!(definite_small_class_count(&d), Some(1));
    }
}
