//! Invariants of the cyclotomic fields E = Q(zeta_m) over their maximal
//! real subfields: ramification data, the different, local norms, unit
//! filtrations, cyclotomic resultants and relative class numbers.

use thiserror::Error;

use crate::exact::{euler_phi, prime_power};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("m = {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("relative class number table covers 3 <= m <= 66 with phi(m) <= 22, not m = {0}")]
    OutOfTable(u64),
    #[error("parameter out of range")]
    OutOfRange,
}

/// Field invariants of Q(zeta_m).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicInvariants {
    pub m: u64,
    pub phi: u64,
    /// Present when m = p^k is a prime power.
    pub prime_power: Option<(u64, u32)>,
    /// Valuation of the absolute different at the ramified prime, when
    /// m is a prime power: alpha = p^{k-1}(pk - k - 1).
    pub alpha: Option<u64>,
    /// Valuation of the relative different of E over its real subfield:
    /// gcd(2, p) at the ramified prime.
    pub e: Option<u32>,
    /// Relative class number h^-(E).
    pub h_minus: u64,
}

/// Looks up the invariants of Q(zeta_m) for m >= 3.
pub fn invariants(m: u64) -> Result<CyclotomicInvariants, CycloError> {
    if m < 3 {
        return Err(CycloError::OutOfRange);
    }
    let phi = euler_phi(m);
    if phi > 22 || m > 66 {
        return Err(CycloError::OutOfTable(m));
    }
    let pp = prime_power(m);
    let (alpha, e) = match pp {
        Some((p, k)) => {
            let a = p.pow(k - 1) * (p * k as u64 - k as u64 - 1);
            (Some(a), Some(if p == 2 { 2 } else { 1 }))
        }
        None => (None, None),
    };
    let h_minus = if m == 23 || m == 46 { 3 } else { 1 };
    Ok(CyclotomicInvariants { m, phi, prime_power: pp, alpha, e, h_minus })
}

/// The relative class number h^-(Q(zeta_m)) for the table range.
pub fn h_minus(m: u64) -> Result<u64, CycloError> {
    invariants(m).map(|inv| inv.h_minus)
}

/// Whether -1 is a norm of the completion at the ramified place of the
/// real subfield, for m = p^k >= 3: happens iff phi(m) = 0 mod 4.
pub fn minus_one_is_local_norm(m: u64) -> Result<bool, CycloError> {
    let Some((p, k)) = prime_power(m) else {
        return Err(CycloError::NotPrimePower(m));
    };
    if m < 3 {
        return Err(CycloError::OutOfRange);
    }
    Ok(if p == 2 {
        // m = 2^k: a local norm iff m >= 8
        k >= 3
    } else {
        p % 4 == 1
    })
}

/// Valuation of 1 - zeta^a at the ramified prime of Q(zeta_{p^k}):
/// equals p^{v_p(a)}.
pub fn val_one_minus_zeta_power(m: u64, a: u64) -> Result<u64, CycloError> {
    let Some((p, _)) = prime_power(m) else {
        return Err(CycloError::NotPrimePower(m));
    };
    if a == 0 || a >= m {
        return Err(CycloError::OutOfRange);
    }
    let mut v = 1u64;
    let mut x = a;
    while x % p == 0 {
        x /= p;
        v *= p;
    }
    Ok(v)
}

/// Order of the unit filtration F_j(E) = units of norm 1 congruent to 1 mod
/// the j-th power of the ramified prime.
pub fn unit_filtration_order(m: u64, j: u64) -> Result<u64, CycloError> {
    let Some((p, k)) = prime_power(m) else {
        return Err(CycloError::NotPrimePower(m));
    };
    if j == 0 || j > m {
        return Err(CycloError::OutOfRange);
    }
    if j == 1 {
        return Ok(p.pow(k));
    }
    // p^{i-1} < j <= p^i determines the level i
    let mut i = 0u32;
    while p.pow(i) < j {
        i += 1;
    }
    Ok(p.pow(k.saturating_sub(i)))
}

/// |Res(Phi_n, Phi_m)| for 1 <= n < m: p^{phi(n)} when m/n is a power of
/// the prime p, and 1 otherwise.
pub fn resultant_cyclotomic(n: u64, m: u64) -> Result<u64, CycloError> {
    if n == 0 || n >= m {
        return Err(CycloError::OutOfRange);
    }
    if m % n != 0 {
        return Ok(1);
    }
    match prime_power(m / n) {
        Some((p, _)) => Ok(p.pow(euler_phi(n) as u32)),
        None => Ok(1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_examples() {
        let i = invariants(9).unwrap();
        assert_eq!((i.phi, i.prime_power, i.alpha, i.e), (6, Some((3, 2)), Some(9), Some(1)));
        let i = invariants(8).unwrap();
        assert_eq!((i.phi, i.prime_power, i.alpha, i.e), (4, Some((2, 3)), Some(8), Some(2)));
        assert_eq!(invariants(23).unwrap().h_minus, 3);
        assert_eq!(invariants(46).unwrap().h_minus, 3);
        assert_eq!(invariants(25).unwrap().h_minus, 1);
        assert!(matches!(invariants(67), Err(CycloError::OutOfTable(_))));
        assert!(matches!(invariants(128), Err(CycloError::OutOfTable(_))));
    }

    #[test]
    fn local_norms() {
        assert_eq!(minus_one_is_local_norm(4).unwrap(), false);
        assert_eq!(minus_one_is_local_norm(8).unwrap(), true);
        assert_eq!(minus_one_is_local_norm(5).unwrap(), true);
        assert_eq!(minus_one_is_local_norm(3).unwrap(), false);
        assert!(minus_one_is_local_norm(6).is_err());
    }

    #[test]
    fn valuations_and_filtrations() {
        assert_eq!(val_one_minus_zeta_power(9, 1).unwrap(), 1);
        assert_eq!(val_one_minus_zeta_power(9, 3).unwrap(), 3);
        assert_eq!(val_one_minus_zeta_power(8, 4).unwrap(), 4);
        assert_eq!(unit_filtration_order(9, 1).unwrap(), 9);
        assert_eq!(unit_filtration_order(9, 2).unwrap(), 3);
        assert_eq!(unit_filtration_order(9, 4).unwrap(), 1);
    }

    #[test]
    fn resultants() {
        assert_eq!(resultant_cyclotomic(1, 9).unwrap(), 3);
        assert_eq!(resultant_cyclotomic(2, 6).unwrap(), 3);
        assert_eq!(resultant_cyclotomic(1, 6).unwrap(), 1);
        assert_eq!(resultant_cyclotomic(4, 8).unwrap(), 4);
    }
}
