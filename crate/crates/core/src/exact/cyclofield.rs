use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{cyclotomic_polynomial, euler_phi, factorize, Polynomial};

/// Arithmetic context for the cyclotomic field Q(zeta_m). Elements are
/// rational coefficient vectors in the power basis 1, zeta, ..., zeta^{phi-1}.
pub struct CycloField {
    m: u64,
    phi: usize,
    modulus: Polynomial,
    /// zeta^t in the power basis, for 0 <= t < m.
    powers: Vec<Vec<BigRational>>,
}

pub type CycloElt = Vec<BigRational>;

impl CycloField {
    pub fn new(m: u64) -> Self {
        assert!(m >= 1);
        let phi = euler_phi(m) as usize;
        let modulus = cyclotomic_polynomial(m);
        let mut powers = Vec::with_capacity(m as usize);
        for t in 0..m {
            let p = Polynomial::monomial(t as usize);
            let (_, r) = p.divrem(&modulus);
            let mut v = vec![BigRational::zero(); phi];
            for (i, c) in r.coeffs().iter().enumerate() {
                v[i] = c.clone();
            }
            powers.push(v);
        }
        CycloField { m, phi, modulus, powers }
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(&self) -> CycloElt {
        vec![BigRational::zero(); self.phi]
    }

    pub fn one(&self) -> CycloElt {
        self.zeta_pow(0)
    }

    pub fn from_rational(&self, c: BigRational) -> CycloElt {
        let mut v = self.zero();
        if self.phi > 0 {
            v[0] = c;
        }
        v
    }

    pub fn from_integer(&self, c: i64) -> CycloElt {
        self.from_rational(BigRational::from_integer(BigInt::from(c)))
    }

    /// zeta^t for any integer exponent (reduced mod m).
    pub fn zeta_pow(&self, t: i64) -> CycloElt {
        let t = t.rem_euclid(self.m as i64) as usize;
        self.powers[t].clone()
    }

    pub fn add(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn sub(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(&self, a: &CycloElt) -> CycloElt {
        a.iter().map(|x| -x).collect()
    }

    pub fn scale(&self, a: &CycloElt, c: &BigRational) -> CycloElt {
        a.iter().map(|x| x * c).collect()
    }

    pub fn mul(&self, a: &CycloElt, b: &CycloElt) -> CycloElt {
        let mut conv = vec![BigRational::zero(); 2 * self.phi];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[i + j] += x * y;
            }
        }
        // reduce powers >= phi using the zeta-power table
        let mut out: Vec<BigRational> = conv[..self.phi].to_vec();
        for (t, c) in conv.iter().enumerate().skip(self.phi) {
            if c.is_zero() {
                continue;
            }
            let red = &self.powers[t % self.m as usize];
            for i in 0..self.phi {
                out[i] += c * &red[i];
            }
        }
        out
    }

    pub fn is_zero(&self, a: &CycloElt) -> bool {
        a.iter().all(|x| x.is_zero())
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self, a: &CycloElt) -> CycloElt {
        let mut out = self.zero();
        for (j, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let t = ((self.m as i64 - j as i64) % self.m as i64) as usize;
            for i in 0..self.phi {
                out[i] += c * &self.powers[t][i];
            }
        }
        out
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in Q[X].
    pub fn inv(&self, a: &CycloElt) -> CycloElt {
        assert!(!self.is_zero(a), "division by zero");
        let pa = Polynomial::new(a.clone());
        // Bezout: s * pa + t * modulus = gcd = constant
        let (g, s) = poly_half_gcd(&pa, &self.modulus);
        assert_eq!(g.degree(), 0, "cyclotomic polynomial is irreducible");
        let c = g.coeff(0);
        let s = s.scale(&(BigRational::one() / c));
        let mut out = self.zero();
        for (i, v) in s.coeffs().iter().enumerate() {
            if i < self.phi {
                out[i] = v.clone();
            } else {
                // reduce, should not happen since deg s < deg modulus
                let red = &self.powers[i % self.m as usize];
                for k in 0..self.phi {
                    out[k] += v * &red[k];
                }
            }
        }
        out
    }

    /// Absolute trace to Q. Tr(zeta^j) is a Ramanujan sum with closed form.
    pub fn trace(&self, a: &CycloElt) -> BigRational {
        let mut acc = BigRational::zero();
        for (j, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += c * BigRational::from_integer(BigInt::from(ramanujan_sum(self.m, j as u64)));
        }
        acc
    }

    /// Relative trace to the maximal real subfield: x + conj(x).
    pub fn trace_to_real(&self, a: &CycloElt) -> CycloElt {
        self.add(a, &self.conj(a))
    }

    pub fn equal(&self, a: &CycloElt, b: &CycloElt) -> bool {
        a == b
    }
}

/// Extended gcd in Q[X] returning (gcd, s) with s*a = gcd mod b.
fn poly_half_gcd(a: &Polynomial, b: &Polynomial) -> (Polynomial, Polynomial) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = Polynomial::one();
    let mut s1 = Polynomial::zero();
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

/// Ramanujan sum c_m(j) = sum of zeta^{ja} over a coprime to m.
pub fn ramanujan_sum(m: u64, j: u64) -> i64 {
    use num_integer::Integer;
    let g = m.gcd(&j);
    let q = m / g; // order of zeta^j
    let mu = moebius(q);
    if mu == 0 {
        return 0;
    }
    (euler_phi(m) / euler_phi(q)) as i64 * mu
}

pub fn moebius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn basic_arith() {
        let f = CycloField::new(12);
        let z = f.zeta_pow(1);
        let z12 = (0..12).fold(f.one(), |acc, _| f.mul(&acc, &z));
        assert_eq!(z12, f.one());
        let inv = f.inv(&z);
        assert_eq!(f.mul(&z, &inv), f.one());
        assert_eq!(f.conj(&z), f.zeta_pow(-1));
    }

    #[test]
    fn traces() {
        let f = CycloField::new(3);
        assert_eq!(f.trace(&f.one()), rat(2, 1));
        assert_eq!(f.trace(&f.zeta_pow(1)), rat(-1, 1));
        let f = CycloField::new(4);
        assert_eq!(f.trace(&f.zeta_pow(1)), rat(0, 1));
        let f = CycloField::new(8);
        assert_eq!(f.trace(&f.one()), rat(4, 1));
        // 1 - zeta_8^4 = 2
        let two = f.sub(&f.one(), &f.zeta_pow(4));
        assert_eq!(two, f.from_integer(2));
    }

    #[test]
    fn moebius_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(30), -1);
        assert_eq!(moebius(12), 0);
    }
}
