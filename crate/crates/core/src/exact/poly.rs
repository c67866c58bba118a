use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::{euler_phi, IntMatrix};

/// Dense polynomial over the rationals, coefficients lowest degree first.
/// The leading coefficient is nonzero unless the polynomial is zero.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    coeffs: Vec<BigRational>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("polynomial is not a product of cyclotomic polynomials")]
pub struct NotCyclotomicProduct;

impl Polynomial {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![BigRational::one()] }
    }

    pub fn from_int_coeffs(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
    }

    /// The monomial X^k.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k + 1];
        c[k] = BigRational::one();
        Polynomial { coeffs: c }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        if self.coeffs.is_empty() {
            0
        } else {
            self.coeffs.len() - 1
        }
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Euclidean division; panics on zero divisor.
    pub fn divrem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!d.is_zero());
        let dd = d.degree();
        if self.is_zero() || self.degree() < dd {
            return (Polynomial::zero(), self.clone());
        }
        let lead = d.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len() - dd];
        while rem.len() >= dd + 1 {
            let c = rem.last().unwrap() / &lead;
            let k = rem.len() - 1 - dd;
            q[k] = c.clone();
            for (j, b) in d.coeffs.iter().enumerate() {
                let t = &c * b;
                rem[k + j] -= t;
            }
            rem.pop(); // leading term is now exactly zero
            while rem.last().map(|x| x.is_zero()).unwrap_or(false) {
                rem.pop();
            }
        }
        (Polynomial::new(q), Polynomial::new(rem))
    }

    /// Exact division; returns None if the remainder is nonzero.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates a monic integer polynomial at an integer matrix.
    pub fn eval_matrix(&self, m: &IntMatrix) -> IntMatrix {
        assert!(self.has_integer_coeffs());
        let n = m.rows();
        let mut acc = IntMatrix::zero(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m);
            let ci = c.to_integer();
            for i in 0..n {
                acc[(i, i)] += &ci;
            }
        }
        acc
    }

    pub fn from_bigint_coeffs(c: Vec<BigInt>) -> Polynomial {
        Polynomial::new(c.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Resultant of two polynomials, computed as the determinant of the
    /// Sylvester matrix with denominators cleared.
    pub fn resultant(&self, other: &Polynomial) -> BigRational {
        let (f, g) = (self, other);
        if f.is_zero() || g.is_zero() {
            return BigRational::zero();
        }
        let (n, m) = (f.degree(), g.degree());
        if n == 0 {
            return f.coeff(0).pow(m as i32);
        }
        if m == 0 {
            return g.coeff(0).pow(n as i32);
        }
        // clear denominators: res(c f, g) = c^deg(g) res(f, g)
        let fc = common_denominator(f);
        let gc = common_denominator(g);
        let fi = f.scale(&BigRational::from_integer(fc.clone()));
        let gi = g.scale(&BigRational::from_integer(gc.clone()));
        let size = n + m;
        let syl = IntMatrix::from_fn(size, size, |i, j| {
            if i < m {
                // row of f coefficients: coefficient of X^{n-(j-i)}
                let k = (n + i) as isize - j as isize;
                if k >= 0 && (k as usize) <= n {
                    fi.coeff(k as usize).to_integer()
                } else {
                    BigInt::zero()
                }
            } else {
                let i2 = i - m;
                let k = (m + i2) as isize - j as isize;
                if k >= 0 && (k as usize) <= m {
                    gi.coeff(k as usize).to_integer()
                } else {
                    BigInt::zero()
                }
            }
        });
        let det = BigRational::from_integer(syl.det());
        let denom = BigRational::from_integer(fc).pow(m as i32)
            * BigRational::from_integer(gc).pow(n as i32);
        det / denom
    }
}

fn common_denominator(p: &Polynomial) -> BigInt {
    use num_integer::Integer;
    let mut l = BigInt::one();
    for c in p.coeffs() {
        l = l.lcm(c.denom());
    }
    l
}

/// The n-th cyclotomic polynomial, monic of degree phi(n).
pub fn cyclotomic_polynomial(n: u64) -> Polynomial {
    assert!(n >= 1);
    // X^n - 1 divided by the product of all lower cyclotomic factors
    let mut num = Polynomial::monomial(n as usize).sub(&Polynomial::one());
    for d in 1..n {
        if n % d == 0 {
            num = num.div_exact(&cyclotomic_polynomial(d)).expect("exact division");
        }
    }
    num
}

/// Writes a monic integer polynomial as a product of cyclotomic polynomials
/// `prod Phi_n^{d_n}`; the result lists `(n, d_n)` with `d_n > 0`, ascending.
pub fn cyclotomic_factorization(
    p: &Polynomial,
) -> Result<Vec<(u64, u32)>, NotCyclotomicProduct> {
    if p.is_zero() || !p.is_monic() || !p.has_integer_coeffs() {
        return Err(NotCyclotomicProduct);
    }
    let mut rem = p.clone();
    let mut out = Vec::new();
    let deg = p.degree() as u64;
    if deg == 0 {
        return Ok(out);
    }
    // phi(n) >= sqrt(n/2), so phi(n) <= deg forces n <= 2*deg^2
    let bound = 2 * deg * deg + 1;
    for n in 1..=bound {
        if rem.degree() == 0 {
            break;
        }
        if euler_phi(n) > rem.degree() as u64 {
            continue;
        }
        let phi_n = cyclotomic_polynomial(n);
        let mut mult = 0u32;
        while let Some(q) = rem.div_exact(&phi_n) {
            rem = q;
            mult += 1;
            if rem.degree() == 0 {
                break;
            }
        }
        if mult > 0 {
            out.push((n, mult));
        }
    }
    if rem == Polynomial::one() {
        Ok(out)
    } else {
        Err(NotCyclotomicProduct)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn cyclotomics() {
        assert_eq!(cyclotomic_polynomial(1), Polynomial::from_int_coeffs(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), Polynomial::from_int_coeffs(&[1, 0, 1]));
        assert_eq!(
            cyclotomic_polynomial(12),
            Polynomial::from_int_coeffs(&[1, 0, -1, 0, 1])
        );
        for n in 1..=100u64 {
            assert_eq!(cyclotomic_polynomial(n).degree() as u64, euler_phi(n), "n = {n}");
        }
    }

    #[test]
    fn factorization() {
        let p = cyclotomic_polynomial(1).mul(&cyclotomic_polynomial(4));
        assert_eq!(cyclotomic_factorization(&p).unwrap(), vec![(1, 1), (4, 1)]);
        let p = cyclotomic_polynomial(1).mul(&cyclotomic_polynomial(1));
        assert_eq!(cyclotomic_factorization(&p).unwrap(), vec![(1, 2)]);
        let p = Polynomial::from_int_coeffs(&[-2, 0, 1]);
        assert!(cyclotomic_factorization(&p).is_err());
    }

    #[test]
    fn resultants() {
        // res(X - 1, X + 1) = lead stuff: (1 - (-1)) ... = 2 up to sign
        let f = Polynomial::from_int_coeffs(&[-1, 1]);
        let g = Polynomial::from_int_coeffs(&[1, 1]);
        assert_eq!(f.resultant(&g), rat(2, 1));
        // res(Phi_1, Phi_9) = Phi_9(1) = 3
        let r = cyclotomic_polynomial(1).resultant(&cyclotomic_polynomial(9));
        assert_eq!(r.to_integer().magnitude().to_string(), "3");
    }

    #[test]
    fn division() {
        let f = Polynomial::from_int_coeffs(&[2, 3, 1]); // (X+1)(X+2)
        let (q, r) = f.divrem(&Polynomial::from_int_coeffs(&[1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, Polynomial::from_int_coeffs(&[2, 1]));
    }
}
