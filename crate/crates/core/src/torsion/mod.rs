//! Finite quadratic modules: torsion quadratic forms with values in Q/2Z,
//! their primary decomposition, normal forms, isometry testing and
//! splitting arithmetic.

mod gauss;
mod quotient;
mod normal;
mod search;
mod split;

pub use gauss::gauss_signature;
pub use normal::{form_of_blocks, Block};
pub use search::brute_force_isometric;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{reduce_mod, ModFloor, RatMatrix};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TorsionError {
    #[error("quadratic form data is inconsistent")]
    Inconsistent,
    #[error("quadratic form is degenerate")]
    Degenerate,
}

/// A finite quadratic module: generators of given orders, quadratic values
/// in Q/2Z on the diagonal and pairings in Q/Z off the diagonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TorsionQuadraticForm {
    orders: Vec<BigInt>,
    gram: RatMatrix,
}

impl TorsionQuadraticForm {
    pub fn new(orders: Vec<BigInt>, gram: RatMatrix) -> Result<Self, TorsionError> {
        let n = orders.len();
        if gram.rows() != n || gram.cols() != n {
            return Err(TorsionError::Inconsistent);
        }
        if orders.iter().any(|d| d <= &BigInt::one()) {
            return Err(TorsionError::Inconsistent);
        }
        let mut reduced = RatMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                if gram[(i, j)] != gram[(j, i)] {
                    return Err(TorsionError::Inconsistent);
                }
                reduced[(i, j)] = if i == j {
                    reduce_mod(&gram[(i, j)], 2)
                } else {
                    reduce_mod(&gram[(i, j)], 1)
                };
            }
        }
        // denominators must divide the generator orders, and d^2 q(g) must
        // vanish mod 2Z for a generator of order d
        for i in 0..n {
            for j in 0..n {
                let denom = reduced[(i, j)].denom();
                let bound = if i == j {
                    orders[i].clone()
                } else {
                    use num_integer::Integer;
                    orders[i].gcd(&orders[j])
                };
                if !(bound % denom).is_zero() {
                    return Err(TorsionError::Inconsistent);
                }
            }
            let d2q = &reduced[(i, i)] * BigRational::from_integer(&orders[i] * &orders[i]);
            if !reduce_mod(&d2q, 2).is_zero() {
                return Err(TorsionError::Inconsistent);
            }
        }
        let form = TorsionQuadraticForm { orders, gram: reduced };
        // nondegeneracy check: block splitting must succeed and account for
        // the full group order
        let blocks = form.split_all().map_err(|_| TorsionError::Degenerate)?;
        let total: BigInt = blocks.iter().map(|b| b.group_order()).product();
        if total != form.group_order() {
            return Err(TorsionError::Degenerate);
        }
        Ok(form)
    }

    pub fn trivial() -> Self {
        TorsionQuadraticForm { orders: vec![], gram: RatMatrix::zero(0, 0) }
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn gram(&self) -> &RatMatrix {
        &self.gram
    }

    /// Group order |D|.
    pub fn group_order(&self) -> BigInt {
        self.orders.iter().product()
    }

    /// Primes dividing the group order.
    pub fn primes(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for d in &self.orders {
            let mut n = d.clone();
            let mut p = BigInt::from(2);
            while &p * &p <= n {
                if (&n % &p).is_zero() {
                    let pv = p.to_u64_digits().1[0];
                    if !out.contains(&pv) {
                        out.push(pv);
                    }
                    while (&n % &p).is_zero() {
                        n /= &p;
                    }
                }
                p += 1;
            }
            if n > BigInt::one() {
                let pv = n.to_u64_digits().1[0];
                if !out.contains(&pv) {
                    out.push(pv);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Quadratic value of an element given in generator coordinates, in Q/2Z.
    pub fn q_value(&self, coords: &[BigInt]) -> BigRational {
        let n = self.len();
        let mut acc = BigRational::zero();
        for i in 0..n {
            if coords[i].is_zero() {
                continue;
            }
            let c2 = BigRational::from_integer(&coords[i] * &coords[i]);
            acc += c2 * &self.gram[(i, i)];
            for j in i + 1..n {
                if coords[j].is_zero() {
                    continue;
                }
                let c = BigRational::from_integer(BigInt::from(2) * &coords[i] * &coords[j]);
                acc += c * &self.gram[(i, j)];
            }
        }
        reduce_mod(&acc, 2)
    }

    /// Bilinear pairing of two elements, in Q/Z.
    pub fn b_value(&self, x: &[BigInt], y: &[BigInt]) -> BigRational {
        let n = self.len();
        let mut acc = BigRational::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                acc += BigRational::from_integer(&x[i] * &y[j]) * &self.gram[(i, j)];
            }
        }
        reduce_mod(&acc, 1)
    }

    /// Order of an element given in generator coordinates.
    pub fn element_order(&self, coords: &[BigInt]) -> BigInt {
        use num_integer::Integer;
        let mut ord = BigInt::one();
        for (c, d) in coords.iter().zip(&self.orders) {
            let c = c.mod_floor_big(d);
            if c.is_zero() {
                continue;
            }
            let g = c.gcd(d);
            ord = ord.lcm(&(d / g));
        }
        ord
    }

    pub fn direct_sum(&self, other: &TorsionQuadraticForm) -> TorsionQuadraticForm {
        let mut orders = self.orders.clone();
        orders.extend(other.orders.iter().cloned());
        let (a, b) = (self.len(), other.len());
        let gram = RatMatrix::from_fn(a + b, a + b, |i, j| {
            if i < a && j < a {
                self.gram[(i, j)].clone()
            } else if i >= a && j >= a {
                other.gram[(i - a, j - a)].clone()
            } else {
                BigRational::zero()
            }
        });
        TorsionQuadraticForm { orders, gram }
    }

    /// Rescaled form T(a): q multiplied by a.
    pub fn rescale(&self, a: i64) -> TorsionQuadraticForm {
        assert!(a != 0);
        let c = BigRational::from_integer(BigInt::from(a));
        let n = self.len();
        let gram = RatMatrix::from_fn(n, n, |i, j| {
            let v = &self.gram[(i, j)] * &c;
            if i == j {
                reduce_mod(&v, 2)
            } else {
                reduce_mod(&v, 1)
            }
        });
        // rescaling by a unit keeps orders; by a non-unit it can degenerate,
        // callers only use units relative to the group order
        TorsionQuadraticForm { orders: self.orders.clone(), gram }
    }

    pub fn neg(&self) -> TorsionQuadraticForm {
        self.rescale(-1)
    }

    /// Restriction to the p-primary component.
    pub fn p_primary_part(&self, p: u64) -> TorsionQuadraticForm {
        let pb = BigInt::from(p);
        let mut keep = Vec::new();
        let mut mult = Vec::new();
        let mut new_orders = Vec::new();
        for (i, d) in self.orders.iter().enumerate() {
            let mut pk = BigInt::one();
            let mut rest = d.clone();
            while (&rest % &pb).is_zero() {
                rest /= &pb;
                pk *= &pb;
            }
            if pk > BigInt::one() {
                keep.push(i);
                mult.push(rest);
                new_orders.push(pk);
            }
        }
        let k = keep.len();
        let gram = RatMatrix::from_fn(k, k, |a, b| {
            let v = &self.gram[(keep[a], keep[b])]
                * BigRational::from_integer(&mult[a] * &mult[b]);
            if a == b {
                reduce_mod(&v, 2)
            } else {
                reduce_mod(&v, 1)
            }
        });
        TorsionQuadraticForm { orders: new_orders, gram }
    }

    /// All q-values as a sorted multiset; a cheap isometry invariant used
    /// for fast rejection. Only for small groups.
    pub fn value_multiset(&self) -> Vec<BigRational> {
        let mut vals = Vec::new();
        let mut coords = vec![BigInt::zero(); self.len()];
        loop {
            vals.push(self.q_value(&coords));
            // increment mixed-radix counter
            let mut i = 0;
            loop {
                if i == self.len() {
                    vals.sort();
                    return vals;
                }
                coords[i] += 1;
                if coords[i] < self.orders[i] {
                    break;
                }
                coords[i] = BigInt::zero();
                i += 1;
            }
        }
    }
}
