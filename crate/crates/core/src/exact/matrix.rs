use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Dense matrix of arbitrary-precision integers, row major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn scale(&self, c: &BigInt) -> IntMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn neg(&self) -> IntMatrix {
        self.scale(&BigInt::from(-1))
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out[(self.rows + i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn row_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * &self[(i, j)]).sum())
            .collect()
    }

    /// Matrix times column vector.
    pub fn col_apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v[j]).sum())
            .collect()
    }

    /// Exact determinant via fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let idx = |i: usize, j: usize| i * n + j;
        let mut prev = BigInt::one();
        let mut sign = 1i32;
        for k in 0..n - 1 {
            if a[idx(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[idx(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(idx(k, j), idx(p, j));
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &a[idx(i, j)] * &a[idx(k, k)] - &a[idx(i, k)] * &a[idx(k, j)];
                    a[idx(i, j)] = &t / &prev;
                }
                a[idx(i, k)] = BigInt::zero();
            }
            prev = a[idx(k, k)].clone();
        }
        let d = a[idx(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Characteristic polynomial coefficients, lowest degree first, via
    /// Faddeev-LeVerrier. Exact for integer matrices.
    pub fn char_poly(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix::identity(n);
        for k in 1..=n {
            // m = A * (m + c_{k-1} I) from the previous step
            let am = self.mul(&m);
            let tr: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
            let c = -tr / BigInt::from(k as i64);
            coeffs[n - k] = c.clone();
            if k < n {
                let mut next = am;
                for i in 0..n {
                    next[(i, i)] += &c;
                }
                m = next;
            }
        }
        coeffs
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| {
            BigRational::from_integer(self[(i, j)].clone())
        })
    }

    /// Gcd of all entries (0 for the zero matrix).
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        for x in &self.data {
            g = g.gcd(x);
        }
        g
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Dense matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> BigRational,
    ) -> Self {
        let mut m = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> RatMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn row_apply(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.rows);
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| &v[i] * &self[(i, j)]).sum())
            .collect()
    }

    /// Inverse via Gauss-Jordan; panics if singular.
    pub fn inverse(&self) -> RatMatrix {
        assert!(self.rows == self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatMatrix::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&i| !a[(i, col)].is_zero())
                .expect("matrix is singular");
            if pivot != col {
                for j in 0..n {
                    let t = a[(pivot, j)].clone();
                    a[(pivot, j)] = a[(col, j)].clone();
                    a[(col, j)] = t;
                    let t = inv[(pivot, j)].clone();
                    inv[(pivot, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = t;
                }
            }
            let p = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] /= &p;
                inv[(col, j)] /= &p;
            }
            for i in 0..n {
                if i != col && !a[(i, col)].is_zero() {
                    let c = a[(i, col)].clone();
                    for j in 0..n {
                        let t = &c * &a[(col, j)];
                        a[(i, j)] -= t;
                        let t = &c * &inv[(col, j)];
                        inv[(i, j)] -= t;
                    }
                }
            }
        }
        inv
    }

    /// Signature (positive count, negative count) of a symmetric
    /// nondegenerate matrix, by exact congruence diagonalisation.
    pub fn signature(&self) -> (usize, usize) {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut alive: Vec<usize> = (0..n).collect();
        let (mut pos, mut neg) = (0usize, 0usize);
        while let Some(&first) = alive.first() {
            let _ = first;
            // prefer a nonzero diagonal pivot
            let diag = alive.iter().copied().find(|&i| !a[(i, i)].is_zero());
            let p = match diag {
                Some(p) => p,
                None => {
                    // all diagonal entries zero: mix two indices with a
                    // nonzero pairing, making the diagonal nonzero
                    let mut found = None;
                    'outer: for (xi, &i) in alive.iter().enumerate() {
                        for &j in alive.iter().skip(xi + 1) {
                            if !a[(i, j)].is_zero() {
                                found = Some((i, j));
                                break 'outer;
                            }
                        }
                    }
                    let (i, j) = found.expect("degenerate symmetric matrix");
                    // row/col i += row/col j
                    for k in 0..n {
                        let t = a[(j, k)].clone();
                        a[(i, k)] += t;
                    }
                    for k in 0..n {
                        let t = a[(k, j)].clone();
                        a[(k, i)] += t;
                    }
                    i
                }
            };
            let piv = a[(p, p)].clone();
            if piv.is_positive() {
                pos += 1;
            } else {
                neg += 1;
            }
            alive.retain(|&i| i != p);
            // clear the pivot row/column on the remaining indices
            for &i in alive.clone().iter() {
                if a[(i, p)].is_zero() {
                    continue;
                }
                let c = &a[(i, p)] / &piv;
                for k in 0..n {
                    let t = &c * &a[(p, k)];
                    a[(i, k)] -= t;
                }
                for k in 0..n {
                    let t = &c * &a[(k, p)];
                    a[(k, i)] -= t;
                }
            }
        }
        (pos, neg)
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = BigRational;
    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigRational {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big;

    #[test]
    fn det_and_charpoly() {
        let m = IntMatrix::from_i64(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(m.det(), big(3));
        // char poly X^2 - 4X + 3
        assert_eq!(m.char_poly(), vec![big(3), big(-4), big(1)]);
        let u = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(u.det(), big(-1));
    }

    #[test]
    fn signature_hyperbolic() {
        let u = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).to_rational();
        assert_eq!(u.signature(), (1, 1));
        let e = IntMatrix::from_i64(&[vec![-2, 1], vec![1, -2]]).to_rational();
        assert_eq!(e.signature(), (0, 2));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = IntMatrix::from_i64(&[vec![2, 1], vec![1, 2]]).to_rational();
        let inv = m.inverse();
        assert_eq!(m.mul(&inv), RatMatrix::identity(2));
    }
}
