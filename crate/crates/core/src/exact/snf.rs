use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// Smith normal form data: `u * m * v = s` with `u`, `v` unimodular,
/// `s` diagonal with each entry dividing the next.
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `s` (all of them, including zeros).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    m: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.m.cols() {
            let t = self.m[(a, j)].clone();
            self.m[(a, j)] = self.m[(b, j)].clone();
            self.m[(b, j)] = t;
        }
        for j in 0..self.u.cols() {
            let t = self.u[(a, j)].clone();
            self.u[(a, j)] = self.u[(b, j)].clone();
            self.u[(b, j)] = t;
        }
        // u_inv gets the inverse op on columns
        for i in 0..self.u_inv.rows() {
            let t = self.u_inv[(i, a)].clone();
            self.u_inv[(i, a)] = self.u_inv[(i, b)].clone();
            self.u_inv[(i, b)] = t;
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.m.rows() {
            let t = self.m[(i, a)].clone();
            self.m[(i, a)] = self.m[(i, b)].clone();
            self.m[(i, b)] = t;
        }
        for i in 0..self.v.rows() {
            let t = self.v[(i, a)].clone();
            self.v[(i, a)] = self.v[(i, b)].clone();
            self.v[(i, b)] = t;
        }
        for j in 0..self.v_inv.cols() {
            let t = self.v_inv[(a, j)].clone();
            self.v_inv[(a, j)] = self.v_inv[(b, j)].clone();
            self.v_inv[(b, j)] = t;
        }
    }

    /// row a += c * row b
    fn add_row(&mut self, a: usize, b: usize, c: &BigInt) {
        for j in 0..self.m.cols() {
            let t = c * &self.m[(b, j)];
            self.m[(a, j)] += t;
        }
        for j in 0..self.u.cols() {
            let t = c * &self.u[(b, j)];
            self.u[(a, j)] += t;
        }
        // inverse: column b -= c * column a
        for i in 0..self.u_inv.rows() {
            let t = c * &self.u_inv[(i, a)];
            self.u_inv[(i, b)] -= t;
        }
    }

    /// col a += c * col b
    fn add_col(&mut self, a: usize, b: usize, c: &BigInt) {
        for i in 0..self.m.rows() {
            let t = c * &self.m[(i, b)];
            self.m[(i, a)] += t;
        }
        for i in 0..self.v.rows() {
            let t = c * &self.v[(i, b)];
            self.v[(i, a)] += t;
        }
        for j in 0..self.v_inv.cols() {
            let t = c * &self.v_inv[(a, j)];
            self.v_inv[(b, j)] -= t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.m.cols() {
            let t = -self.m[(a, j)].clone();
            self.m[(a, j)] = t;
        }
        for j in 0..self.u.cols() {
            let t = -self.u[(a, j)].clone();
            self.u[(a, j)] = t;
        }
        for i in 0..self.u_inv.rows() {
            let t = -self.u_inv[(i, a)].clone();
            self.u_inv[(i, a)] = t;
        }
    }
}

/// Smith normal form with unimodular transforms. The pivot is chosen as an
/// entry of minimal absolute value to keep intermediate growth down.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        m: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let n = rows.min(cols);
    let mut t = 0usize;
    while t < n {
        // find pivot: minimal nonzero absolute value in the trailing block
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !w.m[(i, j)].is_zero() {
                    match pivot {
                        Some((pi, pj)) if w.m[(pi, pj)].abs() <= w.m[(i, j)].abs() => {}
                        _ => pivot = Some((i, j)),
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        // eliminate row and column t
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.m[(i, t)].is_zero() {
                    let q = div_round(&w.m[(i, t)], &w.m[(t, t)]);
                    if !q.is_zero() {
                        w.add_row(i, t, &(-q));
                    }
                    if !w.m[(i, t)].is_zero() {
                        w.swap_rows(t, i);
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.m[(t, j)].is_zero() {
                    let q = div_round(&w.m[(t, j)], &w.m[(t, t)]);
                    if !q.is_zero() {
                        w.add_col(j, t, &(-q));
                    }
                    if !w.m[(t, j)].is_zero() {
                        w.swap_cols(t, j);
                        clean = false;
                    }
                }
            }
            let row_done = (t + 1..rows).all(|i| w.m[(i, t)].is_zero());
            let col_done = (t + 1..cols).all(|j| w.m[(t, j)].is_zero());
            if clean && row_done && col_done {
                break;
            }
        }
        t += 1;
    }
    // make diagonal nonnegative
    for i in 0..n {
        if w.m[(i, i)].is_negative() {
            w.negate_row(i);
        }
    }
    // enforce the divisibility chain d1 | d2 | ...
    loop {
        let mut fixed = true;
        for i in 0..n.saturating_sub(1) {
            let a = w.m[(i, i)].clone();
            let b = w.m[(i + 1, i + 1)].clone();
            if a.is_zero() && !b.is_zero() {
                w.swap_rows(i, i + 1);
                w.swap_cols(i, i + 1);
                fixed = false;
                continue;
            }
            if !a.is_zero() && !(&b % &a).is_zero() {
                // standard trick: bring b into column i, then re-reduce 2x2
                w.add_col(i, i + 1, &BigInt::from(1));
                reduce_two(&mut w, i);
                fixed = false;
            }
        }
        if fixed {
            break;
        }
    }
    SmithForm { s: w.m, u: w.u, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv }
}

/// Clears the 2x2 block at (i, i)..(i+1, i+1) back to diagonal form after a
/// divisibility fix introduced an off-diagonal entry.
fn reduce_two(w: &mut Work, i: usize) {
    // gcd rotation on column i between rows i and i+1: reduce, then swap,
    // so the smaller entry becomes the divisor
    loop {
        let b = w.m[(i + 1, i)].clone();
        if b.is_zero() {
            break;
        }
        let a = w.m[(i, i)].clone();
        let q = div_round(&a, &b);
        if !q.is_zero() {
            w.add_row(i, i + 1, &(-q));
        }
        w.swap_rows(i, i + 1);
    }
    // now clear row i entries right of the diagonal
    let cols = w.m.cols();
    for j in i + 1..cols {
        if !w.m[(i, j)].is_zero() {
            let q = &w.m[(i, j)] / &w.m[(i, i)];
            w.add_col(j, i, &(-q));
        }
    }
    // and column entries below
    let rows = w.m.rows();
    for r in i + 1..rows {
        if !w.m[(r, i)].is_zero() {
            let q = &w.m[(r, i)] / &w.m[(i, i)];
            w.add_row(r, i, &(-q));
        }
    }
    for k in [i, i + 1] {
        if k < w.m.rows().min(w.m.cols()) && w.m[(k, k)].is_negative() {
            w.negate_row(k);
        }
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // round-to-nearest division keeps remainders small
    let two_rem = (a % b) * BigInt::from(2);
    let q = a / b;
    if two_rem.abs() > b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// A basis (as rows) of the lattice generated by the rows of `m`.
pub fn row_basis(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let n = m.rows().min(m.cols());
    let mut rows = Vec::new();
    for i in 0..n {
        if snf.s[(i, i)].is_zero() {
            continue;
        }
        let mut r = snf.v_inv.row(i);
        for x in &mut r {
            *x = &*x * &snf.s[(i, i)];
        }
        rows.push(r);
    }
    IntMatrix::from_fn(rows.len(), m.cols(), |i, j| rows[i][j].clone())
}

/// A basis (as rows) of the right kernel `{x : m x = 0}`.
pub fn right_kernel(m: &IntMatrix) -> IntMatrix {
    let snf = smith_normal_form(m);
    let n = m.rows().min(m.cols());
    let mut rows = Vec::new();
    for j in 0..m.cols() {
        let zero_diag = j >= n || snf.s[(j, j)].is_zero();
        if zero_diag {
            // column j of V
            rows.push((0..m.cols()).map(|i| snf.v[(i, j)].clone()).collect::<Vec<_>>());
        }
    }
    IntMatrix::from_fn(rows.len(), m.cols(), |i, j| rows[i][j].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big;

    fn check(m: &IntMatrix) {
        let f = smith_normal_form(m);
        assert_eq!(f.u.mul(m).mul(&f.v), f.s, "U M V = S");
        assert_eq!(f.u.mul(&f.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(f.v.mul(&f.v_inv), IntMatrix::identity(m.cols()));
        assert_eq!(f.u.det().abs(), big(1));
        assert_eq!(f.v.det().abs(), big(1));
        let d = f.diagonal();
        for w in d.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_zero() || (&w[1] % &w[0]).is_zero(), "divisor chain");
            } else {
                assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn examples() {
        let m = IntMatrix::from_i64(&[vec![2, 0], vec![0, 2]]);
        let f = smith_normal_form(&m);
        assert_eq!(f.diagonal(), vec![big(2), big(2)]);
        check(&m);

        let m = IntMatrix::from_i64(&[vec![2, 1], vec![1, 2]]);
        let f = smith_normal_form(&m);
        assert_eq!(f.diagonal(), vec![big(1), big(3)]);
        check(&m);

        let z = IntMatrix::zero(2, 2);
        let f = smith_normal_form(&z);
        assert_eq!(f.diagonal(), vec![big(0), big(0)]);
        check(&z);
    }

    #[test]
    fn kernel() {
        // rank-1 matrix, kernel of dimension 2
        let m = IntMatrix::from_i64(&[vec![1, 2, 3], vec![2, 4, 6]]);
        let k = right_kernel(&m);
        assert_eq!(k.rows(), 2);
        for i in 0..2 {
            let v = k.row(i);
            let img = m.mul(&IntMatrix::from_fn(3, 1, |r, _| v[r].clone()));
            assert!(img.row(0)[0].is_zero() && img.row(1)[0].is_zero());
        }
    }

    #[test]
    fn row_basis_scaling() {
        let m = IntMatrix::from_i64(&[vec![2, 0], vec![0, 3], vec![2, 3]]);
        let b = row_basis(&m);
        assert_eq!(b.rows(), 2);
        // index of the row lattice in Z^2 is |det| = 6
        assert_eq!(b.det().abs(), big(6));
    }
}
