//! Exact p-adic Jordan decomposition of nondegenerate symmetric rational
//! matrices. All transformations are invertible over the p-local integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::exact::{legendre_unit, padic_unit, padic_val, unit_mod_2k, RatMatrix};

/// One Jordan constituent entry at a fixed prime.
#[derive(Clone, Debug)]
pub enum JordanPiece {
    /// Rank-1 block (u * p^k) with u a p-unit.
    Diag { scale: i64, unit: BigRational },
    /// Rank-2 block at p = 2 with off-diagonal valuation = scale and
    /// strictly larger diagonal valuations.
    Even { scale: i64, a: BigRational, b: BigRational, c: BigRational },
}

impl JordanPiece {
    pub fn scale(&self) -> i64 {
        match self {
            JordanPiece::Diag { scale, .. } | JordanPiece::Even { scale, .. } => *scale,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            JordanPiece::Diag { .. } => 1,
            JordanPiece::Even { .. } => 2,
        }
    }

    /// Unit part of the determinant of the block divided by p^(scale*rank).
    pub fn det_unit(&self, p: u64) -> BigRational {
        match self {
            JordanPiece::Diag { scale, unit } => {
                let _ = scale;
                unit.clone()
            }
            JordanPiece::Even { scale, a, b, c } => {
                let det = a * c - b * b;
                let pw = BigRational::from_integer(BigInt::from(p)).pow(2 * *scale as i32);
                det / pw
            }
        }
    }
}

fn val(x: &BigRational, p: u64) -> Option<i64> {
    if x.is_zero() {
        None
    } else {
        Some(padic_val(x, p))
    }
}

/// Full Jordan decomposition at p. Input must be symmetric nondegenerate.
pub fn padic_jordan(gram: &RatMatrix, p: u64) -> Vec<JordanPiece> {
    let n = gram.rows();
    let mut a = gram.clone();
    let mut alive: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    while !alive.is_empty() {
        // minimum valuation over the active block
        let mut minv: Option<i64> = None;
        for (xi, &i) in alive.iter().enumerate() {
            for &j in alive.iter().skip(xi) {
                if let Some(v) = val(&a[(i, j)], p) {
                    minv = Some(minv.map_or(v, |m: i64| m.min(v)));
                }
            }
        }
        let minv = minv.expect("nondegenerate matrix");
        // prefer a diagonal pivot of minimal valuation
        let diag = alive
            .iter()
            .copied()
            .find(|&i| val(&a[(i, i)], p) == Some(minv));
        if let Some(pvt) = diag {
            let piv = a[(pvt, pvt)].clone();
            alive.retain(|&i| i != pvt);
            for &i in alive.clone().iter() {
                if a[(i, pvt)].is_zero() {
                    continue;
                }
                let c = &a[(i, pvt)] / &piv;
                for k in 0..n {
                    let t = &c * &a[(pvt, k)];
                    a[(i, k)] -= t;
                }
                for k in 0..n {
                    let t = &c * &a[(k, pvt)];
                    a[(k, i)] -= t;
                }
            }
            out.push(JordanPiece::Diag { scale: minv, unit: padic_unit(&piv, p) });
            continue;
        }
        // all diagonal valuations exceed minv; pick an off-diagonal pair
        let mut pair = None;
        'outer: for (xi, &i) in alive.iter().enumerate() {
            for &j in alive.iter().skip(xi + 1) {
                if val(&a[(i, j)], p) == Some(minv) {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        let (i, j) = pair.expect("minimal valuation must occur");
        if p != 2 {
            // make the diagonal entry at i have the minimal valuation
            for k in 0..n {
                let t = a[(j, k)].clone();
                a[(i, k)] += t;
            }
            for k in 0..n {
                let t = a[(k, j)].clone();
                a[(k, i)] += t;
            }
            debug_assert_eq!(val(&a[(i, i)], p), Some(minv));
            continue; // retry with a diagonal pivot available
        }
        // p = 2: split off the 2x2 block on (i, j)
        let (aii, aij, ajj) = (a[(i, i)].clone(), a[(i, j)].clone(), a[(j, j)].clone());
        let det = &aii * &ajj - &aij * &aij;
        assert!(!det.is_zero());
        alive.retain(|&t| t != i && t != j);
        for &t in alive.clone().iter() {
            let (bi, bj) = (a[(t, i)].clone(), a[(t, j)].clone());
            if bi.is_zero() && bj.is_zero() {
                continue;
            }
            // solve [aii aij; aij ajj] [x; y] = [bi; bj]
            let x = (&ajj * &bi - &aij * &bj) / &det;
            let y = (&aii * &bj - &aij * &bi) / &det;
            for k in 0..n {
                let t1 = &x * &a[(i, k)] + &y * &a[(j, k)];
                a[(t, k)] -= t1;
            }
            for k in 0..n {
                let t1 = &x * &a[(k, i)] + &y * &a[(k, j)];
                a[(k, t)] -= t1;
            }
        }
        out.push(JordanPiece::Even { scale: minv, a: aii, b: aij, c: ajj });
    }
    out
}

/// Per-scale summary of a Jordan decomposition at p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaleData {
    pub scale: i64,
    pub rank: usize,
    /// +1 when the determinant unit is a square class (odd p: Legendre;
    /// p = 2: +-1 mod 8).
    pub eps: i32,
    /// Determinant unit mod 8 (p = 2 only; 1 otherwise).
    pub det8: u32,
    /// Any odd diagonal entry present (p = 2 only).
    pub odd: bool,
    /// Trace of the odd diagonal units mod 8 (p = 2 only).
    pub oddity: u32,
}

pub fn scale_summary(pieces: &[JordanPiece], p: u64) -> Vec<ScaleData> {
    use std::collections::BTreeMap;
    let mut map: BTreeMap<i64, (usize, BigRational, bool, u32)> = BTreeMap::new();
    for piece in pieces {
        let e = map
            .entry(piece.scale())
            .or_insert((0, BigRational::from_integer(BigInt::from(1)), false, 0));
        e.0 += piece.rank();
        e.1 *= piece.det_unit(p);
        if let JordanPiece::Diag { unit, .. } = piece {
            if p == 2 {
                e.2 = true;
                e.3 = (e.3 + unit_mod_2k(unit, 3)) % 8;
            }
        }
    }
    map.into_iter()
        .map(|(scale, (rank, det, odd, oddity))| {
            let (eps, det8) = if p == 2 {
                let d8 = unit_mod_2k(&det, 3);
                (if d8 == 1 || d8 == 7 { 1 } else { -1 }, d8)
            } else {
                (legendre_unit(&det, p), 1)
            };
            ScaleData { scale, rank, eps, det8, odd, oddity }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::IntMatrix;

    #[test]
    fn jordan_of_a2_at_3() {
        let g = IntMatrix::from_i64(&[vec![-2, 1], vec![1, -2]]).to_rational();
        let pieces = padic_jordan(&g, 3);
        let summary = scale_summary(&pieces, 3);
        assert_eq!(summary.len(), 2);
        assert_eq!(summary[0], ScaleData { scale: 0, rank: 1, eps: 1, det8: 1, odd: false, oddity: 0 });
        // the 3-modular part of negative A2 has square determinant class
        assert_eq!(summary[1].scale, 1);
        assert_eq!(summary[1].rank, 1);
        assert_eq!(summary[1].eps, 1);
    }

    #[test]
    fn jordan_of_u_at_2() {
        let g = IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]).to_rational();
        let pieces = padic_jordan(&g, 2);
        let summary = scale_summary(&pieces, 2);
        assert_eq!(summary.len(), 1);
        let s = &summary[0];
        assert_eq!((s.scale, s.rank, s.odd), (0, 2, false));
        assert_eq!(s.det8, 7); // det -1
    }

    #[test]
    fn jordan_of_twos() {
        let g = IntMatrix::from_i64(&[vec![2, 0], vec![0, 2]]).to_rational();
        let summary = scale_summary(&padic_jordan(&g, 2), 2);
        assert_eq!(summary.len(), 1);
        let s = &summary[0];
        assert_eq!((s.scale, s.rank, s.odd, s.oddity), (1, 2, true, 2));
    }
}
