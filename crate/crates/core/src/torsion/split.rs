//! Orthogonal block splitting of the p-primary part of a torsion quadratic
//! form. Works on arbitrary generating sets: elements are coordinate
//! vectors in a fixed reference presentation, the form data is always
//! evaluated through the reference Gram matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::normal::Block;
use super::{TorsionError, TorsionQuadraticForm};
use crate::exact::{mod_inverse, padic_val, unit_mod_2k, ModFloor};

impl TorsionQuadraticForm {
    /// Splits the whole form into elementary blocks, prime by prime.
    pub(crate) fn split_all(&self) -> Result<Vec<Block>, TorsionError> {
        let mut out = Vec::new();
        for p in self.primes() {
            let part = self.p_primary_part(p);
            let gens: Vec<Vec<BigInt>> = (0..part.len())
                .map(|i| {
                    (0..part.len())
                        .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                        .collect()
                })
                .collect();
            out.extend(split_p_part(&part, p, gens)?);
        }
        out.sort();
        Ok(out)
    }
}

/// Level of a reduced rational: max(0, -val_p). Zero rationals have level 0.
fn level(x: &BigRational, p: u64) -> u32 {
    if x.is_zero() {
        0
    } else {
        (-padic_val(x, p)).max(0) as u32
    }
}

/// Splits a p-primary form presented by a generating set into blocks.
pub(crate) fn split_p_part(
    form: &TorsionQuadraticForm,
    p: u64,
    gens: Vec<Vec<BigInt>>,
) -> Result<Vec<Block>, TorsionError> {
    let mut elems = gens;
    let mut blocks = Vec::new();
    let pb = BigInt::from(p);
    loop {
        // drop radical elements of the residual group; a nonzero q on a
        // pairing-trivial element means the form is degenerate
        let mut i = 0;
        while i < elems.len() {
            let e = &elems[i];
            let all_zero_pair = elems.iter().all(|f| form.b_value(e, f).is_zero());
            if all_zero_pair {
                if form.q_value(e).is_zero() {
                    elems.remove(i);
                    continue;
                }
                return Err(TorsionError::Degenerate);
            }
            i += 1;
        }
        if elems.is_empty() {
            return Ok(blocks);
        }
        // top level K over all q-values and pairings
        let mut top = 0u32;
        for (i, e) in elems.iter().enumerate() {
            top = top.max(level(&form.q_value(e), p));
            for f in elems.iter().skip(i + 1) {
                top = top.max(level(&form.b_value(e, f), p));
            }
        }
        if top == 0 {
            // all residual structure is integral: for p = 2 a reduced q can
            // still be 1 on a surviving element only in the degenerate case,
            // which was caught above; whatever remains is zero
            return Err(TorsionError::Degenerate);
        }
        let k = top;
        let pk = pb.pow(k);
        // try a diagonal pivot: q-level == K
        let diag = elems
            .iter()
            .position(|e| level(&form.q_value(e), p) == k);
        let pivot_idx = match diag {
            Some(i) => Some(i),
            None if p != 2 => {
                // mix two elements with a level-K pairing to create one
                let (i, j) = find_pair(form, &elems, p, k).ok_or(TorsionError::Degenerate)?;
                let (a, b) = (elems[i].clone(), elems[j].clone());
                let mixed: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                // q(a + b) = q(a) + q(b) + 2 b(a,b) has level K since p is odd
                elems[i] = mixed;
                debug_assert_eq!(level(&form.q_value(&elems[i]), p), k);
                Some(i)
            }
            None => None,
        };
        if let Some(i) = pivot_idx {
            let g = elems.remove(i);
            let qg = form.q_value(&g);
            // clear every other element against g
            let u = numerator_mod(&qg, p, k); // unit mod p^k
            let u_inv = mod_inverse(&u, &pk).expect("pivot is a unit");
            for e in elems.iter_mut() {
                let beg = form.b_value(e, &g);
                if beg.is_zero() {
                    continue;
                }
                let m = level(&beg, p);
                let w = numerator_mod(&beg, p, m);
                // c = w * u^{-1} * p^{K-m} mod p^K
                let c = (&w * &u_inv * pb.pow(k - m)).mod_floor_big(&pk);
                for (x, gx) in e.iter_mut().zip(&g) {
                    *x -= &c * gx;
                }
                debug_assert!(form.b_value(e, &g).is_zero());
            }
            blocks.push(odd_block(&qg, p, k));
            continue;
        }
        // p = 2, no odd diagonal at the top level: 2x2 even pivot
        let (i, j) = find_pair(form, &elems, p, k).ok_or(TorsionError::Degenerate)?;
        let (gi, gj) = (elems[i].clone(), elems[j].clone());
        let (hi, lo) = (i.max(j), i.min(j));
        elems.remove(hi);
        elems.remove(lo);
        let qii = form.q_value(&gi);
        let qjj = form.q_value(&gj);
        let bij = form.b_value(&gi, &gj);
        // clear the rest against the block: solve a 2x2 system mod 2^k
        let x = scaled_residue(&qii, p, k, &pk); // even
        let y = scaled_residue(&qjj, p, k, &pk);
        let w = scaled_residue(&bij, p, k, &pk); // odd
        let det = (&x * &y - &w * &w).mod_floor_big(&pk);
        let det_inv = mod_inverse(&det, &pk).expect("even block determinant is odd");
        for e in elems.iter_mut() {
            let b1 = scaled_residue(&form.b_value(e, &gi), p, k, &pk);
            let b2 = scaled_residue(&form.b_value(e, &gj), p, k, &pk);
            if b1.is_zero() && b2.is_zero() {
                continue;
            }
            // [x w; w y] [a; b] = [b1; b2]
            let a = ((&y * &b1 - &w * &b2) * &det_inv).mod_floor_big(&pk);
            let b = ((&x * &b2 - &w * &b1) * &det_inv).mod_floor_big(&pk);
            for ((t, u1), u2) in e.iter_mut().zip(&gi).zip(&gj) {
                *t -= &a * u1 + &b * u2;
            }
            debug_assert!(form.b_value(e, &gi).is_zero());
            debug_assert!(form.b_value(e, &gj).is_zero());
        }
        // u or v: scaled determinant class mod 8
        let x8 = q_scaled_mod(&qii, k, 4); // 2^k q mod 2^{k+2}, then mod 8 semantics below
        let y8 = q_scaled_mod(&qjj, k, 4);
        let w8 = q_scaled_mod(&bij, k, 4);
        let d8 = ((x8 * y8) as i64 - (w8 * w8) as i64).rem_euclid(8) as u32;
        match d8 {
            7 => blocks.push(Block::EvenU { k }),
            3 => blocks.push(Block::EvenV { k }),
            _ => return Err(TorsionError::Degenerate),
        }
    }
}

/// Finds a pair (i, j), i != j, with a pairing of exact level k.
fn find_pair(
    form: &TorsionQuadraticForm,
    elems: &[Vec<BigInt>],
    p: u64,
    k: u32,
) -> Option<(usize, usize)> {
    for i in 0..elems.len() {
        for j in i + 1..elems.len() {
            if level(&form.b_value(&elems[i], &elems[j]), p) == k {
                return Some((i, j));
            }
        }
    }
    None
}

/// The numerator of x = u/p^m as a residue mod p^m (u a p-unit when m is the
/// exact level; for m = 0 returns the residue of x itself).
fn numerator_mod(x: &BigRational, p: u64, m: u32) -> BigInt {
    let pb = BigInt::from(p);
    let pm = pb.pow(m);
    let scaled = x * BigRational::from_integer(pm.clone());
    // scaled must be p-integral here; reduce mod p^m
    let num = scaled.numer().clone();
    let den = scaled.denom().clone();
    let den_inv = mod_inverse(&den, &pm).expect("p-integral value");
    (num * den_inv).mod_floor_big(&pm)
}

/// 2^k * x reduced mod 2^k, as a nonnegative residue.
fn scaled_residue(x: &BigRational, _p: u64, _k: u32, pk: &BigInt) -> BigInt {
    let scaled = x * BigRational::from_integer(pk.clone());
    let num = scaled.numer().clone();
    let den = scaled.denom().clone();
    let den_inv = mod_inverse(&den, pk).expect("2-integral value");
    (num * den_inv).mod_floor_big(pk)
}

/// 2^k * x mod 2^extra_bits, used for determinant classes mod 8.
fn q_scaled_mod(x: &BigRational, k: u32, extra: u32) -> u32 {
    let m = BigInt::from(2).pow(k + extra);
    let scaled = x * BigRational::from_integer(BigInt::from(2).pow(k));
    let num = scaled.numer().clone();
    let den = scaled.denom().clone();
    let den_inv = mod_inverse(&den, &m).expect("2-integral value");
    let r = (num * den_inv).mod_floor_big(&m);
    let r8 = r.mod_floor_big(&BigInt::from(8));
    r8.to_u64_digits().1.first().copied().unwrap_or(0) as u32
}

fn odd_block(q: &BigRational, p: u64, k: u32) -> Block {
    if p == 2 {
        let kk = k.min(2) + 1; // units mod 4 at scale 1, mod 8 above
        let theta = unit_mod_2k(&(q * BigRational::from_integer(BigInt::from(2).pow(k))), kk);
        Block::Odd { p: 2, k, u: theta as u64 }
    } else {
        let pk = BigInt::from(p).pow(k);
        let u = numerator_mod(q, p, k);
        let u = u.mod_floor_big(&pk);
        Block::Odd { p, k, u: u.to_u64_digits().1.first().copied().unwrap_or(0) }
    }
}
