//! Exact Gauss sums of torsion quadratic forms. The Milgram invariant
//! sigma(q) in Z/8 satisfies sum_x exp(pi i q(x)) = sqrt(|D|) zeta_8^sigma
//! and equals the signature mod 8 for discriminant forms of even lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::{Block, TorsionQuadraticForm};
use crate::exact::cyclofield::CycloField;

/// The Gauss/Milgram invariant of a nondegenerate form, as a residue mod 8.
pub fn gauss_signature(form: &TorsionQuadraticForm) -> u32 {
    let mut total = 0u32;
    for b in form.normal_blocks() {
        total = (total + block_sigma(&b)) % 8;
    }
    total
}

fn block_sigma(b: &Block) -> u32 {
    match *b {
        Block::Odd { p, k, .. } => {
            let pk = p.pow(k);
            let t = b.q_numerator();
            let m = (2 * pk).lcm(&8);
            let f = CycloField::new(m);
            let step = m / (2 * pk); // zeta_m^step = zeta_{2 p^k}
            let mut s = f.zero();
            for x in 0..pk {
                let e = (t as u128 * (x as u128) * (x as u128) % (2 * pk) as u128) as u64;
                s = f.add(&s, &f.zeta_pow((e * step) as i64));
            }
            sigma_from_sum(&f, &s, p, k)
        }
        Block::EvenU { k } => {
            let pk = 2u64.pow(k);
            let m = (2 * pk).lcm(&8);
            let f = CycloField::new(m);
            let step = m / (2 * pk);
            let mut s = f.zero();
            for x in 0..pk {
                for y in 0..pk {
                    let e = (2u128 * x as u128 * y as u128 % (2 * pk) as u128) as u64;
                    s = f.add(&s, &f.zeta_pow((e * step) as i64));
                }
            }
            sigma_from_sum(&f, &s, 2, 2 * k)
        }
        Block::EvenV { k } => {
            let pk = 2u64.pow(k);
            let m = (2 * pk).lcm(&8);
            let f = CycloField::new(m);
            let step = m / (2 * pk);
            let mut s = f.zero();
            for x in 0..pk {
                for y in 0..pk {
                    let e = (2u128 * (x as u128 * x as u128 + y as u128 * y as u128
                        + x as u128 * y as u128)
                        % (2 * pk) as u128) as u64;
                    s = f.add(&s, &f.zeta_pow((e * step) as i64));
                }
            }
            sigma_from_sum(&f, &s, 2, 2 * k)
        }
    }
}

/// Finds sigma with s = p^{k/2} * zeta_8^sigma, exactly.
fn sigma_from_sum(f: &CycloField, s: &crate::exact::cyclofield::CycloElt, p: u64, k: u32) -> u32 {
    let m = f.conductor();
    debug_assert_eq!(m % 8, 0);
    let zeta8 = f.zeta_pow((m / 8) as i64);
    // sqrt(p^k) as a field element
    let mut root = f.from_rational(BigRational::from_integer(BigInt::from(p).pow(k / 2)));
    if k % 2 == 1 {
        let sqrt_p = if p == 2 {
            // sqrt(2) = zeta_8 + zeta_8^{-1}
            f.add(&f.zeta_pow((m / 8) as i64), &f.zeta_pow(-((m / 8) as i64)))
        } else {
            // quadratic Gauss sum: sum zeta_p^{x^2} = sqrt(p) or i sqrt(p)
            let stepp = (m / p) as i64;
            let mut g = f.zero();
            for x in 0..p {
                g = f.add(&g, &f.zeta_pow(((x * x % p) as i64) * stepp));
            }
            if p % 4 == 1 {
                g
            } else {
                // divide by i = zeta_8^2
                let minus_i = f.zeta_pow(-2 * (m / 8) as i64);
                f.mul(&g, &minus_i)
            }
        };
        root = f.mul(&root, &sqrt_p);
    }
    let mut cand = root;
    for sigma in 0..8u32 {
        if f.equal(&cand, s) {
            return sigma;
        }
        cand = f.mul(&cand, &zeta8);
    }
    panic!("Gauss sum of a nondegenerate block is a multiple of an 8th root of unity");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn odd(p: u64, k: u32, u: u64) -> Block {
        Block::Odd { p, k, u }
    }

    #[test]
    fn known_sigmas() {
        assert_eq!(block_sigma(&odd(2, 1, 1)), 1);
        assert_eq!(block_sigma(&odd(2, 1, 3)), 7);
        assert_eq!(block_sigma(&odd(2, 2, 1)), 1);
        assert_eq!(block_sigma(&odd(2, 2, 5)), 5);
        assert_eq!(block_sigma(&Block::EvenU { k: 1 }), 0);
        assert_eq!(block_sigma(&Block::EvenV { k: 1 }), 4);
        assert_eq!(block_sigma(&Block::EvenU { k: 2 }), 0);
        assert_eq!(block_sigma(&Block::EvenV { k: 2 }), 0);
        // disc form of A2 (negative definite): sigma = -2 mod 8
        assert_eq!(block_sigma(&odd(3, 1, 1)), 6);
    }
}
