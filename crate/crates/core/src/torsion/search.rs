//! Exhaustive isometry search on small finite quadratic modules. Bounded to
//! group order <= 256; used as an independent oracle in tests.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::TorsionQuadraticForm;
use crate::exact::{row_basis, IntMatrix, ModFloor};

/// Decides isometry of two forms by a backtracking bijection search over
/// generator images. Panics if either group order exceeds 256.
pub fn brute_force_isometric(a: &TorsionQuadraticForm, b: &TorsionQuadraticForm) -> bool {
    let bound = BigInt::from(256);
    assert!(
        a.group_order() <= bound && b.group_order() <= bound,
        "brute-force search is bounded to order 256"
    );
    if a.group_order() != b.group_order() {
        return false;
    }
    // the generator shapes of the two presentations may differ, but the
    // sorted q-value multisets must agree
    if a.value_multiset() != b.value_multiset() {
        return false;
    }
    // enumerate all elements of b with their orders and q-values
    let elems = enumerate(b);
    let n = a.len();
    let mut images: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    backtrack(a, b, &elems, &mut images)
}

struct Elem {
    coords: Vec<BigInt>,
    order: BigInt,
    q: BigRational,
}

fn enumerate(form: &TorsionQuadraticForm) -> Vec<Elem> {
    let mut out = Vec::new();
    let n = form.len();
    let mut coords = vec![BigInt::zero(); n];
    loop {
        out.push(Elem {
            coords: coords.clone(),
            order: form.element_order(&coords),
            q: form.q_value(&coords),
        });
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            coords[i] += 1;
            if coords[i] < form.orders()[i] {
                break;
            }
            coords[i] = BigInt::zero();
            i += 1;
        }
    }
}

fn backtrack(
    a: &TorsionQuadraticForm,
    b: &TorsionQuadraticForm,
    elems: &[Elem],
    images: &mut Vec<Vec<BigInt>>,
) -> bool {
    let i = images.len();
    if i == a.len() {
        return generates_everything(b, images);
    }
    let gi_coords: Vec<BigInt> = (0..a.len())
        .map(|j| if j == i { BigInt::one() } else { BigInt::zero() })
        .collect();
    let target_order = &a.orders()[i];
    let target_q = a.gram()[(i, i)].clone();
    'cand: for e in elems {
        if &e.order != target_order || e.q != target_q {
            continue;
        }
        for (j, img) in images.iter().enumerate() {
            let gj_coords: Vec<BigInt> = (0..a.len())
                .map(|t| if t == j { BigInt::one() } else { BigInt::zero() })
                .collect();
            if b.b_value(img, &e.coords) != a.b_value(&gj_coords, &gi_coords) {
                continue 'cand;
            }
        }
        images.push(e.coords.clone());
        if backtrack(a, b, elems, images) {
            return true;
        }
        images.pop();
    }
    false
}

/// Do the chosen images generate the whole target group?
fn generates_everything(b: &TorsionQuadraticForm, images: &[Vec<BigInt>]) -> bool {
    let n = b.len();
    let rows = images.len() + n;
    let m = IntMatrix::from_fn(rows, n, |i, j| {
        if i < images.len() {
            images[i][j].mod_floor_big(&b.orders()[j])
        } else if i - images.len() == j {
            b.orders()[j].clone()
        } else {
            BigInt::zero()
        }
    });
    let basis = row_basis(&m);
    if basis.rows() < n {
        return false;
    }
    // index of the generated subgroup + relation lattice in Z^n must be 1
    use num_traits::Signed;
    basis.det().abs() == BigInt::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsion::normal::form_of_blocks;
    use crate::torsion::Block;

    fn odd(p: u64, k: u32, u: u64) -> Block {
        Block::Odd { p, k, u }
    }

    #[test]
    fn brute_matches_obvious_cases() {
        let a = form_of_blocks(&[odd(3, 1, 1)]);
        let b = form_of_blocks(&[odd(3, 1, 2)]);
        assert!(brute_force_isometric(&a, &a));
        assert!(!brute_force_isometric(&a, &b));
        let uu = form_of_blocks(&[Block::EvenU { k: 1 }, Block::EvenU { k: 1 }]);
        let vv = form_of_blocks(&[Block::EvenV { k: 1 }, Block::EvenV { k: 1 }]);
        assert!(brute_force_isometric(&uu, &vv));
    }
}
