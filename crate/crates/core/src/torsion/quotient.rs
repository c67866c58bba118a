//! Quotients of torsion quadratic forms by isotropic subgroups: the finite
//! side of the primitive-extension construction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{TorsionError, TorsionQuadraticForm};
use crate::exact::{right_kernel, row_basis, IntMatrix, ModFloor, RatMatrix};

impl TorsionQuadraticForm {
    /// The form induced on (orthogonal complement of Gamma) / Gamma for an
    /// isotropic subgroup Gamma given by generator coordinates.
    pub fn isotropic_quotient(
        &self,
        gamma_gens: &[Vec<BigInt>],
    ) -> Result<TorsionQuadraticForm, TorsionError> {
        let n = self.len();
        // isotropy on generators implies isotropy of the subgroup
        for (i, g) in gamma_gens.iter().enumerate() {
            if !self.q_value(g).is_zero() {
                return Err(TorsionError::Inconsistent);
            }
            for h in gamma_gens.iter().skip(i + 1) {
                if !self.b_value(g, h).is_zero() {
                    return Err(TorsionError::Inconsistent);
                }
            }
        }
        if n == 0 {
            return Ok(TorsionQuadraticForm::trivial());
        }
        // orthogonal complement: solve pairing congruences
        // for each gamma generator g: sum_i x_i b(e_i, g) = 0 mod 1
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut moduli: Vec<BigInt> = Vec::new();
        for g in gamma_gens {
            let vals: Vec<BigRational> = (0..n)
                .map(|i| {
                    let e: Vec<BigInt> = (0..n)
                        .map(|j| if j == i { BigInt::one() } else { BigInt::zero() })
                        .collect();
                    self.b_value(&e, g)
                })
                .collect();
            let mut m = BigInt::one();
            for v in &vals {
                m = m.lcm(v.denom());
            }
            rows.push(
                vals.iter()
                    .map(|v| (v * BigRational::from_integer(m.clone())).to_integer())
                    .collect(),
            );
            moduli.push(m);
        }
        // solution lattice of A x = 0 mod diag(moduli): right kernel of
        // [A | diag(m)] projected to the x block
        let r = rows.len();
        let big = IntMatrix::from_fn(r, n + r, |i, j| {
            if j < n {
                rows[i][j].clone()
            } else if j - n == i {
                moduli[i].clone()
            } else {
                BigInt::zero()
            }
        });
        let ker = right_kernel(&big);
        // stack the x parts with the order relations and take a basis
        let extra = ker.rows();
        let stacked = IntMatrix::from_fn(extra + n, n, |i, j| {
            if i < extra {
                ker[(i, j)].clone()
            } else if i - extra == j {
                self.orders()[j].clone()
            } else {
                BigInt::zero()
            }
        });
        let w = row_basis(&stacked);
        debug_assert_eq!(w.rows(), n);
        // relations: gamma generators and the order lattice, in W-coordinates
        let w_inv = w.to_rational().inverse();
        let rel_count = gamma_gens.len() + n;
        let rel = IntMatrix::from_fn(rel_count, n, |i, j| {
            if i < gamma_gens.len() {
                gamma_gens[i][j].clone()
            } else if i - gamma_gens.len() == j {
                self.orders()[j].clone()
            } else {
                BigInt::zero()
            }
        });
        let rel_rat = rel.to_rational().mul(&w_inv);
        let mut rel_w = IntMatrix::zero(rel_count, n);
        for i in 0..rel_count {
            for j in 0..n {
                if !rel_rat[(i, j)].is_integer() {
                    return Err(TorsionError::Inconsistent);
                }
                rel_w[(i, j)] = rel_rat[(i, j)].to_integer();
            }
        }
        // cokernel of the relation lattice inside Z^n (W-coordinates)
        let snf = crate::exact::smith_normal_form(&rel_w);
        let v_inv = snf.v_inv.clone();
        let mut gens_out: Vec<Vec<BigInt>> = Vec::new();
        let mut orders_out: Vec<BigInt> = Vec::new();
        let diag = snf.diagonal();
        for i in 0..n {
            let d = if i < diag.len() { diag[i].clone() } else { BigInt::zero() };
            if d.is_zero() {
                // free quotient direction cannot happen for finite input
                return Err(TorsionError::Inconsistent);
            }
            if d.is_one() {
                continue;
            }
            // generator: row i of V^{-1} converted back to original coords
            let row_w = v_inv.row(i);
            let orig = w.transpose().col_apply(&row_w);
            gens_out.push(orig);
            orders_out.push(d);
        }
        let k = gens_out.len();
        let gram = RatMatrix::from_fn(k, k, |i, j| {
            if i == j {
                self.q_value(&gens_out[i])
            } else {
                self.b_value(&gens_out[i], &gens_out[j])
            }
        });
        TorsionQuadraticForm::new(orders_out, gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big;
    use crate::torsion::{form_of_blocks, Block};

    #[test]
    fn glue_half_plus_minus_half_to_trivial() {
        // <1/2> + <3/2>: the diagonal is isotropic and the quotient trivial
        let f = form_of_blocks(&[
            Block::Odd { p: 2, k: 1, u: 1 },
            Block::Odd { p: 2, k: 1, u: 3 },
        ]);
        let q = f.isotropic_quotient(&[vec![big(1), big(1)]]).unwrap();
        assert!(q.is_empty());
    }

    #[test]
    fn quotient_matches_lattice_glue() {
        // disc(<2>^2 + <-2>): glue the isotropic diagonal of a <1/2> and
        // <3/2> pair and compare with the disc of the glued lattice
        use crate::glue::{primitive_extension, GlueMap};
        use crate::lattice::CatalogExpr;
        let s = CatalogExpr::parse("<2>+<2>").unwrap().gram().unwrap();
        let t = CatalogExpr::parse("<-2>").unwrap().gram().unwrap();
        let glue = GlueMap::from_i64(&[vec![1, 0]], &[vec![1]]);
        let ext = primitive_extension(&s, &t, &glue).unwrap();
        let expected = ext.lattice.discriminant_form().unwrap().form;
        let total = s
            .discriminant_form()
            .unwrap()
            .form
            .direct_sum(&t.discriminant_form().unwrap().form);
        let q = total.isotropic_quotient(&[vec![big(1), big(0), big(1)]]).unwrap();
        assert!(q.is_isometric(&expected));
    }
}
