//! Primitive extensions and equivariant gluing: constructs explicit
//! overlattices from anti-isometries of discriminant subgroups, extends
//! isometries along them, and audits the result.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{row_basis, IntMatrix, ModFloor, Polynomial, RatMatrix};
use crate::genus::{symbol_from_lattice, GenusSymbol};
use crate::lattice::{DiscriminantForm, GramLattice, LatticeWithIsometry};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GlueError {
    #[error("glue map is not an anti-isometry of its domains")]
    NotAntiIsometric,
    #[error("glue domains are not stable under the discriminant actions, or the actions do not commute with the glue map")]
    EquivarianceViolation,
    #[error("glue data does not produce an integral overlattice")]
    Inconsistent,
    #[error("lattice error: {0}")]
    Lattice(#[from] crate::lattice::LatticeError),
}

/// An anti-isometry between subgroups of two discriminant groups, given by
/// generators of the source subgroup and their images.
#[derive(Clone, Debug)]
pub struct GlueMap {
    /// Generators of H_S in D_S generator coordinates.
    pub source_gens: Vec<Vec<BigInt>>,
    /// Their images in D_T generator coordinates.
    pub target_gens: Vec<Vec<BigInt>>,
}

impl GlueMap {
    pub fn trivial() -> Self {
        GlueMap { source_gens: vec![], target_gens: vec![] }
    }

    pub fn from_i64(source: &[Vec<i64>], target: &[Vec<i64>]) -> Self {
        let conv = |rows: &[Vec<i64>]| {
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        };
        GlueMap { source_gens: conv(source), target_gens: conv(target) }
    }

    fn validate(&self, ds: &DiscriminantForm, dt: &DiscriminantForm) -> Result<(), GlueError> {
        if self.source_gens.len() != self.target_gens.len() {
            return Err(GlueError::NotAntiIsometric);
        }
        for (x, y) in self.source_gens.iter().zip(&self.target_gens) {
            if ds.form.element_order(x) != dt.form.element_order(y) {
                return Err(GlueError::NotAntiIsometric);
            }
            let qx = ds.form.q_value(x);
            let qy = dt.form.q_value(y);
            if crate::exact::reduce_mod(&(qx + qy), 2) != BigRational::zero() {
                return Err(GlueError::NotAntiIsometric);
            }
        }
        for i in 0..self.source_gens.len() {
            for j in i + 1..self.source_gens.len() {
                let bs = ds.form.b_value(&self.source_gens[i], &self.source_gens[j]);
                let bt = dt.form.b_value(&self.target_gens[i], &self.target_gens[j]);
                if crate::exact::reduce_mod(&(bs + bt), 1) != BigRational::zero() {
                    return Err(GlueError::NotAntiIsometric);
                }
            }
        }
        Ok(())
    }
}

/// The overlattice of S + T generated by lifts of the graph of the glue
/// map. Returns the lattice together with the change of basis (rows in the
/// coordinates of S + T).
pub struct Extension {
    pub lattice: GramLattice,
    pub basis: RatMatrix,
    /// Order of the glue domain.
    pub glue_order: BigInt,
}

/// Nikulin's primitive extension along a glue map.
pub fn primitive_extension(
    s: &GramLattice,
    t: &GramLattice,
    glue: &GlueMap,
) -> Result<Extension, GlueError> {
    let ds = s.discriminant_form()?;
    let dt = t.discriminant_form()?;
    glue.validate(&ds, &dt)?;
    let (ns, nt) = (s.rank(), t.rank());
    let n = ns + nt;
    // generating rows: standard basis plus lifted graph vectors
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for i in 0..n {
        rows.push(
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect(),
        );
    }
    for (x, y) in glue.source_gens.iter().zip(&glue.target_gens) {
        let lx = ds.lift(x);
        let ly = dt.lift(y);
        let mut row = Vec::with_capacity(n);
        row.extend(lx);
        row.extend(ly);
        rows.push(row);
    }
    // clear denominators and take a row basis
    let mut denom = BigInt::one();
    for row in &rows {
        for v in row {
            denom = denom.lcm(v.denom());
        }
    }
    let m = IntMatrix::from_fn(rows.len(), n, |i, j| {
        (&rows[i][j] * BigRational::from_integer(denom.clone())).to_integer()
    });
    let basis_scaled = row_basis(&m);
    if basis_scaled.rows() != n {
        return Err(GlueError::Inconsistent);
    }
    let basis = RatMatrix::from_fn(n, n, |i, j| {
        BigRational::new(basis_scaled[(i, j)].clone(), denom.clone())
    });
    let amb = s.gram().direct_sum(t.gram()).to_rational();
    let new_gram_rat = basis.mul(&amb).mul(&basis.transpose());
    let mut new_gram = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            if !new_gram_rat[(i, j)].is_integer() {
                return Err(GlueError::Inconsistent);
            }
            new_gram[(i, j)] = new_gram_rat[(i, j)].to_integer();
        }
    }
    let lattice = GramLattice::new(new_gram).map_err(|_| GlueError::Inconsistent)?;
    // determinant law det(L) * |H|^2 = det(S) det(T)
    let det_prod = s.det() * t.det();
    let det_l = lattice.det();
    let ratio = &det_prod / &det_l;
    let h2 = ratio.abs();
    let glue_order = h2.sqrt();
    if &glue_order * &glue_order != h2 {
        return Err(GlueError::Inconsistent);
    }
    Ok(Extension { lattice, basis, glue_order })
}

/// Induced action of an isometry on discriminant generators, as coordinate
/// vectors.
pub fn disc_action(
    lf: &LatticeWithIsometry,
    disc: &DiscriminantForm,
) -> Vec<Vec<BigInt>> {
    let ft = lf.f.transpose().to_rational();
    disc.gen_rows
        .iter()
        .map(|row| {
            let img = ft.row_apply(row);
            disc.disc_log(&img, &lf.lattice).expect("isometry preserves the dual")
        })
        .collect()
}

/// Order of the induced action on the discriminant group.
pub fn disc_action_order(lf: &LatticeWithIsometry) -> u64 {
    let disc = match lf.lattice.discriminant_form() {
        Ok(d) => d,
        Err(_) => return 1,
    };
    if disc.orders.is_empty() {
        return 1;
    }
    let ft = lf.f.transpose().to_rational();
    let mut order = 1u64;
    for row in &disc.gen_rows {
        let start = disc.disc_log(row, &lf.lattice).expect("generator is dual");
        let mut cur = row.clone();
        let mut t = 0u64;
        loop {
            cur = ft.row_apply(&cur);
            t += 1;
            let coords = disc.disc_log(&cur, &lf.lattice).expect("dual stays dual");
            if coords == start {
                break;
            }
            if t > lf.order() {
                panic!("discriminant action order exceeds the isometry order");
            }
        }
        order = order.lcm(&t);
    }
    order
}

/// Applies the induced discriminant action to a class given in generator
/// coordinates.
fn disc_apply(
    lf: &LatticeWithIsometry,
    disc: &DiscriminantForm,
    coords: &[BigInt],
) -> Vec<BigInt> {
    let ft = lf.f.transpose().to_rational();
    let lift = disc.lift(coords);
    let img = ft.row_apply(&lift);
    disc.disc_log(&img, &lf.lattice).expect("isometry preserves the dual")
}

/// Solves for coefficients expressing `target` in the subgroup generated by
/// `gens` inside a group with the given generator orders.
fn subgroup_coords(
    gens: &[Vec<BigInt>],
    orders: &[BigInt],
    target: &[BigInt],
) -> Option<Vec<BigInt>> {
    // solve sum a_i gens[i] = target modulo the orders: set up the integer
    // system [gens^T | diag(orders)] x = target
    let k = gens.len();
    let n = orders.len();
    if k == 0 {
        return if target.iter().zip(orders).all(|(t, d)| t.mod_floor_big(d).is_zero()) {
            Some(vec![])
        } else {
            None
        };
    }
    let m = IntMatrix::from_fn(n, k + n, |i, j| {
        if j < k {
            gens[j][i].clone()
        } else if j - k == i {
            orders[i].clone()
        } else {
            BigInt::zero()
        }
    });
    let snf = crate::exact::smith_normal_form(&m);
    // solve m x = target: u m v = s => x = v y with s y = u target
    let rhs = snf.u.col_apply(target);
    let mut y = vec![BigInt::zero(); k + n];
    for (i, r) in rhs.iter().enumerate() {
        let d = if i < snf.s.rows().min(snf.s.cols()) {
            snf.s[(i, i)].clone()
        } else {
            BigInt::zero()
        };
        if d.is_zero() {
            if !r.is_zero() {
                return None;
            }
        } else {
            if !(r % &d).is_zero() {
                return None;
            }
            y[i] = r / &d;
        }
    }
    let x = snf.v.col_apply(&y);
    Some(x[..k].to_vec())
}

/// Equivariant primitive extension: glues two lattices with isometry along
/// an equivariant anti-isometry and extends the isometries.
pub fn equivariant_extension(
    sf: &LatticeWithIsometry,
    tf: &LatticeWithIsometry,
    glue: &GlueMap,
) -> Result<LatticeWithIsometry, GlueError> {
    let ds = sf.lattice.discriminant_form()?;
    let dt = tf.lattice.discriminant_form()?;
    glue.validate(&ds, &dt)?;
    // stability and the equivariant gluing condition on generators
    for (x, y) in glue.source_gens.iter().zip(&glue.target_gens) {
        let sx = disc_apply(sf, &ds, x);
        let coeffs = subgroup_coords(&glue.source_gens, &ds.orders, &sx)
            .ok_or(GlueError::EquivarianceViolation)?;
        // gamma(D_s x) via the coefficients
        let mut gamma_sx = vec![BigInt::zero(); dt.orders.len()];
        for (c, img) in coeffs.iter().zip(&glue.target_gens) {
            for (a, b) in gamma_sx.iter_mut().zip(img) {
                *a += c * b;
            }
        }
        let ty = disc_apply(tf, &dt, y);
        let equal = gamma_sx
            .iter()
            .zip(&ty)
            .zip(&dt.orders)
            .all(|((a, b), d)| (a - b).mod_floor_big(d).is_zero());
        if !equal {
            return Err(GlueError::EquivarianceViolation);
        }
    }
    let ext = primitive_extension(&sf.lattice, &tf.lattice, glue)?;
    // extended isometry in the new basis
    let amb_ft = sf.f.direct_sum(&tf.f).transpose().to_rational();
    let binv = ext.basis.inverse();
    let a = ext.basis.mul(&amb_ft).mul(&binv);
    let mut fmat = IntMatrix::zero(a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if !a[(i, j)].is_integer() {
                return Err(GlueError::EquivarianceViolation);
            }
            fmat[(i, j)] = a[(i, j)].to_integer();
        }
    }
    LatticeWithIsometry::new(ext.lattice, fmat.transpose()).map_err(GlueError::Lattice)
}

/// Summary data of one kernel sublattice in an audit.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub n: u64,
    pub rank: usize,
    pub det: BigInt,
    pub symbol: Option<GenusSymbol>,
}

/// Structural audit of a lattice with isometry: orders, kernel genera,
/// glue bound, and the elementarity predictions for unimodular ambients.
#[derive(Clone, Debug)]
pub struct AuditReport {
    pub order: u64,
    pub char_factors: Vec<(u64, u32)>,
    pub kernels: Vec<KernelReport>,
    pub glue_index: BigInt,
    pub disc_action_order: u64,
    /// Named structural checks with outcomes.
    pub checks: Vec<(String, bool)>,
}

impl AuditReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

fn is_n_elementary(l: &GramLattice, n: u64) -> bool {
    match l.discriminant_form() {
        Ok(d) => d
            .orders
            .iter()
            .all(|o| (BigInt::from(n) % o).is_zero()),
        Err(_) => false,
    }
}

/// Audits a lattice with isometry.
pub fn audit(lf: &LatticeWithIsometry) -> AuditReport {
    let order = lf.order();
    let char_factors = lf.cyclotomic_multiplicities().to_vec();
    let mut kernels = Vec::new();
    let mut prod_det = BigInt::one();
    for &(n, _) in &char_factors {
        let ker = lf.kernel_phi(n);
        let sub = ker.restricted_lattice();
        let det = if sub.rank() == 0 { BigInt::one() } else { sub.det() };
        prod_det *= &det;
        let symbol = if sub.rank() > 0 && sub.is_even() {
            symbol_from_lattice(&sub).ok()
        } else if sub.rank() == 0 {
            Some(GenusSymbol::unimodular(0, 0))
        } else {
            None
        };
        kernels.push(KernelReport { n, rank: sub.rank(), det, symbol });
    }
    let det_l = if lf.lattice.rank() == 0 { BigInt::one() } else { lf.lattice.det() };
    let ratio = (&prod_det / &det_l).abs();
    let glue_index = ratio.sqrt();
    let mut checks: Vec<(String, bool)> = Vec::new();
    checks.push((
        "glue index squared matches determinant ratio".into(),
        &glue_index * &glue_index == ratio,
    ));
    // resultant bound: every prime dividing the glue index divides the
    // resultant of two distinct cyclotomic factors
    let mut bound_ok = true;
    let mut rem = glue_index.clone();
    let mut q = BigInt::from(2);
    while &q * &q <= rem {
        if (&rem % &q).is_zero() {
            let qv = q.to_u64_digits().1[0];
            if !prime_divides_some_resultant(&char_factors, qv) {
                bound_ok = false;
            }
            while (&rem % &q).is_zero() {
                rem /= &q;
            }
        }
        q += 1;
    }
    if rem > BigInt::one() {
        let qv = rem.to_u64_digits().1[0];
        if !prime_divides_some_resultant(&char_factors, qv) {
            bound_ok = false;
        }
    }
    checks.push(("glue order bounded by cyclotomic resultants".into(), bound_ok));
    let disc_order = disc_action_order(lf);
    // elementarity predictions for unimodular ambient lattices
    if lf.lattice.is_unimodular() && lf.lattice.is_even() {
        let divisors: Vec<u64> = char_factors.iter().map(|&(n, _)| n).collect();
        let two_factor = |n: u64| -> GramLattice {
            lf.kernel_phi(n).restricted_lattice()
        };
        if divisors == vec![1, order] && order >= 2 {
            let inv = two_factor(1);
            let coin = two_factor(order);
            match crate::exact::prime_power(order) {
                None => {
                    checks.push(("invariant part unimodular".into(), inv.is_unimodular()));
                    checks.push(("coinvariant part unimodular".into(), coin.is_unimodular()));
                }
                Some((p, _)) => {
                    checks.push((
                        format!("invariant part {p}-elementary"),
                        is_n_elementary(&inv, p),
                    ));
                    checks.push((
                        format!("coinvariant part {p}-elementary"),
                        is_n_elementary(&coin, p),
                    ));
                }
            }
        }
        if order % 2 == 0 && order >= 6 && divisors == vec![1, 2, order] {
            let m = order;
            let inv = two_factor(1);
            let anti = two_factor(2);
            let km = two_factor(m);
            match crate::exact::prime_power(m) {
                Some((2, _)) => {
                    checks.push(("Phi_m kernel 2-elementary".into(), is_n_elementary(&km, 2)));
                    checks.push(("invariant part 4-elementary".into(), is_n_elementary(&inv, 4)));
                    checks.push((
                        "(-1)-part 4-elementary".into(),
                        is_n_elementary(&anti, 4),
                    ));
                }
                _ => {
                    if let Some((p, _)) = crate::exact::prime_power(m / 2) {
                        if p % 2 == 1 {
                            checks.push((
                                format!("Phi_m kernel {p}-elementary"),
                                is_n_elementary(&km, p),
                            ));
                            checks.push((
                                format!("(-1)-part {}-elementary", 2 * p),
                                is_n_elementary(&anti, 2 * p),
                            ));
                            checks.push((
                                "invariant part 2-elementary".into(),
                                is_n_elementary(&inv, 2),
                            ));
                        }
                    } else {
                        checks.push(("Phi_m kernel unimodular".into(), km.is_unimodular()));
                        checks.push((
                            "invariant part 2-elementary".into(),
                            is_n_elementary(&inv, 2),
                        ));
                        checks.push((
                            "(-1)-part 2-elementary".into(),
                            is_n_elementary(&anti, 2),
                        ));
                    }
                }
            }
        }
    }
    AuditReport { order, char_factors, kernels, glue_index, disc_action_order: disc_order, checks }
}

fn prime_divides_some_resultant(factors: &[(u64, u32)], q: u64) -> bool {
    for (i, &(a, _)) in factors.iter().enumerate() {
        for &(b, _) in factors.iter().skip(i + 1) {
            let f = crate::exact::cyclotomic_polynomial(a);
            let g = crate::exact::cyclotomic_polynomial(b);
            let r = f.resultant(&g).to_integer().abs();
            if (r % BigInt::from(q)).is_zero() {
                return true;
            }
        }
    }
    false
}

/// Recovers the restriction of an extended isometry to a polynomial kernel
/// as a standalone lattice with isometry.
pub fn kernel_with_isometry(
    lf: &LatticeWithIsometry,
    q: &Polynomial,
) -> Result<LatticeWithIsometry, crate::lattice::LatticeError> {
    let sub = lf.kernel_sublattice(q);
    lf.restrict_to(&sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big;
    use crate::lattice::CatalogExpr;

    fn gram(expr: &str) -> GramLattice {
        CatalogExpr::parse(expr).unwrap().gram().unwrap()
    }

    #[test]
    fn glue_two_and_minus_two_to_u() {
        let s = gram("<2>");
        let t = gram("<-2>");
        let glue = GlueMap::from_i64(&[vec![1]], &[vec![1]]);
        let ext = primitive_extension(&s, &t, &glue).unwrap();
        assert_eq!(ext.glue_order, big(2));
        assert_eq!(ext.lattice.det(), big(-1));
        assert!(ext.lattice.is_even());
        assert_eq!(ext.lattice.signature(), (1, 1));
        // and the even unimodular lattice of signature (1,1) is U
        let sym = symbol_from_lattice(&ext.lattice).unwrap();
        assert_eq!(sym, GenusSymbol::unimodular(1, 1));
    }

    #[test]
    fn reject_non_anti_isometric() {
        let s = gram("<2>");
        let t = gram("<2>");
        let glue = GlueMap::from_i64(&[vec![1]], &[vec![1]]);
        assert!(matches!(
            primitive_extension(&s, &t, &glue),
            Err(GlueError::NotAntiIsometric)
        ));
    }

    #[test]
    fn trivial_glue_is_direct_sum() {
        let s = gram("A2");
        let t = gram("U");
        let ext = primitive_extension(&s, &t, &GlueMap::trivial()).unwrap();
        assert_eq!(ext.glue_order, big(1));
        assert_eq!(ext.lattice.det(), s.det() * t.det());
    }

    fn order_four_rotation_u2() -> LatticeWithIsometry {
        let l = gram("U+U");
        let f = IntMatrix::from_i64(&[
            vec![0, 0, -1, 0],
            vec![0, 0, 0, -1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
        ]);
        LatticeWithIsometry::new(l, f).unwrap()
    }

    #[test]
    fn equivariant_u4_order_four() {
        let id_part = LatticeWithIsometry::identity(gram("U+U"));
        let rot = order_four_rotation_u2();
        assert_eq!(rot.order(), 4);
        let glued = equivariant_extension(&id_part, &rot, &GlueMap::trivial()).unwrap();
        assert_eq!(glued.order(), 4);
        let report = audit(&glued);
        assert!(report.all_ok(), "audit checks: {:?}", report.checks);
        assert_eq!(report.glue_index, big(1));
        let inv = glued.kernel_phi(1).restricted_lattice();
        assert_eq!(symbol_from_lattice(&inv).unwrap(), GenusSymbol::unimodular(2, 2));
        let coin = glued.kernel_phi(4).restricted_lattice();
        assert_eq!(symbol_from_lattice(&coin).unwrap(), GenusSymbol::unimodular(2, 2));
    }

    #[test]
    fn swap_audit() {
        let l = gram("U+U");
        let f = IntMatrix::from_i64(&[
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
        ]);
        let lf = LatticeWithIsometry::new(l, f).unwrap();
        let report = audit(&lf);
        assert_eq!(report.order, 2);
        // [U^2 : U(2) + U(2)] = |H| = 4; the glue domains are (Z/2)^2 and
        // the prime bound Res(Phi_1, Phi_2) = 2 is respected
        assert_eq!(report.glue_index, big(4));
        assert!(report.all_ok(), "checks: {:?}", report.checks);
    }

    #[test]
    fn identity_audit() {
        let lf = LatticeWithIsometry::identity(gram("U+A2"));
        let report = audit(&lf);
        assert_eq!(report.order, 1);
        assert_eq!(report.glue_index, big(1));
        assert_eq!(report.disc_action_order, 1);
    }
}
