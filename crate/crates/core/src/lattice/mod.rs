//! Integral Z-lattices presented by exact Gram matrices.

mod catalog;

pub use catalog::{CatalogExpr, CatalogTerm, CatalogBlock, CatalogError};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{
    cyclotomic_factorization, right_kernel, smith_normal_form, IntMatrix, Polynomial, RatMatrix,
};
use crate::torsion::TorsionQuadraticForm;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Gram matrix must be symmetric")]
    NotSymmetric,
    #[error("Gram matrix must be nondegenerate")]
    Degenerate,
    #[error("operation requires an even lattice")]
    OddLattice,
    #[error("zero vector has no divisibility")]
    ZeroVector,
    #[error("matrix is not an isometry of the lattice")]
    NotIsometry,
    #[error("isometry does not have finite order")]
    InfiniteOrder,
}

/// An integral lattice given by the Gram matrix of a basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GramLattice {
    gram: IntMatrix,
    label: Option<String>,
}

impl GramLattice {
    pub fn new(gram: IntMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if gram.rows() > 0 && gram.det().is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(GramLattice { gram, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn zero_rank() -> Self {
        GramLattice { gram: IntMatrix::zero(0, 0), label: None }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::new(IntMatrix::from_i64(rows)).expect("valid Gram data")
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    /// All diagonal entries even.
    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| (&self.gram[(i, i)] % BigInt::from(2)).is_zero())
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Exact inertia counts (positive, negative).
    pub fn signature(&self) -> (usize, usize) {
        if self.rank() == 0 {
            return (0, 0);
        }
        self.gram.to_rational().signature()
    }

    pub fn direct_sum(&self, other: &GramLattice) -> GramLattice {
        GramLattice { gram: self.gram.direct_sum(&other.gram), label: None }
    }

    pub fn rescale(&self, a: i64) -> GramLattice {
        assert!(a != 0);
        GramLattice { gram: self.gram.scale(&BigInt::from(a)), label: None }
    }

    /// Pairing of two row vectors in basis coordinates.
    pub fn pair(&self, v: &[BigInt], w: &[BigInt]) -> BigInt {
        let gv = self.gram.row_apply(v);
        gv.iter().zip(w).map(|(a, b)| a * b).sum()
    }

    /// Positive generator of the ideal b(v, L).
    pub fn divisibility(&self, v: &[BigInt]) -> Result<BigInt, LatticeError> {
        use num_integer::Integer;
        if v.iter().all(|x| x.is_zero()) {
            return Err(LatticeError::ZeroVector);
        }
        let gv = self.gram.row_apply(v);
        let mut g = BigInt::zero();
        for x in &gv {
            g = g.gcd(x);
        }
        Ok(g)
    }

    /// Discriminant form of an even lattice together with lift data.
    pub fn discriminant_form(&self) -> Result<DiscriminantForm, LatticeError> {
        if !self.is_even() {
            return Err(LatticeError::OddLattice);
        }
        let n = self.rank();
        if n == 0 {
            return Ok(DiscriminantForm {
                form: TorsionQuadraticForm::trivial(),
                gen_rows: vec![],
                orders: vec![],
                snf_v: IntMatrix::identity(0),
                gram_inv: RatMatrix::identity(0),
            });
        }
        let snf = smith_normal_form(&self.gram);
        let gram_inv = self.gram.to_rational().inverse();
        let v_inv_rat = snf.v_inv.to_rational();
        let mut gen_rows = Vec::new();
        let mut orders = Vec::new();
        for i in 0..n {
            let d = snf.s[(i, i)].clone();
            if d.abs().is_one() {
                continue;
            }
            // generator: row i of V^{-1} G^{-1}
            let y: Vec<BigRational> =
                (0..n).map(|j| v_inv_rat[(i, j)].clone()).collect();
            let w = gram_inv.transpose().row_apply(&y); // row * G^{-1}
            gen_rows.push(w);
            orders.push(d.abs());
        }
        let k = orders.len();
        let mut gram_q = RatMatrix::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                let val = pair_rat(&self.gram, &gen_rows[i], &gen_rows[j]);
                gram_q[(i, j)] = if i == j {
                    crate::exact::reduce_mod(&val, 2)
                } else {
                    crate::exact::reduce_mod(&val, 1)
                };
            }
        }
        let form = TorsionQuadraticForm::new(orders.clone(), gram_q)
            .expect("discriminant form of a nondegenerate even lattice");
        Ok(DiscriminantForm { form, gen_rows, orders, snf_v: snf.v, gram_inv })
    }
}

fn pair_rat(gram: &IntMatrix, v: &[BigRational], w: &[BigRational]) -> BigRational {
    let n = gram.rows();
    let mut acc = BigRational::zero();
    for i in 0..n {
        if v[i].is_zero() {
            continue;
        }
        for j in 0..n {
            if w[j].is_zero() {
                continue;
            }
            acc += &v[i] * BigRational::from_integer(gram[(i, j)].clone()) * &w[j];
        }
    }
    acc
}

/// Discriminant form together with explicit rational lifts of its
/// generators, used for glue computations and discrete logarithms.
pub struct DiscriminantForm {
    pub form: TorsionQuadraticForm,
    /// Rational rows (lattice coordinates) representing the generators.
    pub gen_rows: Vec<Vec<BigRational>>,
    pub orders: Vec<BigInt>,
    snf_v: IntMatrix,
    gram_inv: RatMatrix,
}

impl DiscriminantForm {
    /// Expresses a dual vector (rational row in lattice coordinates) in the
    /// discriminant generators. Returns None if the vector is not in the
    /// dual lattice.
    pub fn disc_log(&self, w: &[BigRational], lattice: &GramLattice) -> Option<Vec<BigInt>> {
        let n = lattice.rank();
        // y = w * G must be integral for dual vectors
        let mut y = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = BigRational::zero();
            for i in 0..n {
                acc += &w[i] * BigRational::from_integer(lattice.gram()[(i, j)].clone());
            }
            if !acc.is_integer() {
                return None;
            }
            y.push(acc.to_integer());
        }
        // z = y * V, coordinates modulo the elementary divisors; in the
        // divisor chain the unit entries come first
        let z = self.snf_v.row_apply(&y);
        let units = self.snf_v.cols() - self.orders.len();
        let mut out = Vec::new();
        for (gi, order) in self.orders.iter().enumerate() {
            use crate::exact::ModFloor;
            out.push(z[units + gi].mod_floor_big(order));
        }
        Some(out)
    }

    /// Canonical rational lift of a class given in generator coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigRational> {
        let n = self.gram_inv.rows();
        let mut w = vec![BigRational::zero(); n];
        for (c, row) in coords.iter().zip(&self.gen_rows) {
            for j in 0..n {
                w[j] += BigRational::from_integer(c.clone()) * &row[j];
            }
        }
        w
    }
}

/// A lattice equipped with a finite-order isometry. The matrix acts on
/// column vectors and satisfies f^T G f = G.
#[derive(Clone, Debug)]
pub struct LatticeWithIsometry {
    pub lattice: GramLattice,
    pub f: IntMatrix,
    order: u64,
    char_factors: Vec<(u64, u32)>,
}

impl LatticeWithIsometry {
    pub fn new(lattice: GramLattice, f: IntMatrix) -> Result<Self, LatticeError> {
        let g = lattice.gram();
        if f.rows() != lattice.rank() || !f.is_square() {
            return Err(LatticeError::NotIsometry);
        }
        if lattice.rank() == 0 {
            return Ok(LatticeWithIsometry { lattice, f, order: 1, char_factors: vec![] });
        }
        if f.transpose().mul(g).mul(&f) != *g {
            return Err(LatticeError::NotIsometry);
        }
        let cp = Polynomial::from_bigint_coeffs(f.char_poly());
        let char_factors =
            cyclotomic_factorization(&cp).map_err(|_| LatticeError::InfiniteOrder)?;
        let order = char_factors.iter().fold(1u64, |acc, &(n, _)| num_integer::lcm(acc, n));
        Ok(LatticeWithIsometry { lattice, f, order, char_factors })
    }

    pub fn identity(lattice: GramLattice) -> Self {
        let n = lattice.rank();
        Self::new(lattice, IntMatrix::identity(n)).expect("identity is an isometry")
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Multiplicities d_n in the factorisation of the characteristic
    /// polynomial into cyclotomic polynomials.
    pub fn cyclotomic_multiplicities(&self) -> &[(u64, u32)] {
        &self.char_factors
    }

    /// The primitive sublattice ker q(f) for a monic integer polynomial q.
    pub fn kernel_sublattice(&self, q: &Polynomial) -> SublatticeEmbedding {
        let m = q.eval_matrix(&self.f);
        let basis = right_kernel(&m);
        SublatticeEmbedding::new(self.lattice.clone(), basis)
    }

    /// Kernel of Phi_n(f).
    pub fn kernel_phi(&self, n: u64) -> SublatticeEmbedding {
        self.kernel_sublattice(&crate::exact::cyclotomic_polynomial(n))
    }

    /// Invariant sublattice: kernel of f - 1.
    pub fn invariant_sublattice(&self) -> SublatticeEmbedding {
        self.kernel_phi(1)
    }

    /// Coinvariant sublattice: orthogonal complement of the invariant part.
    pub fn coinvariant_sublattice(&self) -> SublatticeEmbedding {
        self.invariant_sublattice().orthogonal_complement()
    }

    /// Restriction of f to a stable sublattice, in sublattice coordinates.
    pub fn restrict_to(&self, sub: &SublatticeEmbedding) -> Result<LatticeWithIsometry, LatticeError> {
        // rows of basis * f^T expressed in the basis again
        let bt = sub.basis().to_rational();
        let ft = self.f.transpose().to_rational();
        let img = bt.mul(&ft);
        // solve X * basis = img
        let pseudo = solve_rows_in_basis(&img, &bt).ok_or(LatticeError::NotIsometry)?;
        let restricted = LatticeWithIsometry::new(sub.restricted_lattice(), pseudo)?;
        Ok(restricted)
    }
}

/// Solves X * B = A for integer X when the rows of A lie in the row span of B.
fn solve_rows_in_basis(a: &RatMatrix, b: &RatMatrix) -> Option<IntMatrix> {
    // X = A * B^T (B B^T)^{-1} when B has full row rank
    let bbt = b.mul(&b.transpose());
    let inv = bbt.inverse();
    let x = a.mul(&b.transpose()).mul(&inv);
    let mut out = IntMatrix::zero(x.rows(), x.cols());
    for i in 0..x.rows() {
        for j in 0..x.cols() {
            if !x[(i, j)].is_integer() {
                return None;
            }
            out[(i, j)] = x[(i, j)].to_integer();
        }
    }
    // verify
    if &out.to_rational().mul(b) == a {
        // transpose: out maps row-index coordinates; column action matrix is out^T
        Some(out.transpose())
    } else {
        None
    }
}

/// A primitive sublattice presented by basis rows in ambient coordinates.
#[derive(Clone, Debug)]
pub struct SublatticeEmbedding {
    ambient: GramLattice,
    basis: IntMatrix,
    gram_restricted: IntMatrix,
}

impl SublatticeEmbedding {
    pub fn new(ambient: GramLattice, basis: IntMatrix) -> Self {
        let g = basis.mul(ambient.gram()).mul(&basis.transpose());
        SublatticeEmbedding { ambient, basis, gram_restricted: g }
    }

    pub fn ambient(&self) -> &GramLattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn gram_restricted(&self) -> &IntMatrix {
        &self.gram_restricted
    }

    pub fn restricted_lattice(&self) -> GramLattice {
        if self.rank() == 0 {
            return GramLattice::zero_rank();
        }
        GramLattice::new(self.gram_restricted.clone()).expect("restricted Gram")
    }

    /// Orthogonal complement inside the ambient lattice; always primitive.
    pub fn orthogonal_complement(&self) -> SublatticeEmbedding {
        if self.rank() == 0 {
            let n = self.ambient.rank();
            return SublatticeEmbedding::new(self.ambient.clone(), IntMatrix::identity(n));
        }
        let bg = self.basis.mul(self.ambient.gram());
        let basis = right_kernel(&bg);
        SublatticeEmbedding::new(self.ambient.clone(), basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big;

    fn u_lattice() -> GramLattice {
        GramLattice::from_i64(&[vec![0, 1], vec![1, 0]])
    }

    #[test]
    fn signatures() {
        assert_eq!(u_lattice().signature(), (1, 1));
        let e8 = CatalogExpr::parse("E8").unwrap().gram().unwrap();
        assert_eq!(e8.signature(), (0, 8));
        assert_eq!(e8.det(), big(1));
        let big_one = CatalogExpr::parse("U^4+E8^2").unwrap().gram().unwrap();
        assert_eq!(big_one.signature(), (4, 20));
    }

    #[test]
    fn divisibility_examples() {
        let u = u_lattice();
        assert_eq!(u.divisibility(&[big(1), big(0)]).unwrap(), big(1));
        let four = GramLattice::from_i64(&[vec![4]]);
        assert_eq!(four.divisibility(&[big(1)]).unwrap(), big(4));
        let l = GramLattice::from_i64(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(l.divisibility(&[big(1), big(1)]).unwrap(), big(2));
        assert_eq!(l.divisibility(&[big(0), big(0)]), Err(LatticeError::ZeroVector));
    }

    #[test]
    fn disc_form_orders() {
        let six = GramLattice::from_i64(&[vec![6]]);
        let d = six.discriminant_form().unwrap();
        assert_eq!(d.orders, vec![big(6)]);
        // q(gen) = 1/6 mod 2
        assert_eq!(d.form.q_value(&[big(1)]), crate::exact::rat(1, 6));
        let a2 = CatalogExpr::parse("A2").unwrap().gram().unwrap();
        let d = a2.discriminant_form().unwrap();
        assert_eq!(d.orders, vec![big(3)]);
        assert_eq!(d.form.q_value(&[big(1)]), crate::exact::rat(4, 3));
    }

    #[test]
    fn kernels_of_swap() {
        // U + U with the swap of the two summands
        let l = u_lattice().direct_sum(&u_lattice());
        let f = IntMatrix::from_i64(&[
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 0],
        ]);
        let lf = LatticeWithIsometry::new(l, f).unwrap();
        assert_eq!(lf.order(), 2);
        let inv = lf.kernel_phi(1);
        assert_eq!(inv.rank(), 2);
        // invariant part is U(2)
        let u2 = IntMatrix::from_i64(&[vec![0, 2], vec![2, 0]]);
        let g = inv.gram_restricted();
        assert_eq!(g.det(), u2.det());
        assert!(g.to_rational().signature() == (1, 1));
        let anti = lf.kernel_phi(2);
        assert_eq!(anti.rank(), 2);
        let comp = inv.orthogonal_complement();
        assert_eq!(comp.rank(), 2);
        assert_eq!(comp.gram_restricted().det(), anti.gram_restricted().det());
    }

    #[test]
    fn identity_kernel_is_everything() {
        let m = CatalogExpr::parse("U+A2").unwrap().gram().unwrap();
        let lf = LatticeWithIsometry::identity(m.clone());
        let inv = lf.invariant_sublattice();
        assert_eq!(inv.rank(), 4);
        assert_eq!(inv.restricted_lattice().det(), m.det());
        assert_eq!(lf.coinvariant_sublattice().rank(), 0);
    }
}
