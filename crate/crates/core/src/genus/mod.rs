//! Genus symbols of even Z-lattices in Conway-Sloane style notation, with
//! exact computation from Gram matrices and nonemptiness criteria.

mod exists;
mod padic;
mod symbol;

pub use exists::{
    class_count, definite_small_class_count, exists_even_unimodular, exists_p_elementary,
    exists_two_adic_mixed, ClassCount, TwoShape,
};
pub use padic::{padic_jordan, scale_summary, JordanPiece, ScaleData};
pub use symbol::{
    symbol_from_disc_form, symbol_from_lattice, GenusError, GenusSymbol, OddBlockSym, TwoBlockSym,
};
