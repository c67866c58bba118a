//! The classification engine: enumerates, for each known IHS deformation
//! type and finite order, the admissible invariant/coinvariant genus pairs
//! on the associated even unimodular lattice, restricts to the BBF level,
//! counts conjugacy classes and computes induced-twist indices.

mod deformation;
mod enumerate;
mod represent;
mod tables;

pub use deformation::{deformation_data, DeformationType, TypeName};
pub use enumerate::{
    enumerate_nontrivial, enumerate_trivial, min_induced_twist, nontrivial_candidate_orders,
    order_filter, symbol_exists, DiscAction,
};
pub use represent::{catalog_genus, find_representative, representative_blocks, Representative};
pub use tables::{
    all_known_types, figure_markdown, figure_rows, table_markdown, table_rows, tables_markdown,
    FigureId, TableId,
};

use serde::Serialize;

use crate::genus::GenusSymbol;

/// Description of one lattice in a classification row: a catalog
/// expression when a representative was found, and always the genus symbol.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LatticeDescriptor {
    pub expr: Option<String>,
    pub symbol: String,
}

impl LatticeDescriptor {
    pub fn new(symbol: &GenusSymbol) -> Self {
        match find_representative(symbol) {
            Representative::Expression(e) => {
                LatticeDescriptor { expr: Some(e.to_string()), symbol: symbol.to_string() }
            }
            Representative::SymbolOnly => {
                LatticeDescriptor { expr: None, symbol: symbol.to_string() }
            }
        }
    }

    pub fn display(&self) -> String {
        self.expr.clone().unwrap_or_else(|| self.symbol.clone())
    }
}

/// One row of a classification table.
#[derive(Clone, Debug, Serialize)]
pub struct ClassificationRow {
    /// Deformation type display name, e.g. "K3^[3]" or "Kum_2".
    #[serde(rename = "type")]
    pub ty: String,
    pub n: Option<u32>,
    /// Merged list of orders sharing this lattice data.
    pub m: Vec<u64>,
    pub disc_action: String,
    pub inv_symbol: String,
    pub coinv_symbol: String,
    pub lambda_inv: Option<LatticeDescriptor>,
    pub lambda_coinv: Option<LatticeDescriptor>,
    /// Exact class count, or null when unknown.
    pub classes: Option<u64>,
    pub induced: Option<u32>,
    pub notes: Option<String>,
    #[serde(skip)]
    pub inv_genus: GenusSymbol,
    #[serde(skip)]
    pub coinv_genus: GenusSymbol,
}
