//! Regeneration of the published classification tables and figures.

use super::deformation::{deformation_data, TypeName};
use super::enumerate::{enumerate_nontrivial, enumerate_trivial};
use super::ClassificationRow;
use num_traits::Signed;

/// The four tables of genus pairs for trivial discriminant actions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TableId {
    /// Kum_n, Mukai lattice U^4.
    T1a,
    /// OG6, Mukai lattice U^5.
    T1b,
    /// K3^[n], Mukai lattice U^4 + E8^2.
    T1c,
    /// OG10, Mukai lattice U^5 + E8^2.
    T1d,
}

/// The two figures of BBF-level pairs for nontrivial discriminant actions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FigureId {
    /// Twice odd prime power orders.
    F2,
    /// Two-power orders.
    F3,
}

impl TableId {
    pub fn parse(s: &str) -> Option<TableId> {
        match s {
            "1a" => Some(TableId::T1a),
            "1b" => Some(TableId::T1b),
            "1c" => Some(TableId::T1c),
            "1d" => Some(TableId::T1d),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TableId::T1a => "1a",
            TableId::T1b => "1b",
            TableId::T1c => "1c",
            TableId::T1d => "1d",
        }
    }

    fn representative_type(&self) -> TypeName {
        match self {
            TableId::T1a => TypeName::Kum(2),
            TableId::T1b => TypeName::OG6,
            TableId::T1c => TypeName::K3n(2),
            TableId::T1d => TypeName::OG10,
        }
    }

    pub fn caption(&self) -> &'static str {
        match self {
            TableId::T1a => "Kum_n (n >= 2); M = U^4",
            TableId::T1b => "OG6; M = U^5",
            TableId::T1c => "K3^[n] (n >= 2); M = U^4+E8^2",
            TableId::T1d => "OG10; M = U^5+E8^2",
        }
    }

    pub fn has_induced_column(&self) -> bool {
        matches!(self, TableId::T1a | TableId::T1c)
    }
}

/// Rows of one trivial-action table, in the published layout order.
pub fn table_rows(id: TableId) -> Vec<ClassificationRow> {
    let t = deformation_data(id.representative_type());
    let mut rows = enumerate_trivial(&t);
    // published layout: group by the odd prime of the decoration
    // (unimodular and 2-adic rows first), then by invariant negative
    // signature, then by decoration size
    rows.sort_by_key(|r| {
        let primes = r.inv_genus.primes();
        let block = primes.iter().copied().find(|&p| p != 2).unwrap_or(0);
        let inv_det = r.inv_genus.det().abs();
        let coinv_det = r.coinv_genus.det().abs();
        (block, r.inv_genus.sig.1, inv_det, coinv_det)
    });
    rows
}

/// All deformation types contributing to the nontrivial-action figures.
pub fn all_known_types() -> Vec<TypeName> {
    let mut out = vec![TypeName::OG6, TypeName::OG10];
    for n in 2..=25 {
        out.push(TypeName::K3n(n));
    }
    for n in 2..=7 {
        out.push(TypeName::Kum(n));
    }
    out
}

/// Rows of one nontrivial-action figure, ordered by deformation type as
/// published, then by order and invariant rank.
pub fn figure_rows(id: FigureId) -> Vec<ClassificationRow> {
    let mut rows: Vec<(u32, ClassificationRow)> = Vec::new();
    for name in all_known_types() {
        let t = deformation_data(name);
        for row in enumerate_nontrivial(&t) {
            let two_power = row.m.iter().all(|&m| m.is_power_of_two());
            let wanted = match id {
                FigureId::F2 => !two_power,
                FigureId::F3 => two_power,
            };
            if wanted {
                let class = match name {
                    TypeName::OG6 | TypeName::OG10 => 0,
                    TypeName::K3 | TypeName::K3n(_) => 1,
                    TypeName::Kum(_) => 2,
                };
                rows.push((class, row));
            }
        }
    }
    rows.sort_by_key(|(class, r)| (r.m[0], *class, r.n.unwrap_or(0)));
    rows.into_iter().map(|(_, r)| r).collect()
}

fn md_escape(s: &str) -> String {
    s.replace('|', "\\|")
}

/// Markdown rendition of a trivial-action table in the published layout.
pub fn table_markdown(id: TableId) -> String {
    let rows = table_rows(id);
    let mut out = String::new();
    out.push_str(&format!("### Table {} ({})\n\n", id.name(), id.caption()));
    if id.has_induced_column() {
        out.push_str("| m | M^g | M_g | Induced |\n|---|---|---|---|\n");
    } else {
        out.push_str("| m | M^g | M_g |\n|---|---|---|\n");
    }
    for r in rows {
        let ms = r.m.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
        if id.has_induced_column() {
            out.push_str(&format!(
                "| {} | {} | {} | {} |\n",
                ms,
                md_escape(&r.inv_symbol),
                md_escape(&r.coinv_symbol),
                r.induced.map(|k| k.to_string()).unwrap_or_default(),
            ));
        } else {
            out.push_str(&format!(
                "| {} | {} | {} |\n",
                ms,
                md_escape(&r.inv_symbol),
                md_escape(&r.coinv_symbol),
            ));
        }
    }
    out
}

/// Markdown rendition of a nontrivial-action figure.
pub fn figure_markdown(id: FigureId) -> String {
    let rows = figure_rows(id);
    let mut out = String::new();
    let caption = match id {
        FigureId::F2 => "Nontrivial discriminant action - twice odd prime powers",
        FigureId::F3 => "Nontrivial discriminant action - powers of 2",
    };
    out.push_str(&format!("### Figure {} ({})\n\n", if id == FigureId::F2 { 2 } else { 3 }, caption));
    out.push_str("| T | m | Lambda^h | Lambda_h |\n|---|---|---|---|\n");
    for r in rows {
        let ms = r.m.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
        out.push_str(&format!(
            "| {} | {} | {} | {} |\n",
            r.ty,
            ms,
            md_escape(&r.lambda_inv.as_ref().map(|d| d.display()).unwrap_or_default()),
            md_escape(&r.lambda_coinv.as_ref().map(|d| d.display()).unwrap_or_default()),
        ));
    }
    out
}

/// All tables and figures as one markdown document.
pub fn tables_markdown() -> String {
    let mut out = String::new();
    for id in [TableId::T1a, TableId::T1b, TableId::T1c, TableId::T1d] {
        out.push_str(&table_markdown(id));
        out.push('\n');
    }
    out.push_str(&figure_markdown(FigureId::F2));
    out.push('\n');
    out.push_str(&figure_markdown(FigureId::F3));
    out
}
