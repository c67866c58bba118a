//! Bounded search for explicit representatives of genera among direct sums
//! of catalog blocks.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::genus::GenusSymbol;
use crate::lattice::{CatalogBlock, CatalogExpr, CatalogTerm};
use crate::torsion::TorsionQuadraticForm;

/// Outcome of the representative search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Representative {
    Expression(CatalogExpr),
    SymbolOnly,
}

struct SearchBlock {
    term: CatalogTerm,
    sig: (usize, usize),
    det: BigInt,
    disc: TorsionQuadraticForm,
}

fn block_data(term: CatalogTerm) -> Option<SearchBlock> {
    match term.block {
        CatalogBlock::L8_5 | CatalogBlock::L8_13 => {
            // symbol-level blocks: negative definite rank 8, determinant
            // 5 resp. 13, with the non-residue discriminant class
            let (p, u) = if term.block == CatalogBlock::L8_5 { (5u64, 2u64) } else { (13, 2) };
            let disc =
                crate::torsion::form_of_blocks(&[crate::torsion::Block::Odd { p, k: 1, u }]);
            Some(SearchBlock {
                term,
                sig: (0, 8),
                det: BigInt::from(p),
                disc,
            })
        }
        _ => {
            let expr = CatalogExpr { terms: vec![term] };
            let gram = expr.gram().ok()?;
            if !gram.is_even() {
                return None;
            }
            let disc = gram.discriminant_form().ok()?.form;
            Some(SearchBlock { term, sig: gram.signature(), det: gram.det(), disc })
        }
    }
}

fn candidates() -> &'static Vec<SearchBlock> {
    static CACHE: OnceLock<Vec<SearchBlock>> = OnceLock::new();
    CACHE.get_or_init(|| {
        let mut terms: Vec<CatalogTerm> = Vec::new();
        let t = |block: CatalogBlock, scale: i64| CatalogTerm { block, scale };
        terms.push(t(CatalogBlock::U, 1));
        terms.push(t(CatalogBlock::U, 2));
        terms.push(t(CatalogBlock::U, 4));
        for n in 2..=8 {
            terms.push(t(CatalogBlock::A(n), 1));
        }
        for n in 4..=8 {
            terms.push(t(CatalogBlock::D(n), 1));
        }
        for n in 6..=8 {
            terms.push(t(CatalogBlock::E(n), 1));
        }
        terms.push(t(CatalogBlock::D(4), 2));
        terms.push(t(CatalogBlock::E(7), 2));
        terms.push(t(CatalogBlock::E(8), 2));
        terms.push(t(CatalogBlock::L8_5, 1));
        terms.push(t(CatalogBlock::L8_13, 1));
        terms.push(t(CatalogBlock::H5, 1));
        terms.push(t(CatalogBlock::K7, 1));
        terms.push(t(CatalogBlock::K23, 1));
        for a in [2i64, 4, 6, 8, -2, -4, -6, -8] {
            terms.push(t(CatalogBlock::Scalar(a), 1));
        }
        terms.into_iter().filter_map(block_data).collect()
    })
}

/// Genus symbol of a catalog expression, including the symbol-level
/// blocks without fixed Gram matrices.
pub fn catalog_genus(expr: &CatalogExpr) -> Option<GenusSymbol> {
    let mut sig = (0usize, 0usize);
    let mut disc = TorsionQuadraticForm::trivial();
    for term in &expr.terms {
        let b = block_data(*term)?;
        sig = (sig.0 + b.sig.0, sig.1 + b.sig.1);
        disc = disc.direct_sum(&b.disc);
    }
    Some(crate::genus::symbol_from_disc_form(sig, &disc))
}

/// Finds the first direct sum of at most eight catalog blocks lying in the
/// given genus, in a fixed deterministic search order.
pub fn find_representative(sym: &GenusSymbol) -> Representative {
    match representative_blocks(sym) {
        Some(terms) => Representative::Expression(CatalogExpr { terms }),
        None => Representative::SymbolOnly,
    }
}

/// The block multiset of the representative, if one exists.
pub fn representative_blocks(sym: &GenusSymbol) -> Option<Vec<CatalogTerm>> {
    if sym.rank() == 0 {
        return Some(vec![]);
    }
    let cands = candidates();
    let target_disc = sym.disc_form();
    let target_det = sym.det();
    let mut picked: Vec<usize> = Vec::new();
    fn dfs(
        cands: &[SearchBlock],
        start: usize,
        lp: usize,
        lm: usize,
        det_rem: &BigInt,
        depth: usize,
        picked: &mut Vec<usize>,
        target_disc: &TorsionQuadraticForm,
    ) -> bool {
        if lp == 0 && lm == 0 {
            if !det_rem.abs().is_one() {
                return false;
            }
            // determinant sign already accounted for by signature
            let mut acc = TorsionQuadraticForm::trivial();
            for &i in picked.iter() {
                acc = acc.direct_sum(&cands[i].disc);
            }
            return acc.is_isometric(target_disc);
        }
        if depth == 8 {
            return false;
        }
        for i in start..cands.len() {
            let b = &cands[i];
            if b.sig.0 > lp || b.sig.1 > lm {
                continue;
            }
            if !(det_rem % &b.det).is_zero() {
                continue;
            }
            picked.push(i);
            let nd = det_rem / &b.det;
            if dfs(cands, i, lp - b.sig.0, lm - b.sig.1, &nd, depth + 1, picked, target_disc) {
                return true;
            }
            picked.pop();
        }
        false
    }
    if dfs(
        cands,
        0,
        sym.sig.0,
        sym.sig.1,
        &target_det,
        0,
        &mut picked,
        &target_disc,
    ) {
        Some(picked.into_iter().map(|i| cands[i].term).collect())
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rep_of(sym: &str) -> String {
        let g = GenusSymbol::parse(sym).unwrap();
        match find_representative(&g) {
            Representative::Expression(e) => e.to_string(),
            Representative::SymbolOnly => "(symbol only)".into(),
        }
    }

    #[test]
    fn unimodular_reps() {
        assert_eq!(rep_of("II_(2,18)"), "U^2+E8^2");
        assert_eq!(rep_of("II_(1,1)"), "U");
        assert_eq!(rep_of("II_(1,9)"), "U+E8");
    }

    #[test]
    fn decorated_reps() {
        assert_eq!(rep_of("II_(1,1)2_II^2"), "U(2)");
        assert_eq!(rep_of("II_(2,0)2^2_2"), "<2>^2");
        // the rank-17 determinant-2 genus: first found uses U
        assert_eq!(rep_of("II_(1,16)2^1_1"), "U+E7+E8");
    }

    #[test]
    fn symbol_only_blocks() {
        // negative definite rank 8 det 5: matched by the L8_5 block
        let g = GenusSymbol::parse("II_(2,10)5^-1").unwrap();
        let r = representative_blocks(&g).unwrap();
        let e = CatalogExpr { terms: r };
        assert_eq!(e.to_string(), "U^2+L8_5");
        assert!(!e.has_gram());
    }
}
