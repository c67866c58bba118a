use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use super::GramLattice;
use crate::exact::IntMatrix;

/// A named building block of the lattice catalog.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum CatalogBlock {
    U,
    A(u32),
    D(u32),
    E(u32),
    /// Rank-1 lattice <a>.
    Scalar(i64),
    H5,
    K7,
    K23,
    /// Negative definite of rank 8 and determinant 5; no Gram fixed.
    L8_5,
    /// Negative definite of rank 8 and determinant 13; no Gram fixed.
    L8_13,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct CatalogTerm {
    pub block: CatalogBlock,
    /// Rescaling factor applied to the block's bilinear form.
    pub scale: i64,
}

/// A direct sum of catalog blocks, e.g. `U^2+A2(1)+E8`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct CatalogExpr {
    pub terms: Vec<CatalogTerm>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown symbol in catalog expression: {0}")]
    UnknownSymbol(String),
    #[error("invalid parameter in catalog expression: {0}")]
    InvalidParameter(String),
    #[error("{0} is only known at the level of its genus symbol")]
    SymbolOnly(String),
}

impl CatalogBlock {
    fn rank(&self) -> usize {
        match self {
            CatalogBlock::U => 2,
            CatalogBlock::A(n) => *n as usize,
            CatalogBlock::D(n) => *n as usize,
            CatalogBlock::E(n) => *n as usize,
            CatalogBlock::Scalar(_) => 1,
            CatalogBlock::H5 | CatalogBlock::K7 | CatalogBlock::K23 => 2,
            CatalogBlock::L8_5 | CatalogBlock::L8_13 => 8,
        }
    }

    fn gram(&self) -> Result<IntMatrix, CatalogError> {
        match self {
            CatalogBlock::U => Ok(IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]])),
            CatalogBlock::A(n) => {
                let n = *n as usize;
                Ok(IntMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        BigInt::from(-2)
                    } else if i.abs_diff(j) == 1 {
                        BigInt::from(1)
                    } else {
                        BigInt::from(0)
                    }
                }))
            }
            CatalogBlock::D(n) => {
                // chain 0-1-...-(n-2) with n-1 attached to n-3
                let n = *n as usize;
                Ok(IntMatrix::from_fn(n, n, |i, j| {
                    if i == j {
                        BigInt::from(-2)
                    } else if (i < n - 1 && j < n - 1 && i.abs_diff(j) == 1)
                        || (i == n - 1 && j == n - 3)
                        || (j == n - 1 && i == n - 3)
                    {
                        BigInt::from(1)
                    } else {
                        BigInt::from(0)
                    }
                }))
            }
            CatalogBlock::E(n) => {
                // Bourbaki numbering: chain 1-3-4-5-...-n with node 2 attached to 4
                let n = *n as usize;
                Ok(IntMatrix::from_fn(n, n, |i, j| {
                    let (a, b) = (i + 1, j + 1);
                    let adjacent = matches!(
                        (a.min(b), a.max(b)),
                        (1, 3) | (2, 4) | (3, 4)
                    ) || (a.min(b) >= 4 && a.max(b) == a.min(b) + 1);
                    if i == j {
                        BigInt::from(-2)
                    } else if adjacent {
                        BigInt::from(1)
                    } else {
                        BigInt::from(0)
                    }
                }))
            }
            CatalogBlock::Scalar(a) => Ok(IntMatrix::from_i64(&[vec![*a]])),
            CatalogBlock::H5 => Ok(IntMatrix::from_i64(&[vec![2, 1], vec![1, -2]])),
            CatalogBlock::K7 => Ok(IntMatrix::from_i64(&[vec![-4, 1], vec![1, -2]])),
            CatalogBlock::K23 => Ok(IntMatrix::from_i64(&[vec![-12, 1], vec![1, -2]])),
            CatalogBlock::L8_5 => Err(CatalogError::SymbolOnly("L8_5".into())),
            CatalogBlock::L8_13 => Err(CatalogError::SymbolOnly("L8_13".into())),
        }
    }
}

impl CatalogExpr {
    pub fn parse(s: &str) -> Result<CatalogExpr, CatalogError> {
        let mut terms = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            if part.is_empty() {
                return Err(CatalogError::UnknownSymbol(s.to_string()));
            }
            let (body, power) = match part.split_once('^') {
                Some((b, p)) => {
                    let pw: u32 = p
                        .trim()
                        .parse()
                        .map_err(|_| CatalogError::InvalidParameter(part.to_string()))?;
                    if pw == 0 {
                        return Err(CatalogError::InvalidParameter(part.to_string()));
                    }
                    (b.trim(), pw)
                }
                None => (part, 1),
            };
            let (name, scale) = split_scale(body)?;
            let block = parse_block(name)?;
            if scale == 0 {
                return Err(CatalogError::InvalidParameter(part.to_string()));
            }
            let term = CatalogTerm { block, scale };
            validate(&term)?;
            for _ in 0..power {
                terms.push(term);
            }
        }
        Ok(CatalogExpr { terms })
    }

    pub fn rank(&self) -> usize {
        self.terms.iter().map(|t| t.block.rank()).sum()
    }

    /// True when every block has an explicit Gram matrix.
    pub fn has_gram(&self) -> bool {
        !self
            .terms
            .iter()
            .any(|t| matches!(t.block, CatalogBlock::L8_5 | CatalogBlock::L8_13))
    }

    pub fn gram(&self) -> Result<GramLattice, CatalogError> {
        let mut acc = IntMatrix::zero(0, 0);
        for t in &self.terms {
            validate(t)?;
            let g = t.block.gram()?;
            let g = if t.scale == 1 { g } else { g.scale(&BigInt::from(t.scale)) };
            acc = acc.direct_sum(&g);
        }
        GramLattice::new(acc)
            .map(|l| l.with_label(self.to_string()))
            .map_err(|_| CatalogError::InvalidParameter(self.to_string()))
    }
}

fn validate(t: &CatalogTerm) -> Result<(), CatalogError> {
    match t.block {
        CatalogBlock::A(n) if n == 0 => {
            Err(CatalogError::InvalidParameter(format!("A{n}")))
        }
        CatalogBlock::D(n) if n < 3 => Err(CatalogError::InvalidParameter(format!("D{n}"))),
        CatalogBlock::E(n) if !(6..=8).contains(&n) => {
            Err(CatalogError::InvalidParameter(format!("E{n}")))
        }
        CatalogBlock::Scalar(0) => Err(CatalogError::InvalidParameter("<0>".into())),
        _ => Ok(()),
    }
}

fn split_scale(body: &str) -> Result<(&str, i64), CatalogError> {
    if let Some(open) = body.find('(') {
        if !body.ends_with(')') {
            return Err(CatalogError::UnknownSymbol(body.to_string()));
        }
        let name = body[..open].trim();
        let inner = &body[open + 1..body.len() - 1];
        let scale: i64 = inner
            .trim()
            .parse()
            .map_err(|_| CatalogError::InvalidParameter(body.to_string()))?;
        Ok((name, scale))
    } else {
        Ok((body, 1))
    }
}

fn parse_block(name: &str) -> Result<CatalogBlock, CatalogError> {
    let name = name.trim();
    if name == "U" {
        return Ok(CatalogBlock::U);
    }
    if name == "H5" {
        return Ok(CatalogBlock::H5);
    }
    if name == "K7" {
        return Ok(CatalogBlock::K7);
    }
    if name == "K23" {
        return Ok(CatalogBlock::K23);
    }
    if name == "L8_5" {
        return Ok(CatalogBlock::L8_5);
    }
    if name == "L8_13" {
        return Ok(CatalogBlock::L8_13);
    }
    if let Some(rest) = name.strip_prefix('A') {
        let n: u32 = rest
            .parse()
            .map_err(|_| CatalogError::UnknownSymbol(name.to_string()))?;
        return Ok(CatalogBlock::A(n));
    }
    if let Some(rest) = name.strip_prefix('D') {
        let n: u32 = rest
            .parse()
            .map_err(|_| CatalogError::UnknownSymbol(name.to_string()))?;
        return Ok(CatalogBlock::D(n));
    }
    if let Some(rest) = name.strip_prefix('E') {
        let n: u32 = rest
            .parse()
            .map_err(|_| CatalogError::UnknownSymbol(name.to_string()))?;
        return Ok(CatalogBlock::E(n));
    }
    if name.starts_with('<') && name.ends_with('>') {
        let a: i64 = name[1..name.len() - 1]
            .trim()
            .parse()
            .map_err(|_| CatalogError::InvalidParameter(name.to_string()))?;
        return Ok(CatalogBlock::Scalar(a));
    }
    Err(CatalogError::UnknownSymbol(name.to_string()))
}

impl fmt::Display for CatalogBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogBlock::U => write!(f, "U"),
            CatalogBlock::A(n) => write!(f, "A{n}"),
            CatalogBlock::D(n) => write!(f, "D{n}"),
            CatalogBlock::E(n) => write!(f, "E{n}"),
            CatalogBlock::Scalar(a) => write!(f, "<{a}>"),
            CatalogBlock::H5 => write!(f, "H5"),
            CatalogBlock::K7 => write!(f, "K7"),
            CatalogBlock::K23 => write!(f, "K23"),
            CatalogBlock::L8_5 => write!(f, "L8_5"),
            CatalogBlock::L8_13 => write!(f, "L8_13"),
        }
    }
}

impl fmt::Display for CatalogExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // group equal consecutive terms with a power
        let mut i = 0;
        let mut first = true;
        while i < self.terms.len() {
            let t = self.terms[i];
            let mut j = i;
            while j < self.terms.len() && self.terms[j] == t {
                j += 1;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            write!(f, "{}", t.block)?;
            if t.scale != 1 {
                write!(f, "({})", t.scale)?;
            }
            if j - i > 1 {
                write!(f, "^{}", j - i)?;
            }
            i = j;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big;
    use num_traits::Signed;

    #[test]
    fn parse_and_print() {
        let e = CatalogExpr::parse("U+U+A2(1)+E8").unwrap();
        assert_eq!(e.to_string(), "U^2+A2+E8");
        let e = CatalogExpr::parse("U(2)+<-2>^2").unwrap();
        assert_eq!(e.rank(), 4);
        assert!(CatalogExpr::parse("A0").is_err());
        assert!(CatalogExpr::parse("X7").is_err());
    }

    #[test]
    fn standard_grams() {
        let u = CatalogExpr::parse("U").unwrap().gram().unwrap();
        assert_eq!(u.gram(), &IntMatrix::from_i64(&[vec![0, 1], vec![1, 0]]));
        let h5 = CatalogExpr::parse("H5").unwrap().gram().unwrap();
        assert_eq!(h5.det(), big(-5));
        let k7 = CatalogExpr::parse("K7").unwrap().gram().unwrap();
        assert_eq!(k7.det(), big(7));
        let k23 = CatalogExpr::parse("K23").unwrap().gram().unwrap();
        assert_eq!(k23.det(), big(23));
        let e8 = CatalogExpr::parse("E8").unwrap().gram().unwrap();
        assert_eq!(e8.det(), big(1));
        assert_eq!(e8.signature(), (0, 8));
        let e7 = CatalogExpr::parse("E7").unwrap().gram().unwrap();
        assert_eq!(e7.det().abs(), big(2));
        let e6 = CatalogExpr::parse("E6").unwrap().gram().unwrap();
        assert_eq!(e6.det().abs(), big(3));
        let d4 = CatalogExpr::parse("D4").unwrap().gram().unwrap();
        assert_eq!(d4.det().abs(), big(4));
        let a3 = CatalogExpr::parse("A3").unwrap().gram().unwrap();
        assert_eq!(a3.det().abs(), big(4));
        assert!(CatalogExpr::parse("L8_5").unwrap().gram().is_err());
    }
}
