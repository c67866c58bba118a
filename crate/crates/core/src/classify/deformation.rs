use crate::lattice::{CatalogExpr, GramLattice};

/// The known IHS deformation types.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum TypeName {
    K3,
    /// Hilbert schemes of n points on a K3 surface, n >= 2.
    K3n(u32),
    /// Generalized Kummer manifolds, n >= 2.
    Kum(u32),
    OG6,
    OG10,
}

impl TypeName {
    pub fn display(&self) -> String {
        match self {
            TypeName::K3 => "K3".into(),
            TypeName::K3n(n) => format!("K3^[{n}]"),
            TypeName::Kum(n) => format!("Kum_{n}"),
            TypeName::OG6 => "OG6".into(),
            TypeName::OG10 => "OG10".into(),
        }
    }

    pub fn n(&self) -> Option<u32> {
        match self {
            TypeName::K3n(n) | TypeName::Kum(n) => Some(*n),
            _ => None,
        }
    }
}

/// Extension data of a deformation type: the BBF lattice, the ambient even
/// unimodular lattice, the positive definite complement with its
/// distinguished vector square, and the rank-1 part K.
#[derive(Clone, Debug)]
pub struct DeformationType {
    pub name: TypeName,
    pub lambda: CatalogExpr,
    pub mukai: CatalogExpr,
    /// Complement of lambda in the Mukai lattice (empty for K3).
    pub v: Option<CatalogExpr>,
    pub v_square: i64,
    pub k: Option<CatalogExpr>,
}

impl DeformationType {
    pub fn mukai_lattice(&self) -> GramLattice {
        self.mukai.gram().expect("Mukai lattices are catalog lattices")
    }

    pub fn mukai_signature(&self) -> (usize, usize) {
        self.mukai_lattice().signature()
    }

    pub fn lambda_rank(&self) -> usize {
        self.lambda.rank()
    }
}

/// Extension data for each known deformation type.
pub fn deformation_data(name: TypeName) -> DeformationType {
    let parse = |s: &str| CatalogExpr::parse(s).expect("catalog expression");
    match name {
        TypeName::K3 => DeformationType {
            name,
            lambda: parse("U^3+E8^2"),
            mukai: parse("U^3+E8^2"),
            v: None,
            v_square: 0,
            k: None,
        },
        TypeName::K3n(n) => {
            assert!(n >= 2, "K3^[n] requires n >= 2");
            let a = 2 * n as i64 - 2;
            DeformationType {
                name,
                lambda: parse(&format!("U^3+E8^2+<{}>", -a)),
                mukai: parse("U^4+E8^2"),
                v: Some(parse(&format!("<{a}>"))),
                v_square: 0,
                k: Some(parse(&format!("<{a}>"))),
            }
        }
        TypeName::Kum(n) => {
            assert!(n >= 2, "Kum_n requires n >= 2");
            let a = 2 * n as i64 + 2;
            DeformationType {
                name,
                lambda: parse(&format!("U^3+<{}>", -a)),
                mukai: parse("U^4"),
                v: Some(parse(&format!("<{a}>"))),
                v_square: 0,
                k: Some(parse(&format!("<{a}>"))),
            }
        }
        TypeName::OG6 => DeformationType {
            name,
            lambda: parse("U^3+<-2>^2"),
            mukai: parse("U^5"),
            v: Some(parse("<2>^2")),
            v_square: 4,
            k: Some(parse("<4>")),
        },
        TypeName::OG10 => DeformationType {
            name,
            lambda: parse("U^3+E8^2+A2"),
            mukai: parse("U^5+E8^2"),
            v: Some(parse("A2(-1)")),
            v_square: 2,
            k: Some(parse("<6>")),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::big;

    #[test]
    fn table_rows_match() {
        let og6 = deformation_data(TypeName::OG6);
        assert_eq!(og6.mukai_signature(), (5, 5));
        assert_eq!(og6.v_square, 4);
        assert_eq!(og6.k.unwrap().to_string(), "<4>");
        let kum3 = deformation_data(TypeName::Kum(3));
        assert_eq!(kum3.v.unwrap().to_string(), "<8>");
        let k3 = deformation_data(TypeName::K3);
        assert!(k3.v.is_none());
        let og10 = deformation_data(TypeName::OG10);
        assert_eq!(og10.mukai_signature(), (5, 21));
        let v = og10.v.unwrap().gram().unwrap();
        assert_eq!(v.signature(), (2, 0));
        assert_eq!(v.det(), big(3));
        let k34 = deformation_data(TypeName::K3n(4));
        assert_eq!(k34.lambda_rank(), 23);
        assert_eq!(k34.mukai_signature(), (4, 20));
    }
}
