use num_traits::Zero;

use super::surd::{QuadNum, Rational, Surd};
use super::{alpha_exact, alpha_i_exact, b_star_exact, DIFF_PAIRS};

/// (η num, η den, γ num, γ den) in the published row order.
pub const CATALOGUE: [(i64, i64, i64, i64); 10] = [
    (2, 3, 4, 3),
    (2, 3, 1, 1),
    (2, 3, 2, 3),
    (2, 3, 5, 3),
    (2, 3, 2, 1),
    (1, 2, 4, 3),
    (1, 2, 1, 1),
    (1, 2, 2, 3),
    (1, 2, 5, 3),
    (1, 2, 2, 1),
];

/// Density fraction used for the tabulated a* column.
pub const TABLE_OMEGA1: (i64, i64) = (1, 2);

#[derive(Debug, Clone, PartialEq)]
pub struct Table21Row {
    pub eta: Rational,
    pub gamma: Rational,
    pub alpha_i: Rational,
    pub alpha: Rational,
    /// Positive member of the ± pair; `None` when α₁ = 0.
    pub b12: Option<Surd>,
    pub b34: Option<Surd>,
    /// a* = −1 ± `a_surd`.
    pub a_surd: Option<Surd>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table22Row {
    pub eta: Rational,
    pub gamma: Rational,
    pub b: [Surd; 4],
    /// In `DIFF_PAIRS` order.
    pub diffs: Vec<QuadNum>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tables {
    pub table21: Vec<Table21Row>,
    /// Rows with α₁ = 0 have no b* and are omitted.
    pub table22: Vec<Table22Row>,
}

pub fn emit_tables() -> Tables {
    let omega = Rational::new(TABLE_OMEGA1.0, TABLE_OMEGA1.1);
    let mut table21 = Vec::new();
    let mut table22 = Vec::new();
    for &(en, ed, gn, gd) in &CATALOGUE {
        let eta = Rational::new(en, ed);
        let gamma = Rational::new(gn, gd);
        let alpha_i = alpha_i_exact(eta, gamma);
        let alpha = alpha_exact(eta);
        let b = b_star_exact(eta, gamma);
        let a_surd = if alpha_i.is_zero() {
            None
        } else {
            Surd::sqrt_of((alpha * alpha + Rational::new(2, 3) - Rational::new(2, 3) * omega) / (alpha_i * alpha_i))
        };
        table21.push(Table21Row {
            eta,
            gamma,
            alpha_i,
            alpha,
            b12: b.map(|b| b[0]),
            b34: b.map(|b| b[2]),
            a_surd,
        });
        if let Some(b) = b {
            table22.push(Table22Row {
                eta,
                gamma,
                b,
                diffs: DIFF_PAIRS.iter().map(|&(i, j)| QuadNum::sub(b[i], b[j])).collect(),
            });
        }
    }
    Tables { table21, table22 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbolic_rows() {
        let t = emit_tables();
        assert_eq!(t.table21.len(), 10);
        assert_eq!(t.table22.len(), 9);
        let r = &t.table21[1];
        assert_eq!(r.b12.unwrap().to_string(), "1/4");
        assert_eq!(r.a_surd.unwrap().to_string(), "sqrt(13)/4");
        let r = &t.table21[7];
        assert_eq!(r.b34.unwrap().to_string(), "sqrt(6)/5");
        assert_eq!(r.a_surd.unwrap().to_string(), "sqrt(3)/5");
        assert_eq!(t.table21[6].b34.unwrap().to_string(), "sqrt(6)/3");
        assert_eq!(t.table21[3].alpha_i, Rational::new(-2, 3));
        let row = t
            .table22
            .iter()
            .find(|r| r.eta == Rational::new(1, 2) && r.gamma == Rational::new(5, 3))
            .unwrap();
        assert_eq!(row.diffs[5].to_string(), "2*sqrt(6)");
        assert_eq!(row.diffs[0].integer_value(), Some(0));
    }
}
