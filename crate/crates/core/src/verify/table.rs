use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Polynomial, TruncatedSeries};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub coefficient: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub rows: Vec<TableRow>,
}

/// Coefficients of `q^0 .. q^upto`; `upto` is clamped to the series order.
pub fn coefficient_table(f: &TruncatedSeries, upto: usize) -> CoefficientTable {
    let rows = (0..=upto.min(f.qmax()))
        .map(|n| TableRow {
            n,
            coefficient: f.coeff(n).clone(),
        })
        .collect();
    CoefficientTable { rows }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.rows.last().map_or(1, |r| r.n.to_string().len());
        for r in &self.rows {
            writeln!(f, "q^{:<width$}  {}", r.n, r.coefficient)?;
        }
        Ok(())
    }
}
