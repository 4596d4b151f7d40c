use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::StructureTable;

/// Least-squares line through `(x, y)`: `(slope, intercept, r²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Fitted regularity exponent of a structure table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BesovEstimate {
    pub p: f64,
    /// Raw log-log slope; smooth fields give values at or above 1.
    pub alpha: f64,
    /// Table seminorm at the fitted exponent.
    pub seminorm: f64,
    pub r_squared: f64,
    pub shift_range: (f64, f64),
    pub points: usize,
}

/// Fit discarding the smallest and largest shift.
pub fn fit_exponent(table: &StructureTable) -> Result<BesovEstimate> {
    fit_exponent_with(table, true)
}

pub fn fit_exponent_with(table: &StructureTable, discard_ends: bool) -> Result<BesovEstimate> {
    let mut shifts = table.shifts();
    shifts.dedup();
    if shifts.len() < 5 {
        return Err(Error::Degenerate(format!(
            "{} distinct shifts, at least 5 needed",
            shifts.len()
        )));
    }
    if table.entries.iter().any(|e| e.norm <= 0.0) {
        return Err(Error::Degenerate("zero increment norm, exponent undefined".into()));
    }
    let rows = if discard_ends {
        &table.entries[1..table.entries.len() - 1]
    } else {
        &table.entries[..]
    };
    let xs: Vec<f64> = rows.iter().map(|e| e.shift.ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|e| e.norm.ln()).collect();
    let (alpha, _, r_squared) = linear_fit(&xs, &ys);
    Ok(BesovEstimate {
        p: table.p,
        alpha,
        seminorm: table.seminorm(alpha)?,
        r_squared,
        shift_range: (rows[0].shift, rows[rows.len() - 1].shift),
        points: rows.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::besov::StructureEntry;

    fn table(f: impl Fn(f64) -> f64) -> StructureTable {
        let entries = (0..10)
            .map(|k| {
                let s = 1e-3 * 2f64.powi(k);
                StructureEntry { shift: s, norm: f(s) }
            })
            .collect();
        StructureTable::new(3.0, entries).unwrap()
    }

    #[test]
    fn exact_power_law() {
        let e = fit_exponent(&table(|s| s.powf(0.7))).unwrap();
        assert!((e.alpha - 0.7).abs() < 1e-12);
        assert!((e.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(e.points, 8);
    }

    #[test]
    fn flat_table_gives_zero() {
        let e = fit_exponent(&table(|_| 2.0)).unwrap();
        assert!(e.alpha.abs() < 1e-12);
    }

    #[test]
    fn degenerate_tables_are_flagged() {
        assert!(matches!(fit_exponent(&table(|_| 0.0)), Err(Error::Degenerate(_))));
        let short = StructureTable::new(
            3.0,
            (1..5)
                .map(|k| StructureEntry {
                    shift: k as f64,
                    norm: 1.0,
                })
                .collect(),
        )
        .unwrap();
        assert!(fit_exponent(&short).is_err());
    }
}
