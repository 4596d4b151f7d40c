use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{lp_norm, ScalarField, TorusGrid};
use crate::mollify::SpaceTimeField;

/// One row of a structure table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructureEntry {
    pub shift: f64,
    pub norm: f64,
}

/// Increment norms `‖w(· + ξ) − w‖_p` against shift magnitude, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureTable {
    pub p: f64,
    pub entries: Vec<StructureEntry>,
}

impl StructureTable {
    pub fn new(p: f64, mut entries: Vec<StructureEntry>) -> Result<Self> {
        if entries.iter().any(|e| !(e.shift > 0.0) || !(e.norm >= 0.0)) {
            return Err(Error::Degenerate(
                "shifts must be positive and norms non-negative".into(),
            ));
        }
        entries.sort_by(|a, b| a.shift.total_cmp(&b.shift));
        Ok(Self { p, entries })
    }

    pub fn shifts(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.shift).collect()
    }

    pub fn norms(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.norm).collect()
    }

    /// `max_ξ |ξ|^{−α} ‖w(· + ξ) − w‖_p` over the table.
    pub fn seminorm(&self, alpha: f64) -> Result<f64> {
        if self.entries.is_empty() {
            return Err(Error::Degenerate("empty shift set".into()));
        }
        Ok(self
            .entries
            .iter()
            .map(|e| e.norm * e.shift.powf(-alpha))
            .fold(0.0, f64::max))
    }
}

fn grid_cells(shift: f64, spacing: f64, limit: usize, what: &str) -> Result<usize> {
    let c = shift / spacing;
    let k = c.round();
    if !(shift > 0.0) || (c - k).abs() > 1e-9 * c.max(1.0) {
        return Err(Error::param(
            "shifts",
            format!("{what} shift {shift} is not a positive multiple of {spacing}"),
        ));
    }
    let k = k as usize;
    if k >= limit {
        return Err(Error::param(
            "shifts",
            format!("{what} shift {shift} exceeds the domain"),
        ));
    }
    Ok(k)
}

/// Dyadic spatial ladder `dx, 2dx, 4dx, …, L/2`.
pub fn dyadic_shifts(grid: &TorusGrid) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 1;
    while k <= grid.points_per_axis() / 2 {
        out.push(k as f64 * grid.spacing());
        k *= 2;
    }
    out
}

/// Dyadic time ladder `dt, 2dt, …` with shifts below half the window.
pub fn dyadic_time_shifts(w: &SpaceTimeField) -> Vec<f64> {
    let mut out = Vec::new();
    let mut k = 1;
    while 2 * k < w.time_len() {
        out.push(k as f64 * w.dt());
        k *= 2;
    }
    out
}

fn spatial_increment(values: &[f64], grid: &TorusGrid, axis: usize, k: usize) -> Vec<f64> {
    (0..grid.len())
        .map(|i| values[grid.shifted(i, axis, k as isize)] - values[i])
        .collect()
}

/// Periodic increment norms of a static field; in two dimensions the
/// larger of the two axis-aligned shifts is kept.
pub fn structure_function(w: &ScalarField, p: f64, shifts: &[f64]) -> Result<StructureTable> {
    use rayon::prelude::*;
    let grid = *w.grid();
    let cells = shifts
        .iter()
        .map(|&s| grid_cells(s, grid.spacing(), grid.points_per_axis(), "spatial"))
        .collect::<Result<Vec<_>>>()?;
    let entries = shifts
        .par_iter()
        .zip(cells)
        .map(|(&shift, k)| {
            let norm = (0..grid.dim())
                .map(|a| lp_norm(&spatial_increment(w.values(), &grid, a, k), p, grid.cell_volume()))
                .fold(0.0, f64::max);
            StructureEntry { shift, norm }
        })
        .collect();
    StructureTable::new(p, entries)
}

/// Spatial increments of a space-time field, periodic in space, measure
/// `dt · dx^d`.
pub fn structure_function_space(w: &SpaceTimeField, p: f64, shifts: &[f64]) -> Result<StructureTable> {
    use rayon::prelude::*;
    let grid = *w.grid();
    let cells = shifts
        .iter()
        .map(|&s| grid_cells(s, grid.spacing(), grid.points_per_axis(), "spatial"))
        .collect::<Result<Vec<_>>>()?;
    let entries = shifts
        .par_iter()
        .zip(cells)
        .map(|(&shift, k)| {
            let norm = (0..grid.dim())
                .map(|a| {
                    let sum: f64 = w
                        .slices()
                        .map(|s| {
                            spatial_increment(s, &grid, a, k)
                                .iter()
                                .map(|v| v.abs().powf(p))
                                .sum::<f64>()
                        })
                        .sum();
                    (sum * w.dt() * grid.cell_volume()).powf(1.0 / p)
                })
                .fold(0.0, f64::max);
            StructureEntry { shift, norm }
        })
        .collect();
    StructureTable::new(p, entries)
}

/// Time increments over the overlap `Ω ∩ (Ω − τ)`.
pub fn structure_function_time(w: &SpaceTimeField, p: f64, shifts: &[f64]) -> Result<StructureTable> {
    use rayon::prelude::*;
    let nt = w.time_len();
    let cells = shifts
        .iter()
        .map(|&s| grid_cells(s, w.dt(), nt, "time"))
        .collect::<Result<Vec<_>>>()?;
    let entries = shifts
        .par_iter()
        .zip(cells)
        .map(|(&shift, k)| {
            let sum: f64 = (0..nt - k)
                .map(|i| {
                    w.slice(i + k)
                        .iter()
                        .zip(w.slice(i))
                        .map(|(a, b)| (a - b).abs().powf(p))
                        .sum::<f64>()
                })
                .sum();
            let norm = (sum * w.dt() * w.grid().cell_volume()).powf(1.0 / p);
            StructureEntry { shift, norm }
        })
        .collect();
    StructureTable::new(p, entries)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::param("alpha", format!("{alpha} must lie in (0, 1)")))
    }
}

/// Seminorm over the dyadic ladder.
pub fn besov_seminorm(w: &ScalarField, alpha: f64, p: f64) -> Result<f64> {
    check_alpha(alpha)?;
    structure_function(w, p, &dyadic_shifts(w.grid()))?.seminorm(alpha)
}

/// `‖w‖_p` plus [`besov_seminorm`].
pub fn besov_norm(w: &ScalarField, alpha: f64, p: f64) -> Result<f64> {
    Ok(w.lp_norm(p) + besov_seminorm(w, alpha, p)?)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;

    #[test]
    fn constant_field_has_zero_increments() {
        let g = TorusGrid::periodic(1, 64).unwrap();
        let w = ScalarField::constant(g, 2.5);
        let t = structure_function(&w, 3.0, &dyadic_shifts(&g)).unwrap();
        assert!(t.norms().iter().all(|&n| n == 0.0));
        assert_eq!(besov_seminorm(&w, 0.5, 3.0).unwrap(), 0.0);
        let full = besov_norm(&w, 0.5, 3.0).unwrap();
        assert!((full - w.lp_norm(3.0)).abs() < 1e-15);
    }

    #[test]
    fn cosine_increment_closed_form() {
        // oracle: ∫|cos(x+ξ) − cos x|³ = 8|sin(ξ/2)|³ ∫|sin|³ = 8|sin(ξ/2)|³ · 8/3
        let g = TorusGrid::periodic(1, 256).unwrap();
        let w = ScalarField::from_fn(g, |x, _| x.cos());
        let t = structure_function(&w, 3.0, &dyadic_shifts(&g)).unwrap();
        for e in &t.entries {
            let exact = 2.0 * (e.shift / 2.0).sin().abs() * (8.0f64 / 3.0).powf(1.0 / 3.0);
            // |sin|³ is only C², so the rectangle rule converges like dx⁴ here
            assert!((e.norm - exact).abs() < 1e-5 * exact, "{} {}", e.norm, exact);
        }
        // direct summation oracle at one shift
        let k = 5;
        let direct: f64 = (0..256)
            .map(|i| (g.coord((i + k) % 256).cos() - g.coord(i).cos()).abs().powi(3))
            .sum::<f64>()
            * g.spacing();
        let t5 = structure_function(&w, 3.0, &[k as f64 * g.spacing()]).unwrap();
        assert!((t5.entries[0].norm - direct.cbrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_off_grid_and_oversized_shifts() {
        let g = TorusGrid::periodic(1, 64).unwrap();
        let w = ScalarField::from_fn(g, |x, _| x.sin());
        assert!(structure_function(&w, 3.0, &[0.5 * g.spacing()]).is_err());
        assert!(structure_function(&w, 3.0, &[2.0 * PI]).is_err());
        assert!(besov_seminorm(&w, 1.0, 3.0).is_err());
    }

    #[test]
    fn homogeneity_and_translation_invariance() {
        let g = TorusGrid::periodic(1, 512).unwrap();
        let w = ScalarField::from_fn(g, |x, _| {
            x.sin() + 0.3 * (17.0 * x).cos() + 0.1 * (90.0 * x + 1.0).sin()
        });
        let s = besov_seminorm(&w, 0.4, 3.0).unwrap();
        let s3 = besov_seminorm(&w.scale(-3.0), 0.4, 3.0).unwrap();
        assert!((s3 - 3.0 * s).abs() < 1e-12 * s3);
        let shifted = besov_seminorm(&w.shifted(0, 37), 0.4, 3.0).unwrap();
        assert!(((shifted - s) / s).abs() < 1e-12);
    }

    #[test]
    fn inclusion_at_table_level() {
        let g = TorusGrid::periodic(1, 256).unwrap();
        let w = ScalarField::from_fn(g, |x, _| (x.sin()).abs().sqrt());
        let t = structure_function(&w, 3.0, &dyadic_shifts(&g)).unwrap();
        for e in t.entries.iter().filter(|e| e.shift <= 1.0) {
            assert!(e.norm * e.shift.powf(-0.3) <= e.norm * e.shift.powf(-0.6));
        }
    }

    #[test]
    fn time_increments_use_the_overlap() {
        let g = TorusGrid::periodic(1, 8).unwrap();
        let w = SpaceTimeField::from_fn(g, 0.0, 0.5, 5, |t, _, _| t).unwrap();
        let t = structure_function_time(&w, 2.0, &[0.5, 1.0]).unwrap();
        // |Δ|=τ on (nt − k) slices: norm² = τ² · (nt − k) · dt · L
        let l = 2.0 * PI;
        assert!((t.entries[0].norm - (0.25 * 4.0 * 0.5 * l).sqrt()).abs() < 1e-12);
        assert!((t.entries[1].norm - (1.0 * 3.0 * 0.5 * l).sqrt()).abs() < 1e-12);
        assert!(structure_function_time(&w, 2.0, &[2.5]).is_err());
    }
}
