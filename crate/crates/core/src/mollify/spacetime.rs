use crate::error::{Error, Result};
use crate::fields::{lp_norm, ScalarField, TorusGrid};

/// Scalar field sampled uniformly in time on a torus grid.
///
/// Storage is time-major: sample `i` occupies `data[i·N^d .. (i+1)·N^d]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    grid: TorusGrid,
    t0: f64,
    dt: f64,
    data: Vec<f64>,
}

impl SpaceTimeField {
    pub fn new(grid: TorusGrid, t0: f64, dt: f64, data: Vec<f64>) -> Result<Self> {
        if data.is_empty() || !data.len().is_multiple_of(grid.len()) {
            return Err(Error::Shape(format!(
                "{} values is not a whole number of {}-point slices",
                data.len(),
                grid.len()
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", format!("{dt} must be positive")));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                what: "space-time field",
                index,
            });
        }
        Ok(Self { grid, t0, dt, data })
    }

    pub(crate) fn from_raw(grid: TorusGrid, t0: f64, dt: f64, data: Vec<f64>) -> Self {
        Self { grid, t0, dt, data }
    }

    pub(crate) fn from_slices<'a>(grid: TorusGrid, t0: f64, dt: f64, slices: impl Iterator<Item = &'a [f64]>) -> Self {
        let mut data = Vec::new();
        for s in slices {
            data.extend_from_slice(s);
        }
        Self::from_raw(grid, t0, dt, data)
    }

    /// Sample `f(t, x, y)` at `nt` times `t0 + i·dt`.
    pub fn from_fn(grid: TorusGrid, t0: f64, dt: f64, nt: usize, f: impl Fn(f64, f64, f64) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(nt * grid.len());
        for i in 0..nt {
            let t = t0 + i as f64 * dt;
            for idx in 0..grid.len() {
                let [x, y] = grid.point(idx);
                data.push(f(t, x, y));
            }
        }
        Self::new(grid, t0, dt, data)
    }

    /// A time-independent field repeated over `nt` samples.
    pub fn steady(f: &ScalarField, t0: f64, dt: f64, nt: usize) -> Self {
        Self::from_slices(*f.grid(), t0, dt, std::iter::repeat_n(f.values(), nt))
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn start_time(&self) -> f64 {
        self.t0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn time_len(&self) -> usize {
        self.data.len() / self.grid.len()
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn end_time(&self) -> f64 {
        self.time(self.time_len() - 1)
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn slice(&self, i: usize) -> &[f64] {
        let n = self.grid.len();
        &self.data[i * n..(i + 1) * n]
    }

    pub fn slice_field(&self, i: usize) -> ScalarField {
        ScalarField::from_raw(self.grid, self.slice(i).to_vec())
    }

    pub fn slices(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.grid.len())
    }

    /// Samples `start..start+len` as a new field.
    pub fn window(&self, start: usize, len: usize) -> Self {
        let n = self.grid.len();
        Self::from_raw(
            self.grid,
            self.time(start),
            self.dt,
            self.data[start * n..(start + len) * n].to_vec(),
        )
    }

    /// Build from per-slice scalar fields on this field's time axis.
    pub fn with_slices(&self, t0: f64, slices: Vec<ScalarField>) -> Self {
        let mut data = Vec::with_capacity(slices.len() * self.grid.len());
        for s in slices {
            data.extend(s.into_values());
        }
        Self::from_raw(self.grid, t0, self.dt, data)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_raw(self.grid, self.t0, self.dt, self.data.iter().map(|&v| f(v)).collect())
    }

    /// Pointwise combination; both fields must share grid and time axis.
    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.grid, other.grid, "space-time fields on different grids");
        assert_eq!(
            self.data.len(),
            other.data.len(),
            "space-time fields of different length"
        );
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Self::from_raw(self.grid, self.t0, self.dt, data)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `L^p(Ω)` norm with measure `dt · dx^d`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        lp_norm(&self.data, p, self.dt * self.grid.cell_volume())
    }

    /// Mean over all samples and nodes.
    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Apply `f` to every time slice.
    pub fn map_slices(&self, f: impl Fn(&ScalarField) -> ScalarField + Sync) -> Self {
        use rayon::prelude::*;
        let slices: Vec<ScalarField> = (0..self.time_len())
            .into_par_iter()
            .map(|i| f(&self.slice_field(i)))
            .collect();
        self.with_slices(self.t0, slices)
    }
}
