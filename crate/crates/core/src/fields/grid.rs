use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform periodic grid on the torus `[0, L)^d`, `d` in {1, 2}.
///
/// Values on the grid are stored row-major: in two dimensions the node
/// `(i, j)` (x index `i`, y index `j`) lives at `i * N + j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
    length: f64,
}

impl TorusGrid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in {{1, 2}}")));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis {n} must be a power of two >= 8"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length {length} must be positive")));
        }
        Ok(Self { dim, n, length })
    }

    /// Grid on `[0, 2π)^d`, where integer wavenumbers are exact.
    pub fn periodic(dim: usize, n: usize) -> Result<Self> {
        Self::new(dim, n, 2.0 * PI)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    /// Total number of nodes, `N^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Volume element `dx^d` of the rectangle rule.
    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    /// Node coordinate along one axis.
    pub fn coord(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    /// Coordinates of the node at flat index `idx`.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        match self.dim {
            1 => [self.coord(idx), 0.0],
            _ => [self.coord(idx / self.n), self.coord(idx % self.n)],
        }
    }

    /// Angular wavenumber of FFT bin `j`, in `2π/L` units, signed.
    pub fn wavenumber(&self, j: usize) -> f64 {
        let n = self.n as isize;
        let j = j as isize;
        let signed = if j <= n / 2 { j } else { j - n };
        2.0 * PI / self.length * signed as f64
    }

    /// Wavenumber used for odd-order derivatives: the Nyquist bin is zeroed.
    pub fn derivative_wavenumber(&self, j: usize) -> f64 {
        if j == self.n / 2 {
            0.0
        } else {
            self.wavenumber(j)
        }
    }

    /// Flat index of the node shifted by `shift` cells along `axis` (periodic).
    pub fn shifted(&self, idx: usize, axis: usize, shift: isize) -> usize {
        let n = self.n as isize;
        let wrap = |i: usize| ((i as isize + shift).rem_euclid(n)) as usize;
        match (self.dim, axis) {
            (1, _) => wrap(idx),
            (_, 0) => wrap(idx / self.n) * self.n + idx % self.n,
            _ => (idx / self.n) * self.n + wrap(idx % self.n),
        }
    }
}

/// Build a grid; see [`TorusGrid::new`].
pub fn make_grid(dim: usize, n: usize, length: f64) -> Result<TorusGrid> {
    TorusGrid::new(dim, n, length)
}
