//! Rough fields with known regularity exponents.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::spectral::inverse_real;
use crate::fields::{ScalarField, TorusGrid};
use crate::mollify::SpaceTimeField;

fn check(alpha: f64, j_max: usize, grid: &TorusGrid, phases: &[f64]) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", format!("{alpha} must lie in (0, 1)")));
    }
    if (1usize << j_max) >= grid.points_per_axis() / 2 {
        return Err(Error::param(
            "J",
            format!("2^{j_max} reaches the Nyquist band of N = {}", grid.points_per_axis()),
        ));
    }
    if !phases.is_empty() && phases.len() != j_max + 1 {
        return Err(Error::param("phases", format!("expected {} phases", j_max + 1)));
    }
    Ok(())
}

fn phase(phases: &[f64], j: usize) -> f64 {
    phases.get(j).copied().unwrap_or(0.0)
}

/// `Σ_{j=0}^{J} 2^{−αj} cos(2^j k₀ x + θ_j)` with `k₀ = 2π/L`, depending on
/// the first coordinate only. Empty `phases` means all zero.
pub fn weierstrass_field(alpha: f64, j_max: usize, grid: &TorusGrid, phases: &[f64]) -> Result<ScalarField> {
    check(alpha, j_max, grid, phases)?;
    let k0 = 2.0 * PI / grid.length();
    Ok(ScalarField::from_fn(*grid, |x, _| {
        (0..=j_max)
            .map(|j| {
                let s = (1u64 << j) as f64;
                s.powf(-alpha) * (s * k0 * x + phase(phases, j)).cos()
            })
            .sum()
    }))
}

/// Uniform time axis `t0 + i·dt`, `i < nt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeAxis {
    pub t0: f64,
    pub dt: f64,
    pub nt: usize,
}

/// Standing variant: each scale is multiplied by `cos(2^j ω t + ϑ_j)`.
pub fn weierstrass_standing(
    alpha: f64,
    j_max: usize,
    omega: f64,
    grid: &TorusGrid,
    axis: TimeAxis,
    phases: &[f64],
    time_phases: &[f64],
) -> Result<SpaceTimeField> {
    check(alpha, j_max, grid, phases)?;
    check(alpha, j_max, grid, time_phases)?;
    let k0 = 2.0 * PI / grid.length();
    SpaceTimeField::from_fn(*grid, axis.t0, axis.dt, axis.nt, |t, x, _| {
        (0..=j_max)
            .map(|j| {
                let s = (1u64 << j) as f64;
                s.powf(-alpha) * (s * k0 * x + phase(phases, j)).cos() * (s * omega * t + phase(time_phases, j)).cos()
            })
            .sum()
    })
}

/// Traveling variant `Σ 2^{−αj} cos(2^j k₀ (x − c t) + θ_j)`; the exponent
/// is the same in space and in time.
pub fn weierstrass_traveling(
    alpha: f64,
    j_max: usize,
    speed: f64,
    grid: &TorusGrid,
    axis: TimeAxis,
    phases: &[f64],
) -> Result<SpaceTimeField> {
    check(alpha, j_max, grid, phases)?;
    lacunary_traveling(alpha, j_max, speed, grid, axis, phases)
}

/// [`weierstrass_traveling`] without the restriction on the decay rate, so
/// `decay = β + 2` gives a field whose second derivatives have exponent β.
pub fn lacunary_traveling(
    decay: f64,
    j_max: usize,
    speed: f64,
    grid: &TorusGrid,
    axis: TimeAxis,
    phases: &[f64],
) -> Result<SpaceTimeField> {
    check(0.5, j_max, grid, phases)?;
    let k0 = 2.0 * PI / grid.length();
    SpaceTimeField::from_fn(*grid, axis.t0, axis.dt, axis.nt, |t, x, _| {
        (0..=j_max)
            .map(|j| {
                let s = (1u64 << j) as f64;
                s.powf(-decay) * (s * k0 * (x - speed * t) + phase(phases, j)).cos()
            })
            .sum()
    })
}

/// `Σ_{k=1}^{k_max} k^{−(α+½)} cos(k k₀ x + θ_k)` with phases drawn from a
/// ChaCha8 stream seeded by `seed`. `k_max` is clipped below Nyquist.
pub fn random_fourier_field(alpha: f64, seed: u64, grid: &TorusGrid, k_max: usize) -> Result<ScalarField> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", format!("{alpha} must lie in (0, 1)")));
    }
    let k_max = k_max.min(grid.points_per_axis() / 2 - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let modes: Vec<(f64, f64, f64)> = (1..=k_max)
        .map(|k| {
            let kf = k as f64;
            (kf, kf.powf(-(alpha + 0.5)), rng.random_range(0.0..2.0 * PI))
        })
        .collect();
    let n = grid.points_per_axis();
    let line_grid = TorusGrid::new(1, n, grid.length())?;
    let mut hat = vec![Complex64::new(0.0, 0.0); n];
    let half = 0.5 * n as f64;
    for (k, c, th) in modes {
        let z = Complex64::from_polar(half * c, th);
        hat[k as usize] = z;
        hat[n - k as usize] = z.conj();
    }
    let line = inverse_real(&line_grid, hat);
    let line = line.values();
    let values = (0..grid.len())
        .map(|idx| line[if grid.dim() == 1 { idx } else { idx / n }])
        .collect();
    ScalarField::new(*grid, values)
}
