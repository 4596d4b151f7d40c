//! Fourier-space calculus on the torus.
//!
//! Every operator here is a Fourier multiplier: forward transform, multiply
//! by a symbol in the wavevector, inverse transform, keep the real part.
//! Odd-order symbols vanish on the Nyquist bin; the Laplacian keeps `-k²`
//! there, so `div(grad f) = Δf` exactly for fields without Nyquist content.

use std::cell::RefCell;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::{ScalarField, SymTensorField, VectorField};
use super::grid::TorusGrid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

fn transpose(data: &mut [Complex64], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// In-place d-dimensional DFT. The inverse is normalized by `1/N^d`.
pub fn fft_in_place(grid: &TorusGrid, data: &mut [Complex64], inverse: bool) {
    let n = grid.points_per_axis();
    let fft = plan(n, inverse);
    // rustfft processes the buffer as consecutive length-n rows
    fft.process(data);
    if grid.dim() == 2 {
        transpose(data, n);
        fft.process(data);
        transpose(data, n);
    }
    if inverse {
        let scale = 1.0 / grid.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
    }
}

pub fn forward(f: &ScalarField) -> Vec<Complex64> {
    let mut data: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_in_place(f.grid(), &mut data, false);
    data
}

/// Inverse transform, discarding the imaginary part.
pub fn inverse_real(grid: &TorusGrid, mut data: Vec<Complex64>) -> ScalarField {
    fft_in_place(grid, &mut data, true);
    ScalarField::from_raw(*grid, data.into_iter().map(|c| c.re).collect())
}

/// Wavevector of bin `idx` as `(k_x, k_y)`; `k_y = 0` in one dimension.
pub fn wavevector(grid: &TorusGrid, idx: usize, derivative: bool) -> [f64; 2] {
    let n = grid.points_per_axis();
    let k = |j: usize| {
        if derivative {
            grid.derivative_wavenumber(j)
        } else {
            grid.wavenumber(j)
        }
    };
    match grid.dim() {
        1 => [k(idx), 0.0],
        _ => [k(idx / n), k(idx % n)],
    }
}

/// Apply a Fourier multiplier `symbol(k)` built from the full wavevector.
pub fn apply_multiplier(f: &ScalarField, symbol: impl Fn([f64; 2]) -> Complex64) -> ScalarField {
    let grid = *f.grid();
    let mut hat = forward(f);
    for (idx, c) in hat.iter_mut().enumerate() {
        *c *= symbol(wavevector(&grid, idx, false));
    }
    inverse_real(&grid, hat)
}

fn partial_from_hat(grid: &TorusGrid, hat: &[Complex64], axis: usize) -> ScalarField {
    let data = hat
        .iter()
        .enumerate()
        .map(|(idx, &c)| c * Complex64::new(0.0, wavevector(grid, idx, true)[axis]))
        .collect();
    inverse_real(grid, data)
}

/// `∂f/∂x_axis`.
pub fn partial(f: &ScalarField, axis: usize) -> ScalarField {
    partial_from_hat(f.grid(), &forward(f), axis)
}

pub fn spectral_gradient(f: &ScalarField) -> VectorField {
    let grid = *f.grid();
    let hat = forward(f);
    let comps = (0..grid.dim())
        .map(|axis| partial_from_hat(&grid, &hat, axis))
        .collect();
    VectorField::from_raw(grid, comps)
}

pub fn spectral_divergence(v: &VectorField) -> ScalarField {
    let grid = *v.grid();
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (axis, comp) in v.components().iter().enumerate() {
        let hat = forward(comp);
        for (idx, (a, c)) in acc.iter_mut().zip(hat).enumerate() {
            *a += c * Complex64::new(0.0, wavevector(&grid, idx, true)[axis]);
        }
    }
    inverse_real(&grid, acc)
}

pub fn spectral_laplacian(f: &ScalarField) -> ScalarField {
    apply_multiplier(f, |[kx, ky]| Complex64::new(-(kx * kx + ky * ky), 0.0))
}

/// Row-wise divergence of a symmetric tensor: `(div T)_i = Σ_j ∂_j T_ij`.
pub fn tensor_divergence(t: &SymTensorField) -> VectorField {
    let grid = *t.grid();
    let d = grid.dim();
    let comps = (0..d)
        .map(|i| {
            let row = (0..d).map(|j| t.entry(i, j).clone()).collect();
            spectral_divergence(&VectorField::from_raw(grid, row))
        })
        .collect();
    VectorField::from_raw(grid, comps)
}

/// Row-wise divergence of the (generally non-symmetric) outer product `a ⊗ b`:
/// `(div(a⊗b))_i = Σ_j ∂_j (a_i b_j)`.
pub fn outer_divergence(a: &VectorField, b: &VectorField) -> VectorField {
    let grid = *a.grid();
    let comps = a
        .components()
        .iter()
        .map(|ai| spectral_divergence(&b.mul_scalar(ai)))
        .collect();
    VectorField::from_raw(grid, comps)
}

/// Zero every mode with `|k_axis| > N/3` on any axis (2/3 rule).
pub fn dealias(f: &ScalarField) -> ScalarField {
    let grid = *f.grid();
    let n = grid.points_per_axis();
    let cutoff = n / 3;
    let keep = |j: usize| {
        let m = if j <= n / 2 { j } else { n - j };
        m <= cutoff
    };
    let mut hat = forward(f);
    for (idx, c) in hat.iter_mut().enumerate() {
        let ok = match grid.dim() {
            1 => keep(idx),
            _ => keep(idx / n) && keep(idx % n),
        };
        if !ok {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    inverse_real(&grid, hat)
}

/// Sum of `|f̂_k|²` scaled so that it equals `∫ f²` (Parseval).
pub fn spectral_energy(f: &ScalarField) -> f64 {
    let grid = f.grid();
    let hat = forward(f);
    let sum: f64 = hat.iter().map(|c| c.norm_sqr()).sum();
    sum * grid.cell_volume() / grid.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::integrate;

    fn grid(n: usize) -> TorusGrid {
        TorusGrid::periodic(1, n).unwrap()
    }

    #[test]
    fn gradient_of_cosine_is_minus_sine() {
        let g = grid(64);
        let f = ScalarField::from_fn(g, |x, _| x.cos());
        let df = spectral_gradient(&f);
        for (i, v) in df.component(0).values().iter().enumerate() {
            assert!((v + g.coord(i).sin()).abs() < 1e-13);
        }
    }

    #[test]
    fn gradient_of_constant_vanishes() {
        let f = ScalarField::constant(grid(32), 3.5);
        assert!(spectral_gradient(&f).component(0).max_abs() < 1e-14);
    }

    #[test]
    fn laplacian_eigenfunction() {
        let g = grid(32);
        let f = ScalarField::from_fn(g, |x, _| (2.0 * x).cos());
        let lap = spectral_laplacian(&f);
        for (a, b) in lap.values().iter().zip(f.values()) {
            assert!((a + 4.0 * b).abs() < 1e-12);
        }
    }

    #[test]
    fn divergence_of_sine_in_1d() {
        let g = grid(32);
        let v = VectorField::new(vec![ScalarField::from_fn(g, |x, _| x.sin())]).unwrap();
        let div = spectral_divergence(&v);
        for (i, d) in div.values().iter().enumerate() {
            assert!((d - g.coord(i).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn two_dimensional_mixed_mode() {
        let g = TorusGrid::periodic(2, 16).unwrap();
        let f = ScalarField::from_fn(g, |x, y| (x + 2.0 * y).sin());
        let grad = spectral_gradient(&f);
        let lap = spectral_laplacian(&f);
        for i in 0..g.len() {
            let [x, y] = g.point(i);
            assert!((grad.component(0).values()[i] - (x + 2.0 * y).cos()).abs() < 1e-12);
            assert!((grad.component(1).values()[i] - 2.0 * (x + 2.0 * y).cos()).abs() < 1e-12);
            assert!((lap.values()[i] + 5.0 * (x + 2.0 * y).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn nyquist_mode_has_zero_first_derivative() {
        let g = grid(16);
        let f = ScalarField::from_fn(g, |x, _| (8.0 * x).cos());
        assert!(partial(&f, 0).max_abs() < 1e-12);
    }

    #[test]
    fn dealias_keeps_low_modes() {
        let g = grid(32);
        let f = ScalarField::from_fn(g, |x, _| x.cos() + (15.0 * x).sin());
        let low = dealias(&f);
        for (i, v) in low.values().iter().enumerate() {
            assert!((v - g.coord(i).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn parseval_for_cosine() {
        let f = ScalarField::from_fn(grid(32), |x, _| x.cos());
        let e = spectral_energy(&f);
        assert!((e - integrate(&f.mul(&f))).abs() < 1e-12);
    }
}
