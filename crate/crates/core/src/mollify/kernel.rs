use rustfft::num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::spectral::{fft_in_place, forward, inverse_real};
use crate::fields::{ScalarField, TorusGrid};

use super::SpaceTimeField;

/// Unnormalized bump `exp(−1/(1−z²))` on `|z| < 1`.
pub fn bump(z: f64) -> f64 {
    if z.abs() < 1.0 {
        (-1.0 / (1.0 - z * z)).exp()
    } else {
        0.0
    }
}

/// Space-time mollifier `η^ε`, the tensor product of one-dimensional bumps
/// of radius ε in each coordinate.
///
/// The discrete kernel is sampled on the data's own nodes and each factor is
/// renormalized to unit discrete mass, so constants are reproduced exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MollifierKernel {
    eps: f64,
    min_time_samples: f64,
    min_space_cells: f64,
}

impl MollifierKernel {
    /// Kernel of radius `eps` requiring the support diameter to span at
    /// least 4 samples in time and 4 cells in space.
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::Mollifier {
                eps,
                reason: "radius must be positive".into(),
            });
        }
        Ok(Self {
            eps,
            min_time_samples: 4.0,
            min_space_cells: 4.0,
        })
    }

    /// Relax or tighten the spatial resolution requirement (support diameter
    /// in grid cells).
    pub fn with_min_space_cells(mut self, cells: f64) -> Self {
        self.min_space_cells = cells;
        self
    }

    pub fn with_min_time_samples(mut self, samples: f64) -> Self {
        self.min_time_samples = samples;
        self
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Half-width in samples, `m = ε/dt`. ε must be an even multiple of `dt`.
    pub fn time_radius(&self, dt: f64) -> Result<usize> {
        let ratio = self.eps / (2.0 * dt);
        let k = ratio.round();
        if k < 1.0 || (ratio - k).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::Mollifier {
                eps: self.eps,
                reason: format!("not a positive multiple of 2·dt_sample = {}", 2.0 * dt),
            });
        }
        if 2.0 * self.eps / dt < self.min_time_samples - 1e-9 {
            return Err(Error::Mollifier {
                eps: self.eps,
                reason: format!("spans fewer than {} samples in time", self.min_time_samples),
            });
        }
        Ok(2 * k as usize)
    }

    /// Normalized time taps at offsets `−m..=m` samples.
    pub fn time_weights(&self, dt: f64) -> Result<Vec<f64>> {
        let m = self.time_radius(dt)?;
        Ok(normalized(
            (0..=2 * m).map(|i| bump((i as f64 - m as f64) * dt / self.eps)),
        ))
    }

    /// Normalized one-dimensional spatial taps at offsets `−k..=k` cells.
    pub fn space_weights(&self, grid: &TorusGrid) -> Result<Vec<f64>> {
        let dx = grid.spacing();
        if 2.0 * self.eps / dx < self.min_space_cells - 1e-9 {
            return Err(Error::Mollifier {
                eps: self.eps,
                reason: format!("spans fewer than {} cells in space", self.min_space_cells),
            });
        }
        if self.eps >= 0.5 * grid.length() {
            return Err(Error::Mollifier {
                eps: self.eps,
                reason: "support wraps around the torus".into(),
            });
        }
        let k = (self.eps / dx).ceil() as usize;
        Ok(normalized(
            (0..=2 * k).map(|i| bump((i as f64 - k as f64) * dx / self.eps)),
        ))
    }

    /// Fourier symbol of the spatial convolution on `grid`.
    pub fn space_symbol(&self, grid: &TorusGrid) -> Result<Vec<Complex64>> {
        let w = self.space_weights(grid)?;
        let k = (w.len() - 1) / 2;
        let n = grid.points_per_axis();
        let mut line = vec![0.0; n];
        for (i, &wi) in w.iter().enumerate() {
            line[(i + n - k) % n] += wi;
        }
        let mut data = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (idx, c) in data.iter_mut().enumerate() {
            let v = match grid.dim() {
                1 => line[idx],
                _ => line[idx / n] * line[idx % n],
            };
            *c = Complex64::new(v, 0.0);
        }
        fft_in_place(grid, &mut data, false);
        Ok(data)
    }
}

fn normalized(taps: impl Iterator<Item = f64>) -> Vec<f64> {
    let taps: Vec<f64> = taps.collect();
    let mass: f64 = taps.iter().sum();
    taps.into_iter().map(|v| v / mass).collect()
}

fn convolve_with_symbol(f: &ScalarField, symbol: &[Complex64]) -> ScalarField {
    let mut hat = forward(f);
    hat.iter_mut().zip(symbol).for_each(|(a, b)| *a *= b);
    inverse_real(f.grid(), hat)
}

/// Circular spatial mollification of a static field.
pub fn mollify_space(f: &ScalarField, kernel: &MollifierKernel) -> Result<ScalarField> {
    let symbol = kernel.space_symbol(f.grid())?;
    Ok(convolve_with_symbol(f, &symbol))
}

/// `w^ε = η^ε ∗ w` on the shrunken time range: the result starts `m` samples
/// after `w` and is `2m` samples shorter, `m = ε/dt`.
pub fn mollify(w: &SpaceTimeField, kernel: &MollifierKernel) -> Result<SpaceTimeField> {
    let symbol = kernel.space_symbol(w.grid())?;
    let taps = kernel.time_weights(w.dt())?;
    let m = (taps.len() - 1) / 2;
    let nt = w.time_len();
    if nt <= 2 * m {
        return Err(Error::Mollifier {
            eps: kernel.eps(),
            reason: format!("time window of {nt} samples is shorter than the kernel"),
        });
    }
    let spatial = w.map_slices(|s| convolve_with_symbol(s, &symbol));
    let n = w.grid().len();
    let out_len = nt - 2 * m;
    let src = spatial.values();
    let mut data = vec![0.0; out_len * n];
    {
        use rayon::prelude::*;
        data.par_chunks_mut(n).enumerate().for_each(|(i, out)| {
            for (j, &wt) in taps.iter().enumerate() {
                // symmetric taps: the sign convention of the offset is immaterial
                let s = &src[(i + j) * n..(i + j + 1) * n];
                out.iter_mut().zip(s).for_each(|(o, v)| *o += wt * v);
            }
        });
    }
    Ok(SpaceTimeField::from_raw(*w.grid(), w.time(m), w.dt(), data))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> TorusGrid {
        TorusGrid::periodic(1, n).unwrap()
    }

    #[test]
    fn weights_have_unit_mass_and_symmetry() {
        let k = MollifierKernel::new(0.3).unwrap();
        let w = k.space_weights(&grid(256)).unwrap();
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        for i in 0..w.len() {
            assert_eq!(w[i], w[w.len() - 1 - i]);
        }
        let t = k.time_weights(0.05).unwrap();
        assert_eq!(t.len(), 13);
        assert!((t.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eps_must_be_even_multiple_of_dt() {
        let k = MollifierKernel::new(0.3).unwrap();
        assert!(k.time_weights(0.1).is_err());
        assert!(k.time_weights(0.15).is_ok());
        assert!(MollifierKernel::new(0.0).is_err());
    }

    #[test]
    fn under_resolution_is_rejected() {
        let k = MollifierKernel::new(0.05).unwrap();
        // dx = 2π/32 ≈ 0.196 > ε
        assert!(k.space_weights(&grid(32)).is_err());
        assert!(k.with_min_space_cells(0.4).space_weights(&grid(32)).is_ok());
        assert!(MollifierKernel::new(4.0).unwrap().space_weights(&grid(64)).is_err());
    }

    #[test]
    fn constants_are_fixed_points() {
        let g = TorusGrid::periodic(2, 32).unwrap();
        let w = SpaceTimeField::steady(&ScalarField::constant(g, 3.25), 0.0, 0.1, 12);
        let k = MollifierKernel::new(0.4).unwrap();
        let v = mollify(&w, &k).unwrap();
        assert_eq!(v.time_len(), 4);
        assert!((v.start_time() - 0.4).abs() < 1e-15);
        assert!(v.values().iter().all(|x| (x - 3.25).abs() < 1e-14));
    }

    #[test]
    fn cosine_matches_direct_convolution() {
        // oracle: brute-force circular sum with the same taps
        let g = grid(128);
        let f = ScalarField::from_fn(g, |x, _| (3.0 * x).cos());
        let k = MollifierKernel::new(0.5).unwrap();
        let taps = k.space_weights(&g).unwrap();
        let r = (taps.len() - 1) / 2;
        let n = 128;
        let direct: Vec<f64> = (0..n)
            .map(|i| {
                taps.iter()
                    .enumerate()
                    .map(|(j, w)| w * f.values()[(i + n + j - r) % n])
                    .sum()
            })
            .collect();
        let fast = mollify_space(&f, &k).unwrap();
        for (a, b) in fast.values().iter().zip(&direct) {
            assert!((a - b).abs() < 1e-12);
        }
        // attenuation factor equals the discrete symbol at k = 3
        let atten: f64 = taps
            .iter()
            .enumerate()
            .map(|(j, w)| w * (3.0 * (j as f64 - r as f64) * g.spacing()).cos())
            .sum();
        assert!(atten < 1.0 && atten > 0.0);
        assert!((fast.values()[0] - atten).abs() < 1e-12);
    }

    #[test]
    fn time_mollification_of_linear_signal() {
        // symmetric taps reproduce affine functions of t exactly
        let g = grid(32);
        let w = SpaceTimeField::from_fn(g, 0.0, 0.1, 20, |t, _, _| 2.0 * t + 1.0).unwrap();
        let v = mollify(&w, &MollifierKernel::new(0.4).unwrap()).unwrap();
        for i in 0..v.time_len() {
            let t = v.time(i);
            assert!(v.slice(i).iter().all(|x| (x - (2.0 * t + 1.0)).abs() < 1e-13));
        }
    }

    #[test]
    fn too_short_window_is_rejected() {
        let g = grid(64);
        let w = SpaceTimeField::steady(&ScalarField::constant(g, 1.0), 0.0, 0.1, 8);
        assert!(mollify(&w, &MollifierKernel::new(0.4).unwrap()).is_err());
    }
}
