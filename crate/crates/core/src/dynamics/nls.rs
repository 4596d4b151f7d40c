//! Split-step solver for `iε₀ ∂_t ψ = −(ε₀²/2) Δψ + h'(|ψ|²) ψ` and the
//! Madelung map to hydrodynamic variables.

use rustfft::num_complex::Complex64;

use crate::constitutive::{EKState, EnergyLaw, Laws, DEFAULT_RHO_MIN};
use crate::error::{Error, Result};
use crate::fields::spectral::{fft_in_place, wavevector};
use crate::fields::{integrate, ScalarField, TorusGrid, VectorField};

use super::{relative_drift, EnergyRecord, Trajectory};

/// Complex wave function on a torus grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: TorusGrid,
    values: Vec<Complex64>,
}

impl WaveField {
    pub fn new(grid: TorusGrid, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != grid.len() || im.len() != grid.len() {
            return Err(Error::Shape(format!(
                "wave field needs {} real and imaginary values",
                grid.len()
            )));
        }
        let values: Vec<Complex64> = re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        Self::from_values(grid, values)
    }

    pub fn from_values(grid: TorusGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!("expected {} values", grid.len())));
        }
        if let Some(index) = values.iter().position(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite {
                what: "wave field",
                index,
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let values = (0..grid.len())
            .map(|i| {
                let [x, y] = grid.point(i);
                f(x, y)
            })
            .collect();
        Self::from_values(grid, values)
    }

    /// `√ρ · e^{iS}` from amplitude and phase fields.
    pub fn from_polar(amplitude: &ScalarField, phase: &ScalarField) -> Result<Self> {
        let values = amplitude
            .values()
            .iter()
            .zip(phase.values())
            .map(|(&a, &s)| Complex64::from_polar(a, s))
            .collect();
        Self::from_values(*amplitude.grid(), values)
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn re(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn im(&self) -> Vec<f64> {
        self.values.iter().map(|c| c.im).collect()
    }

    /// `|ψ|²`.
    pub fn density(&self) -> ScalarField {
        ScalarField::from_raw(self.grid, self.values.iter().map(|c| c.norm_sqr()).collect())
    }

    /// `∫ |ψ|² dx`.
    pub fn mass(&self) -> f64 {
        integrate(&self.density())
    }

    /// Spectral `∂ψ/∂x_a` for each axis.
    pub fn gradient(&self) -> Vec<Vec<Complex64>> {
        let mut hat = self.values.clone();
        fft_in_place(&self.grid, &mut hat, false);
        (0..self.grid.dim())
            .map(|a| {
                let mut d: Vec<Complex64> = hat
                    .iter()
                    .enumerate()
                    .map(|(idx, &c)| c * Complex64::new(0.0, wavevector(&self.grid, idx, true)[a]))
                    .collect();
                fft_in_place(&self.grid, &mut d, true);
                d
            })
            .collect()
    }
}

/// Precomputed Strang stepper for a fixed step size.
#[derive(Debug, Clone)]
pub struct NlsStepper {
    dt: f64,
    eps0: f64,
    law: EnergyLaw,
    kinetic: Vec<Complex64>,
}

impl NlsStepper {
    pub fn new(grid: &TorusGrid, dt: f64, eps0: f64, law: EnergyLaw) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::param("dt", format!("{dt} must be positive")));
        }
        if !(eps0 > 0.0 && eps0.is_finite()) {
            return Err(Error::param("eps0", format!("{eps0} must be positive")));
        }
        let kinetic = (0..grid.len())
            .map(|idx| {
                let [kx, ky] = wavevector(grid, idx, false);
                Complex64::from_polar(1.0, -0.5 * eps0 * (kx * kx + ky * ky) * dt)
            })
            .collect();
        Ok(Self { dt, eps0, law, kinetic })
    }

    fn potential_half(&self, psi: &mut [Complex64]) {
        let c = -0.5 * self.dt / self.eps0;
        for z in psi.iter_mut() {
            *z *= Complex64::from_polar(1.0, c * self.law.dh(z.norm_sqr()));
        }
    }

    pub fn step(&self, psi: &mut WaveField) {
        let grid = psi.grid;
        self.potential_half(&mut psi.values);
        fft_in_place(&grid, &mut psi.values, false);
        psi.values.iter_mut().zip(&self.kinetic).for_each(|(z, k)| *z *= k);
        fft_in_place(&grid, &mut psi.values, true);
        self.potential_half(&mut psi.values);
    }
}

/// One Strang step: half potential rotation, kinetic step in Fourier
/// space, half potential rotation.
pub fn nls_split_step(psi: &WaveField, dt: f64, eps0: f64, law: &EnergyLaw) -> Result<WaveField> {
    let stepper = NlsStepper::new(psi.grid(), dt, eps0, *law)?;
    let mut out = psi.clone();
    stepper.step(&mut out);
    Ok(out)
}

/// `∫ (ε₀²/2)|∇ψ|² + h(|ψ|²) dx`.
pub fn nls_energy(psi: &WaveField, eps0: f64, law: &EnergyLaw) -> f64 {
    let grad = psi.gradient();
    let e: Vec<f64> = (0..psi.grid.len())
        .map(|i| {
            let g2: f64 = grad.iter().map(|g| g[i].norm_sqr()).sum();
            0.5 * eps0 * eps0 * g2 + law.h(psi.values[i].norm_sqr())
        })
        .collect();
    integrate(&ScalarField::from_raw(psi.grid, e))
}

/// `ρ = |ψ|²`, `m = ε₀ Im(ψ̄ ∇ψ)`, refusing densities below [`DEFAULT_RHO_MIN`].
pub fn madelung(psi: &WaveField, eps0: f64) -> Result<EKState> {
    madelung_with_threshold(psi, eps0, DEFAULT_RHO_MIN)
}

pub fn madelung_with_threshold(psi: &WaveField, eps0: f64, rho_min: f64) -> Result<EKState> {
    let rho = psi.density();
    if let Some(&v) = rho.values().iter().find(|v| !(**v >= rho_min)) {
        return Err(Error::Vacuum {
            value: rho.values().iter().copied().fold(v, f64::min),
            rho_min,
            context: "Madelung transform".into(),
        });
    }
    let grad = psi.gradient();
    let comps = grad
        .iter()
        .map(|g| {
            let m = psi
                .values
                .iter()
                .zip(g)
                .map(|(z, dz)| eps0 * (z.conj() * dz).im)
                .collect();
            ScalarField::from_raw(psi.grid, m)
        })
        .collect();
    EKState::from_parts(rho, VectorField::from_raw(psi.grid, comps))
}

/// Result of a Schrödinger run mapped to hydrodynamic variables.
#[derive(Debug, Clone)]
pub struct NlsRun {
    /// Madelung states at every sample.
    pub trajectory: Trajectory,
    /// `∫|ψ|²` and the hydrodynamic total energy at every sample.
    pub energy: Vec<EnergyRecord>,
    /// `∫ (ε₀²/2)|∇ψ|² + h(|ψ|²)` at every sample.
    pub wave_energy: Vec<f64>,
    pub last: WaveField,
    pub steps: usize,
    pub dt: f64,
}

impl NlsRun {
    pub fn mass_drift(&self) -> f64 {
        relative_drift(self.energy.iter().map(|r| r.mass))
    }

    pub fn energy_drift(&self) -> f64 {
        relative_drift(self.energy.iter().map(|r| r.total_energy))
    }

    pub fn wave_energy_drift(&self) -> f64 {
        relative_drift(self.wave_energy.iter().copied())
    }
}

/// Evolve `ψ0` to `t_end` and sample the Madelung variables every
/// `sample_every` steps. `laws` must carry the matching QHD capillarity.
pub fn simulate_nls(psi0: &WaveField, t_end: f64, dt: f64, laws: &Laws, sample_every: usize) -> Result<NlsRun> {
    let eps0 = laws.capillarity.eps0();
    if eps0 == 0.0 {
        return Err(Error::param(
            "capillarity",
            "the Schrödinger solver needs the QHD law κ = ε₀²/(4ρ)",
        ));
    }
    let steps = super::ek::step_count(t_end, dt, sample_every)?;
    let stepper = NlsStepper::new(psi0.grid(), dt, eps0, laws.energy)?;
    let mut psi = psi0.clone();
    let sample = |psi: &WaveField, t: f64| -> Result<(EKState, EnergyRecord, f64)> {
        let s = madelung_with_threshold(psi, eps0, laws.rho_min).map_err(|e| Error::Aborted {
            time: t,
            reason: e.to_string(),
        })?;
        let rec = EnergyRecord::of(&s, t, laws)?;
        Ok((s, rec, nls_energy(psi, eps0, &laws.energy)))
    };
    let (s, r, w) = sample(&psi, 0.0)?;
    let (mut samples, mut energy, mut wave_energy) = (vec![s], vec![r], vec![w]);
    for k in 1..=steps {
        stepper.step(&mut psi);
        if k % sample_every == 0 {
            let (s, r, w) = sample(&psi, k as f64 * dt)?;
            samples.push(s);
            energy.push(r);
            wave_energy.push(w);
        }
    }
    if psi.values.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Aborted {
            time: t_end,
            reason: "non-finite wave function".into(),
        });
    }
    Ok(NlsRun {
        trajectory: Trajectory::new(0.0, dt * sample_every as f64, samples, *laws)?,
        energy,
        wave_energy,
        last: psi,
        steps,
        dt,
    })
}
