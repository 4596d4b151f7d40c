use serde::{Deserialize, Serialize};

use crate::constitutive::{stress_from_parts, total_energy, EKState, Laws};
use crate::error::{Error, Result};
use crate::fields::spectral::{dealias, tensor_divergence};
use crate::fields::{
    spectral_divergence, spectral_gradient, spectral_laplacian, ScalarField, SymTensorField, VectorField,
};

use super::Trajectory;

/// Default Courant factor.
pub const DEFAULT_CFL: f64 = 0.25;

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Apply the 2/3 rule to nonlinear products before differentiating.
    #[serde(default)]
    pub dealias: bool,
}

/// `(∂_t ρ, ∂_t m)` of the conservative system.
pub fn ek_rhs(state: &EKState, laws: &Laws) -> Result<(ScalarField, VectorField)> {
    ek_rhs_with(state, laws, &SolverOptions::default())
}

pub fn ek_rhs_with(state: &EKState, laws: &Laws, opts: &SolverOptions) -> Result<(ScalarField, VectorField)> {
    let rho = state.density();
    laws.check_field(rho, "right-hand side")?;
    let grid = *rho.grid();
    let d = grid.dim();
    let m = state.momentum();
    let filter = |f: ScalarField| if opts.dealias { dealias(&f) } else { f };

    let drho = spectral_divergence(m).scale(-1.0);

    let u = state.velocity();
    let q = spectral_gradient(rho);
    let lap = spectral_laplacian(rho);
    let s = stress_from_parts(rho, &q, &lap, &laws.capillarity);
    let p = rho.map(|r| laws.energy.pressure(r));
    // total flux T = u ⊗ m + p I − S, so ∂_t m = −div T
    let mut comps = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            let mut c = u.component(i).mul(m.component(j)).sub(s.entry(i, j));
            if i == j {
                c = c.add(&p);
            }
            comps.push(filter(c));
        }
    }
    let flux = SymTensorField::new(grid, comps)?;
    let dm = tensor_divergence(&flux).scale(-1.0);
    Ok((drho, dm))
}

/// `C · dx² / (ε₀ + max √(κρ) + max|u| · dx)`, with ε₀ = 0 for constant κ.
pub fn cfl_dt(state: &EKState, laws: &Laws, c_cfl: f64) -> f64 {
    let cap = &laws.capillarity;
    let dx = state.grid().spacing();
    let disp = state
        .density()
        .values()
        .iter()
        .fold(0.0f64, |a, &r| a.max((cap.kappa(r) * r).sqrt()));
    let umax = state
        .velocity()
        .norm_sq()
        .values()
        .iter()
        .fold(0.0f64, |a, v| a.max(v.sqrt()));
    c_cfl * dx * dx / (cap.eps0() + disp + umax * dx)
}

/// Step count and step size covering `[0, t_end]` with steps no larger than
/// `dt_max`.
pub fn steps_for(t_end: f64, dt_max: f64) -> (usize, f64) {
    if t_end <= 0.0 {
        return (0, dt_max);
    }
    let n = (t_end / dt_max - 1e-9).ceil().max(1.0) as usize;
    (n, t_end / n as f64)
}

/// One classical Runge–Kutta step.
pub fn step_rk4(state: &EKState, dt: f64, laws: &Laws) -> Result<EKState> {
    step_rk4_with(state, dt, laws, &SolverOptions::default())
}

pub fn step_rk4_with(state: &EKState, dt: f64, laws: &Laws, opts: &SolverOptions) -> Result<EKState> {
    let stage = |s: &EKState, k: usize| {
        ek_rhs_with(s, laws, opts).map_err(|e| match e {
            Error::Vacuum { value, rho_min, .. } => Error::Vacuum {
                value,
                rho_min,
                context: format!("RK4 stage {k}"),
            },
            other => other,
        })
    };
    let (r1, m1) = stage(state, 1)?;
    let (r2, m2) = stage(&state.axpy(0.5 * dt, &r1, &m1), 2)?;
    let (r3, m3) = stage(&state.axpy(0.5 * dt, &r2, &m2), 3)?;
    let (r4, m4) = stage(&state.axpy(dt, &r3, &m3), 4)?;
    let drho = r1.add(&r2.scale(2.0)).add(&r3.scale(2.0)).add(&r4);
    let dm = m1.add(&m2.scale(2.0)).add(&m3.scale(2.0)).add(&m4);
    Ok(state.axpy(dt / 6.0, &drho, &dm))
}

/// One row of `energy.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyRecord {
    pub t: f64,
    pub mass: f64,
    pub total_energy: f64,
}

impl EnergyRecord {
    pub fn of(state: &EKState, t: f64, laws: &Laws) -> Result<Self> {
        Ok(Self {
            t,
            mass: state.mass(),
            total_energy: total_energy(state, laws)?,
        })
    }
}

/// Largest relative deviation of a series from its first value.
pub fn relative_drift(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut it = values.into_iter();
    let Some(first) = it.next() else {
        return 0.0;
    };
    it.fold(0.0, |m, v| m.max(((v - first) / first).abs()))
}

/// A solver run: the sampled trajectory and its conserved quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub trajectory: Trajectory,
    pub energy: Vec<EnergyRecord>,
    pub steps: usize,
    pub dt: f64,
}

impl Simulation {
    pub fn mass_drift(&self) -> f64 {
        relative_drift(self.energy.iter().map(|r| r.mass))
    }

    pub fn energy_drift(&self) -> f64 {
        relative_drift(self.energy.iter().map(|r| r.total_energy))
    }
}

pub(crate) fn step_count(t_end: f64, dt: f64, sample_every: usize) -> Result<usize> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::param("t_end", format!("{t_end} must be non-negative")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("{dt} must be positive")));
    }
    if sample_every == 0 {
        return Err(Error::param("sample_every", "must be positive"));
    }
    let n = (t_end / dt).round();
    if (n * dt - t_end).abs() > 1e-9 * t_end.max(dt) {
        return Err(Error::param("dt", format!("t_end = {t_end} is not a multiple of {dt}")));
    }
    let n = n as usize;
    if !n.is_multiple_of(sample_every) {
        return Err(Error::param(
            "sample_every",
            format!("{n} steps are not a multiple of {sample_every}"),
        ));
    }
    Ok(n)
}

/// Integrate from `t = 0` to `t_end` with RK4, keeping every
/// `sample_every`-th state.
pub fn simulate(init: &EKState, t_end: f64, dt: f64, laws: &Laws, sample_every: usize) -> Result<Simulation> {
    simulate_with(init, t_end, dt, laws, sample_every, &SolverOptions::default())
}

pub fn simulate_with(
    init: &EKState,
    t_end: f64,
    dt: f64,
    laws: &Laws,
    sample_every: usize,
    opts: &SolverOptions,
) -> Result<Simulation> {
    let steps = step_count(t_end, dt, sample_every)?;
    init.validate(laws)?;
    let mut state = init.clone();
    let mut samples = vec![state.clone()];
    let mut energy = vec![EnergyRecord::of(&state, 0.0, laws)?];
    for k in 1..=steps {
        let t = k as f64 * dt;
        state = step_rk4_with(&state, dt, laws, opts).map_err(|e| Error::Aborted {
            time: t - dt,
            reason: e.to_string(),
        })?;
        if !state.density().is_finite() || !state.momentum().is_finite() {
            return Err(Error::Aborted {
                time: t,
                reason: "non-finite value in state".into(),
            });
        }
        if k % sample_every == 0 {
            energy.push(EnergyRecord::of(&state, t, laws).map_err(|e| Error::Aborted {
                time: t,
                reason: e.to_string(),
            })?);
            samples.push(state.clone());
        }
    }
    let trajectory = Trajectory::new(0.0, dt * sample_every as f64, samples, *laws)?;
    Ok(Simulation {
        trajectory,
        energy,
        steps,
        dt,
    })
}
