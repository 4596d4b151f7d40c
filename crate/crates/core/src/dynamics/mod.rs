//! Time evolution: a direct pseudo-spectral RK4 solver for the conservative
//! system and a split-step Schrödinger solver with the Madelung map.

mod ek;
mod nls;
mod trajectory;

pub use ek::{
    cfl_dt, ek_rhs, ek_rhs_with, relative_drift, simulate, simulate_with, step_rk4, step_rk4_with, steps_for,
    EnergyRecord, Simulation, SolverOptions, DEFAULT_CFL,
};
pub use nls::{
    madelung, madelung_with_threshold, nls_energy, nls_split_step, simulate_nls, NlsRun, NlsStepper, WaveField,
};
pub use trajectory::Trajectory;
