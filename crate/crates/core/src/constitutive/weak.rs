use rayon::prelude::*;

use crate::dynamics::Trajectory;
use crate::error::Result;
use crate::fields::integrate;
use crate::mollify::{support_integral, TestFunction};

use super::{energy_density, energy_flux, Laws};

/// `∫∫ E ∂_t φ + F · ∇φ dx dt` over the trajectory, Simpson in time and
/// the rectangle rule in space. Vanishes for energy-conserving solutions.
pub fn weak_energy_residual(traj: &Trajectory, phi: &TestFunction, laws: &Laws) -> Result<f64> {
    phi.check_support(traj.start_time(), traj.end_time())?;
    let grid = *traj.grid();
    let psi = phi.psi_field(&grid);
    let grad = phi.grad_psi_field(&grid);
    let per_time = (0..traj.len())
        .into_par_iter()
        .map(|i| {
            let t = traj.time(i);
            let (chi, dchi) = (phi.chi(t), phi.dchi(t));
            if chi == 0.0 && dchi == 0.0 {
                return Ok(0.0);
            }
            let s = &traj.samples()[i];
            let mut v = dchi * integrate(&energy_density(s, laws)?.mul(&psi));
            if !phi.is_spatially_constant() {
                v += chi * integrate(&energy_flux(s, laws)?.dot(&grad));
            }
            Ok(v)
        })
        .collect::<Result<Vec<f64>>>()?;
    support_integral(traj.start_time(), traj.dt_sample(), &per_time, phi.support())
}
