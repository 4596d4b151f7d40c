//! Constitutive laws, Korteweg stress, energy density and flux.

mod energy;
mod laws;
mod state;
mod stress;
mod weak;

pub use energy::{energy_density, energy_flux, total_energy};
pub use laws::{pressure, CapillarityLaw, EnergyLaw, Laws, DEFAULT_RHO_MIN};
pub use state::EKState;
pub use stress::{
    chemical_potential, expanded_flux_divergence, potential_force, stress, stress_divergence_form, stress_field,
    stress_field_divergence_form, stress_from_parts, Mat2,
};
pub use weak::weak_energy_residual;
