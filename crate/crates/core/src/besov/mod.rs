//! Structure functions, Besov seminorms, exponent fits and rough-field generators.

mod fit;
mod generators;
mod structure;

pub use fit::{fit_exponent, fit_exponent_with, linear_fit, BesovEstimate};
pub use generators::{
    lacunary_traveling, random_fourier_field, weierstrass_field, weierstrass_standing, weierstrass_traveling, TimeAxis,
};
pub use structure::{
    besov_norm, besov_seminorm, dyadic_shifts, dyadic_time_shifts, structure_function, structure_function_space,
    structure_function_time, StructureEntry, StructureTable,
};

use crate::error::Result;
use crate::mollify::SpaceTimeField;

/// Space and time exponents of a space-time field; `alpha` is the smaller.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SpaceTimeEstimate {
    pub space: BesovEstimate,
    pub time: BesovEstimate,
    pub alpha: f64,
}

/// Fit spatial and temporal increments over the dyadic ladders.
pub fn estimate_space_time(w: &SpaceTimeField, p: f64) -> Result<SpaceTimeEstimate> {
    let space = fit_exponent(&structure_function_space(w, p, &dyadic_shifts(w.grid()))?)?;
    let time = fit_exponent(&structure_function_time(w, p, &dyadic_time_shifts(w))?)?;
    let alpha = space.alpha.min(time.alpha);
    Ok(SpaceTimeEstimate { space, time, alpha })
}
