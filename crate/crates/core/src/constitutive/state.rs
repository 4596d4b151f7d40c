use crate::error::{Error, Result};
use crate::fields::{ScalarField, TorusGrid, VectorField};

use super::Laws;

/// Density and momentum `m = ρu` on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct EKState {
    rho: ScalarField,
    m: VectorField,
}

impl EKState {
    /// Build a state, rejecting non-finite values and densities below the
    /// vacuum threshold of `laws`.
    pub fn new(rho: ScalarField, m: VectorField, laws: &Laws) -> Result<Self> {
        let state = Self::from_parts(rho, m)?;
        state.validate(laws)?;
        Ok(state)
    }

    /// Shape checks only.
    pub fn from_parts(rho: ScalarField, m: VectorField) -> Result<Self> {
        if rho.grid() != m.grid() {
            return Err(Error::Shape("density and momentum grids differ".into()));
        }
        Ok(Self { rho, m })
    }

    pub(crate) fn from_parts_unchecked(rho: ScalarField, m: VectorField) -> Self {
        Self { rho, m }
    }

    /// State at rest with the given density.
    pub fn at_rest(rho: ScalarField) -> Self {
        let grid = *rho.grid();
        Self::from_parts_unchecked(rho, VectorField::zeros(grid))
    }

    /// State from density and velocity, `m = ρu`.
    pub fn from_velocity(rho: ScalarField, u: &VectorField) -> Result<Self> {
        let m = u.mul_scalar(&rho);
        Self::from_parts(rho, m)
    }

    pub fn validate(&self, laws: &Laws) -> Result<()> {
        if !self.rho.is_finite() || !self.m.is_finite() {
            return Err(Error::NonFinite {
                what: "state",
                index: 0,
            });
        }
        laws.check_field(&self.rho, "state")
    }

    pub fn grid(&self) -> &TorusGrid {
        self.rho.grid()
    }

    pub fn density(&self) -> &ScalarField {
        &self.rho
    }

    pub fn momentum(&self) -> &VectorField {
        &self.m
    }

    /// `u = m / ρ` pointwise.
    pub fn velocity(&self) -> VectorField {
        self.m.map_components(|c| c.zip_map(&self.rho, |m, r| m / r))
    }

    /// `∫ ρ dx`.
    pub fn mass(&self) -> f64 {
        crate::fields::integrate(&self.rho)
    }

    /// `self + c · (dρ, dm)`, used by the time stepper.
    pub(crate) fn axpy(&self, c: f64, drho: &ScalarField, dm: &VectorField) -> Self {
        Self {
            rho: self.rho.zip_map(drho, |a, b| a + c * b),
            m: self.m.add(&dm.scale(c)),
        }
    }
}
