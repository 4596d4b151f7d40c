use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::ScalarField;

/// Default vacuum threshold.
pub const DEFAULT_RHO_MIN: f64 = 1e-6;

/// Internal energy density `h(ρ)` with closed-form derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum EnergyLaw {
    /// `h = A ρ^γ / (γ − 1)`, pressure `A ρ^γ`.
    Gamma {
        #[serde(rename = "A")]
        a: f64,
        gamma: f64,
    },
    /// `h = ρ log ρ`, pressure `ρ`.
    Log,
    /// `h = c ρ`, zero pressure.
    Linear { c: f64 },
}

impl EnergyLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            EnergyLaw::Gamma { a, gamma } => {
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::param("A", format!("{a} must be positive")));
                }
                if !(gamma > 1.0 && gamma.is_finite()) {
                    return Err(Error::param("gamma", format!("{gamma} must exceed 1")));
                }
                Ok(())
            }
            EnergyLaw::Log => Ok(()),
            EnergyLaw::Linear { c } if c.is_finite() => Ok(()),
            EnergyLaw::Linear { c } => Err(Error::param("c", format!("{c} is not finite"))),
        }
    }

    pub fn h(&self, rho: f64) -> f64 {
        match *self {
            EnergyLaw::Gamma { a, gamma } => a * rho.powf(gamma) / (gamma - 1.0),
            EnergyLaw::Log => rho * rho.ln(),
            EnergyLaw::Linear { c } => c * rho,
        }
    }

    pub fn dh(&self, rho: f64) -> f64 {
        match *self {
            EnergyLaw::Gamma { a, gamma } => a * gamma * rho.powf(gamma - 1.0) / (gamma - 1.0),
            EnergyLaw::Log => rho.ln() + 1.0,
            EnergyLaw::Linear { c } => c,
        }
    }

    pub fn d2h(&self, rho: f64) -> f64 {
        match *self {
            EnergyLaw::Gamma { a, gamma } => a * gamma * rho.powf(gamma - 2.0),
            EnergyLaw::Log => 1.0 / rho,
            EnergyLaw::Linear { .. } => 0.0,
        }
    }

    pub fn d3h(&self, rho: f64) -> f64 {
        match *self {
            EnergyLaw::Gamma { a, gamma } => a * gamma * (gamma - 2.0) * rho.powf(gamma - 3.0),
            EnergyLaw::Log => -1.0 / (rho * rho),
            EnergyLaw::Linear { .. } => 0.0,
        }
    }

    /// `p(ρ) = ρ h'(ρ) − h(ρ)` without a vacuum check.
    pub fn pressure(&self, rho: f64) -> f64 {
        rho * self.dh(rho) - self.h(rho)
    }
}

/// Capillarity coefficient `κ(ρ) > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CapillarityLaw {
    Constant {
        kappa0: f64,
    },
    /// Quantum hydrodynamics, `κ = ε₀² / (4ρ)`.
    Qhd {
        eps0: f64,
    },
}

impl CapillarityLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            CapillarityLaw::Constant { kappa0 } if kappa0 > 0.0 && kappa0.is_finite() => Ok(()),
            CapillarityLaw::Constant { kappa0 } => Err(Error::param("kappa0", format!("{kappa0} must be positive"))),
            CapillarityLaw::Qhd { eps0 } if eps0 > 0.0 && eps0.is_finite() => Ok(()),
            CapillarityLaw::Qhd { eps0 } => Err(Error::param("eps0", format!("{eps0} must be positive"))),
        }
    }

    pub fn kappa(&self, rho: f64) -> f64 {
        match *self {
            CapillarityLaw::Constant { kappa0 } => kappa0,
            CapillarityLaw::Qhd { eps0 } => eps0 * eps0 / (4.0 * rho),
        }
    }

    pub fn dkappa(&self, rho: f64) -> f64 {
        match *self {
            CapillarityLaw::Constant { .. } => 0.0,
            CapillarityLaw::Qhd { eps0 } => -eps0 * eps0 / (4.0 * rho * rho),
        }
    }

    pub fn d2kappa(&self, rho: f64) -> f64 {
        match *self {
            CapillarityLaw::Constant { .. } => 0.0,
            CapillarityLaw::Qhd { eps0 } => eps0 * eps0 / (2.0 * rho * rho * rho),
        }
    }

    /// The Planck-type constant of the QHD law, zero otherwise.
    pub fn eps0(&self) -> f64 {
        match *self {
            CapillarityLaw::Qhd { eps0 } => eps0,
            CapillarityLaw::Constant { .. } => 0.0,
        }
    }
}

/// The constitutive pair together with the vacuum threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Laws {
    pub energy: EnergyLaw,
    pub capillarity: CapillarityLaw,
    #[serde(default = "default_rho_min")]
    pub rho_min: f64,
}

fn default_rho_min() -> f64 {
    DEFAULT_RHO_MIN
}

impl Laws {
    pub fn new(energy: EnergyLaw, capillarity: CapillarityLaw) -> Result<Self> {
        let laws = Self {
            energy,
            capillarity,
            rho_min: DEFAULT_RHO_MIN,
        };
        laws.validate()?;
        Ok(laws)
    }

    pub fn with_rho_min(mut self, rho_min: f64) -> Self {
        self.rho_min = rho_min;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.energy.validate()?;
        self.capillarity.validate()?;
        if !(self.rho_min > 0.0 && self.rho_min.is_finite()) {
            return Err(Error::param("rho_min", format!("{} must be positive", self.rho_min)));
        }
        Ok(())
    }

    pub fn check_density(&self, rho: f64, context: &str) -> Result<()> {
        if rho >= self.rho_min {
            Ok(())
        } else {
            Err(Error::Vacuum {
                value: rho,
                rho_min: self.rho_min,
                context: context.to_string(),
            })
        }
    }

    pub fn check_field(&self, rho: &ScalarField, context: &str) -> Result<()> {
        // NaN fails the comparison as well
        match rho.values().iter().find(|v| !(**v >= self.rho_min)) {
            Some(&v) => Err(Error::Vacuum {
                value: rho.values().iter().copied().fold(v, f64::min),
                rho_min: self.rho_min,
                context: context.to_string(),
            }),
            None => Ok(()),
        }
    }

    /// `p(ρ) = ρ h'(ρ) − h(ρ)`, rejecting densities below the vacuum threshold.
    pub fn pressure(&self, rho: f64) -> Result<f64> {
        self.check_density(rho, "pressure")?;
        Ok(self.energy.pressure(rho))
    }
}

/// Pointwise pressure for a law with the default threshold.
pub fn pressure(law: &EnergyLaw, rho: f64) -> Result<f64> {
    if rho < DEFAULT_RHO_MIN || rho.is_nan() {
        return Err(Error::Vacuum {
            value: rho,
            rho_min: DEFAULT_RHO_MIN,
            context: "pressure".into(),
        });
    }
    Ok(law.pressure(rho))
}
