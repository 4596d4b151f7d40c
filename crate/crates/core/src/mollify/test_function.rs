use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{simpson, ScalarField, TorusGrid, VectorField};

/// Time factor `χ` of a separable test function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum TimeProfile {
    /// `(1 − s²)²` with `s` mapping `(ta, tb)` onto `(−1, 1)`.
    Bump { ta: f64, tb: f64 },
    /// `χ ≡ 0`.
    Zero,
}

/// Space factor `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SpaceProfile {
    Constant,
    /// `Π_a ½(1 + cos(2π(x_a − c_a)/L))`.
    Bump {
        center: [f64; 2],
    },
}

/// `φ(t, x) = χ(t) ψ(x)` with analytic derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub chi: TimeProfile,
    pub psi: SpaceProfile,
}

impl TestFunction {
    pub fn new(chi: TimeProfile, psi: SpaceProfile) -> Result<Self> {
        if let TimeProfile::Bump { ta, tb } = chi {
            if !(ta.is_finite() && tb.is_finite() && ta < tb) {
                return Err(Error::Support(format!("empty time support ({ta}, {tb})")));
            }
        }
        Ok(Self { chi, psi })
    }

    /// Time bump on `(ta, tb)`, constant in space.
    pub fn time_bump(ta: f64, tb: f64) -> Result<Self> {
        Self::new(TimeProfile::Bump { ta, tb }, SpaceProfile::Constant)
    }

    pub fn zero() -> Self {
        Self {
            chi: TimeProfile::Zero,
            psi: SpaceProfile::Constant,
        }
    }

    /// Closed time support, `None` for the zero function.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self.chi {
            TimeProfile::Bump { ta, tb } => Some((ta, tb)),
            TimeProfile::Zero => None,
        }
    }

    /// Fail unless the time support lies in `[lo, hi]`.
    pub fn check_support(&self, lo: f64, hi: f64) -> Result<()> {
        let tol = 1e-9 * (hi - lo).abs().max(1.0);
        match self.support() {
            Some((ta, tb)) if ta < lo - tol || tb > hi + tol => {
                Err(Error::Support(format!("time support ({ta}, {tb}) leaves ({lo}, {hi})")))
            }
            _ => Ok(()),
        }
    }

    pub fn chi(&self, t: f64) -> f64 {
        match self.chi {
            TimeProfile::Bump { ta, tb } => {
                let s = (2.0 * t - ta - tb) / (tb - ta);
                if s.abs() < 1.0 {
                    (1.0 - s * s).powi(2)
                } else {
                    0.0
                }
            }
            TimeProfile::Zero => 0.0,
        }
    }

    pub fn dchi(&self, t: f64) -> f64 {
        match self.chi {
            TimeProfile::Bump { ta, tb } => {
                let s = (2.0 * t - ta - tb) / (tb - ta);
                if s.abs() < 1.0 {
                    -4.0 * s * (1.0 - s * s) * 2.0 / (tb - ta)
                } else {
                    0.0
                }
            }
            TimeProfile::Zero => 0.0,
        }
    }

    pub fn is_spatially_constant(&self) -> bool {
        matches!(self.psi, SpaceProfile::Constant)
    }

    fn factors(&self, grid: &TorusGrid, x: [f64; 2]) -> ([f64; 2], [f64; 2]) {
        let mut val = [1.0; 2];
        let mut der = [0.0; 2];
        if let SpaceProfile::Bump { center } = self.psi {
            let w = 2.0 * PI / grid.length();
            for a in 0..grid.dim() {
                let arg = w * (x[a] - center[a]);
                val[a] = 0.5 * (1.0 + arg.cos());
                der[a] = -0.5 * w * arg.sin();
            }
        }
        (val, der)
    }

    pub fn psi(&self, grid: &TorusGrid, x: [f64; 2]) -> f64 {
        let (v, _) = self.factors(grid, x);
        v[0] * v[1]
    }

    pub fn grad_psi(&self, grid: &TorusGrid, x: [f64; 2]) -> [f64; 2] {
        let (v, d) = self.factors(grid, x);
        [d[0] * v[1], v[0] * d[1]]
    }

    pub fn psi_field(&self, grid: &TorusGrid) -> ScalarField {
        ScalarField::from_fn(*grid, |x, y| self.psi(grid, [x, y]))
    }

    pub fn grad_psi_field(&self, grid: &TorusGrid) -> VectorField {
        let comps = (0..grid.dim())
            .map(|a| ScalarField::from_fn(*grid, |x, y| self.grad_psi(grid, [x, y])[a]))
            .collect();
        VectorField::new(comps).expect("components share the grid")
    }
}

/// `∫ χ(t) g(t) dt`-type time integral of per-sample values by composite
/// Simpson, restricted to the node window covering the support so that a
/// support whose endpoints are nodes is integrated at full order.
pub(crate) fn support_integral(t0: f64, dt: f64, samples: &[f64], support: Option<(f64, f64)>) -> Result<f64> {
    let n = samples.len();
    if n < 3 {
        return Err(Error::TooFewSamples(n));
    }
    let (mut ia, mut ib) = (0, n - 1);
    if let Some((ta, tb)) = support {
        let a = ((ta - t0) / dt + 1e-9).floor();
        let b = ((tb - t0) / dt - 1e-9).ceil();
        ia = a.clamp(0.0, (n - 1) as f64) as usize;
        ib = b.clamp(0.0, (n - 1) as f64) as usize;
        while ib - ia < 2 {
            if ib < n - 1 {
                ib += 1;
            } else {
                ia -= 1;
            }
        }
    }
    simpson(&samples[ia..=ib], dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_matches_finite_difference() {
        let phi = TestFunction::time_bump(0.2, 0.9).unwrap();
        for t in [0.25, 0.4, 0.55, 0.8] {
            let h = 1e-6;
            let fd = (phi.chi(t + h) - phi.chi(t - h)) / (2.0 * h);
            assert!((fd - phi.dchi(t)).abs() < 1e-7);
        }
        assert_eq!(phi.chi(0.1), 0.0);
        assert_eq!(phi.chi(0.2), 0.0);
        assert!((phi.chi(0.55) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn spatial_bump_gradient() {
        let g = TorusGrid::periodic(2, 16).unwrap();
        let phi = TestFunction::new(
            TimeProfile::Bump { ta: 0.0, tb: 1.0 },
            SpaceProfile::Bump { center: [1.0, 2.0] },
        )
        .unwrap();
        let x = [0.7, 2.9];
        let h = 1e-6;
        for a in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let fd = (phi.psi(&g, xp) - phi.psi(&g, xm)) / (2.0 * h);
            assert!((fd - phi.grad_psi(&g, x)[a]).abs() < 1e-8);
        }
        assert!((phi.psi(&g, [1.0, 2.0]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn support_checks() {
        let phi = TestFunction::time_bump(0.2, 0.8).unwrap();
        assert!(phi.check_support(0.1, 0.9).is_ok());
        assert!(phi.check_support(0.3, 0.9).is_err());
        assert!(TestFunction::time_bump(0.5, 0.5).is_err());
        assert!(TestFunction::zero().check_support(1.0, 0.0).is_ok());
    }

    #[test]
    fn windowed_integral_is_exact_for_nodal_support() {
        // ∫ χ' = 0 and ∫ χ = 16/15 · (tb − ta)/2 for the quartic bump
        let phi = TestFunction::time_bump(0.3, 0.7).unwrap();
        let dt = 0.01;
        let chi: Vec<f64> = (0..101).map(|i| phi.chi(i as f64 * dt)).collect();
        let dchi: Vec<f64> = (0..101).map(|i| phi.dchi(i as f64 * dt)).collect();
        let s = phi.support();
        assert!((support_integral(0.0, dt, &chi, s).unwrap() - 16.0 / 15.0 * 0.2).abs() < 1e-6);
        assert!(support_integral(0.0, dt, &dchi, s).unwrap().abs() < 1e-14);
        assert!(support_integral(0.0, dt, &chi[..2], s).is_err());
    }
}
