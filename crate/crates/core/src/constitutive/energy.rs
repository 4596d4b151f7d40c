use crate::error::Result;
use crate::fields::{integrate, spectral_divergence, spectral_gradient, ScalarField, VectorField};

use super::{EKState, Laws};

/// `E = ½ρ|u|² + h(ρ) + ½κ(ρ)|∇ρ|²`.
pub fn energy_density(state: &EKState, laws: &Laws) -> Result<ScalarField> {
    let rho = state.density();
    laws.check_field(rho, "energy density")?;
    let m2 = state.momentum().norm_sq();
    let q2 = spectral_gradient(rho).norm_sq();
    let cap = &laws.capillarity;
    let vals = rho
        .values()
        .iter()
        .zip(m2.values())
        .zip(q2.values())
        .map(|((&p, &m2), &q2)| 0.5 * m2 / p + laws.energy.h(p) + 0.5 * cap.kappa(p) * q2)
        .collect();
    Ok(ScalarField::from_raw(*rho.grid(), vals))
}

/// `ρu(½|u|² + h'(ρ) + ½κ'(ρ)|∇ρ|² − div(κ(ρ)∇ρ)) + κ(ρ)∇ρ div(ρu)`.
pub fn energy_flux(state: &EKState, laws: &Laws) -> Result<VectorField> {
    let rho = state.density();
    laws.check_field(rho, "energy flux")?;
    let cap = &laws.capillarity;
    let m = state.momentum();
    let q = spectral_gradient(rho);
    let q2 = q.norm_sq();
    let kappa = rho.map(|v| cap.kappa(v));
    let div_kq = spectral_divergence(&q.mul_scalar(&kappa));
    let div_m = spectral_divergence(m);
    let m2 = m.norm_sq();
    let n = rho.grid().len();
    let coef: Vec<f64> = (0..n)
        .map(|i| {
            let p = rho.values()[i];
            0.5 * m2.values()[i] / (p * p) + laws.energy.dh(p) + 0.5 * cap.dkappa(p) * q2.values()[i]
                - div_kq.values()[i]
        })
        .collect();
    let coef = ScalarField::from_raw(*rho.grid(), coef);
    let kdiv = kappa.mul(&div_m);
    Ok(m.mul_scalar(&coef).add(&q.mul_scalar(&kdiv)))
}

/// `∫ E dx`.
pub fn total_energy(state: &EKState, laws: &Laws) -> Result<f64> {
    Ok(integrate(&energy_density(state, laws)?))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::constitutive::{CapillarityLaw, EnergyLaw};
    use crate::fields::TorusGrid;

    fn laws(kappa0: f64) -> Laws {
        Laws::new(
            EnergyLaw::Gamma { a: 1.0, gamma: 2.0 },
            CapillarityLaw::Constant { kappa0 },
        )
        .unwrap()
    }

    fn grid() -> TorusGrid {
        TorusGrid::periodic(1, 64).unwrap()
    }

    #[test]
    fn constant_state_energy() {
        let s = EKState::at_rest(ScalarField::constant(grid(), 1.0));
        let e = energy_density(&s, &laws(0.7)).unwrap();
        assert!(e.values().iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert!((total_energy(&s, &laws(0.7)).unwrap() - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn moving_constant_state() {
        let g = grid();
        let rho = ScalarField::constant(g, 2.0);
        let u = VectorField::new(vec![ScalarField::constant(g, 3.0)]).unwrap();
        let s = EKState::from_velocity(rho, &u).unwrap();
        let e = energy_density(&s, &laws(5.0)).unwrap();
        assert!(e.values().iter().all(|v| (v - 13.0).abs() < 1e-13));
    }

    #[test]
    fn perturbed_density_total_energy() {
        // oracle: ∫(1 + 0.1 cos x)² + ½·(0.1 sin x)² over [0, 2π] by a fine midpoint rule
        let m = 100_000;
        let h = 2.0 * PI / m as f64;
        let oracle: f64 = (0..m)
            .map(|i| {
                let x = (i as f64 + 0.5) * h;
                (1.0 + 0.1 * x.cos()).powi(2) + 0.5 * (0.1 * x.sin()).powi(2)
            })
            .sum::<f64>()
            * h;
        assert!((oracle - 2.015 * PI).abs() < 1e-10);
        let s = EKState::at_rest(ScalarField::from_fn(grid(), |x, _| 1.0 + 0.1 * x.cos()));
        assert!((total_energy(&s, &laws(1.0)).unwrap() - 2.015 * PI).abs() < 1e-12);
    }

    #[test]
    fn flux_vanishes_at_rest() {
        let s = EKState::at_rest(ScalarField::from_fn(grid(), |x, _| 1.0 + 0.1 * x.cos()));
        let f = energy_flux(&s, &laws(1.0)).unwrap();
        assert_eq!(f.component(0).max_abs(), 0.0);
    }

    #[test]
    fn flux_of_uniform_flow() {
        let g = grid();
        let u = VectorField::new(vec![ScalarField::constant(g, 2.0)]).unwrap();
        let s = EKState::from_velocity(ScalarField::constant(g, 1.0), &u).unwrap();
        let f = energy_flux(&s, &laws(0.4)).unwrap();
        assert!(f.component(0).values().iter().all(|v| (v - 8.0).abs() < 1e-13));
    }

    #[test]
    fn flux_matches_finite_difference_assembly() {
        // oracle: the same formula with second-order central differences;
        // error must shrink like dx² toward the spectral value
        let l = laws(1.0);
        let oracle = |n: usize| -> f64 {
            let g = TorusGrid::periodic(1, n).unwrap();
            let dx = g.spacing();
            let rho: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * g.coord(i).cos()).collect();
            let u: Vec<f64> = (0..n).map(|i| 0.2 * g.coord(i).sin()).collect();
            let d = |f: &[f64], i: usize| (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2.0 * dx);
            let m: Vec<f64> = rho.iter().zip(&u).map(|(r, u)| r * u).collect();
            let q: Vec<f64> = (0..n).map(|i| d(&rho, i)).collect();
            let flux: Vec<f64> = (0..n)
                .map(|i| m[i] * (0.5 * u[i] * u[i] + 2.0 * rho[i] - d(&q, i)) + q[i] * d(&m, i))
                .collect();
            let s = EKState::from_velocity(
                ScalarField::new(g, rho.clone()).unwrap(),
                &VectorField::new(vec![ScalarField::new(g, u).unwrap()]).unwrap(),
            )
            .unwrap();
            let spec = energy_flux(&s, &l).unwrap();
            spec.component(0)
                .values()
                .iter()
                .zip(&flux)
                .fold(0.0, |e, (a, b)| f64::max(e, (a - b).abs()))
        };
        let e1 = oracle(64);
        let e2 = oracle(128);
        assert!(e1 < 1e-3);
        let ratio = e1 / e2;
        assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
    }
}
