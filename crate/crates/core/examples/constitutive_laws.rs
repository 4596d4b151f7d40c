//! Energy and capillarity laws, pressure, the Korteweg stress and the energy budget of a state.

use std::f64::consts::PI;

use ek_core::constitutive::{
    energy_flux, expanded_flux_divergence, pressure, stress, stress_divergence_form, total_energy, CapillarityLaw,
    EKState, EnergyLaw, Laws,
};
use ek_core::fields::{ScalarField, TorusGrid, VectorField};

fn main() -> ek_core::Result<()> {
    println!("{:>8} {:>12} {:>12} {:>12}", "rho", "gamma 1.4", "log", "linear");
    for rho in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let p = |law| pressure(&law, rho);
        println!(
            "{rho:>8} {:>12.6} {:>12.6} {:>12.6}",
            p(EnergyLaw::Gamma { a: 1.0, gamma: 1.4 })?,
            p(EnergyLaw::Log)?,
            p(EnergyLaw::Linear { c: 3.0 })?
        );
    }

    // QHD: ρκ' + κ = 0, so the |q|² term drops out of S
    let qhd = Laws::new(EnergyLaw::Log, CapillarityLaw::Qhd { eps0: 2.0 })?;
    let (rho, q, r) = (1.0, [1.0, 0.0], 2.0);
    let s = stress(rho, &q, r, &qhd)?;
    let s2 = stress_divergence_form(rho, &q, expanded_flux_divergence(rho, &q, r, &qhd.capillarity), &qhd)?;
    println!("QHD stress  {s:?}");
    println!("other form  {s2:?}");

    let laws = Laws::new(
        EnergyLaw::Gamma { a: 1.0, gamma: 2.0 },
        CapillarityLaw::Constant { kappa0: 1.0 },
    )?;
    let g = TorusGrid::periodic(1, 128)?;
    let rho = ScalarField::from_fn(g, |x, _| 1.0 + 0.1 * x.cos());
    let u = VectorField::new(vec![ScalarField::from_fn(g, |x, _| 0.2 * x.sin())])?;
    let at_rest = EKState::at_rest(rho.clone());
    println!("E(at rest) / π = {:.12}  (2.015)", total_energy(&at_rest, &laws)? / PI);
    let moving = EKState::from_velocity(rho, &u)?;
    let flux = energy_flux(&moving, &laws)?;
    println!("max |F| = {:.6}", flux.component(0).max_abs());
    Ok(())
}
