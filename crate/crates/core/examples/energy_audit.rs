//! Weak-form energy balance and the mollified identity on a Schrödinger trajectory.

use ek_core::constitutive::{total_energy, weak_energy_residual, CapillarityLaw, EnergyLaw, Laws};
use ek_core::dynamics::{simulate_nls, WaveField};
use ek_core::fields::TorusGrid;
use ek_core::mollify::{commutator_record, MollifierKernel, SpaceProfile, TestFunction, TimeProfile};
use rustfft::num_complex::Complex64;

fn main() -> ek_core::Result<()> {
    let laws = Laws::new(
        EnergyLaw::Gamma { a: 0.5, gamma: 2.0 },
        CapillarityLaw::Qhd { eps0: 1.0 },
    )?;
    let g = TorusGrid::periodic(1, 256)?;
    let psi = WaveField::from_fn(g, |x, _| Complex64::from_polar(1.0 + 0.1 * x.cos(), 0.2 * x.sin()))?;
    let traj = simulate_nls(&psi, 1.0, 1e-4, &laws, 10)?.trajectory;
    let e0 = total_energy(traj.first(), &laws)?;

    for psi_profile in [SpaceProfile::Constant, SpaceProfile::Bump { center: [1.0, 0.0] }] {
        let phi = TestFunction::new(TimeProfile::Bump { ta: 0.1, tb: 0.9 }, psi_profile)?;
        let weak = weak_energy_residual(&traj, &phi, &laws)?;
        println!("{psi_profile:?}: weak residual / E = {:.3e}", weak / e0);
        for eps in [0.02, 0.04, 0.08] {
            let k = MollifierKernel::new(eps)?.with_min_space_cells(1.0);
            let rec = commutator_record(&traj, &k, &phi, &laws)?;
            println!(
                "  ε {eps:<5} ΣR {:>11.3e}  flux {:>11.3e}  identity {:>10.3e}",
                rec.sum_r, rec.flux_term, rec.identity_residual
            );
        }
    }
    Ok(())
}
