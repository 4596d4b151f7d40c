//! Split-step cubic Schrödinger run read back as a quantum-hydrodynamic trajectory.

use ek_core::constitutive::{total_energy, CapillarityLaw, EnergyLaw, Laws};
use ek_core::dynamics::{madelung, nls_energy, simulate_nls, WaveField};
use ek_core::fields::TorusGrid;
use rustfft::num_complex::Complex64;

fn main() -> ek_core::Result<()> {
    // h(ρ) = ρ²/2, so h'(ρ) = ρ
    let law = EnergyLaw::Gamma { a: 0.5, gamma: 2.0 };
    let laws = Laws::new(law, CapillarityLaw::Qhd { eps0: 1.0 })?;
    let g = TorusGrid::periodic(1, 512)?;
    let psi = WaveField::from_fn(g, |x, _| Complex64::from_polar(1.0 + 0.1 * x.cos(), x.sin()))?;

    let s = madelung(&psi, 1.0)?;
    println!(
        "hydrodynamic energy {:.12}, wave energy {:.12}",
        total_energy(&s, &laws)?,
        nls_energy(&psi, 1.0, &law)
    );

    let run = simulate_nls(&psi, 1.0, 1e-4, &laws, 1000)?;
    for (r, w) in run.energy.iter().zip(&run.wave_energy) {
        println!(
            "t {:.1}  mass {:.14}  E {:.14}  wave {:.14}",
            r.t, r.mass, r.total_energy, w
        );
    }
    println!(
        "drifts: mass {:.2e}, energy {:.2e}, wave energy {:.2e}",
        run.mass_drift(),
        run.energy_drift(),
        run.wave_energy_drift()
    );
    Ok(())
}
