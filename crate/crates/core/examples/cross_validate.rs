//! The direct solver and the Schrödinger solver started from the same QHD data.

use ek_core::constitutive::{CapillarityLaw, EnergyLaw, Laws};
use ek_core::dynamics::{madelung, simulate, simulate_nls, WaveField};
use ek_core::fields::TorusGrid;
use rustfft::num_complex::Complex64;

fn main() -> ek_core::Result<()> {
    let laws = Laws::new(
        EnergyLaw::Gamma { a: 0.5, gamma: 2.0 },
        CapillarityLaw::Qhd { eps0: 1.0 },
    )?;
    let g = TorusGrid::periodic(1, 128)?;
    let psi = WaveField::from_fn(g, |x, _| Complex64::from_polar(1.0 + 0.1 * x.cos(), 0.1 * x.sin()))?;
    let (t_end, dt, every) = (0.2, 1e-4, 200);

    let direct = simulate(&madelung(&psi, 1.0)?, t_end, dt, &laws, every)?;
    let wave = simulate_nls(&psi, t_end, dt, &laws, every)?;
    for (a, b) in direct.trajectory.samples().iter().zip(wave.trajectory.samples()) {
        let d_rho = a.density().sub(b.density()).lp_norm(2.0) / b.density().lp_norm(2.0);
        let d_m = a.momentum().component(0).sub(b.momentum().component(0)).lp_norm(2.0);
        println!("relative ‖Δρ‖₂ {d_rho:.3e}   ‖Δm‖₂ {d_m:.3e}");
    }
    Ok(())
}
