//! Direct RK4 integration of the Euler–Korteweg system and its conservation drifts.

use ek_core::constitutive::{CapillarityLaw, EKState, EnergyLaw, Laws};
use ek_core::dynamics::{cfl_dt, simulate, steps_for};
use ek_core::fields::{ScalarField, TorusGrid};

fn main() -> ek_core::Result<()> {
    let laws = Laws::new(
        EnergyLaw::Gamma { a: 1.0, gamma: 2.0 },
        CapillarityLaw::Constant { kappa0: 0.25 },
    )?;
    let g = TorusGrid::periodic(1, 256)?;
    let init = EKState::at_rest(ScalarField::from_fn(g, |x, _| 1.0 + 0.1 * x.cos()));

    let t_end = 0.5;
    let (steps, _) = steps_for(t_end, cfl_dt(&init, &laws, 0.25));
    // ten samples: round the step count up to a multiple of 10
    let steps = steps.div_ceil(10) * 10;
    let dt = t_end / steps as f64;
    println!("dt = {dt:.4e}, {steps} steps");
    let run = simulate(&init, t_end, dt, &laws, steps / 10)?;
    for r in &run.energy {
        println!("t {:.3}  mass {:.15}  energy {:.15}", r.t, r.mass, r.total_energy);
    }
    println!(
        "mass drift {:.2e}, energy drift {:.2e}",
        run.mass_drift(),
        run.energy_drift()
    );
    let last = run.trajectory.last();
    println!(
        "ρ range at T: [{:.6}, {:.6}]",
        last.density().min(),
        last.density().max()
    );
    Ok(())
}
