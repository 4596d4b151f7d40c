//! Structure functions and exponent fits for lacunary and random-phase series.

use ek_core::besov::{
    dyadic_shifts, estimate_space_time, fit_exponent, random_fourier_field, structure_function, weierstrass_field,
    weierstrass_traveling, TimeAxis,
};
use ek_core::fields::TorusGrid;

fn main() -> ek_core::Result<()> {
    let g = TorusGrid::periodic(1, 1 << 16)?;
    let shifts = dyadic_shifts(&g);
    for alpha in [0.2, 0.4, 0.6, 0.8] {
        let w = weierstrass_field(alpha, 14, &g, &[])?;
        let a = fit_exponent(&structure_function(&w, 3.0, &shifts)?)?;
        let r = random_fourier_field(alpha, 3, &g, (1 << 15) - 1)?;
        let b = fit_exponent(&structure_function(&r, 3.0, &shifts)?)?;
        println!(
            "α {alpha}: lacunary {:.4} (r² {:.4}), random {:.4} (r² {:.4})",
            a.alpha, a.r_squared, b.alpha, b.r_squared
        );
    }

    let table = structure_function(&weierstrass_field(0.3, 14, &g, &[])?, 3.0, &shifts)?;
    for e in table.entries.iter().step_by(3) {
        println!("  |ξ| {:.3e}  ‖δw‖₃ {:.4e}", e.shift, e.norm);
    }

    let gs = TorusGrid::periodic(1, 1024)?;
    let axis = TimeAxis {
        t0: 0.0,
        dt: 2.0 * std::f64::consts::PI / 512.0,
        nt: 512,
    };
    let st = weierstrass_traveling(0.5, 8, 0.5, &gs, axis, &[])?;
    let e = estimate_space_time(&st, 3.0)?;
    println!(
        "space-time: space {:.3}, time {:.3}, binding {:.3}",
        e.space.alpha, e.time.alpha, e.alpha
    );
    Ok(())
}
