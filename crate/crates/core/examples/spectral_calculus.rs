//! Pseudo-spectral derivatives on the torus, Parseval, and a snapshot round trip.

use ek_core::constitutive::EKState;
use ek_core::fields::spectral::spectral_energy;
use ek_core::fields::{
    integrate, read_snapshot, spectral_divergence, spectral_gradient, spectral_laplacian, write_snapshot, ScalarField,
    TorusGrid, VectorField,
};

fn main() -> ek_core::Result<()> {
    let g = TorusGrid::periodic(2, 64)?;
    let f = ScalarField::from_fn(g, |x, y| (x + 2.0 * y).sin() + 0.3 * (3.0 * x).cos());

    let grad = spectral_gradient(&f);
    let exact_x = ScalarField::from_fn(g, |x, y| (x + 2.0 * y).cos() - 0.9 * (3.0 * x).sin());
    println!(
        "|∂x f − exact|_∞      {:.2e}",
        grad.component(0).sub(&exact_x).max_abs()
    );

    let lap = spectral_laplacian(&f);
    println!(
        "|div∇f − Δf|_∞        {:.2e}",
        spectral_divergence(&grad).sub(&lap).max_abs()
    );
    println!("∫ div ∇f              {:.2e}", integrate(&spectral_divergence(&grad)));
    println!(
        "∫f² vs Σ|f̂|²          {:.12} {:.12}",
        integrate(&f.mul(&f)),
        spectral_energy(&f)
    );

    // ρ, m₁, m₂ in the little-endian snapshot format
    let rho = f.map(|v| 2.0 + 0.5 * v);
    let m = VectorField::new(vec![grad.component(0).clone(), grad.component(1).clone()])?;
    let state = EKState::from_parts(rho, m)?;
    let path = std::env::temp_dir().join("spectral_calculus.ekf");
    write_snapshot(&state, 0.25, &path)?;
    let (back, t) = read_snapshot(&path)?;
    println!("snapshot t = {t}, identical = {}", back == state);
    Ok(())
}
