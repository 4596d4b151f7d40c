use ek_core::constitutive::{CapillarityLaw, EnergyLaw, Laws};
use ek_core::dynamics::{simulate_nls, WaveField};
use ek_core::fields::{spectral_divergence, TorusGrid};
use rustfft::num_complex::Complex64;

/// `max_t ‖∂_t ρ + div m‖₂` with a fourth-order central difference in time.
fn continuity_defect(dt: f64, sample_every: usize) -> f64 {
    let laws = Laws::new(
        EnergyLaw::Gamma { a: 0.5, gamma: 2.0 },
        CapillarityLaw::Qhd { eps0: 1.0 },
    )
    .unwrap();
    let g = TorusGrid::periodic(1, 128).unwrap();
    let psi = WaveField::from_fn(g, |x, _| Complex64::from_polar(1.0 + 0.1 * x.cos(), 0.3 * x.sin())).unwrap();
    let run = simulate_nls(&psi, 0.2, dt, &laws, sample_every).unwrap();
    let s = run.trajectory.samples();
    let h = run.trajectory.dt_sample();
    (2..s.len() - 2)
        .map(|i| {
            let rho = |k: usize| s[k].density();
            let dt_rho = rho(i - 2)
                .sub(rho(i + 2))
                .add(&rho(i + 1).sub(rho(i - 1)).scale(8.0))
                .scale(1.0 / (12.0 * h));
            dt_rho.add(&spectral_divergence(s[i].momentum())).lp_norm(2.0)
        })
        .fold(0.0, f64::max)
}

#[test]
fn madelung_trajectory_satisfies_continuity() {
    let coarse = continuity_defect(4e-4, 5);
    let fine = continuity_defect(2e-4, 10);
    assert!(coarse < 1e-5, "{coarse}");
    let ratio = coarse / fine;
    assert!((3.5..4.5).contains(&ratio), "{coarse} -> {fine}");
}
