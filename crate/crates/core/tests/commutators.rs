use ek_core::besov::linear_fit;
use ek_core::constitutive::{weak_energy_residual, CapillarityLaw, EnergyLaw, Laws};
use ek_core::dynamics::{simulate_nls, Trajectory, WaveField};
use ek_core::fields::TorusGrid;
use ek_core::mollify::{
    commutator_fields, commutator_record, mollified_energy_identity_residual, weighted_residuals, MollifierKernel,
    SpaceProfile, SpaceTimeField, TestFunction, TimeProfile,
};
use rustfft::num_complex::Complex64;

fn laws() -> Laws {
    Laws::new(
        EnergyLaw::Gamma { a: 1.0, gamma: 2.0 },
        CapillarityLaw::Qhd { eps0: 1.0 },
    )
    .unwrap()
}

fn traveling(n: usize, nt: usize, dt: f64, rho: impl Fn(f64) -> f64, u: impl Fn(f64) -> f64) -> Trajectory {
    let g = TorusGrid::periodic(1, n).unwrap();
    let c = 0.5;
    let r = SpaceTimeField::from_fn(g, 0.0, dt, nt, |t, x, _| rho(x - c * t)).unwrap();
    let m = SpaceTimeField::from_fn(g, 0.0, dt, nt, |t, x, _| rho(x - c * t) * u(x - c * t)).unwrap();
    Trajectory::from_fields(&r, &[m], laws()).unwrap()
}

#[test]
fn constant_trajectory_has_no_commutators() {
    let traj = traveling(64, 81, 0.025, |_| 1.7, |_| 0.3);
    let k = MollifierKernel::new(0.2).unwrap().with_min_space_cells(2.0);
    let f = commutator_fields(&traj, &k, &laws()).unwrap();
    for r in &f.r {
        assert!(r.max_abs() < 1e-12);
    }
    let phi = TestFunction::new(
        TimeProfile::Bump { ta: 0.5, tb: 1.5 },
        SpaceProfile::Bump { center: [2.0, 0.0] },
    )
    .unwrap();
    let rec = commutator_record(&traj, &k, &phi, &laws()).unwrap();
    assert!(rec.r.iter().all(|v| v.abs() < 1e-12));
    assert!(rec.identity_residual.abs() < 1e-12);
}

#[test]
fn zero_weight_gives_zero_residuals() {
    let traj = traveling(64, 81, 0.025, |x| 1.0 + 0.2 * x.cos(), |x| 0.3 * x.sin());
    let k = MollifierKernel::new(0.2).unwrap().with_min_space_cells(2.0);
    let f = commutator_fields(&traj, &k, &laws()).unwrap();
    assert_eq!(weighted_residuals(&f, &TestFunction::zero()).unwrap(), [0.0; 7]);
}

// Commutators of smooth fields are second order in ε.
#[test]
fn smooth_commutators_decay_quadratically() {
    let traj = traveling(
        256,
        161,
        0.0125,
        |x| 1.0 + 0.2 * x.cos(),
        |x| 0.1 + 0.3 * (2.0 * x).sin(),
    );
    let eps = [0.4, 0.2, 0.1, 0.05];
    let sizes: Vec<f64> = eps
        .iter()
        .map(|&e| {
            let k = MollifierKernel::new(e).unwrap().with_min_space_cells(2.0);
            let f = commutator_fields(&traj, &k, &laws()).unwrap();
            f.r.iter().map(SpaceTimeField::max_abs).fold(0.0, f64::max)
        })
        .collect();
    let lx: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let ly: Vec<f64> = sizes.iter().map(|s| s.ln()).collect();
    let slope = linear_fit(&lx, &ly).0;
    assert!((1.8..2.3).contains(&slope), "{slope}: {sizes:?}");
}

fn nls_identity(dt: f64, sample_every: usize, psi_profile: SpaceProfile) -> (f64, f64) {
    let laws = Laws::new(
        EnergyLaw::Gamma { a: 0.5, gamma: 2.0 },
        CapillarityLaw::Qhd { eps0: 1.0 },
    )
    .unwrap();
    let g = TorusGrid::periodic(1, 128).unwrap();
    let psi = WaveField::from_fn(g, |x, _| Complex64::from_polar(1.0 + 0.1 * x.cos(), 0.2 * x.sin())).unwrap();
    let run = simulate_nls(&psi, 0.5, dt, &laws, sample_every).unwrap();
    let phi = TestFunction::new(TimeProfile::Bump { ta: 0.1, tb: 0.4 }, psi_profile).unwrap();
    let k = MollifierKernel::new(0.04).unwrap().with_min_space_cells(0.5);
    let id = mollified_energy_identity_residual(&run.trajectory, &k, &phi, &laws).unwrap();
    let weak = weak_energy_residual(&run.trajectory, &phi, &laws).unwrap();
    (id, weak)
}

// With φ constant in space the residual is the split-step defect of the
// data: second order in dt at fixed sampling.
#[test]
fn identity_residual_follows_solver_refinement() {
    let (coarse, weak_coarse) = nls_identity(4e-4, 5, SpaceProfile::Constant);
    let (fine, weak_fine) = nls_identity(2e-4, 10, SpaceProfile::Constant);
    assert!(coarse.abs() < 1e-9, "{coarse}");
    assert!(coarse / fine > 3.5, "{coarse} -> {fine}");
    assert!((coarse - weak_coarse).abs() < 0.01 * coarse.abs());
    assert!((fine - weak_fine).abs() < 0.01 * fine.abs());
}

// With a spatial bump the flux term dominates and the residual falls with
// the time quadrature.
#[test]
fn identity_residual_follows_sampling_refinement() {
    let bump = SpaceProfile::Bump { center: [1.0, 0.0] };
    let (coarse, weak_coarse) = nls_identity(1e-4, 20, bump);
    let (fine, weak_fine) = nls_identity(1e-4, 10, bump);
    assert!(coarse.abs() / fine.abs() > 16.0, "{coarse} -> {fine}");
    assert!((coarse - weak_coarse).abs() < 0.01 * coarse.abs());
    assert!((fine - weak_fine).abs() < 0.01 * fine.abs());
}
