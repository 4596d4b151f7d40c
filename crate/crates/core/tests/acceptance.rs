//! Acceptance criteria AC-1 … AC-8. Runs without the libtest harness so the
//! verdict lines always reach stdout; exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ek_core::besov::{besov_seminorm, dyadic_shifts, fit_exponent, linear_fit, structure_function, weierstrass_field};
use ek_core::constitutive::{
    expanded_flux_divergence, stress, stress_divergence_form, total_energy, weak_energy_residual, CapillarityLaw,
    EnergyLaw, Laws,
};
use ek_core::fields::TorusGrid;
use ek_core::harness::{
    commutator_scan, identity_check, initial_state, resolve_step, run_dynamics, synthetic_trajectory, Run,
    ScenarioConfig, Solver,
};
use ek_core::mollify::lemmas::{
    composed_gradient_norm, mollification_error, mollified_gradient_norm, quadratic_bound_terms,
};
use ek_core::mollify::MollifierKernel;

const NLS: &str = include_str!("../../../scenarios/nls_conservation.toml");
const EK: &str = include_str!("../../../scenarios/ek_direct.toml");
const AUDIT: &str = include_str!("../../../scenarios/energy_audit.toml");
const SCAN: &str = include_str!("../../../scenarios/commutator_scan.toml");

struct Outcome {
    id: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn criterion(id: &'static str, budget_s: u64, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    let o = Outcome {
        id,
        passed: passed && elapsed <= budget,
        detail,
        elapsed,
        budget,
    };
    println!(
        "{} {}: {} [{:.1}s, budget {}s]",
        o.id,
        if o.passed { "PASS" } else { "FAIL" },
        o.detail,
        o.elapsed.as_secs_f64(),
        o.budget.as_secs()
    );
    o
}

fn scenario(text: &str) -> ScenarioConfig {
    ScenarioConfig::from_toml(text).unwrap()
}

fn trajectory(cfg: &ScenarioConfig, solver: Solver) -> Run {
    run_dynamics(cfg, solver).unwrap()
}

fn ac1() -> (bool, String) {
    let run = trajectory(&scenario(NLS), Solver::Nls);
    let (m, e) = (run.mass_drift(), run.energy_drift());
    (
        m < 1e-12 && e < 1e-6,
        format!("mass drift {m:.2e} (< 1e-12), energy drift {e:.2e} (< 1e-6)"),
    )
}

fn ac2() -> (bool, String) {
    let mut cfg = scenario(EK);
    let laws = cfg.laws().unwrap();
    let (dt, _) = resolve_step(&cfg, &initial_state(&cfg).unwrap(), &laws);
    let coarse = trajectory(&cfg, Solver::Ek).energy_drift();
    cfg.time.dt = Some(dt / 2.0);
    cfg.time.sample_every *= 2;
    let fine = trajectory(&cfg, Solver::Ek).energy_drift();
    let ratio = coarse / fine;
    (
        coarse < 1e-7 && (8.0..=32.0).contains(&ratio),
        format!("drift {coarse:.2e} (< 1e-7) at dt {dt:.3e}, {fine:.2e} at dt/2, ratio {ratio:.2} (in [8, 32])"),
    )
}

fn weak_relative(cfg: &ScenarioConfig) -> f64 {
    let laws = cfg.laws().unwrap();
    let run = trajectory(cfg, Solver::Nls);
    let phi = cfg.test_function.unwrap();
    let w = weak_energy_residual(&run.trajectory, &phi, &laws).unwrap();
    (w / total_energy(run.trajectory.first(), &laws).unwrap()).abs()
}

fn ac3() -> (bool, String) {
    let mut cfg = scenario(AUDIT);
    let base = weak_relative(&cfg);
    cfg.grid.n *= 2;
    cfg.time.dt = cfg.time.dt.map(|dt| dt / 2.0);
    cfg.time.sample_every *= 2;
    let refined = weak_relative(&cfg);
    let ratio = base / refined;
    (
        base < 1e-6 && ratio >= 8.0,
        format!("|residual|/E {base:.2e} (< 1e-6), refined {refined:.2e}, reduction {ratio:.2} (>= 8)"),
    )
}

fn ac4() -> (bool, String) {
    let g = TorusGrid::periodic(1, 1 << 16).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (alpha, lo, hi) in [(0.3, 0.25, 0.35), (0.5, 0.45, 0.55)] {
        let w = weierstrass_field(alpha, 14, &g, &[]).unwrap();
        let e = fit_exponent(&structure_function(&w, 3.0, &dyadic_shifts(&g)).unwrap()).unwrap();
        ok &= (lo..=hi).contains(&e.alpha);
        parts.push(format!("α={alpha}: α̂ {:.4} in [{lo}, {hi}]", e.alpha));
    }
    (ok, parts.join("; "))
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    linear_fit(&lx, &ly).0
}

fn ac5() -> (bool, String) {
    let g = TorusGrid::periodic(1, 1 << 14).unwrap();
    let ladder: Vec<f64> = (4..=10).rev().map(|k| 2f64.powi(-k)).collect();
    let wide: Vec<f64> = (3..=10).rev().map(|k| 2f64.powi(-k)).collect();
    let law = EnergyLaw::Gamma { a: 1.0, gamma: 1.4 };
    let mut ok = true;
    let mut parts = Vec::new();
    for alpha in [0.3, 0.5] {
        let w = weierstrass_field(alpha, 12, &g, &[]).unwrap();
        let semi = besov_seminorm(&w, alpha, 3.0).unwrap();
        let ratio = ladder
            .iter()
            .map(|&e| mollification_error(&w, &MollifierKernel::new(e).unwrap(), 3.0).unwrap() / (e.powf(alpha) * semi))
            .fold(0.0, f64::max);

        let grads: Vec<f64> = wide
            .iter()
            .map(|&e| mollified_gradient_norm(&w, &MollifierKernel::new(e).unwrap(), 3.0).unwrap())
            .collect();
        let s_grad = slope(&wide, &grads);

        let rho = w.map(|v| 1.0 + 0.2 * v / 3.0);
        let comp: Vec<f64> = wide
            .iter()
            .map(|&e| composed_gradient_norm(|r| law.dh(r), &rho, &MollifierKernel::new(e).unwrap(), 3.0).unwrap())
            .collect();
        let s_comp = slope(&wide, &comp);

        let consts: Vec<f64> = ladder
            .iter()
            .map(|&e| {
                let (lhs, rhs) = quadratic_bound_terms(|v| v * v, &w, &MollifierKernel::new(e).unwrap(), 3.0).unwrap();
                lhs / rhs
            })
            .collect();
        let spread = consts.iter().copied().fold(0.0, f64::max) / consts.iter().copied().fold(f64::INFINITY, f64::min);

        let floor = alpha - 1.0 - 0.1;
        ok &= ratio <= 1.1 && s_grad >= floor && s_comp >= floor && spread <= 3.0;
        parts.push(format!(
            "α={alpha}: mollification ratio {ratio:.3} (<= 1.1), gradient slope {s_grad:.3}, composed slope {s_comp:.3} (>= {floor:.1}), constant spread {spread:.2} (<= 3)"
        ));
    }
    (ok, parts.join("; "))
}

fn ac6() -> (bool, String) {
    let cfg = scenario(SCAN);
    let traj = synthetic_trajectory(&cfg).unwrap();
    let r = commutator_scan(&traj, &[], 4.0, cfg.test_function, 3.0, &cfg.laws().unwrap()).unwrap();
    let slopes: Vec<f64> = r.fits.iter().map(|f| f.map_or(f64::NAN, |f| f.slope)).collect();
    let ok = r.prediction.hypothesis && slopes.iter().all(|&s| s >= 0.15) && r.rows.len() >= 4;
    let shown: Vec<String> = slopes.iter().map(|s| format!("{s:.2}")).collect();
    (
        ok,
        format!(
            "{} radii, α̂ {:.3}, β̂ {:.3}, threshold {:.3} (> 1), predicted {:.3}, slopes [{}] (>= 0.15)",
            r.rows.len(),
            r.alpha.alpha,
            r.beta.alpha,
            r.prediction.threshold,
            r.prediction.exponents[0],
            shown.join(", ")
        ),
    )
}

fn ac7() -> (bool, String) {
    let cfg = scenario(AUDIT);
    let laws = cfg.laws().unwrap();
    let run = trajectory(&cfg, Solver::Nls);
    let eps = cfg.mollifier.eps[0];
    let phi = cfg.test_function.unwrap();
    let weak = weak_energy_residual(&run.trajectory, &phi, &laws).unwrap();
    let c = identity_check(&run.trajectory, eps, cfg.mollifier.min_space_cells, &phi, &laws, weak).unwrap();
    let res = c.record.identity_residual.abs();
    let track = (c.record.flux_term.abs() - c.record.sum_r.abs()).abs();
    let bound = cfg.tolerances.identity_factor * c.estimate;
    (
        res <= bound && track <= bound,
        format!(
            "ε {eps}: |residual| {res:.3e}, ||flux| − |ΣR|| {track:.3e}, |ΣR| {:.3e}, estimate {:.3e} (quadrature {:.1e} + data defect {:.3e}), bound {bound:.3e}",
            c.record.sum_r.abs(),
            c.estimate,
            c.quadrature,
            c.data_defect
        ),
    )
}

fn ac8() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst_stress: f64 = 0.0;
    for _ in 0..1000 {
        let laws = if rng.random_bool(0.5) {
            Laws::new(
                EnergyLaw::Gamma { a: 1.0, gamma: 2.0 },
                CapillarityLaw::Qhd {
                    eps0: rng.random_range(0.1..2.0),
                },
            )
        } else {
            Laws::new(
                EnergyLaw::Log,
                CapillarityLaw::Constant {
                    kappa0: rng.random_range(0.01..1.0),
                },
            )
        }
        .unwrap();
        let rho = rng.random_range(0.05..5.0);
        let q = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
        let r = rng.random_range(-10.0..10.0);
        let a = stress(rho, &q, r, &laws).unwrap();
        let b =
            stress_divergence_form(rho, &q, expanded_flux_divergence(rho, &q, r, &laws.capillarity), &laws).unwrap();
        let scale = a
            .iter()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        for (x, y) in a.iter().flatten().zip(b.iter().flatten()) {
            worst_stress = worst_stress.max((x - y).abs() / scale);
        }
    }

    let mut worst_qhd: f64 = 0.0;
    for _ in 0..1000 {
        let cap = CapillarityLaw::Qhd {
            eps0: rng.random_range(0.1..3.0),
        };
        let rho: f64 = rng.random_range(1e-3..1e3);
        let k = cap.kappa(rho);
        worst_qhd = worst_qhd.max((rho * cap.dkappa(rho) + k).abs() / k);
    }

    let mut worst_p: f64 = 0.0;
    let d = 1e-5;
    for law in [
        EnergyLaw::Gamma { a: 1.3, gamma: 1.4 },
        EnergyLaw::Gamma { a: 0.5, gamma: 2.0 },
        EnergyLaw::Log,
        EnergyLaw::Linear { c: 2.0 },
    ] {
        for _ in 0..200 {
            let rho: f64 = rng.random_range(0.2..3.0);
            let dh = (law.h(rho + d) - law.h(rho - d)) / (2.0 * d);
            let fd = rho * dh - law.h(rho);
            worst_p = worst_p.max((law.pressure(rho) - fd).abs() / law.pressure(rho).abs().max(1.0));
        }
    }
    (
        worst_stress <= 1e-12 && worst_qhd <= 4.0 * f64::EPSILON && worst_p <= 1e-8,
        format!(
            "stress forms {worst_stress:.1e} (<= 1e-12), ρκ'+κ {worst_qhd:.1e} (<= 4 ulp), pressure vs FD {worst_p:.1e} (<= 1e-8)"
        ),
    )
}

fn main() {
    let outcomes = [
        criterion("AC-1", 60, ac1),
        criterion("AC-2", 120, ac2),
        criterion("AC-3", 120, ac3),
        criterion("AC-4", 30, ac4),
        criterion("AC-5", 120, ac5),
        criterion("AC-6", 600, ac6),
        criterion("AC-7", 120, ac7),
        criterion("AC-8", 10, ac8),
    ];
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    for o in outcomes.iter().filter(|o| o.elapsed > o.budget) {
        println!("{} over its runtime budget", o.id);
    }
    println!(
        "acceptance: {} of {} passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    if !failed.is_empty() {
        println!("failed: {}", failed.join(", "));
        std::process::exit(1);
    }
}
