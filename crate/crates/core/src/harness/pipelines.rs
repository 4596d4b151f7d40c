use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::besov::{
    dyadic_shifts, estimate_space_time, fit_exponent, lacunary_traveling, random_fourier_field, structure_function,
    BesovEstimate, SpaceTimeEstimate, StructureTable, TimeAxis,
};
use crate::constitutive::{total_energy, weak_energy_residual, EKState, Laws};
use crate::dynamics::{
    cfl_dt, madelung, relative_drift, simulate_nls, simulate_with, EnergyRecord, SolverOptions, Trajectory, WaveField,
};
use crate::error::{Error, Result};
use crate::fields::snapshot::read_fields;
use crate::fields::spectral::partial;
use crate::fields::{spectral_laplacian, write_snapshot, ScalarField, TorusGrid, VectorField};
use crate::mollify::{commutator_record, EpsRecord, MollifierKernel, SpaceTimeField, TestFunction};

use super::config::{default_eps_ladder, BesovTarget, InitialSpec, Pipeline, ScenarioConfig, Solver};
use super::decay::{fit_decay_rate, predict_exponents, DecayFit, DecayVerdict, Prediction};
use super::report::{write_csv, write_json, Assertion, ReportBundle};

const SYNTHETIC_NOTE: &str = "synthetic fields, not solutions of the equations; \
    the commutator estimates depend only on their Besov regularity";

/// Run the configured pipeline. Outputs go to `config.out` when set.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ReportBundle> {
    let pipeline = config
        .pipeline
        .ok_or_else(|| Error::Config(vec!["pipeline: not set".into()]))?;
    run_pipeline(config, pipeline)
}

/// Run `pipeline` on `config`, overriding its `pipeline` key.
pub fn run_pipeline(config: &ScenarioConfig, pipeline: Pipeline) -> Result<ReportBundle> {
    let mut cfg = config.clone();
    cfg.pipeline = Some(pipeline);
    cfg.validate()?;
    let out = match &cfg.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            Some(dir.clone())
        }
        None => None,
    };
    let ctx = Context {
        cfg: &cfg,
        out: out.as_deref(),
    };
    let mut bundle = match pipeline {
        Pipeline::Simulate => ctx.simulate(Solver::Ek),
        Pipeline::Madelung => ctx.simulate(Solver::Nls),
        Pipeline::EnergyAudit => ctx.energy_audit(),
        Pipeline::CommutatorScan => ctx.commutator_scan(),
        Pipeline::Besov => ctx.besov(),
        Pipeline::CrossValidate => ctx.cross_validate(),
    }?;
    bundle.label = cfg.label.clone();
    if let Some(dir) = out {
        let path = dir.join("report.json");
        bundle.outputs.push(path.clone());
        write_json(&path, &bundle)?;
    }
    Ok(bundle)
}

/// Run inside a dedicated pool of `threads` workers.
pub fn run_with_threads(config: &ScenarioConfig, pipeline: Pipeline, threads: usize) -> Result<ReportBundle> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::param("threads", e.to_string()))?;
    pool.install(|| run_pipeline(config, pipeline))
}

/// A solver run in hydrodynamic variables.
#[derive(Debug, Clone)]
pub struct Run {
    pub solver: Solver,
    pub trajectory: Trajectory,
    pub energy: Vec<EnergyRecord>,
    pub dt: f64,
    pub steps: usize,
    pub wave_energy: Option<Vec<f64>>,
}

impl Run {
    pub fn mass_drift(&self) -> f64 {
        relative_drift(self.energy.iter().map(|r| r.mass))
    }

    pub fn energy_drift(&self) -> f64 {
        relative_drift(self.energy.iter().map(|r| r.total_energy))
    }
}

fn initial_wave(spec: &InitialSpec, grid: &TorusGrid) -> Result<WaveField> {
    let InitialSpec::Madelung {
        mean,
        amplitude,
        mode,
        phase,
    } = *spec
    else {
        return Err(Error::param("initial", "a wave function needs type \"madelung\""));
    };
    let k = f64::from(mode) * 2.0 * PI / grid.length();
    WaveField::from_fn(*grid, |x, _| {
        Complex64::from_polar(mean + amplitude * (k * x).cos(), phase * (k * x).sin())
    })
}

/// The configured initial state of a dynamic pipeline.
pub fn initial_state(cfg: &ScenarioConfig) -> Result<EKState> {
    let grid = cfg.grid()?;
    let laws = cfg.laws()?;
    let d = grid.dim();
    let state = match cfg.initial {
        InitialSpec::Constant { rho, velocity } => {
            let rho_f = ScalarField::constant(grid, rho);
            let m = VectorField::new((0..d).map(|a| ScalarField::constant(grid, rho * velocity[a])).collect())?;
            EKState::from_parts(rho_f, m)?
        }
        InitialSpec::Cosine {
            mean,
            amplitude,
            mode,
            velocity,
        } => {
            let k = f64::from(mode) * 2.0 * PI / grid.length();
            let rho = ScalarField::from_fn(grid, |x, _| mean + amplitude * (k * x).cos());
            let mut comps = vec![ScalarField::from_fn(grid, |x, _| velocity * (k * x).sin())];
            comps.extend((1..d).map(|_| ScalarField::zeros(grid)));
            EKState::from_velocity(rho, &VectorField::new(comps)?)?
        }
        InitialSpec::Madelung { .. } => {
            let eps0 = cfg.capillarity.eps0();
            let eps0 = if eps0 > 0.0 { eps0 } else { 1.0 };
            madelung(&initial_wave(&cfg.initial, &grid)?, eps0)?
        }
        InitialSpec::Weierstrass { .. } | InitialSpec::Random { .. } => {
            return Err(Error::param(
                "initial",
                "synthetic fields do not define an initial state",
            ));
        }
    };
    state.validate(&laws)?;
    Ok(state)
}

/// The synthetic space-time trajectory of a `weierstrass` initial spec.
pub fn synthetic_trajectory(cfg: &ScenarioConfig) -> Result<Trajectory> {
    let InitialSpec::Weierstrass {
        alpha,
        beta,
        levels,
        amplitude,
        speed,
    } = cfg.initial
    else {
        return Err(Error::param("initial", "expected type \"weierstrass\""));
    };
    let grid = cfg.grid()?;
    let nt = cfg.time.samples.unwrap_or(2);
    let axis = TimeAxis {
        t0: 0.0,
        dt: cfg.time.t_end / (nt - 1) as f64,
        nt,
    };
    let phases = vec![0.5 * PI; levels + 1];
    let u = lacunary_traveling(alpha, levels, speed, &grid, axis, &phases)?.scale(amplitude);
    let rho = lacunary_traveling(beta + 2.0, levels, speed, &grid, axis, &phases)?.map(|v| 1.0 + amplitude * v);
    let mut m = vec![rho.mul(&u)];
    m.extend((1..grid.dim()).map(|_| rho.map(|_| 0.0)));
    Trajectory::from_fields(&rho, &m, cfg.laws()?)
}

/// Step size and sampling: the configured `dt`, or the CFL bound rounded so
/// that the step count divides into whole sample intervals.
pub fn resolve_step(cfg: &ScenarioConfig, init: &EKState, laws: &Laws) -> (f64, usize) {
    let every = cfg.time.sample_every;
    if let Some(dt) = cfg.time.dt {
        return (dt, every);
    }
    let t = cfg.time.t_end;
    let dt_max = cfl_dt(init, laws, cfg.time.cfl);
    let steps = (t / dt_max - 1e-9).ceil().max(1.0) as usize;
    let steps = steps.div_ceil(every) * every;
    (t / steps as f64, every)
}

/// Run the dynamics with the requested solver.
pub fn run_dynamics(cfg: &ScenarioConfig, solver: Solver) -> Result<Run> {
    let laws = cfg.laws()?;
    let init = initial_state(cfg)?;
    let (dt, every) = resolve_step(cfg, &init, &laws);
    match solver {
        Solver::Ek => {
            let opts = SolverOptions {
                dealias: cfg.time.dealias,
            };
            let sim = simulate_with(&init, cfg.time.t_end, dt, &laws, every, &opts)?;
            Ok(Run {
                solver,
                trajectory: sim.trajectory,
                energy: sim.energy,
                dt: sim.dt,
                steps: sim.steps,
                wave_energy: None,
            })
        }
        Solver::Nls => {
            let psi = initial_wave(&cfg.initial, &cfg.grid()?)?;
            let run = simulate_nls(&psi, cfg.time.t_end, dt, &laws, every)?;
            Ok(Run {
                solver,
                trajectory: run.trajectory,
                energy: run.energy,
                dt: run.dt,
                steps: run.steps,
                wave_energy: Some(run.wave_energy),
            })
        }
    }
}

fn default_solver(cfg: &ScenarioConfig) -> Solver {
    cfg.time.solver.unwrap_or(
        if matches!(cfg.initial, InitialSpec::Madelung { .. }) && cfg.capillarity.eps0() > 0.0 {
            Solver::Nls
        } else {
            Solver::Ek
        },
    )
}

struct Context<'a> {
    cfg: &'a ScenarioConfig,
    out: Option<&'a Path>,
}

impl Context<'_> {
    fn path(&self, name: &str, outputs: &mut Vec<PathBuf>) -> Option<PathBuf> {
        self.out.map(|d| {
            let p = d.join(name);
            outputs.push(p.clone());
            p
        })
    }

    fn write_run(&self, run: &Run, outputs: &mut Vec<PathBuf>) -> Result<()> {
        if let Some(p) = self.path("energy.csv", outputs) {
            write_csv(
                &p,
                &["t", "mass", "total_energy"],
                run.energy.iter().map(|r| (r.t, r.mass, r.total_energy)),
            )?;
        }
        if let (Some(dir), true) = (self.out, self.cfg.time.snapshots) {
            for (i, s) in run.trajectory.samples().iter().enumerate() {
                let p = dir.join(format!("state_{i:06}.ekf"));
                write_snapshot(s, run.trajectory.time(i), &p)?;
                outputs.push(p);
            }
        }
        Ok(())
    }

    fn drift_assertions(&self, run: &Run) -> Vec<Assertion> {
        let tol = &self.cfg.tolerances;
        let mut v = vec![
            Assertion::at_most("mass drift", run.mass_drift(), tol.mass_drift),
            Assertion::at_most("energy drift", run.energy_drift(), tol.energy_drift),
        ];
        if let Some(w) = &run.wave_energy {
            v.push(Assertion::info(
                "wave energy drift",
                relative_drift(w.iter().copied()),
                "Schrödinger energy of ψ",
            ));
        }
        v
    }

    fn simulate(&self, solver: Solver) -> Result<ReportBundle> {
        let run = run_dynamics(self.cfg, solver)?;
        let mut outputs = Vec::new();
        self.write_run(&run, &mut outputs)?;
        Ok(ReportBundle {
            pipeline: if solver == Solver::Ek {
                Pipeline::Simulate
            } else {
                Pipeline::Madelung
            },
            label: None,
            assertions: self.drift_assertions(&run),
            outputs,
            summary: json!({
                "solver": run.solver,
                "dt": run.dt,
                "steps": run.steps,
                "samples": run.trajectory.len(),
                "mass_drift": run.mass_drift(),
                "energy_drift": run.energy_drift(),
            }),
        })
    }

    fn energy_audit(&self) -> Result<ReportBundle> {
        let cfg = self.cfg;
        let laws = cfg.laws()?;
        let run = run_dynamics(cfg, default_solver(cfg))?;
        let traj = &run.trajectory;
        let dt_s = traj.dt_sample();
        let eps_max = cfg.mollifier.eps.iter().copied().fold(0.0, f64::max);
        let phi = cfg.test_function_for(eps_max, dt_s)?;
        let e0 = total_energy(traj.first(), &laws)?;
        let weak = weak_energy_residual(traj, &phi, &laws)?;

        let mut assertions = self.drift_assertions(&run);
        assertions.push(Assertion::at_most(
            "weak residual / E",
            (weak / e0).abs(),
            cfg.tolerances.weak_residual,
        ));

        let mut checks = Vec::new();
        for &eps in &cfg.mollifier.eps {
            let c = identity_check(traj, eps, cfg.mollifier.min_space_cells, &phi, &laws, weak)?;
            let bound = cfg.tolerances.identity_factor * c.estimate;
            assertions.push(Assertion::at_most(
                format!("identity residual ε={eps}"),
                c.record.identity_residual.abs(),
                bound,
            ));
            assertions.push(Assertion::at_most(
                format!("|flux| − |ΣR| ε={eps}"),
                (c.record.flux_term.abs() - c.record.sum_r.abs()).abs(),
                bound,
            ));
            checks.push(c);
        }

        let mut outputs = Vec::new();
        self.write_run(&run, &mut outputs)?;
        let summary = json!({
            "solver": run.solver,
            "dt": run.dt,
            "steps": run.steps,
            "total_energy": e0,
            "weak_residual": weak,
            "test_function": phi,
            "identity": checks,
        });
        if let Some(p) = self.path("audit.json", &mut outputs) {
            write_json(&p, &summary)?;
        }
        Ok(ReportBundle {
            pipeline: Pipeline::EnergyAudit,
            label: None,
            assertions,
            outputs,
            summary,
        })
    }

    fn commutator_scan(&self) -> Result<ReportBundle> {
        let cfg = self.cfg;
        let laws = cfg.laws()?;
        let synthetic = cfg.initial.is_synthetic();
        let traj = if synthetic {
            synthetic_trajectory(cfg)?
        } else {
            run_dynamics(cfg, default_solver(cfg))?.trajectory
        };
        let report = commutator_scan(
            &traj,
            &cfg.mollifier.eps,
            cfg.mollifier.min_space_cells,
            cfg.test_function,
            cfg.besov.p,
            &laws,
        )?;

        let tol = &cfg.tolerances;
        let mut assertions = vec![Assertion::info(
            "regularity threshold",
            report.prediction.threshold,
            if report.prediction.hypothesis {
                "min(2α+β, α+2β) > 1"
            } else {
                "outside theorem hypothesis"
            },
        )];
        for (i, fit) in report.fits.iter().enumerate() {
            let name = format!("R{} slope", i + 1);
            let Some(fit) = fit else { continue };
            let bound = tol.min_slope.max(report.prediction.exponents[i] - tol.slope_window);
            let a = match fit.verdict {
                DecayVerdict::Fitted => Assertion::at_least(name, fit.slope, bound),
                DecayVerdict::BelowFloor => Assertion::info(name, 0.0, "below floor, converged"),
            };
            assertions.push(if report.prediction.hypothesis {
                a
            } else {
                a.without_verdict("outside theorem hypothesis")
            });
        }

        let mut outputs = Vec::new();
        if let Some(p) = self.path("commutators.csv", &mut outputs) {
            let mut header = vec!["eps".to_string()];
            header.extend((1..=7).map(|i| format!("R{i}")));
            header.extend(["sumR".into(), "identity_residual".into()]);
            let header: Vec<&str> = header.iter().map(String::as_str).collect();
            write_csv(
                &p,
                &header,
                report.rows.iter().map(|r| {
                    let mut v = vec![r.eps];
                    v.extend(r.r);
                    v.extend([r.sum_r, r.identity_residual]);
                    v
                }),
            )?;
        }
        if let Some(p) = self.path("slopes.json", &mut outputs) {
            write_json(
                &p,
                &json!({
                    "fits": report.fits,
                    "prediction": report.prediction,
                    "alpha": report.alpha,
                    "beta": report.beta,
                }),
            )?;
        }
        let mut summary = serde_json::to_value(&report)?;
        if synthetic {
            summary["note"] = json!(SYNTHETIC_NOTE);
        }
        Ok(ReportBundle {
            pipeline: Pipeline::CommutatorScan,
            label: None,
            assertions,
            outputs,
            summary,
        })
    }

    fn besov(&self) -> Result<ReportBundle> {
        let cfg = self.cfg;
        let p = cfg.besov.p;
        let mut outputs = Vec::new();
        let (estimate, table, space_time) = match (cfg.initial, cfg.time.samples) {
            (InitialSpec::Weierstrass { .. }, Some(_)) => {
                let traj = synthetic_trajectory(cfg)?;
                let field = target_field_st(&traj, cfg.besov.field);
                let st = estimate_space_time(&field, p)?;
                let table = crate::besov::structure_function_space(&field, p, &dyadic_shifts(field.grid()))?;
                (st.space.clone(), table, Some(st))
            }
            _ => {
                let w = static_field(cfg)?;
                let table = structure_function(&w, p, &dyadic_shifts(w.grid()))?;
                (fit_exponent(&table)?, table, None)
            }
        };
        let alpha = space_time.as_ref().map_or(estimate.alpha, |s| s.alpha);
        let mut assertions = vec![Assertion::info("fit r²", estimate.r_squared, "least-squares quality")];
        assertions.push(match cfg.besov.expected {
            Some(want) => Assertion::at_most("|α̂ − α|", (alpha - want).abs(), cfg.tolerances.besov_alpha)
                .with_note(format!("α̂ = {alpha:.4}")),
            None => Assertion::info("α̂", alpha, "no expected exponent configured"),
        });
        if let Some(dir) = self.out {
            write_besov_outputs(dir, &table, &estimate, &mut outputs)?;
        }
        Ok(ReportBundle {
            pipeline: Pipeline::Besov,
            label: None,
            assertions,
            outputs,
            summary: json!({ "estimate": estimate, "space_time": space_time, "alpha": alpha }),
        })
    }

    fn cross_validate(&self) -> Result<ReportBundle> {
        let cfg = self.cfg;
        let ek = run_dynamics(cfg, Solver::Ek)?;
        let nls = run_dynamics(cfg, Solver::Nls)?;
        let rows: Vec<(f64, f64, f64, f64)> = ek
            .trajectory
            .samples()
            .iter()
            .zip(nls.trajectory.samples())
            .enumerate()
            .map(|(i, (a, b))| {
                let dr = a.density().sub(b.density()).lp_norm(2.0);
                let dm = vector_l2(a.momentum(), Some(b.momentum()));
                let scale = f64::hypot(b.density().lp_norm(2.0), vector_l2(b.momentum(), None));
                (ek.trajectory.time(i), dr, dm, f64::hypot(dr, dm) / scale)
            })
            .collect();
        let worst = rows.iter().map(|r| r.3).fold(0.0, f64::max);
        let mut outputs = Vec::new();
        if let Some(p) = self.path("cross.csv", &mut outputs) {
            write_csv(&p, &["t", "rho_l2", "m_l2", "relative_l2"], rows.iter().copied())?;
        }
        let mut assertions = vec![Assertion::at_most(
            "relative L2 mismatch",
            worst,
            cfg.tolerances.cross_l2,
        )];
        assertions.extend(self.drift_assertions(&ek).into_iter().map(|mut a| {
            a.name = format!("ek {}", a.name);
            a
        }));
        Ok(ReportBundle {
            pipeline: Pipeline::CrossValidate,
            label: None,
            assertions,
            outputs,
            summary: json!({ "dt": ek.dt, "steps": ek.steps, "max_relative_l2": worst }),
        })
    }
}

fn vector_l2(a: &VectorField, b: Option<&VectorField>) -> f64 {
    a.components()
        .iter()
        .enumerate()
        .map(|(i, c)| match b {
            Some(b) => c.sub(&b.components()[i]).lp_norm(2.0).powi(2),
            None => c.lp_norm(2.0).powi(2),
        })
        .sum::<f64>()
        .sqrt()
}

/// Mollified identity at one radius plus its error estimate.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub record: EpsRecord,
    /// The same record computed on every second sample, when ε allows it.
    pub coarse: Option<EpsRecord>,
    /// `|I(dt) − I(2dt)|`.
    pub quadrature: f64,
    /// Weak residual of the unmollified data against the same φ.
    pub data_defect: f64,
    pub estimate: f64,
}

/// Evaluate the mollified identity at `eps` and estimate its discretization
/// error as the time-quadrature difference between sampling `dt` and `2dt`
/// plus the unmollified weak residual of the data (the part that no
/// refinement of the quadrature removes).
pub fn identity_check(
    traj: &Trajectory,
    eps: f64,
    min_space_cells: f64,
    phi: &TestFunction,
    laws: &Laws,
    weak: f64,
) -> Result<IdentityCheck> {
    let kernel = MollifierKernel::new(eps)?.with_min_space_cells(min_space_cells);
    let record = commutator_record(traj, &kernel, phi, laws)?;
    let coarse = match traj.subsample(2) {
        Ok(t) if kernel.time_radius(t.dt_sample()).is_ok() => commutator_record(&t, &kernel, phi, laws).ok(),
        _ => None,
    };
    let quadrature = coarse
        .map(|c| (c.identity_residual - record.identity_residual).abs())
        .unwrap_or(f64::NAN);
    let data_defect = weak.abs();
    let estimate = if quadrature.is_nan() {
        data_defect
    } else {
        quadrature + data_defect
    };
    Ok(IdentityCheck {
        record,
        coarse,
        quadrature,
        data_defect,
        estimate,
    })
}

/// Result of a commutator scan.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorReport {
    pub rows: Vec<EpsRecord>,
    /// Decay fit of `|R_i|` against ε; absent with fewer than four radii.
    pub fits: [Option<DecayFit>; 7],
    pub sum_fit: Option<DecayFit>,
    pub alpha: SpaceTimeEstimate,
    /// Binding estimate among `ρ`, `∇ρ` and `Δρ`.
    pub beta: SpaceTimeEstimate,
    pub beta_source: BesovTarget,
    pub prediction: Prediction,
    pub test_function: TestFunction,
}

/// Velocity and density-family fields of a trajectory.
fn target_field_st(traj: &Trajectory, target: BesovTarget) -> SpaceTimeField {
    let rho = traj.density_field();
    match target {
        BesovTarget::Rho => rho,
        BesovTarget::U => traj.momentum_field(0).zip_map(&rho, |m, r| m / r),
        BesovTarget::GradRho => rho.map_slices(|s| partial(s, 0)),
        BesovTarget::LapRho => rho.map_slices(spectral_laplacian),
    }
}

/// Clamp a raw fitted slope into the admissible exponent range: smooth data
/// give slopes of 1 or more and count as exponent 1.
fn exponent(raw: f64) -> f64 {
    raw.min(1.0)
}

/// Mollify at every radius of the ladder (or the default dyadic one), fit the
/// decay of each `|R_i|`, and predict the exponents from the measured
/// regularity of `u` and of `ρ, ∇ρ, Δρ`.
pub fn commutator_scan(
    traj: &Trajectory,
    eps: &[f64],
    min_space_cells: f64,
    phi: Option<TestFunction>,
    p: f64,
    laws: &Laws,
) -> Result<CommutatorReport> {
    let dt_s = traj.dt_sample();
    let t_len = traj.end_time() - traj.start_time();
    let ladder = if eps.is_empty() {
        default_eps_ladder(t_len, dt_s)
    } else {
        eps.to_vec()
    };
    let eps_max = ladder.iter().copied().fold(0.0, f64::max);
    let phi = match phi {
        Some(phi) => phi,
        None => {
            let pad = eps_max + 4.0 * dt_s;
            TestFunction::time_bump(traj.start_time() + pad, traj.end_time() - pad)?
        }
    };
    let rows = ladder
        .par_iter()
        .map(|&e| {
            let kernel = MollifierKernel::new(e)?.with_min_space_cells(min_space_cells);
            commutator_record(traj, &kernel, &phi, laws)
        })
        .collect::<Result<Vec<_>>>()?;

    let fit_of = |f: &dyn Fn(&EpsRecord) -> f64| -> Result<Option<DecayFit>> {
        if rows.len() < 4 {
            return Ok(None);
        }
        let pairs: Vec<(f64, f64)> = rows.iter().map(|r| (r.eps, f(r))).collect();
        fit_decay_rate(&pairs).map(Some)
    };
    let mut fits = [None; 7];
    for (i, slot) in fits.iter_mut().enumerate() {
        *slot = fit_of(&|r: &EpsRecord| r.r[i])?;
    }
    let sum_fit = fit_of(&|r: &EpsRecord| r.sum_r)?;

    let alpha = estimate_space_time(&target_field_st(traj, BesovTarget::U), p)?;
    let mut beta: Option<(SpaceTimeEstimate, BesovTarget)> = None;
    for target in [BesovTarget::Rho, BesovTarget::GradRho, BesovTarget::LapRho] {
        let e = estimate_space_time(&target_field_st(traj, target), p)?;
        if beta.as_ref().is_none_or(|(b, _)| e.alpha < b.alpha) {
            beta = Some((e, target));
        }
    }
    let (beta, beta_source) = beta.expect("three candidates");
    let prediction = predict_exponents(exponent(alpha.alpha), exponent(beta.alpha));
    Ok(CommutatorReport {
        rows,
        fits,
        sum_fit,
        alpha,
        beta,
        beta_source,
        prediction,
        test_function: phi,
    })
}

fn static_field(cfg: &ScenarioConfig) -> Result<ScalarField> {
    let grid = cfg.grid()?;
    match cfg.initial {
        InitialSpec::Random { alpha, k_max } => random_fourier_field(alpha, cfg.seed, &grid, k_max),
        InitialSpec::Weierstrass { .. } => {
            let traj = synthetic_trajectory(cfg)?;
            Ok(target_field_st(&traj, cfg.besov.field).slice_field(0))
        }
        _ => {
            let s = initial_state(cfg)?;
            Ok(target_field(&s, cfg.besov.field))
        }
    }
}

fn target_field(state: &EKState, target: BesovTarget) -> ScalarField {
    match target {
        BesovTarget::Rho => state.density().clone(),
        BesovTarget::U => state.velocity().component(0).clone(),
        BesovTarget::GradRho => partial(state.density(), 0),
        BesovTarget::LapRho => spectral_laplacian(state.density()),
    }
}

fn write_besov_outputs(
    dir: &Path,
    table: &StructureTable,
    estimate: &BesovEstimate,
    outputs: &mut Vec<PathBuf>,
) -> Result<()> {
    let t = dir.join("table.csv");
    write_csv(
        &t,
        &["shift", "increment_norm"],
        table.entries.iter().map(|e| (e.shift, e.norm)),
    )?;
    outputs.push(t);
    let j = dir.join("besov.json");
    append_estimate(&j, estimate)?;
    outputs.push(j);
    Ok(())
}

/// Append to the JSON array in `path`, creating it if needed.
fn append_estimate(path: &Path, estimate: &BesovEstimate) -> Result<()> {
    let mut list: Vec<serde_json::Value> = match fs::read_to_string(path) {
        Ok(text) if !text.trim().is_empty() => serde_json::from_str(&text)?,
        Ok(_) => Vec::new(),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(Error::io(path, e)),
    };
    list.push(serde_json::to_value(estimate)?);
    write_json(path, &list)
}

/// Structure table and exponent of one field of a snapshot file. `table`
/// receives the CSV; the estimate is appended to `besov.json` beside it.
pub fn besov_from_snapshot(
    snapshot: &Path,
    index: usize,
    p: f64,
    table_path: &Path,
) -> Result<(StructureTable, BesovEstimate)> {
    let snap = read_fields(snapshot)?;
    let field = snap.fields.get(index).ok_or_else(|| {
        Error::param(
            "field",
            format!("snapshot holds {} fields, index {index}", snap.fields.len()),
        )
    })?;
    let table = structure_function(field, p, &dyadic_shifts(&snap.grid))?;
    let estimate = fit_exponent(&table)?;
    write_csv(
        table_path,
        &["shift", "increment_norm"],
        table.entries.iter().map(|e| (e.shift, e.norm)),
    )?;
    let dir = table_path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    append_estimate(&dir.join("besov.json"), &estimate)?;
    Ok((table, estimate))
}
