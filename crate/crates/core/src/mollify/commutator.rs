//! The seven commutator fields of the mollified energy balance.
//!
//! With `ρ̄ = ρ^ε`, `m̄ = (ρu)^ε`, `ū = u^ε` and `A = ρ̄ū − m̄`:
//!
//! ```text
//! r1 = ∂_t A · ū
//! r2 = div(ū ⊗ m̄ − (u ⊗ ρu)^ε) · ū
//! r3 = ∇(p(ρ̄) − p^ε(ρ)) · ū
//! r4 = −div(S(ρ̄, ∇ρ̄, Δρ̄) − S^ε(ρ, ∇ρ, Δρ)) · ū
//! r5 = div A · h'(ρ̄)
//! r6 = −div A · ½κ'(ρ̄)|∇ρ̄|²
//! r7 = −div A · κ(ρ̄)Δρ̄
//! ```
//!
//! The mollified fields satisfy `∂_t E_ε + div F_ε = Σ r_i` exactly, where
//! `F_ε` carries `κ(ρ̄)∇ρ̄ div m̄` as its capillary transport term.

use rayon::prelude::*;
use serde::Serialize;

use crate::constitutive::{stress_from_parts, Laws};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::fields::spectral::{outer_divergence, partial, tensor_divergence};
use crate::fields::{
    integrate, spectral_divergence, spectral_gradient, spectral_laplacian, ScalarField, SymTensorField, VectorField,
};

use super::test_function::support_integral;
use super::{mollify, MollifierKernel, SpaceTimeField, TestFunction};

/// Samples dropped at each end by the fourth-order time derivative.
const FD_HALO: usize = 2;

/// `r1 … r7` on the shrunken time range.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorFields {
    pub eps: f64,
    pub r: [SpaceTimeField; 7],
}

impl CommutatorFields {
    pub fn start_time(&self) -> f64 {
        self.r[0].start_time()
    }

    pub fn end_time(&self) -> f64 {
        self.r[0].end_time()
    }

    pub fn is_finite(&self) -> bool {
        self.r.iter().all(|f| f.values().iter().all(|v| v.is_finite()))
    }
}

/// Mollified energy density and flux sampled alongside the commutators.
#[derive(Debug, Clone, PartialEq)]
pub struct MollifiedEnergy {
    pub density: SpaceTimeField,
    pub flux: Vec<SpaceTimeField>,
}

/// One row of a commutator scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpsRecord {
    pub eps: f64,
    pub r: [f64; 7],
    pub sum_r: f64,
    /// `∫∫ E_ε ∂_t φ + F_ε · ∇φ`.
    pub flux_term: f64,
    /// `flux_term + Σ R_i`, zero up to discretization error.
    pub identity_residual: f64,
}

struct Mollified {
    rho: SpaceTimeField,
    m: Vec<SpaceTimeField>,
    u: Vec<SpaceTimeField>,
    um: Vec<SpaceTimeField>,
    p: SpaceTimeField,
    s: Vec<SpaceTimeField>,
}

fn mollify_trajectory(traj: &Trajectory, kernel: &MollifierKernel, laws: &Laws) -> Result<Mollified> {
    let grid = *traj.grid();
    let d = grid.dim();
    let rho = traj.density_field();
    let m: Vec<SpaceTimeField> = (0..d).map(|a| traj.momentum_field(a)).collect();
    let u: Vec<SpaceTimeField> = m.iter().map(|c| c.zip_map(&rho, |m, r| m / r)).collect();
    let mut um = Vec::new();
    for a in 0..d {
        for b in a..d {
            um.push(u[a].mul(&m[b]));
        }
    }
    let p = rho.map(|r| laws.energy.pressure(r));
    let stress: Vec<SymTensorField> = traj
        .samples()
        .par_iter()
        .map(|s| {
            let r = s.density();
            stress_from_parts(r, &spectral_gradient(r), &spectral_laplacian(r), &laws.capillarity)
        })
        .collect();
    let s = (0..d * (d + 1) / 2)
        .map(|c| {
            SpaceTimeField::from_slices(
                grid,
                traj.start_time(),
                traj.dt_sample(),
                stress.iter().map(|t| t.components()[c].values()),
            )
        })
        .collect::<Vec<_>>();

    let moll = |f: &SpaceTimeField| mollify(f, kernel);
    let out = Mollified {
        rho: moll(&rho)?,
        m: m.iter().map(moll).collect::<Result<_>>()?,
        u: u.iter().map(moll).collect::<Result<_>>()?,
        um: um.iter().map(moll).collect::<Result<_>>()?,
        p: moll(&p)?,
        s: s.iter().map(moll).collect::<Result<_>>()?,
    };
    if out.rho.min() < laws.rho_min {
        return Err(Error::Vacuum {
            value: out.rho.min(),
            rho_min: laws.rho_min,
            context: "mollified density".into(),
        });
    }
    Ok(out)
}

fn vector_at(fields: &[SpaceTimeField], i: usize) -> VectorField {
    VectorField::new(fields.iter().map(|f| f.slice_field(i)).collect()).expect("slices share one grid")
}

fn tensor_at(fields: &[SpaceTimeField], i: usize) -> SymTensorField {
    let grid = *fields[0].grid();
    SymTensorField::new(grid, fields.iter().map(|f| f.slice_field(i)).collect())
        .expect("slot count matches the dimension")
}

struct SliceTerms {
    r: [ScalarField; 7],
    energy: ScalarField,
    flux: VectorField,
}

fn assemble(traj: &Trajectory, kernel: &MollifierKernel, laws: &Laws) -> Result<(CommutatorFields, MollifiedEnergy)> {
    let mo = mollify_trajectory(traj, kernel, laws)?;
    let grid = *traj.grid();
    let d = grid.dim();
    let nt = mo.rho.time_len();
    if nt < 2 * FD_HALO + 1 {
        return Err(Error::Mollifier {
            eps: kernel.eps(),
            reason: format!("only {nt} mollified samples, the time derivative needs 5"),
        });
    }
    let dt = mo.rho.dt();
    let cap = laws.capillarity;
    let law = laws.energy;

    // A = ρ̄ū − m̄ on every mollified sample, needed for ∂_t A
    let a_field: Vec<SpaceTimeField> = (0..d).map(|c| mo.rho.mul(&mo.u[c]).sub(&mo.m[c])).collect();

    let inner: Vec<usize> = (FD_HALO..nt - FD_HALO).collect();
    let terms: Vec<SliceTerms> = inner
        .par_iter()
        .map(|&i| {
            let rho = mo.rho.slice_field(i);
            let m = vector_at(&mo.m, i);
            let u = vector_at(&mo.u, i);
            let q = spectral_gradient(&rho);
            let lap = spectral_laplacian(&rho);
            let q2 = q.norm_sq();

            let da: Vec<ScalarField> = (0..d)
                .map(|c| {
                    let f = &a_field[c];
                    let vals = (0..grid.len())
                        .map(|n| {
                            let v = |k: usize| f.slice(k)[n];
                            (-v(i + 2) + 8.0 * v(i + 1) - 8.0 * v(i - 1) + v(i - 2)) / (12.0 * dt)
                        })
                        .collect();
                    ScalarField::from_raw(grid, vals)
                })
                .collect();
            let r1 = VectorField::from_raw(grid, da).dot(&u);

            let transport = outer_divergence(&u, &m);
            let moll_transport = tensor_divergence(&tensor_at(&mo.um, i));
            let r2 = transport.add(&moll_transport.scale(-1.0)).dot(&u);

            let dp = rho.map(|r| law.pressure(r)).sub(&mo.p.slice_field(i));
            let grad_dp = VectorField::from_raw(grid, (0..d).map(|c| partial(&dp, c)).collect());
            let r3 = grad_dp.dot(&u);

            let s_bar = stress_from_parts(&rho, &q, &lap, &cap);
            let ds = tensor_divergence(&s_bar.sub(&tensor_at(&mo.s, i)));
            let r4 = ds.dot(&u).scale(-1.0);

            let a = VectorField::from_raw(grid, (0..d).map(|c| a_field[c].slice_field(i)).collect());
            let div_a = spectral_divergence(&a);
            let n = grid.len();
            let rv = rho.values();
            let r5 = ScalarField::from_raw(grid, (0..n).map(|k| div_a.values()[k] * law.dh(rv[k])).collect());
            let r6 = ScalarField::from_raw(
                grid,
                (0..n)
                    .map(|k| -div_a.values()[k] * 0.5 * cap.dkappa(rv[k]) * q2.values()[k])
                    .collect(),
            );
            let r7 = ScalarField::from_raw(
                grid,
                (0..n)
                    .map(|k| -div_a.values()[k] * cap.kappa(rv[k]) * lap.values()[k])
                    .collect(),
            );

            let u2 = u.norm_sq();
            let energy = ScalarField::from_raw(
                grid,
                (0..n)
                    .map(|k| 0.5 * rv[k] * u2.values()[k] + law.h(rv[k]) + 0.5 * cap.kappa(rv[k]) * q2.values()[k])
                    .collect(),
            );
            let div_m = spectral_divergence(&m);
            let coef = ScalarField::from_raw(
                grid,
                (0..n)
                    .map(|k| {
                        law.dh(rv[k]) - 0.5 * cap.dkappa(rv[k]) * q2.values()[k] - cap.kappa(rv[k]) * lap.values()[k]
                    })
                    .collect(),
            );
            let kdiv = rho.map(|r| cap.kappa(r)).mul(&div_m);
            let flux = m
                .mul_scalar(&u2.scale(0.5))
                .add(&u.mul_scalar(&rho.mul(&coef)))
                .add(&q.mul_scalar(&kdiv));

            SliceTerms {
                r: [r1, r2, r3, r4, r5, r6, r7],
                energy,
                flux,
            }
        })
        .collect();

    let t0 = mo.rho.time(FD_HALO);
    let template = &mo.rho;
    let collect = |f: &dyn Fn(&SliceTerms) -> ScalarField| template.with_slices(t0, terms.iter().map(f).collect());
    let r = std::array::from_fn(|k| collect(&|s: &SliceTerms| s.r[k].clone()));
    let density = collect(&|s: &SliceTerms| s.energy.clone());
    let flux = (0..d)
        .map(|c| collect(&|s: &SliceTerms| s.flux.component(c).clone()))
        .collect();
    Ok((
        CommutatorFields { eps: kernel.eps(), r },
        MollifiedEnergy { density, flux },
    ))
}

/// Assemble `r1 … r7` from a trajectory. Spatial derivatives are spectral,
/// the time derivative in `r1` is a fourth-order central difference, so the
/// result covers `[t0 + ε + 2dt, T − ε − 2dt]`.
pub fn commutator_fields(traj: &Trajectory, kernel: &MollifierKernel, laws: &Laws) -> Result<CommutatorFields> {
    Ok(assemble(traj, kernel, laws)?.0)
}

/// `∫ f φ dx dt` with Simpson in time over the support window.
fn weighted_integral(f: &SpaceTimeField, phi: &TestFunction) -> Result<f64> {
    let grid = *f.grid();
    let psi = phi.psi_field(&grid);
    let per_time: Vec<f64> = (0..f.time_len())
        .map(|i| {
            let chi = phi.chi(f.time(i));
            if chi == 0.0 {
                0.0
            } else {
                chi * integrate(&f.slice_field(i).mul(&psi))
            }
        })
        .collect();
    support_integral(f.start_time(), f.dt(), &per_time, phi.support())
}

/// `R_i = ∫∫ r_i φ dx dt`.
pub fn weighted_residuals(r: &CommutatorFields, phi: &TestFunction) -> Result<[f64; 7]> {
    phi.check_support(r.start_time(), r.end_time())?;
    let mut out = [0.0; 7];
    for (o, f) in out.iter_mut().zip(&r.r) {
        *o = weighted_integral(f, phi)?;
    }
    Ok(out)
}

fn flux_term(energy: &MollifiedEnergy, phi: &TestFunction) -> Result<f64> {
    let e = &energy.density;
    let grid = *e.grid();
    let psi = phi.psi_field(&grid);
    let grad = phi.grad_psi_field(&grid);
    let spatial = !phi.is_spatially_constant();
    let per_time: Vec<f64> = (0..e.time_len())
        .map(|i| {
            let t = e.time(i);
            let mut v = phi.dchi(t) * integrate(&e.slice_field(i).mul(&psi));
            if spatial && phi.chi(t) != 0.0 {
                let f = vector_at(&energy.flux, i);
                v += phi.chi(t) * integrate(&f.dot(&grad));
            }
            v
        })
        .collect();
    support_integral(e.start_time(), e.dt(), &per_time, phi.support())
}

/// R_i, their sum, and the mollified energy identity for one kernel.
pub fn commutator_record(
    traj: &Trajectory,
    kernel: &MollifierKernel,
    phi: &TestFunction,
    laws: &Laws,
) -> Result<EpsRecord> {
    let (fields, energy) = assemble(traj, kernel, laws)?;
    let r = weighted_residuals(&fields, phi)?;
    let sum_r = r.iter().sum();
    let flux = flux_term(&energy, phi)?;
    Ok(EpsRecord {
        eps: kernel.eps(),
        r,
        sum_r,
        flux_term: flux,
        identity_residual: flux + sum_r,
    })
}

/// `∫∫ [E_ε ∂_t φ + F_ε · ∇φ] dx dt + Σ R_i`, which vanishes for exact
/// mollified fields.
pub fn mollified_energy_identity_residual(
    traj: &Trajectory,
    kernel: &MollifierKernel,
    phi: &TestFunction,
    laws: &Laws,
) -> Result<f64> {
    Ok(commutator_record(traj, kernel, phi, laws)?.identity_residual)
}
