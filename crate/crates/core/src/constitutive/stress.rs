//! Korteweg stress without the pressure part,
//!
//! ```text
//! S(ρ, q, r) = (½(ρκ'(ρ) + κ(ρ))|q|² + ρκ(ρ) r) I − κ(ρ) q ⊗ q
//! ```
//!
//! evaluated with `q = ∇ρ`, `r = Δρ`. The momentum balance reads
//! `∂_t m + div(m ⊗ m / ρ) = −∇p + div S`.

use crate::error::Result;
use crate::fields::spectral::{partial, spectral_divergence};
use crate::fields::{spectral_gradient, spectral_laplacian, ScalarField, SymTensorField, VectorField};

use super::{CapillarityLaw, Laws};

/// Dense 2×2 matrix; in one dimension only `[0][0]` is meaningful.
pub type Mat2 = [[f64; 2]; 2];

fn assemble(diag: f64, kappa: f64, q: &[f64]) -> Mat2 {
    let mut s = [[0.0; 2]; 2];
    for i in 0..q.len() {
        for j in 0..=i {
            s[i][j] = -kappa * q[i] * q[j];
            s[j][i] = s[i][j];
        }
        s[i][i] += diag;
    }
    s
}

fn sq(q: &[f64]) -> f64 {
    q.iter().map(|v| v * v).sum()
}

/// `S(ρ, q, r)` in the product form `½(ρκ' + κ)|q|² + ρκr`.
pub fn stress(rho: f64, q: &[f64], r: f64, laws: &Laws) -> Result<Mat2> {
    laws.check_density(rho, "stress")?;
    let cap = &laws.capillarity;
    let (k, dk) = (cap.kappa(rho), cap.dkappa(rho));
    let diag = 0.5 * (rho * dk + k) * sq(q) + rho * k * r;
    Ok(assemble(diag, k, q))
}

/// `div(ρκ(ρ)q)` expanded by the chain rule when `q = ∇ρ`, `r = Δρ`:
/// `(κ + ρκ')|q|² + ρκ r`.
pub fn expanded_flux_divergence(rho: f64, q: &[f64], r: f64, cap: &CapillarityLaw) -> f64 {
    (cap.kappa(rho) + rho * cap.dkappa(rho)) * sq(q) + rho * cap.kappa(rho) * r
}

/// `S` in the divergence form `−½(ρκ' + κ)|q|² + div(ρκq)`, with the value of
/// `div(ρκ(ρ)q)` supplied by the caller.
pub fn stress_divergence_form(rho: f64, q: &[f64], flux_div: f64, laws: &Laws) -> Result<Mat2> {
    laws.check_density(rho, "stress")?;
    let cap = &laws.capillarity;
    let (k, dk) = (cap.kappa(rho), cap.dkappa(rho));
    let diag = -0.5 * (rho * dk + k) * sq(q) + flux_div;
    Ok(assemble(diag, k, q))
}

/// Pointwise `S(ρ, q, r)` over fields, no vacuum check.
pub fn stress_from_parts(rho: &ScalarField, q: &VectorField, r: &ScalarField, cap: &CapillarityLaw) -> SymTensorField {
    let grid = *rho.grid();
    let d = grid.dim();
    let q2 = q.norm_sq();
    let kappa = rho.map(|v| cap.kappa(v));
    let diag: Vec<f64> = rho
        .values()
        .iter()
        .zip(q2.values())
        .zip(r.values())
        .zip(kappa.values())
        .map(|(((&p, &q2), &r), &k)| 0.5 * (p * cap.dkappa(p) + k) * q2 + p * k * r)
        .collect();
    let mut comps = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            let qq = q.component(i).mul(q.component(j));
            let vals = qq
                .values()
                .iter()
                .zip(kappa.values())
                .zip(&diag)
                .map(|((&qq, &k), &dg)| if i == j { dg - k * qq } else { -k * qq })
                .collect();
            comps.push(ScalarField::from_raw(grid, vals));
        }
    }
    // slot order xx, xy, yy matches the i <= j loop
    SymTensorField::from_raw(grid, comps)
}

/// `S(ρ, ∇ρ, Δρ)` with spectral derivatives.
pub fn stress_field(rho: &ScalarField, laws: &Laws) -> Result<SymTensorField> {
    laws.check_field(rho, "stress")?;
    let q = spectral_gradient(rho);
    let r = spectral_laplacian(rho);
    Ok(stress_from_parts(rho, &q, &r, &laws.capillarity))
}

/// `S` assembled from the divergence form with `div(ρκ∇ρ)` computed
/// spectrally instead of by the chain rule.
pub fn stress_field_divergence_form(rho: &ScalarField, laws: &Laws) -> Result<SymTensorField> {
    laws.check_field(rho, "stress")?;
    let cap = &laws.capillarity;
    let grid = *rho.grid();
    let q = spectral_gradient(rho);
    let rk = rho.map(|v| v * cap.kappa(v));
    let flux = q.mul_scalar(&rk);
    let flux_div = spectral_divergence(&flux);
    let q2 = q.norm_sq();
    let d = grid.dim();
    let mut comps = Vec::new();
    for i in 0..d {
        for j in i..d {
            let vals = (0..grid.len())
                .map(|n| {
                    let p = rho.values()[n];
                    let k = cap.kappa(p);
                    let qq = q.component(i).values()[n] * q.component(j).values()[n];
                    let diag = -0.5 * (p * cap.dkappa(p) + k) * q2.values()[n] + flux_div.values()[n];
                    if i == j {
                        diag - k * qq
                    } else {
                        -k * qq
                    }
                })
                .collect();
            comps.push(ScalarField::from_raw(grid, vals));
        }
    }
    Ok(SymTensorField::from_raw(grid, comps))
}

/// `h'(ρ) + ½κ'(ρ)|∇ρ|² − div(κ(ρ)∇ρ)`, the variational derivative of the
/// total energy with respect to ρ.
pub fn chemical_potential(rho: &ScalarField, laws: &Laws) -> ScalarField {
    let cap = &laws.capillarity;
    let q = spectral_gradient(rho);
    let q2 = q.norm_sq();
    let kq = q.mul_scalar(&rho.map(|v| cap.kappa(v)));
    let div_kq = spectral_divergence(&kq);
    let grid = *rho.grid();
    let vals = (0..grid.len())
        .map(|n| {
            let p = rho.values()[n];
            laws.energy.dh(p) + 0.5 * cap.dkappa(p) * q2.values()[n] - div_kq.values()[n]
        })
        .collect();
    ScalarField::from_raw(grid, vals)
}

/// `−ρ∇μ` with μ the chemical potential: the non-conservative right-hand
/// side of the momentum balance.
pub fn potential_force(rho: &ScalarField, laws: &Laws) -> VectorField {
    let mu = chemical_potential(rho, laws);
    let grid = *rho.grid();
    let comps = (0..grid.dim()).map(|a| partial(&mu, a).mul(rho).scale(-1.0)).collect();
    VectorField::from_raw(grid, comps)
}
