//! Computable forms of the mollification estimates on static fields.

use crate::error::Result;
use crate::fields::{spectral_gradient, ScalarField};

use super::{mollify, mollify_space, MollifierKernel, SpaceTimeField};

/// `f(v^ε) − (f∘v)^ε` on the shrunken domain.
pub fn nonlinear_commutator(
    f: impl Fn(f64) -> f64,
    v: &SpaceTimeField,
    kernel: &MollifierKernel,
) -> Result<SpaceTimeField> {
    let a = mollify(v, kernel)?.map(&f);
    let b = mollify(&v.map(&f), kernel)?;
    Ok(a.sub(&b))
}

/// Spatial-only [`nonlinear_commutator`] for a time-independent field.
pub fn nonlinear_commutator_space(
    f: impl Fn(f64) -> f64,
    v: &ScalarField,
    kernel: &MollifierKernel,
) -> Result<ScalarField> {
    let a = mollify_space(v, kernel)?.map(&f);
    let b = mollify_space(&v.map(&f), kernel)?;
    Ok(a.sub(&b))
}

/// `‖w^ε − w‖_p`.
pub fn mollification_error(w: &ScalarField, kernel: &MollifierKernel, p: f64) -> Result<f64> {
    Ok(mollify_space(w, kernel)?.sub(w).lp_norm(p))
}

/// `‖ |∇ g| ‖_p` for a field `g`.
pub fn gradient_norm(g: &ScalarField, p: f64) -> f64 {
    let grad = spectral_gradient(g).norm_sq().map(f64::sqrt);
    grad.lp_norm(p)
}

/// `‖∇(w^ε)‖_p`.
pub fn mollified_gradient_norm(w: &ScalarField, kernel: &MollifierKernel, p: f64) -> Result<f64> {
    Ok(gradient_norm(&mollify_space(w, kernel)?, p))
}

/// `‖∇ f(w^ε)‖_p`.
pub fn composed_gradient_norm(
    f: impl Fn(f64) -> f64,
    w: &ScalarField,
    kernel: &MollifierKernel,
    p: f64,
) -> Result<f64> {
    Ok(gradient_norm(&mollify_space(w, kernel)?.map(f), p))
}

/// `sup_{|s| ≤ radius} ‖w − w(· − s)‖_p` over grid shifts along every axis.
pub fn max_increment_within(w: &ScalarField, radius: f64, p: f64) -> f64 {
    let grid = w.grid();
    let k = (radius / grid.spacing() + 1e-9).floor() as isize;
    let mut best: f64 = 0.0;
    for axis in 0..grid.dim() {
        for s in 1..=k {
            let d = w.sub(&w.shifted(axis, s));
            best = best.max(d.lp_norm(p));
        }
    }
    best
}

/// `(‖f(v^ε) − f^ε(v)‖_q, ‖v^ε − v‖_p² + sup_{|s|≤ε} ‖v − v(·−s)‖_p²)` with
/// `q = p/2`; their ratio is the constant of the quadratic commutator bound.
pub fn quadratic_bound_terms(
    f: impl Fn(f64) -> f64,
    v: &ScalarField,
    kernel: &MollifierKernel,
    p: f64,
) -> Result<(f64, f64)> {
    let lhs = nonlinear_commutator_space(f, v, kernel)?.lp_norm(p / 2.0);
    let e = mollification_error(v, kernel, p)?;
    let inc = max_increment_within(v, kernel.eps(), p);
    Ok((lhs, e * e + inc * inc))
}

/// `∫ η^ε(y) (ρ(x−y) − ρ(x)) (u(x−y) − u(x)) dy` by direct summation over the
/// kernel taps.
pub fn increment_product(rho: &ScalarField, u: &ScalarField, kernel: &MollifierKernel) -> Result<ScalarField> {
    let grid = *rho.grid();
    let taps = kernel.space_weights(&grid)?;
    let k = (taps.len() - 1) as isize / 2;
    let mut acc = vec![0.0; grid.len()];
    let offsets: Vec<(isize, isize, f64)> = match grid.dim() {
        1 => taps.iter().enumerate().map(|(i, &w)| (i as isize - k, 0, w)).collect(),
        _ => {
            let mut v = Vec::new();
            for (i, &wi) in taps.iter().enumerate() {
                for (j, &wj) in taps.iter().enumerate() {
                    v.push((i as isize - k, j as isize - k, wi * wj));
                }
            }
            v
        }
    };
    for idx in 0..grid.len() {
        let (r0, u0) = (rho.values()[idx], u.values()[idx]);
        let mut s = 0.0;
        for &(a, b, w) in &offsets {
            let mut j = grid.shifted(idx, 0, -a);
            if grid.dim() == 2 {
                j = grid.shifted(j, 1, -b);
            }
            s += w * (rho.values()[j] - r0) * (u.values()[j] - u0);
        }
        acc[idx] = s;
    }
    ScalarField::new(grid, acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::TorusGrid;

    #[test]
    fn linear_maps_commute_with_mollification() {
        let g = TorusGrid::periodic(1, 128).unwrap();
        let v = ScalarField::from_fn(g, |x, _| x.sin() + 0.3 * (5.0 * x).cos());
        let k = MollifierKernel::new(0.4).unwrap();
        let c = nonlinear_commutator_space(|x| 3.0 * x - 1.0, &v, &k).unwrap();
        assert!(c.max_abs() < 1e-14);
    }

    #[test]
    fn square_commutator_matches_direct_quadrature() {
        // oracle: direct tap sums for (v^ε)² − (v²)^ε
        let g = TorusGrid::periodic(1, 64).unwrap();
        let v = ScalarField::from_fn(g, |x, _| x.cos());
        let k = MollifierKernel::new(0.6).unwrap();
        let taps = k.space_weights(&g).unwrap();
        let r = (taps.len() - 1) / 2;
        let n = 64;
        let conv = |f: &dyn Fn(usize) -> f64, i: usize| -> f64 {
            taps.iter().enumerate().map(|(j, w)| w * f((i + n + j - r) % n)).sum()
        };
        let c = nonlinear_commutator_space(|x| x * x, &v, &k).unwrap();
        for i in 0..n {
            let a = conv(&|j| v.values()[j], i);
            let b = conv(&|j| v.values()[j].powi(2), i);
            assert!((c.values()[i] - (a * a - b)).abs() < 1e-12);
        }
    }

    #[test]
    fn pointwise_decomposition_holds() {
        for dim in [1, 2] {
            let g = TorusGrid::periodic(dim, 16).unwrap();
            let rho = ScalarField::from_fn(g, |x, y| 1.0 + 0.3 * (x + 2.0 * y).sin() + 0.1 * (3.0 * x).cos());
            let u = ScalarField::from_fn(g, |x, y| (2.0 * x).cos() - 0.5 * (y - x).sin());
            let k = MollifierKernel::new(1.0).unwrap();
            let rb = mollify_space(&rho, &k).unwrap();
            let ub = mollify_space(&u, &k).unwrap();
            let rub = mollify_space(&rho.mul(&u), &k).unwrap();
            let lhs = rb.mul(&ub).sub(&rub);
            let rhs = rb
                .sub(&rho)
                .mul(&ub.sub(&u))
                .sub(&increment_product(&rho, &u, &k).unwrap());
            assert!(lhs.sub(&rhs).max_abs() < 1e-10, "dim {dim}");
        }
    }

    #[test]
    fn increments_within_radius() {
        let g = TorusGrid::periodic(1, 64).unwrap();
        let w = ScalarField::from_fn(g, |x, _| x.cos());
        let dx = g.spacing();
        assert_eq!(max_increment_within(&w, 0.5 * dx, 2.0), 0.0);
        let one = w.sub(&w.shifted(0, 1)).lp_norm(2.0);
        assert!((max_increment_within(&w, dx, 2.0) - one).abs() < 1e-15);
        assert!(max_increment_within(&w, 4.0 * dx, 2.0) > one);
    }
}
