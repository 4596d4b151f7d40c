//! Mollification error, gradient growth and the quadratic commutator bound on a rough field.

use ek_core::besov::{besov_seminorm, weierstrass_field};
use ek_core::constitutive::EnergyLaw;
use ek_core::fields::TorusGrid;
use ek_core::mollify::lemmas::{
    composed_gradient_norm, mollification_error, mollified_gradient_norm, quadratic_bound_terms,
};
use ek_core::mollify::MollifierKernel;

fn main() -> ek_core::Result<()> {
    let alpha = 0.4;
    let g = TorusGrid::periodic(1, 1 << 14)?;
    let w = weierstrass_field(alpha, 12, &g, &[])?;
    let rho = w.map(|v| 1.0 + 0.1 * v);
    let semi = besov_seminorm(&w, alpha, 3.0)?;
    let law = EnergyLaw::Gamma { a: 1.0, gamma: 1.4 };
    println!("seminorm {semi:.4}");
    println!(
        "{:>10} {:>14} {:>12} {:>12} {:>12}",
        "eps", "err/(ε^α s)", "|∇w^ε|", "|∇h'(ρ^ε)|", "quad const"
    );
    for k in (4..=10).rev() {
        let eps = 2f64.powi(-k);
        let kern = MollifierKernel::new(eps)?;
        let (lhs, rhs) = quadratic_bound_terms(|v| v * v, &w, &kern, 3.0)?;
        println!(
            "{eps:>10.3e} {:>14.4} {:>12.4} {:>12.4} {:>12.4}",
            mollification_error(&w, &kern, 3.0)? / (eps.powf(alpha) * semi),
            mollified_gradient_norm(&w, &kern, 3.0)?,
            composed_gradient_norm(|r| law.dh(r), &rho, &kern, 3.0)?,
            lhs / rhs
        );
    }
    Ok(())
}
