//! Commutator decay on rough traveling fields, with exponents measured from the data.

use ek_core::harness::{commutator_scan, synthetic_trajectory, ScenarioConfig};

const CONFIG: &str = r#"
pipeline = "commutator-scan"
[grid]
n = 512
[capillarity]
type = "qhd"
eps0 = 1.0
[initial]
type = "weierstrass"
alpha = 0.45
beta = 0.45
levels = 7
[time]
t_end = 6.283185307179586
samples = 256
"#;

fn main() -> ek_core::Result<()> {
    let cfg = ScenarioConfig::from_toml(CONFIG)?;
    let traj = synthetic_trajectory(&cfg)?;
    let rep = commutator_scan(&traj, &[], 4.0, None, 3.0, &cfg.laws()?)?;

    println!(
        "α̂ {:.3}  β̂ {:.3} (from {:?})",
        rep.alpha.alpha, rep.beta.alpha, rep.beta_source
    );
    println!(
        "hypothesis {} (min = {:.3})",
        rep.prediction.hypothesis, rep.prediction.threshold
    );
    for row in &rep.rows {
        let r: Vec<String> = row.r.iter().map(|v| format!("{v:>10.2e}")).collect();
        println!("ε {:.4}  {}", row.eps, r.join(" "));
    }
    for (i, (fit, pred)) in rep.fits.iter().zip(rep.prediction.exponents).enumerate() {
        match fit {
            Some(f) => println!(
                "R{}  slope {:.3}  predicted {:.3}  r² {:.3}",
                i + 1,
                f.slope,
                pred,
                f.r_squared
            ),
            None => println!("R{}  too few radii", i + 1),
        }
    }
    Ok(())
}
