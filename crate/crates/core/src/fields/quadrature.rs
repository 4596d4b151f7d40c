use crate::error::{Error, Result};

use super::field::ScalarField;

/// Rectangle rule `dx^d Σ f`, spectrally exact for band-limited integrands.
pub fn integrate(f: &ScalarField) -> f64 {
    f.grid().cell_volume() * f.values().iter().sum::<f64>()
}

/// Composite Simpson weights for `n >= 3` equally spaced samples.
///
/// An odd sample count uses plain composite Simpson. An even count closes the
/// last three intervals with Simpson's 3/8 rule so the order stays four.
pub fn simpson_weights(n: usize, h: f64) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::TooFewSamples(n));
    }
    let mut w = vec![0.0; n];
    let simpson_end = if n % 2 == 1 { n - 1 } else { n - 4 };
    for i in (0..simpson_end).step_by(2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    if n.is_multiple_of(2) {
        let s = simpson_end;
        w[s] += 3.0 * h / 8.0;
        w[s + 1] += 9.0 * h / 8.0;
        w[s + 2] += 9.0 * h / 8.0;
        w[s + 3] += 3.0 * h / 8.0;
    }
    Ok(w)
}

/// Integrate equally spaced samples with [`simpson_weights`].
pub fn simpson(samples: &[f64], h: f64) -> Result<f64> {
    let w = simpson_weights(samples.len(), h)?;
    Ok(w.iter().zip(samples).map(|(w, s)| w * s).sum())
}
