use crate::constitutive::{EKState, Laws};
use crate::error::{Error, Result};
use crate::fields::TorusGrid;
use crate::mollify::SpaceTimeField;

/// Uniformly sampled solution on `Ω = (t0, T) × 𝕋^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    grid: TorusGrid,
    t0: f64,
    dt_sample: f64,
    samples: Vec<EKState>,
    laws: Laws,
}

impl Trajectory {
    pub fn new(t0: f64, dt_sample: f64, samples: Vec<EKState>, laws: Laws) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| Error::Shape("trajectory needs at least one sample".into()))?;
        let grid = *first.grid();
        if !(dt_sample > 0.0 && dt_sample.is_finite()) {
            return Err(Error::param("dt_sample", format!("{dt_sample} must be positive")));
        }
        for (i, s) in samples.iter().enumerate() {
            if *s.grid() != grid {
                return Err(Error::Shape(format!("sample {i} lives on a different grid")));
            }
            laws.check_field(s.density(), &format!("trajectory sample {i}"))?;
        }
        Ok(Self {
            grid,
            t0,
            dt_sample,
            samples,
            laws,
        })
    }

    pub fn grid(&self) -> &TorusGrid {
        &self.grid
    }

    pub fn laws(&self) -> &Laws {
        &self.laws
    }

    pub fn start_time(&self) -> f64 {
        self.t0
    }

    pub fn dt_sample(&self) -> f64 {
        self.dt_sample
    }

    /// `T = t0 + (count − 1) · dt_sample`.
    pub fn end_time(&self) -> f64 {
        self.time(self.samples.len() - 1)
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt_sample
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[EKState] {
        &self.samples
    }

    pub fn first(&self) -> &EKState {
        &self.samples[0]
    }

    pub fn last(&self) -> &EKState {
        self.samples.last().unwrap()
    }

    /// Keep every `k`-th sample.
    pub fn subsample(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::param("k", "subsampling factor must be positive"));
        }
        Ok(Self {
            grid: self.grid,
            t0: self.t0,
            dt_sample: self.dt_sample * k as f64,
            samples: self.samples.iter().step_by(k).cloned().collect(),
            laws: self.laws,
        })
    }

    /// Density as a space-time field.
    pub fn density_field(&self) -> SpaceTimeField {
        SpaceTimeField::from_slices(
            self.grid,
            self.t0,
            self.dt_sample,
            self.samples.iter().map(|s| s.density().values()),
        )
    }

    /// Momentum component `axis` as a space-time field.
    pub fn momentum_field(&self, axis: usize) -> SpaceTimeField {
        SpaceTimeField::from_slices(
            self.grid,
            self.t0,
            self.dt_sample,
            self.samples.iter().map(|s| s.momentum().component(axis).values()),
        )
    }

    /// Assemble a trajectory from space-time density and momentum fields,
    /// as produced by the synthetic generators.
    pub fn from_fields(rho: &SpaceTimeField, m: &[SpaceTimeField], laws: Laws) -> Result<Self> {
        let grid = *rho.grid();
        if m.len() != grid.dim() {
            return Err(Error::Shape(format!(
                "{} momentum components on a {}-d grid",
                m.len(),
                grid.dim()
            )));
        }
        let samples = (0..rho.time_len())
            .map(|i| {
                let comps = m.iter().map(|c| c.slice_field(i)).collect();
                EKState::from_parts(rho.slice_field(i), crate::fields::VectorField::new(comps)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(rho.start_time(), rho.dt(), samples, laws)
    }
}
