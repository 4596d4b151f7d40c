use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constitutive::{CapillarityLaw, EnergyLaw, Laws, DEFAULT_RHO_MIN};
use crate::error::{Error, Result};
use crate::fields::TorusGrid;
use crate::mollify::{SpaceProfile, TestFunction, TimeProfile};

/// The experiment a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    Simulate,
    Madelung,
    EnergyAudit,
    CommutatorScan,
    Besov,
    CrossValidate,
}

impl Pipeline {
    pub const ALL: [Pipeline; 6] = [
        Pipeline::Simulate,
        Pipeline::Madelung,
        Pipeline::EnergyAudit,
        Pipeline::CommutatorScan,
        Pipeline::Besov,
        Pipeline::CrossValidate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Simulate => "simulate",
            Pipeline::Madelung => "madelung",
            Pipeline::EnergyAudit => "energy-audit",
            Pipeline::CommutatorScan => "commutator-scan",
            Pipeline::Besov => "besov",
            Pipeline::CrossValidate => "cross-validate",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Pipeline::ALL
            .into_iter()
            .find(|p| p.name() == s || (s == "besov-fit" && *p == Pipeline::Besov))
            .ok_or_else(|| Error::param("pipeline", format!("unknown pipeline {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "one")]
    pub dim: usize,
    pub n: usize,
    #[serde(default = "two_pi")]
    pub length: f64,
}

fn one() -> usize {
    1
}

fn two_pi() -> f64 {
    2.0 * PI
}

/// Named initial data. Wavenumbers are in units of `2π/L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum InitialSpec {
    Constant {
        rho: f64,
        #[serde(default)]
        velocity: [f64; 2],
    },
    /// `ρ = mean + amplitude cos(mode x)`, `u = velocity sin(mode x)`.
    Cosine {
        #[serde(default = "unit")]
        mean: f64,
        amplitude: f64,
        #[serde(default = "unit_mode")]
        mode: u32,
        #[serde(default)]
        velocity: f64,
    },
    /// `ψ = (mean + amplitude cos(mode x)) exp(i phase sin(mode x))`.
    Madelung {
        #[serde(default = "unit")]
        mean: f64,
        amplitude: f64,
        #[serde(default = "unit_mode")]
        mode: u32,
        #[serde(default)]
        phase: f64,
    },
    /// Synthetic traveling lacunary fields, not solutions of any equation:
    /// `u = a Σ 2^{−αj} cos(2^j(x − ct) + π/2)` and
    /// `ρ = 1 + a Σ 2^{−(β+2)j} cos(2^j(x − ct) + π/2)`, `j ≤ levels`.
    Weierstrass {
        alpha: f64,
        beta: f64,
        levels: usize,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default = "default_speed")]
        speed: f64,
    },
    /// Seeded random-phase series with exponent α, up to `k_max`.
    Random { alpha: f64, k_max: usize },
}

fn unit() -> f64 {
    1.0
}

fn unit_mode() -> u32 {
    1
}

fn default_amplitude() -> f64 {
    0.3
}

fn default_speed() -> f64 {
    0.5
}

impl InitialSpec {
    pub fn is_synthetic(&self) -> bool {
        matches!(self, InitialSpec::Weierstrass { .. } | InitialSpec::Random { .. })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    /// Direct RK4 pseudo-spectral solver.
    Ek,
    /// Split-step Schrödinger solver with Madelung sampling.
    Nls,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeSpec {
    pub t_end: f64,
    /// Step size; the CFL bound when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default = "one")]
    pub sample_every: usize,
    /// Sample count of synthetic trajectories, spread over `[0, t_end]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub dealias: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<Solver>,
    /// Write every snapshot (true) or none.
    #[serde(default = "yes")]
    pub snapshots: bool,
}

fn default_cfl() -> f64 {
    crate::dynamics::DEFAULT_CFL
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MollifierSpec {
    /// Explicit radii; the default dyadic ladder when empty.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eps: Vec<f64>,
    #[serde(default = "four")]
    pub min_space_cells: f64,
}

fn four() -> f64 {
    4.0
}

impl Default for MollifierSpec {
    fn default() -> Self {
        Self {
            eps: Vec::new(),
            min_space_cells: 4.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BesovTarget {
    Rho,
    U,
    GradRho,
    LapRho,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BesovSpec {
    #[serde(default = "three")]
    pub p: f64,
    #[serde(default = "default_target")]
    pub field: BesovTarget,
    /// Exponent the fit is checked against, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
}

fn three() -> f64 {
    3.0
}

fn default_target() -> BesovTarget {
    BesovTarget::U
}

impl Default for BesovSpec {
    fn default() -> Self {
        Self {
            p: 3.0,
            field: BesovTarget::U,
            expected: None,
        }
    }
}

/// Pass/fail thresholds. Every assertion reads its bound from here.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub mass_drift: f64,
    pub energy_drift: f64,
    /// Bound on `|weak residual| / E(0)`.
    pub weak_residual: f64,
    /// Minimum fitted decay slope of every `|R_i|`.
    pub min_slope: f64,
    /// Allowed distance of a fitted slope below its prediction.
    pub slope_window: f64,
    /// `|identity residual| ≤ identity_factor × error estimate`.
    pub identity_factor: f64,
    pub besov_alpha: f64,
    /// Relative L² mismatch between the two solvers.
    pub cross_l2: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            mass_drift: 1e-12,
            energy_drift: 1e-6,
            weak_residual: 1e-6,
            min_slope: 0.15,
            slope_window: 0.2,
            identity_factor: 10.0,
            besov_alpha: 0.05,
            cross_l2: 1e-6,
        }
    }
}

fn default_energy() -> EnergyLaw {
    EnergyLaw::Gamma { a: 1.0, gamma: 2.0 }
}

fn default_rho_min() -> f64 {
    DEFAULT_RHO_MIN
}

/// A complete scenario, parsed from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<Pipeline>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub grid: GridSpec,
    #[serde(default = "default_energy")]
    pub energy_law: EnergyLaw,
    pub capillarity: CapillarityLaw,
    #[serde(default = "default_rho_min")]
    pub rho_min: f64,
    pub initial: InitialSpec,
    pub time: TimeSpec,
    #[serde(default)]
    pub mollifier: MollifierSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test_function: Option<TestFunction>,
    #[serde(default)]
    pub besov: BesovSpec,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ScenarioConfig {
    /// Parse and validate.
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(vec![e.to_string()]))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(v) => Error::Config(v.into_iter().map(|m| format!("{}: {m}", path.display())).collect()),
            other => other,
        })
    }

    /// Normalized TOML form: every default spelled out.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn grid(&self) -> Result<TorusGrid> {
        TorusGrid::new(self.grid.dim, self.grid.n, self.grid.length)
    }

    pub fn laws(&self) -> Result<Laws> {
        Ok(Laws::new(self.energy_law, self.capillarity)?.with_rho_min(self.rho_min))
    }

    /// Spacing of the stored samples, known before running for synthetic data
    /// and explicit step sizes.
    pub fn sample_spacing(&self) -> Option<f64> {
        if let Some(n) = self.time.samples {
            return Some(self.time.t_end / (n.max(2) - 1) as f64);
        }
        self.time.dt.map(|dt| dt * self.time.sample_every as f64)
    }

    /// The test function, or a time bump leaving `4·dt_sample` clear of the
    /// largest kernel at both ends.
    pub fn test_function_for(&self, eps_max: f64, dt_sample: f64) -> Result<TestFunction> {
        if let Some(phi) = self.test_function {
            return Ok(phi);
        }
        let pad = eps_max + 4.0 * dt_sample;
        TestFunction::new(
            TimeProfile::Bump {
                ta: pad,
                tb: self.time.t_end - pad,
            },
            SpaceProfile::Constant,
        )
    }

    /// Check every key and report all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        let mut flag = |key: &str, msg: String| bad.push(format!("{key}: {msg}"));

        if !(1..=2).contains(&self.grid.dim) {
            flag("grid.dim", format!("{} is not 1 or 2", self.grid.dim));
        }
        if self.grid.n < 8 || !self.grid.n.is_power_of_two() {
            flag("grid.n", format!("{} is not a power of two >= 8", self.grid.n));
        }
        if !(self.grid.length > 0.0 && self.grid.length.is_finite()) {
            flag("grid.length", format!("{} must be positive", self.grid.length));
        }
        if let Err(e) = self.energy_law.validate() {
            flag("energy_law", e.to_string());
        }
        if let Err(e) = self.capillarity.validate() {
            flag("capillarity", e.to_string());
        }
        if !(self.rho_min > 0.0) {
            flag("rho_min", format!("{} must be positive", self.rho_min));
        }

        let t_end = self.time.t_end;
        if !(t_end > 0.0 && t_end.is_finite()) {
            flag("time.t_end", format!("{t_end} must be positive"));
        }
        if let Some(dt) = self.time.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                flag("time.dt", format!("{dt} must be positive"));
            }
        }
        if self.time.sample_every == 0 {
            flag("time.sample_every", "must be at least 1".into());
        }
        if !(self.time.cfl > 0.0) {
            flag("time.cfl", format!("{} must be positive", self.time.cfl));
        }
        match (self.initial.is_synthetic(), self.time.samples) {
            (true, None) if self.pipeline == Some(Pipeline::CommutatorScan) => {
                flag("time.samples", "required for synthetic trajectories".into())
            }
            (_, Some(n)) if n < 5 => flag("time.samples", format!("{n} is below 5")),
            _ => {}
        }
        if self.time.solver == Some(Solver::Nls) && self.capillarity.eps0() == 0.0 {
            flag(
                "time.solver",
                "the Schrödinger solver needs capillarity type \"qhd\"".into(),
            );
        }

        match self.initial {
            InitialSpec::Constant { rho, .. } if !(rho > 0.0) => flag("initial.rho", format!("{rho} must be positive")),
            InitialSpec::Cosine {
                mean, amplitude, mode, ..
            }
            | InitialSpec::Madelung {
                mean, amplitude, mode, ..
            } => {
                if !(mean - amplitude.abs() > 0.0) {
                    flag("initial.amplitude", format!("mean {mean} ± {amplitude} reaches vacuum"));
                }
                if mode == 0 || 2 * mode as usize >= self.grid.n {
                    flag("initial.mode", format!("{mode} is not a resolved nonzero mode"));
                }
            }
            InitialSpec::Weierstrass {
                alpha,
                beta,
                levels,
                amplitude,
                ..
            } => {
                for (k, v) in [("initial.alpha", alpha), ("initial.beta", beta)] {
                    if !(v > 0.0 && v < 1.0) {
                        flag(k, format!("{v} must lie in (0, 1)"));
                    }
                }
                if levels >= usize::BITS as usize || (1usize << levels) >= self.grid.n / 2 {
                    flag("initial.levels", format!("2^{levels} reaches the Nyquist band"));
                }
                if !(amplitude.abs() < 0.5) {
                    flag("initial.amplitude", format!("{amplitude} risks vacuum, keep |a| < 0.5"));
                }
            }
            InitialSpec::Random { alpha, .. } if !(alpha > 0.0 && alpha < 1.0) => {
                flag("initial.alpha", format!("{alpha} must lie in (0, 1)"))
            }
            _ => {}
        }
        if let Some(p) = self.pipeline {
            let needs_dynamics = matches!(
                p,
                Pipeline::Simulate | Pipeline::Madelung | Pipeline::EnergyAudit | Pipeline::CrossValidate
            );
            if needs_dynamics && self.initial.is_synthetic() {
                flag("initial", format!("synthetic fields cannot seed the {p} pipeline"));
            }
            let needs_wave = matches!(p, Pipeline::Madelung | Pipeline::CrossValidate);
            if needs_wave && !matches!(self.initial, InitialSpec::Madelung { .. }) {
                flag("initial", format!("the {p} pipeline needs type \"madelung\""));
            }
            if needs_wave && self.capillarity.eps0() == 0.0 {
                flag("capillarity", format!("the {p} pipeline needs type \"qhd\""));
            }
            if p == Pipeline::CommutatorScan && matches!(self.initial, InitialSpec::Random { .. }) {
                flag("initial", "random fields are static, a scan needs a trajectory".into());
            }
        }

        for (i, &e) in self.mollifier.eps.iter().enumerate() {
            if !(e > 0.0 && e < t_end / 4.0) {
                flag(&format!("mollifier.eps[{i}]"), format!("{e} lies outside (0, T/4)"));
            }
        }
        if !(self.mollifier.min_space_cells > 0.0) {
            flag("mollifier.min_space_cells", "must be positive".into());
        }
        if let Some(phi) = &self.test_function {
            if let Some((ta, tb)) = phi.support() {
                if !(ta > 0.0 && tb < t_end && ta < tb) {
                    flag(
                        "test_function",
                        format!("support ({ta}, {tb}) is not inside (0, {t_end})"),
                    );
                }
            }
        }
        if ![2.0, 3.0].contains(&self.besov.p) {
            flag("besov.p", format!("{} is not 2 or 3", self.besov.p));
        }

        let t = &self.tolerances;
        for (k, v) in [
            ("tolerances.mass_drift", t.mass_drift),
            ("tolerances.energy_drift", t.energy_drift),
            ("tolerances.weak_residual", t.weak_residual),
            ("tolerances.slope_window", t.slope_window),
            ("tolerances.identity_factor", t.identity_factor),
            ("tolerances.besov_alpha", t.besov_alpha),
            ("tolerances.cross_l2", t.cross_l2),
        ] {
            if !(v > 0.0) {
                flag(k, format!("{v} must be positive"));
            }
        }

        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(bad))
        }
    }
}

/// Dyadic radii `T/8, T/16, …, T/1024`, each snapped to the nearest multiple
/// of `2·dt_sample`; radii that snap to zero and duplicates are dropped.
pub fn default_eps_ladder(t_end: f64, dt_sample: f64) -> Vec<f64> {
    let step = 2.0 * dt_sample;
    let mut out: Vec<f64> = Vec::new();
    for k in 3..=10 {
        let e = t_end / f64::from(1u32 << k);
        let snapped = (e / step).round() * step;
        if snapped > 0.0 && out.last().is_none_or(|&l| (l - snapped).abs() > 1e-12 * l) {
            out.push(snapped);
        }
    }
    out
}
