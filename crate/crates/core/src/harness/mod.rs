//! Scenario configs, experiment pipelines, decay-rate fits and reports.

mod config;
mod decay;
mod pipelines;
mod report;

pub use config::{
    default_eps_ladder, BesovSpec, BesovTarget, GridSpec, InitialSpec, MollifierSpec, Pipeline, ScenarioConfig, Solver,
    TimeSpec, Tolerances,
};
pub use decay::{fit_decay_rate, predict_exponents, DecayFit, DecayVerdict, Prediction, DECAY_FLOOR};
pub use pipelines::{
    besov_from_snapshot, commutator_scan, identity_check, initial_state, resolve_step, run_dynamics, run_pipeline,
    run_scenario, run_with_threads, synthetic_trajectory, CommutatorReport, IdentityCheck, Run,
};
pub use report::{Assertion, ReportBundle};
