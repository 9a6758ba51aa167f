use thiserror::Error;

use super::{effective_envelope, ProbeGrid, Solver, SolverConfig, SolverState};
use crate::error::Error;
use crate::harmonics::SphericalPoint;

/// Per-step record of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub n: usize,
    pub time: f64,
    /// Probe-grid estimate of `‖uⁿ‖∞`.
    pub uniform_norm: f64,
    /// `Ẽ(uⁿ)` on the evolution rule; NaN if that rule has pole points.
    pub discrete_energy: f64,
    /// `E(uⁿ)`.
    pub continuous_energy: f64,
    /// `1 + θⁿα₀`, only defined for `τ ≤ 1/2`.
    pub envelope: Option<f64>,
    pub l2_norm: f64,
}

/// Values of `uⁿ` on the probe grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub time: f64,
    pub grid: ProbeGrid,
    /// Row-major, latitudes from the north, longitudes from 0.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub diagnostics: Vec<StepDiagnostics>,
    pub snapshots: Vec<Snapshot>,
    /// Last finite state reached.
    pub final_state: Option<SolverState>,
    /// The `α₀` used for the envelope.
    pub alpha0: f64,
    /// Label of the rule used for the potential part of `E`.
    pub energy_rule: String,
}

/// A run that stopped early. Everything computed before the failure is kept.
#[derive(Debug, Error)]
#[error("{error}")]
pub struct RunFailure {
    #[source]
    pub error: Error,
    pub partial: Box<RunOutput>,
}

impl Solver {
    fn diagnostics(&self, state: &SolverState, alpha0: f64) -> Result<StepDiagnostics, Error> {
        let discrete_energy = match self.discrete_energy(&state.coeffs) {
            Ok(e) => e,
            Err(Error::InvalidRule(_)) => f64::NAN,
            Err(e) => return Err(e),
        };
        let tau = self.config().tau;
        Ok(StepDiagnostics {
            n: state.n,
            time: state.time,
            uniform_norm: self.uniform_norm(&state.coeffs)?,
            discrete_energy,
            continuous_energy: self.continuous_energy(&state.coeffs)?,
            envelope: effective_envelope(state.n, alpha0, tau).ok(),
            l2_norm: state.coeffs.l2_norm(),
        })
    }

    fn snapshot(&self, state: &SolverState) -> Snapshot {
        let grid = self.config().probe_grid;
        Snapshot {
            n: state.n,
            time: state.time,
            grid,
            values: grid.synthesize(&state.coeffs),
        }
    }

    /// Projects `u₀`, takes `config.steps` steps and records diagnostics after
    /// each, plus a snapshot every `snapshot_every` steps (including `n = 0`).
    pub fn run(
        &self,
        u0: impl Fn(&SphericalPoint) -> f64,
    ) -> std::result::Result<RunOutput, RunFailure> {
        let mut out = RunOutput {
            diagnostics: Vec::with_capacity(self.config().steps + 1),
            snapshots: Vec::new(),
            final_state: None,
            alpha0: self.config().alpha0.unwrap_or(0.0),
            energy_rule: String::new(),
        };
        match self.energy_rule_label() {
            Ok(label) => out.energy_rule = label,
            Err(error) => {
                return Err(RunFailure {
                    error,
                    partial: Box::new(out),
                })
            }
        }
        let mut state = match self.init_from_fn(u0) {
            Ok(s) => s,
            Err(error) => {
                return Err(RunFailure {
                    error,
                    partial: Box::new(out),
                })
            }
        };
        if self.config().alpha0.is_none() {
            match self.uniform_norm(&state.coeffs) {
                Ok(norm) => out.alpha0 = (norm - 1.0).max(0.0),
                Err(error) => {
                    return Err(RunFailure {
                        error,
                        partial: Box::new(out),
                    })
                }
            }
        }
        let every = self.config().snapshot_every;
        loop {
            match self.diagnostics(&state, out.alpha0) {
                Ok(d) => out.diagnostics.push(d),
                Err(error) => {
                    return Err(RunFailure {
                        error,
                        partial: Box::new(out),
                    })
                }
            }
            if every > 0 && state.n % every == 0 {
                out.snapshots.push(self.snapshot(&state));
            }
            if state.n >= self.config().steps {
                break;
            }
            match self.step(&state) {
                Ok(next) => state = next,
                Err(error) => {
                    out.final_state = Some(state);
                    return Err(RunFailure {
                        error,
                        partial: Box::new(out),
                    });
                }
            }
        }
        out.final_state = Some(state);
        Ok(out)
    }
}

/// Builds a solver for `config` and runs it from the initial condition `u0`.
pub fn run(
    config: SolverConfig,
    u0: impl Fn(&SphericalPoint) -> f64,
) -> std::result::Result<RunOutput, RunFailure> {
    match Solver::new(config) {
        Ok(solver) => solver.run(u0),
        Err(error) => Err(RunFailure {
            error,
            partial: Box::new(RunOutput {
                diagnostics: Vec::new(),
                snapshots: Vec::new(),
                final_state: None,
                alpha0: 0.0,
                energy_rule: String::new(),
            }),
        }),
    }
}
