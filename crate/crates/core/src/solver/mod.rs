//! First-order IMEX spectral scheme for `u_t = ν²Δu - (u³ - u)` on S².
//!
//! One step maps coefficients `cⁿ` to
//! `c^{n+1}_{ℓ,k} = (cⁿ_{ℓ,k} - τ·[L_N f(uⁿ)]_{ℓ,k}) / (1 + τν²λ_ℓ)`:
//! diffusion is implicit and diagonal in the harmonic basis, the reaction is
//! explicit and enters only through its samples at the evolution rule.

mod energy;
mod grid;
mod run;
mod stability;

pub use energy::{continuous_energy, discrete_energy, gradient_energy, nonlinear_f, potential_f};
pub use grid::{pole_values, uniform_norm_estimate, ProbeGrid};
pub use run::{run, RunFailure, RunOutput, Snapshot, StepDiagnostics};
pub use stability::{effective_envelope, stability_constants, tau1, zeta_max, StabilityConstants};

use std::sync::OnceLock;

use energy::EnergyQuadrature;

use crate::error::{Error, Result};
use crate::harmonics::{laplace_eigenvalue, BasisIndex, GradientMatrices};
use crate::hyperinterp::{hyperinterpolate, HarmonicCoefficients, Hyperinterpolator};
use crate::quadrature::{gauss_product_rule, QuadratureRule};

/// Full description of a simulation.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Diffusion coefficient `ν > 0`.
    pub nu: f64,
    /// Time step `τ > 0`.
    pub tau: f64,
    /// Polynomial degree `N ≥ 1`.
    pub degree: usize,
    pub steps: usize,
    /// Rule defining `L_N` during time stepping.
    pub evolution_rule: QuadratureRule,
    /// Rule used only to project the initial data; the evolution rule if `None`.
    pub init_rule: Option<QuadratureRule>,
    /// Rule for the potential term of `E`; `gauss_product_rule(4N)` if `None`.
    pub energy_rule: Option<QuadratureRule>,
    pub probe_grid: ProbeGrid,
    /// Envelope offset `α₀`; measured as `max(0, ‖u⁰‖∞ - 1)` if `None`.
    pub alpha0: Option<f64>,
    /// Snapshot cadence in steps; 0 disables snapshots.
    pub snapshot_every: usize,
}

impl SolverConfig {
    pub fn new(nu: f64, tau: f64, degree: usize, evolution_rule: QuadratureRule) -> Self {
        Self {
            nu,
            tau,
            degree,
            steps: 0,
            evolution_rule,
            init_rule: None,
            energy_rule: None,
            probe_grid: ProbeGrid::default_for(degree),
            alpha0: None,
            snapshot_every: 0,
        }
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    /// Sets `steps = ⌈t_final / τ⌉`.
    pub fn with_t_final(mut self, t_final: f64) -> Self {
        self.steps = steps_for(t_final, self.tau);
        self
    }

    pub fn with_init_rule(mut self, rule: QuadratureRule) -> Self {
        self.init_rule = Some(rule);
        self
    }

    pub fn with_energy_rule(mut self, rule: QuadratureRule) -> Self {
        self.energy_rule = Some(rule);
        self
    }

    pub fn with_probe_grid(mut self, grid: ProbeGrid) -> Self {
        self.probe_grid = grid;
        self
    }

    pub fn with_alpha0(mut self, alpha0: f64) -> Self {
        self.alpha0 = Some(alpha0);
        self
    }

    pub fn with_snapshot_every(mut self, every: usize) -> Self {
        self.snapshot_every = every;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::Config(format!("nu = {} must be positive", self.nu)));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::Config(format!(
                "tau = {} must be positive",
                self.tau
            )));
        }
        if self.degree < 1 {
            return Err(Error::Config("degree must be at least 1".into()));
        }
        if !self.probe_grid.is_adequate_for(self.degree) {
            let min = ProbeGrid::minimum_for(self.degree);
            return Err(Error::Config(format!(
                "probe grid {}x{} is below the minimum {}x{}",
                self.probe_grid.nlat, self.probe_grid.nlon, min.nlat, min.nlon
            )));
        }
        if let Some(a) = self.alpha0 {
            if a.is_nan() || a < 0.0 {
                return Err(Error::Config(format!("alpha0 = {a} must be non-negative")));
            }
        }
        if self.evolution_rule.is_empty() {
            return Err(Error::Config("evolution rule has no points".into()));
        }
        if self.init_rule.as_ref().is_some_and(|r| r.is_empty()) {
            return Err(Error::Config("initial-data rule has no points".into()));
        }
        Ok(())
    }

    /// The rule that samples `u₀`.
    pub fn init_rule(&self) -> &QuadratureRule {
        self.init_rule.as_ref().unwrap_or(&self.evolution_rule)
    }
}

/// `⌈t_final / τ⌉`, ignoring round-off just above an integer.
pub fn steps_for(t_final: f64, tau: f64) -> usize {
    let ratio = t_final / tau;
    let nearest = ratio.round();
    if (ratio - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        ratio.ceil() as usize
    }
}

/// Numerical solution `uⁿ` at time `nτ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub n: usize,
    pub time: f64,
    pub coeffs: HarmonicCoefficients,
}

/// A configured solver with the evolution rule's basis matrix cached.
#[derive(Debug)]
pub struct Solver {
    config: SolverConfig,
    evolution: Hyperinterpolator,
    /// `1 + τν²λ_ℓ` per coefficient.
    denominators: Vec<f64>,
    gradients: OnceLock<std::result::Result<GradientMatrices, String>>,
    energy: OnceLock<std::result::Result<EnergyQuadrature, String>>,
}

impl Solver {
    pub fn new(config: SolverConfig) -> Result<Self> {
        config.validate()?;
        let evolution = Hyperinterpolator::new(config.evolution_rule.clone(), config.degree)?;
        let scale = config.tau * config.nu * config.nu;
        let denominators = BasisIndex::iter(config.degree)
            .map(|idx| 1.0 + scale * laplace_eigenvalue(idx.degree, 3))
            .collect();
        Ok(Self {
            config,
            evolution,
            denominators,
            gradients: OnceLock::new(),
            energy: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn evolution(&self) -> &Hyperinterpolator {
        &self.evolution
    }

    /// `u⁰ = L_N u₀` from samples of `u₀` at the init rule's points.
    pub fn init_state(&self, u0_values: &[f64]) -> Result<SolverState> {
        let coeffs = match &self.config.init_rule {
            Some(rule) => hyperinterpolate(rule, u0_values, self.config.degree)?,
            None => self.evolution.project(u0_values)?,
        };
        Ok(SolverState {
            n: 0,
            time: 0.0,
            coeffs,
        })
    }

    /// `u⁰` from a function, sampled at the init rule's points.
    pub fn init_from_fn(&self, u0: impl Fn(&crate::SphericalPoint) -> f64) -> Result<SolverState> {
        let values: Vec<f64> = self.config.init_rule().points().iter().map(u0).collect();
        self.init_state(&values)
    }

    /// One IMEX step. Costs one evaluation and one projection on the
    /// evolution rule's basis matrix.
    pub fn step(&self, state: &SolverState) -> Result<SolverState> {
        if state.coeffs.degree() != self.config.degree {
            return Err(Error::DegreeMismatch {
                expected: self.config.degree,
                actual: state.coeffs.degree(),
            });
        }
        let tau = self.config.tau;
        let mut reaction = self.evolution.evaluate(&state.coeffs)?;
        reaction.iter_mut().for_each(|u| *u = nonlinear_f(*u));
        let projected = self.evolution.project(&reaction)?;
        let values: Vec<f64> = state
            .coeffs
            .values()
            .iter()
            .zip(projected.values())
            .zip(&self.denominators)
            .map(|((c, h), d)| (c - tau * h) / d)
            .collect();
        let n = state.n + 1;
        let coeffs = HarmonicCoefficients::new(self.config.degree, values)?;
        if !coeffs.is_finite() {
            return Err(Error::BlowUp { step: n });
        }
        Ok(SolverState {
            n,
            time: n as f64 * tau,
            coeffs,
        })
    }

    /// Step of the mixed scheme. The mixing lives entirely in
    /// [`init_state`](Self::init_state) (initial data projected with
    /// `init_rule`), so this is the same update as [`step`](Self::step).
    pub fn step_mixed(&self, state: &SolverState) -> Result<SolverState> {
        self.step(state)
    }

    fn gradients(&self) -> Result<&GradientMatrices> {
        self.gradients
            .get_or_init(|| {
                GradientMatrices::new(self.config.evolution_rule.points(), self.config.degree)
                    .map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| Error::InvalidRule(e.clone()))
    }

    fn energy_quadrature(&self) -> Result<&EnergyQuadrature> {
        self.energy
            .get_or_init(|| {
                let rule = self
                    .config
                    .energy_rule
                    .clone()
                    .unwrap_or_else(|| gauss_product_rule(4 * self.config.degree));
                EnergyQuadrature::new(rule, self.config.degree).map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| Error::InvalidRule(e.clone()))
    }

    /// Label of the rule used for the potential part of `E`.
    pub fn energy_rule_label(&self) -> Result<String> {
        Ok(self.energy_quadrature()?.rule().label().to_string())
    }

    /// `Ẽ(u)` on the evolution rule.
    pub fn discrete_energy(&self, coeffs: &HarmonicCoefficients) -> Result<f64> {
        let nu2 = self.config.nu * self.config.nu;
        let grad2 = self.gradients()?.squared_norms(coeffs.values())?;
        let u = self.evolution.matrix().apply(coeffs.values())?;
        Ok(self
            .config
            .evolution_rule
            .weights()
            .iter()
            .zip(grad2.iter().zip(&u))
            .map(|(w, (g, u))| w * (0.5 * nu2 * g + potential_f(*u)))
            .sum())
    }

    /// `E(u)` with the configured energy rule.
    pub fn continuous_energy(&self, coeffs: &HarmonicCoefficients) -> Result<f64> {
        self.energy_quadrature()?.energy(coeffs, self.config.nu)
    }

    pub fn uniform_norm(&self, coeffs: &HarmonicCoefficients) -> Result<f64> {
        uniform_norm_estimate(coeffs, self.config.probe_grid)
    }

    /// Residual of the discrete Galerkin form of one step:
    /// `max_χ |⟨(u^{n+1} - uⁿ)/τ, χ⟩_m - ⟨ν²Δu^{n+1}, χ⟩_m + ⟨(uⁿ)³ - uⁿ, χ⟩_m|`
    /// over the basis functions `χ = Y_{ℓ,k}`, with the evolution rule's
    /// inner product.
    pub fn galerkin_residual(&self, prev: &SolverState, next: &SolverState) -> Result<f64> {
        let tau = self.config.tau;
        let nu2 = self.config.nu * self.config.nu;
        let a = self.evolution.matrix();
        let lap: Vec<f64> = BasisIndex::iter(self.config.degree)
            .zip(next.coeffs.values())
            .map(|(idx, c)| -laplace_eigenvalue(idx.degree, 3) * c)
            .collect();
        let u_prev = a.apply(prev.coeffs.values())?;
        let u_next = a.apply(next.coeffs.values())?;
        let lap_next = a.apply(&lap)?;
        let integrand: Vec<f64> = (0..u_prev.len())
            .map(|j| (u_next[j] - u_prev[j]) / tau - nu2 * lap_next[j] + nonlinear_f(u_prev[j]))
            .collect();
        let residual = self.evolution.project(&integrand)?;
        Ok(residual
            .values()
            .iter()
            .fold(0.0, |acc: f64, r| acc.max(r.abs())))
    }
}
