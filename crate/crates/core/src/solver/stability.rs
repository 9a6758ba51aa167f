//! Step-size dependent stability constants of the IMEX scheme.

use crate::error::{Error, Result};

/// Real root of `1/2 + 1/τ = (3/2)·K(τ)²`, the largest step for which the
/// energy argument closes with an `L∞` bound of `K(τ)`.
pub fn tau1() -> f64 {
    let r6 = 6f64.sqrt();
    0.5 * (-2.0 + (9.0 - 3.0 * r6).cbrt() + (9.0 + 3.0 * r6).cbrt())
}

/// `K(τ) = (2/3)·(1 + τ)^{3/2} / √(3τ)`, the value of the explicit reaction
/// map `u ↦ (1+τ)u - τu³` at its critical point `u = √((1+τ)/(3τ))`.
fn reaction_peak(tau: f64) -> f64 {
    (2.0 / 3.0) * (1.0 + tau).powf(1.5) / (3.0 * tau).sqrt()
}

/// Largest `ζ` with `1/2 + 1/τ ≥ (3/2)(K(τ) + ζ)²`. Negative past `τ₁`.
pub fn zeta_max(tau: f64) -> f64 {
    ((2.0 / 3.0) * (0.5 + 1.0 / tau)).sqrt() - reaction_peak(tau)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConstants {
    pub tau: f64,
    /// `θ = 1 - 2τ`.
    pub theta: f64,
    /// `L∞` bound for `0 < τ < 2`: `½(K(τ) + √((2+τ)/τ))`.
    pub m0: f64,
    pub tau1: f64,
    /// `ζ_max(τ)` at this step size.
    pub zeta_max: f64,
    /// `ζ(ε₀) = ζ_max(τ₁ - ε₀)`, valid uniformly for `τ ≤ τ₁ - ε₀`.
    pub zeta: f64,
    /// `K(τ) + min(ζ_max(τ), ζ(ε₀))`.
    pub m1: f64,
}

/// Stability constants for step size `tau` and margin `eps0` below `τ₁`.
pub fn stability_constants(tau: f64, eps0: f64) -> Result<StabilityConstants> {
    if !(tau > 0.0 && tau < 2.0) {
        return Err(Error::Domain {
            name: "tau",
            value: tau,
            reason: "the L-infinity bound requires 0 < tau < 2",
        });
    }
    if !(eps0 > 0.0 && eps0 <= 0.1) {
        return Err(Error::Domain {
            name: "eps0",
            value: eps0,
            reason: "the margin below tau1 must satisfy 0 < eps0 <= 0.1",
        });
    }
    let k = reaction_peak(tau);
    let t1 = tau1();
    let zmax = zeta_max(tau);
    let zeta = zeta_max(t1 - eps0);
    Ok(StabilityConstants {
        tau,
        theta: 1.0 - 2.0 * tau,
        m0: 0.5 * (k + ((2.0 + tau) / tau).sqrt()),
        tau1: t1,
        zeta_max: zmax,
        zeta,
        m1: k + zmax.min(zeta),
    })
}

/// `1 + θⁿ α₀` with `θ = 1 - 2τ`; the large-`N` envelope of `‖uⁿ‖∞`.
pub fn effective_envelope(n: usize, alpha0: f64, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau <= 0.5) {
        return Err(Error::Domain {
            name: "tau",
            value: tau,
            reason: "the effective maximum principle requires 0 < tau <= 1/2",
        });
    }
    let theta = 1.0 - 2.0 * tau;
    Ok(1.0 + theta.powi(n.min(i32::MAX as usize) as i32) * alpha0)
}
