//! Energy functionals of the Allen-Cahn flow.

use crate::error::Result;
use crate::harmonics::{eval_basis, laplace_eigenvalue, BasisIndex, BasisMatrix, SphericalBasis};
use crate::hyperinterp::HarmonicCoefficients;
use crate::quadrature::QuadratureRule;

/// Reaction term `f(u) = u³ - u`.
#[inline]
pub fn nonlinear_f(u: f64) -> f64 {
    u * u * u - u
}

/// Double-well potential `F(u) = ¼(u² - 1)²`, with `F' = f`.
#[inline]
pub fn potential_f(u: f64) -> f64 {
    let s = u * u - 1.0;
    0.25 * s * s
}

/// `(ν²/2)·∫|∇u|²`, exact through Green-Beltrami: `(ν²/2)·Σ λ_ℓ c_{ℓ,k}²`.
pub fn gradient_energy(coeffs: &HarmonicCoefficients, nu: f64) -> f64 {
    let sum: f64 = BasisIndex::iter(coeffs.degree())
        .zip(coeffs.values())
        .map(|(idx, c)| laplace_eigenvalue(idx.degree, 3) * c * c)
        .sum();
    0.5 * nu * nu * sum
}

/// `E(u) = ∫ (ν²/2)|∇u|² + F(u)`.
///
/// The gradient part is computed spectrally; the potential part with
/// `energy_rule`, which is exact when the rule integrates degree `4N`.
pub fn continuous_energy(
    coeffs: &HarmonicCoefficients,
    nu: f64,
    energy_rule: &QuadratureRule,
) -> Result<f64> {
    let basis = SphericalBasis::new(coeffs.degree());
    let mut ws = basis.workspace();
    let mut row = vec![0.0; basis.len()];
    let mut potential = 0.0;
    for (p, w) in energy_rule.points().iter().zip(energy_rule.weights()) {
        p.check_unit()?;
        basis.fill_values(p, &mut ws, &mut row);
        let u: f64 = row.iter().zip(coeffs.values()).map(|(a, b)| a * b).sum();
        potential += w * potential_f(u);
    }
    Ok(gradient_energy(coeffs, nu) + potential)
}

/// `Ẽ(u) = Σ_j w_j [(ν²/2)|∇u(x_j)|² + F(u(x_j))]`. Fails on pole points.
pub fn discrete_energy(
    coeffs: &HarmonicCoefficients,
    rule: &QuadratureRule,
    nu: f64,
) -> Result<f64> {
    let basis = SphericalBasis::new(coeffs.degree());
    let mut ws = basis.workspace();
    let mut row = vec![0.0; basis.len()];
    let mut dt = vec![0.0; basis.len()];
    let mut dp = vec![0.0; basis.len()];
    let c = coeffs.values();
    let dot = |a: &[f64]| a.iter().zip(c).map(|(x, y)| x * y).sum::<f64>();
    let mut total = 0.0;
    for (p, w) in rule.points().iter().zip(rule.weights()) {
        p.check_unit()?;
        basis.fill_gradient(p, &mut ws, &mut dt, &mut dp)?;
        basis.fill_values(p, &mut ws, &mut row);
        let (gt, gp) = (dot(&dt), dot(&dp));
        total += w * (0.5 * nu * nu * (gt * gt + gp * gp) + potential_f(dot(&row)));
    }
    Ok(total)
}

/// Basis matrices above this many entries are not cached.
const CACHE_LIMIT: usize = 1 << 25;

/// Potential-energy quadrature with an optional cached basis matrix.
#[derive(Debug)]
pub(crate) struct EnergyQuadrature {
    rule: QuadratureRule,
    matrix: Option<BasisMatrix>,
}

impl EnergyQuadrature {
    pub(crate) fn new(rule: QuadratureRule, degree: usize) -> Result<Self> {
        let entries = rule.len().saturating_mul((degree + 1) * (degree + 1));
        let matrix = if entries <= CACHE_LIMIT {
            Some(eval_basis(rule.points(), degree)?)
        } else {
            None
        };
        Ok(Self { rule, matrix })
    }

    pub(crate) fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub(crate) fn energy(&self, coeffs: &HarmonicCoefficients, nu: f64) -> Result<f64> {
        match &self.matrix {
            Some(a) => {
                let u = a.apply(coeffs.values())?;
                let potential: f64 = self
                    .rule
                    .weights()
                    .iter()
                    .zip(&u)
                    .map(|(w, u)| w * potential_f(*u))
                    .sum();
                Ok(gradient_energy(coeffs, nu) + potential)
            }
            None => continuous_energy(coeffs, nu, &self.rule),
        }
    }
}
