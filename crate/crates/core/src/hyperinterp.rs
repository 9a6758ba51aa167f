//! Discrete inner product and the hyperinterpolation operator `L_N`.
//!
//! `L_N f = Σ_{ℓ ≤ N} Σ_k ⟨f, Y_{ℓ,k}⟩_m Y_{ℓ,k}` with the quadrature inner
//! product `⟨v, z⟩_m = Σ_j w_j v(x_j) z(x_j)`. Only the values of `f` at the
//! rule's points enter, so projection is decoupled from sampling.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::harmonics::{dim_pn, eval_basis, num_coeffs, BasisIndex, BasisMatrix, SphericalBasis};
use crate::quadrature::QuadratureRule;

/// A spherical polynomial of degree `≤ N` in the orthonormal real basis.
///
/// Because the basis is orthonormal, the `L²(S²)` norm is the Euclidean norm
/// of the coefficient vector.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicCoefficients {
    degree: usize,
    values: Vec<f64>,
}

impl HarmonicCoefficients {
    pub fn new(degree: usize, values: Vec<f64>) -> Result<Self> {
        let expected = num_coeffs(degree);
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                actual: values.len(),
            });
        }
        Ok(Self { degree, values })
    }

    pub fn zeros(degree: usize) -> Self {
        Self {
            degree,
            values: vec![0.0; num_coeffs(degree)],
        }
    }

    /// The constant function `value`.
    pub fn constant(degree: usize, value: f64) -> Self {
        let mut c = Self::zeros(degree);
        c.values[0] = value * (4.0 * PI).sqrt();
        c
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, index: BasisIndex) -> f64 {
        self.values[index.flat]
    }

    /// `‖u‖_{L²}` by Parseval.
    pub fn l2_norm(&self) -> f64 {
        self.values.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `∫ u v dω`.
    pub fn dot(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|c| c.is_finite())
    }

    /// Largest coefficient-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |acc: f64, (a, b)| acc.max((a - b).abs()))
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(Error::LengthMismatch { expected, actual });
    }
    Ok(())
}

/// `⟨v, z⟩_m = Σ_j w_j v_j z_j`.
pub fn discrete_inner(rule: &QuadratureRule, v: &[f64], z: &[f64]) -> Result<f64> {
    check_len(rule.len(), v.len())?;
    check_len(rule.len(), z.len())?;
    Ok(rule
        .weights()
        .iter()
        .zip(v.iter().zip(z))
        .map(|(w, (a, b))| w * a * b)
        .sum())
}

/// Coefficients of `L_N f` from the samples `f(x_j)`.
///
/// Streams over the points without storing the basis matrix, so it is
/// suitable for very large scattered rules. Use [`Hyperinterpolator`] when
/// the same rule is projected repeatedly.
pub fn hyperinterpolate(
    rule: &QuadratureRule,
    f_values: &[f64],
    degree: usize,
) -> Result<HarmonicCoefficients> {
    check_len(rule.len(), f_values.len())?;
    let basis = SphericalBasis::new(degree);
    let mut ws = basis.workspace();
    let mut row = vec![0.0; basis.len()];
    let mut coeffs = vec![0.0; basis.len()];
    for ((p, w), f) in rule.points().iter().zip(rule.weights()).zip(f_values) {
        p.check_unit()?;
        basis.fill_values(p, &mut ws, &mut row);
        let a = w * f;
        for (c, r) in coeffs.iter_mut().zip(&row) {
            *c += a * r;
        }
    }
    HarmonicCoefficients::new(degree, coeffs)
}

/// `L_N` on a fixed rule, backed by a cached basis matrix.
///
/// Projection and evaluation each cost exactly one matrix-vector product.
#[derive(Debug)]
pub struct Hyperinterpolator {
    rule: QuadratureRule,
    matrix: BasisMatrix,
}

impl Hyperinterpolator {
    pub fn new(rule: QuadratureRule, degree: usize) -> Result<Self> {
        let matrix = eval_basis(rule.points(), degree)?;
        Ok(Self { rule, matrix })
    }

    pub fn degree(&self) -> usize {
        self.matrix.degree()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn matrix(&self) -> &BasisMatrix {
        &self.matrix
    }

    /// `L_N f` from samples at the rule's points.
    pub fn project(&self, f_values: &[f64]) -> Result<HarmonicCoefficients> {
        check_len(self.rule.len(), f_values.len())?;
        let weighted: Vec<f64> = self
            .rule
            .weights()
            .iter()
            .zip(f_values)
            .map(|(w, f)| w * f)
            .collect();
        HarmonicCoefficients::new(self.degree(), self.matrix.apply_transpose(&weighted)?)
    }

    /// Values of `u` at the rule's points.
    pub fn evaluate(&self, coeffs: &HarmonicCoefficients) -> Result<Vec<f64>> {
        if coeffs.degree() != self.degree() {
            return Err(Error::DegreeMismatch {
                expected: self.degree(),
                actual: coeffs.degree(),
            });
        }
        self.matrix.apply(coeffs.values())
    }
}

/// Upper bound `√(1 + η) · √(dim P_N)` on the uniform operator norm of `L_N`.
pub fn uniform_norm_bound(degree: usize, eta: f64, d: usize) -> Result<f64> {
    if eta.is_nan() || eta < 0.0 {
        return Err(Error::Domain {
            name: "eta",
            value: eta,
            reason: "the MZ constant is non-negative",
        });
    }
    Ok((1.0 + eta).sqrt() * (dim_pn(degree, d)? as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_product_rule;

    #[test]
    fn operator_norm_bound() {
        assert!((uniform_norm_bound(15, 0.0, 3).unwrap() - 16.0).abs() < 1e-12);
        assert!((uniform_norm_bound(15, 1.0, 3).unwrap() - 16.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((uniform_norm_bound(0, 0.0, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!(uniform_norm_bound(3, -0.1, 3).is_err());
    }

    #[test]
    fn inner_product_basics() {
        let rule = gauss_product_rule(4);
        let ones = vec![1.0; rule.len()];
        assert!((discrete_inner(&rule, &ones, &ones).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert!(discrete_inner(&rule, &ones, &ones[1..]).is_err());
    }

    #[test]
    fn constants_project_to_the_first_coefficient() {
        let rule = gauss_product_rule(20);
        let c = hyperinterpolate(&rule, &vec![1.0; rule.len()], 10).unwrap();
        let expected = HarmonicCoefficients::constant(10, 1.0);
        assert!(c.max_abs_diff(&expected) < 1e-12);
        let cached = Hyperinterpolator::new(rule.clone(), 10).unwrap();
        let c2 = cached.project(&vec![1.0; rule.len()]).unwrap();
        assert!(c2.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn length_checks() {
        let rule = gauss_product_rule(2);
        assert!(hyperinterpolate(&rule, &[1.0], 1).is_err());
        assert!(HarmonicCoefficients::new(2, vec![0.0; 8]).is_err());
        let h = Hyperinterpolator::new(rule, 1).unwrap();
        assert!(h.evaluate(&HarmonicCoefficients::zeros(2)).is_err());
    }
}
