//! Positive-weight quadrature rules on S² and their diagnostics.

mod gauss;
mod generate;
mod io;
mod mesh;
mod mz;

pub use gauss::{gauss_legendre, gauss_product_rule};
pub use generate::{equal_area_rule, random_rule};
pub use io::{load_rule, parse_rule, write_rule};
pub use mesh::mesh_norm;
pub use mz::{
    exactness_error, exactness_profile, gram_matrix, mz_constant, MzReport, MZ_MAX_ITERATIONS,
    MZ_TOLERANCE,
};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::harmonics::SphericalPoint;

/// Surface area of the unit sphere.
pub const SPHERE_AREA: f64 = 4.0 * PI;

/// Tolerance on `|Σ w - 4π|` for a rule to count as integrating constants.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

/// Exactness threshold for internally generated rules.
pub const EXACTNESS_TOLERANCE: f64 = 1e-10;

/// Exactness threshold for point sets loaded from published files.
pub const LOADED_EXACTNESS_TOLERANCE: f64 = 1e-8;

/// Points on the sphere with positive weights.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    points: Vec<SphericalPoint>,
    weights: Vec<f64>,
    label: String,
}

impl QuadratureRule {
    pub fn new(
        points: Vec<SphericalPoint>,
        weights: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: points.len(),
                actual: weights.len(),
            });
        }
        for (j, w) in weights.iter().enumerate() {
            if !(*w > 0.0 && w.is_finite()) {
                return Err(Error::InvalidRule(format!(
                    "weight {j} is {w}, must be positive"
                )));
            }
        }
        for p in &points {
            p.check_unit()?;
        }
        Ok(Self {
            points,
            weights,
            label: label.into(),
        })
    }

    /// Equal weights `4π/m`.
    pub fn equal_weight(points: Vec<SphericalPoint>, label: impl Into<String>) -> Result<Self> {
        let w = SPHERE_AREA / points.len().max(1) as f64;
        let weights = vec![w; points.len()];
        Self::new(points, weights, label)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[SphericalPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Whether `Σ w` equals the sphere area to [`WEIGHT_SUM_TOLERANCE`].
    pub fn integrates_constants(&self) -> bool {
        (self.total_weight() - SPHERE_AREA).abs() <= WEIGHT_SUM_TOLERANCE
    }

    /// `Σ w_j g(x_j)`.
    pub fn integrate(&self, mut g: impl FnMut(&SphericalPoint) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * g(p))
            .sum()
    }

    /// The same rule with every point mapped through the orthogonal matrix `r`.
    pub fn rotated(&self, r: &[[f64; 3]; 3]) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| {
                let v = p.as_array();
                let apply = |row: &[f64; 3]| row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
                SphericalPoint::new(apply(&r[0]), apply(&r[1]), apply(&r[2]))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            points,
            self.weights.clone(),
            format!("{} (rotated)", self.label),
        )
    }
}
