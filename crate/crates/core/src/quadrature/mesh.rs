use std::f64::consts::PI;

use super::QuadratureRule;
use crate::error::{Error, Result};
use crate::harmonics::SphericalPoint;

/// Smallest accepted probe-grid resolution.
pub const MIN_MESH_RESOLUTION: usize = 16;

/// Mesh norm `h = max_x min_j dist(x, x_j)`, the geodesic radius of the
/// largest point-free cap, estimated over a probe grid.
///
/// The grid has polar angles `πi/R`, `i = 0..=R` (poles included) and
/// longitudes `πj/R`, `j < 2R`. Doubling `R` refines the grid to a superset,
/// so the estimate never decreases under doubling and is a lower bound for
/// the true `h`.
pub fn mesh_norm(rule: &QuadratureRule, resolution: usize) -> Result<f64> {
    if rule.is_empty() {
        return Err(Error::EmptyRule);
    }
    if resolution < MIN_MESH_RESOLUTION {
        return Err(Error::Domain {
            name: "resolution",
            value: resolution as f64,
            reason: "the probe grid needs at least 16 latitudes",
        });
    }
    let step = PI / resolution as f64;
    let mut worst_cos = 1.0f64;
    for i in 0..=resolution {
        let theta = step * i as f64;
        let n_lon = if i == 0 || i == resolution {
            1
        } else {
            2 * resolution
        };
        for j in 0..n_lon {
            let probe = SphericalPoint::from_angles(theta, step * j as f64);
            let nearest = rule
                .points()
                .iter()
                .map(|p| p.dot(&probe))
                .fold(f64::NEG_INFINITY, f64::max);
            worst_cos = worst_cos.min(nearest);
        }
    }
    Ok(worst_cos.clamp(-1.0, 1.0).acos())
}
