//! Equiangular probe grids for uniform-norm estimates and snapshots.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::harmonics::{tri_index, zonal_index, LegendreRecurrence, SphericalPoint};
use crate::hyperinterp::HarmonicCoefficients;

/// `nlat × nlon` grid with polar angles `π(i+1)/(nlat+1)` (poles excluded)
/// and longitudes `2πj/nlon`. Rows run from north to south.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeGrid {
    pub nlat: usize,
    pub nlon: usize,
}

impl ProbeGrid {
    pub fn new(nlat: usize, nlon: usize) -> Self {
        Self { nlat, nlon }
    }

    /// `(4N + 4) × (8N + 8)`.
    pub fn default_for(degree: usize) -> Self {
        Self::new(4 * degree + 4, 8 * degree + 8)
    }

    /// Smallest grid accepted for degree `N`: `(2N + 2) × (4N + 4)`.
    pub fn minimum_for(degree: usize) -> Self {
        Self::new(2 * degree + 2, 4 * degree + 4)
    }

    pub fn is_adequate_for(&self, degree: usize) -> bool {
        let min = Self::minimum_for(degree);
        self.nlat >= min.nlat && self.nlon >= min.nlon
    }

    pub fn theta(&self, i: usize) -> f64 {
        PI * (i + 1) as f64 / (self.nlat + 1) as f64
    }

    pub fn phi(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.nlon as f64
    }

    pub fn len(&self) -> usize {
        self.nlat * self.nlon
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid points in storage order.
    pub fn points(&self) -> Vec<SphericalPoint> {
        (0..self.nlat)
            .flat_map(|i| (0..self.nlon).map(move |j| (i, j)))
            .map(|(i, j)| SphericalPoint::from_angles(self.theta(i), self.phi(j)))
            .collect()
    }

    /// Values of `u` on the grid, row-major from the north.
    ///
    /// Separable synthesis: per latitude, the Legendre sums collapse the
    /// expansion to a trigonometric polynomial in `φ`, costing
    /// `O(nlat·N² + nlat·nlon·N)` instead of a full basis matrix.
    pub fn synthesize(&self, coeffs: &HarmonicCoefficients) -> Vec<f64> {
        let n = coeffs.degree();
        let c = coeffs.values();
        let rec = LegendreRecurrence::new(n);
        let mut table = vec![0.0; rec.table_len()];
        let mut trig = vec![(0.0, 0.0); self.nlon * (n + 1)];
        for j in 0..self.nlon {
            let phi = self.phi(j);
            for m in 0..=n {
                trig[j * (n + 1) + m] = (m as f64 * phi).sin_cos();
            }
        }
        let mut a = vec![0.0; n + 1];
        let mut b = vec![0.0; n + 1];
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.nlat {
            let theta = self.theta(i);
            rec.fill(theta.cos(), theta.sin(), &mut table);
            for m in 0..=n {
                let (mut sa, mut sb) = (0.0, 0.0);
                for l in m..=n {
                    let p = table[tri_index(l, m)];
                    let z = zonal_index(l);
                    sa += c[z + m] * p;
                    if m > 0 {
                        sb += c[z - m] * p;
                    }
                }
                let scale = if m == 0 { 1.0 } else { SQRT_2 };
                a[m] = sa * scale;
                b[m] = sb * scale;
            }
            for j in 0..self.nlon {
                let row = &trig[j * (n + 1)..(j + 1) * (n + 1)];
                let v = a[0]
                    + (1..=n)
                        .map(|m| a[m] * row[m].1 + b[m] * row[m].0)
                        .sum::<f64>();
                out.push(v);
            }
        }
        out
    }
}

/// `(u(north pole), u(south pole))`; only zonal coefficients contribute.
pub fn pole_values(coeffs: &HarmonicCoefficients) -> (f64, f64) {
    let c = coeffs.values();
    let mut north = 0.0;
    let mut south = 0.0;
    for l in 0..=coeffs.degree() {
        let p = ((2 * l + 1) as f64 / (4.0 * PI)).sqrt() * c[zonal_index(l)];
        north += p;
        south += if l % 2 == 0 { p } else { -p };
    }
    (north, south)
}

/// Probe-grid estimate of `‖u‖∞`: the largest `|u|` over the grid and both
/// poles. This is a lower bound for the true supremum.
pub fn uniform_norm_estimate(coeffs: &HarmonicCoefficients, grid: ProbeGrid) -> Result<f64> {
    if !grid.is_adequate_for(coeffs.degree()) {
        return Err(Error::Config(format!(
            "probe grid {}x{} is coarser than the minimum {}x{} for N = {}",
            grid.nlat,
            grid.nlon,
            2 * coeffs.degree() + 2,
            4 * coeffs.degree() + 4,
            coeffs.degree()
        )));
    }
    let (n, s) = pole_values(coeffs);
    Ok(grid
        .synthesize(coeffs)
        .into_iter()
        .fold(n.abs().max(s.abs()), |acc, v| acc.max(v.abs())))
}
