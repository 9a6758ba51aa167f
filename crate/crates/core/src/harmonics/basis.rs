use std::f64::consts::{PI, SQRT_2};
use std::sync::atomic::{AtomicUsize, Ordering};

use super::legendre::{legendre_polynomials, tri_index, LegendreRecurrence};
use super::point::SphericalPoint;
use super::{num_coeffs, zonal_index};
use crate::error::{Error, Result};
use crate::hyperinterp::HarmonicCoefficients;

/// Evaluator for the degree-`N` real harmonic basis at arbitrary points.
#[derive(Debug, Clone)]
pub struct SphericalBasis {
    rec: LegendreRecurrence,
}

/// Reusable scratch buffers for one evaluation thread.
#[derive(Debug, Clone)]
pub(crate) struct Workspace {
    table: Vec<f64>,
    deriv: Vec<f64>,
    cos_m: Vec<f64>,
    sin_m: Vec<f64>,
}

impl SphericalBasis {
    pub fn new(degree: usize) -> Self {
        Self {
            rec: LegendreRecurrence::new(degree),
        }
    }

    pub fn degree(&self) -> usize {
        self.rec.degree()
    }

    /// Number of basis functions, `(N + 1)²`.
    pub fn len(&self) -> usize {
        num_coeffs(self.degree())
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub(crate) fn workspace(&self) -> Workspace {
        let n = self.degree();
        Workspace {
            table: vec![0.0; self.rec.table_len()],
            deriv: vec![0.0; self.rec.table_len()],
            cos_m: vec![0.0; n + 1],
            sin_m: vec![0.0; n + 1],
        }
    }

    fn prepare(&self, p: &SphericalPoint, ws: &mut Workspace) -> (f64, f64, f64) {
        let (ct, st, phi) = p.chart();
        self.rec.fill(ct, st, &mut ws.table);
        let (s1, c1) = phi.sin_cos();
        ws.cos_m[0] = 1.0;
        ws.sin_m[0] = 0.0;
        for m in 1..=self.degree() {
            // angle addition keeps the error at O(m·ε)
            let (c, s) = (ws.cos_m[m - 1], ws.sin_m[m - 1]);
            ws.cos_m[m] = c * c1 - s * s1;
            ws.sin_m[m] = s * c1 + c * s1;
        }
        (ct, st, phi)
    }

    /// Writes `Y_{ℓ,k}(p)` for every basis function into `out`. The point is
    /// assumed to have been validated.
    pub(crate) fn fill_values(&self, p: &SphericalPoint, ws: &mut Workspace, out: &mut [f64]) {
        self.prepare(p, ws);
        for l in 0..=self.degree() {
            let z = zonal_index(l);
            out[z] = ws.table[tri_index(l, 0)];
            for m in 1..=l {
                let v = SQRT_2 * ws.table[tri_index(l, m)];
                out[z + m] = v * ws.cos_m[m];
                out[z - m] = v * ws.sin_m[m];
            }
        }
    }

    /// Writes `∂Y/∂θ` and `(1/sin θ)·∂Y/∂φ` for every basis function and
    /// returns the local frame `(e_θ, e_φ)`.
    pub(crate) fn fill_gradient(
        &self,
        p: &SphericalPoint,
        ws: &mut Workspace,
        d_theta: &mut [f64],
        d_phi: &mut [f64],
    ) -> Result<([f64; 3], [f64; 3])> {
        if p.is_near_pole() {
            return Err(Error::PoleGradient { z: p.z });
        }
        let (ct, st, phi) = self.prepare(p, ws);
        self.rec.fill_sin_dtheta(ct, &ws.table, &mut ws.deriv);
        let inv_s = 1.0 / st;
        for l in 0..=self.degree() {
            let z = zonal_index(l);
            d_theta[z] = ws.deriv[tri_index(l, 0)] * inv_s;
            d_phi[z] = 0.0;
            for m in 1..=l {
                let idx = tri_index(l, m);
                let dt = SQRT_2 * ws.deriv[idx] * inv_s;
                let dp = SQRT_2 * ws.table[idx] * inv_s * m as f64;
                d_theta[z + m] = dt * ws.cos_m[m];
                d_theta[z - m] = dt * ws.sin_m[m];
                d_phi[z + m] = -dp * ws.sin_m[m];
                d_phi[z - m] = dp * ws.cos_m[m];
            }
        }
        let (sp, cp) = phi.sin_cos();
        Ok(([ct * cp, ct * sp, -st], [-sp, cp, 0.0]))
    }

    /// Basis values at one point.
    pub fn values(&self, p: &SphericalPoint) -> Result<Vec<f64>> {
        p.check_unit()?;
        let mut ws = self.workspace();
        let mut out = vec![0.0; self.len()];
        self.fill_values(p, &mut ws, &mut out);
        Ok(out)
    }
}

/// Dense `m × (N + 1)²` table of basis values at a point set, row-major.
///
/// Every call to [`apply`](Self::apply) or [`apply_transpose`](Self::apply_transpose)
/// increments a matrix-vector counter that callers can inspect to audit cost.
#[derive(Debug)]
pub struct BasisMatrix {
    degree: usize,
    rows: usize,
    cols: usize,
    data: Vec<f64>,
    matvecs: AtomicUsize,
}

impl BasisMatrix {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, j: usize) -> &[f64] {
        &self.data[j * self.cols..(j + 1) * self.cols]
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.data[j * self.cols + k]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Number of matrix-vector products performed so far.
    pub fn matvec_count(&self) -> usize {
        self.matvecs.load(Ordering::Relaxed)
    }

    pub fn reset_matvec_count(&self) {
        self.matvecs.store(0, Ordering::Relaxed);
    }

    /// `A·c`: values at the rows' points of the expansion with coefficients `c`.
    pub fn apply(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        check_len(self.cols, coeffs.len())?;
        self.matvecs.fetch_add(1, Ordering::Relaxed);
        Ok(self
            .data
            .chunks_exact(self.cols)
            .map(|row| dot(row, coeffs))
            .collect())
    }

    /// `Aᵀ·v`.
    pub fn apply_transpose(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.rows, v.len())?;
        self.matvecs.fetch_add(1, Ordering::Relaxed);
        let mut out = vec![0.0; self.cols];
        for (row, &vj) in self.data.chunks_exact(self.cols).zip(v) {
            axpy(vj, row, &mut out);
        }
        Ok(out)
    }
}

/// Tables of the two tangential derivative components at a pole-free point set.
///
/// For coefficients `c`, the surface gradient at point `j` is
/// `(Θ c)_j e_θ + (Φ c)_j e_φ`.
#[derive(Debug, Clone)]
pub struct GradientMatrices {
    rows: usize,
    cols: usize,
    d_theta: Vec<f64>,
    d_phi: Vec<f64>,
    frames: Vec<([f64; 3], [f64; 3])>,
}

impl GradientMatrices {
    pub fn new(points: &[SphericalPoint], degree: usize) -> Result<Self> {
        let basis = SphericalBasis::new(degree);
        let cols = basis.len();
        let mut ws = basis.workspace();
        let mut d_theta = vec![0.0; points.len() * cols];
        let mut d_phi = vec![0.0; points.len() * cols];
        let mut frames = Vec::with_capacity(points.len());
        for (j, p) in points.iter().enumerate() {
            p.check_unit()?;
            let range = j * cols..(j + 1) * cols;
            let frame =
                basis.fill_gradient(p, &mut ws, &mut d_theta[range.clone()], &mut d_phi[range])?;
            frames.push(frame);
        }
        Ok(Self {
            rows: points.len(),
            cols,
            d_theta,
            d_phi,
            frames,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Tangential components `(∂u/∂θ, (1/sin θ)·∂u/∂φ)` at every point.
    pub fn components(&self, coeffs: &[f64]) -> Result<Vec<(f64, f64)>> {
        check_len(self.cols, coeffs.len())?;
        Ok(self
            .d_theta
            .chunks_exact(self.cols)
            .zip(self.d_phi.chunks_exact(self.cols))
            .map(|(t, p)| (dot(t, coeffs), dot(p, coeffs)))
            .collect())
    }

    /// `|∇_S u|²` at every point.
    pub fn squared_norms(&self, coeffs: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .components(coeffs)?
            .into_iter()
            .map(|(a, b)| a * a + b * b)
            .collect())
    }

    /// Cartesian tangent vectors `∇_S u` at every point.
    pub fn gradients(&self, coeffs: &[f64]) -> Result<Vec<[f64; 3]>> {
        Ok(self
            .components(coeffs)?
            .into_iter()
            .zip(&self.frames)
            .map(|((a, b), (et, ep))| {
                [
                    a * et[0] + b * ep[0],
                    a * et[1] + b * ep[1],
                    a * et[2] + b * ep[2],
                ]
            })
            .collect())
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, actual })
    }
}

/// Builds the basis matrix `A[j, flat(ℓ, k)] = Y_{ℓ,k}(x_j)`.
pub fn eval_basis(points: &[SphericalPoint], degree: usize) -> Result<BasisMatrix> {
    let basis = SphericalBasis::new(degree);
    let cols = basis.len();
    let mut ws = basis.workspace();
    let mut data = vec![0.0; points.len() * cols];
    for (p, row) in points.iter().zip(data.chunks_exact_mut(cols)) {
        p.check_unit()?;
        basis.fill_values(p, &mut ws, row);
    }
    Ok(BasisMatrix {
        degree,
        rows: points.len(),
        cols,
        data,
        matvecs: AtomicUsize::new(0),
    })
}

/// Values of an expansion at arbitrary points, without storing the basis matrix.
pub fn eval_expansion(
    coeffs: &HarmonicCoefficients,
    points: &[SphericalPoint],
) -> Result<Vec<f64>> {
    let basis = SphericalBasis::new(coeffs.degree());
    let mut ws = basis.workspace();
    let mut row = vec![0.0; basis.len()];
    points
        .iter()
        .map(|p| {
            p.check_unit()?;
            basis.fill_values(p, &mut ws, &mut row);
            Ok(dot(&row, coeffs.values()))
        })
        .collect()
}

/// Tangential gradient `∇_S u` at each point, as Cartesian 3-vectors.
///
/// Points within [`POLE_TOLERANCE`](super::POLE_TOLERANCE) of a pole are rejected.
pub fn eval_surface_gradient(
    coeffs: &HarmonicCoefficients,
    points: &[SphericalPoint],
) -> Result<Vec<[f64; 3]>> {
    let basis = SphericalBasis::new(coeffs.degree());
    let mut ws = basis.workspace();
    let mut dt = vec![0.0; basis.len()];
    let mut dp = vec![0.0; basis.len()];
    points
        .iter()
        .map(|p| {
            p.check_unit()?;
            let (et, ep) = basis.fill_gradient(p, &mut ws, &mut dt, &mut dp)?;
            let a = dot(&dt, coeffs.values());
            let b = dot(&dp, coeffs.values());
            Ok([
                a * et[0] + b * ep[0],
                a * et[1] + b * ep[1],
                a * et[2] + b * ep[2],
            ])
        })
        .collect()
}

/// Reproducing kernel `G_N(x, y) = Σ_{ℓ ≤ N} Σ_k Y_{ℓ,k}(x) Y_{ℓ,k}(y)` of `P_N`.
///
/// Evaluated degree by degree through the addition theorem,
/// `Σ_k Y_{ℓ,k}(x) Y_{ℓ,k}(y) = (2ℓ + 1)/(4π) · P_ℓ(x · y)`.
pub fn kernel_value(degree: usize, x: &SphericalPoint, y: &SphericalPoint) -> f64 {
    let t = x.dot(y).clamp(-1.0, 1.0);
    let mut p = Vec::with_capacity(degree + 1);
    legendre_polynomials(degree, t, &mut p);
    p.iter()
        .enumerate()
        .map(|(l, pl)| (2 * l + 1) as f64 * pl)
        .sum::<f64>()
        / (4.0 * PI)
}
