//! Marcinkiewicz-Zygmund constant and exactness measurements.
//!
//! For a rule `(x_j, w_j)` and the basis matrix `A` of degree `N`, the
//! discrete Gram matrix `G = Aᵀ diag(w) A` satisfies, for `χ = Σ c Y`,
//! `Σ_j w_j χ(x_j)² - ∫ χ² = cᵀ (G - I) c` and `∫ χ² = cᵀ c`. The smallest
//! `η` with `|Σ w χ² - ∫ χ²| ≤ η ∫ χ²` on `P_N` is therefore `‖G - I‖₂`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::QuadratureRule;
use crate::error::{Error, Result};
use crate::harmonics::{num_coeffs, BasisIndex, SphericalBasis};

/// Residual tolerance of the power iteration.
pub const MZ_TOLERANCE: f64 = 1e-10;

/// Iteration cap of the power iteration.
pub const MZ_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MzReport {
    /// Estimate of `‖G - I‖₂`.
    pub eta: f64,
    pub degree: usize,
    pub iterations: usize,
    pub converged: bool,
}

impl MzReport {
    /// Whether the rule is an MZ system of order 2 for `P_N` (`η < 1`).
    pub fn is_mz_system(&self) -> bool {
        self.eta < 1.0
    }
}

/// Dense row-major discrete Gram matrix `Aᵀ diag(w) A` of size `(N+1)²`.
pub fn gram_matrix(rule: &QuadratureRule, degree: usize) -> Result<Vec<f64>> {
    let basis = SphericalBasis::new(degree);
    let dim = basis.len();
    let mut ws = basis.workspace();
    let mut row = vec![0.0; dim];
    let mut gram = vec![0.0; dim * dim];
    for (p, &w) in rule.points().iter().zip(rule.weights()) {
        p.check_unit()?;
        basis.fill_values(p, &mut ws, &mut row);
        for k in 0..dim {
            let a = w * row[k];
            let dst = &mut gram[k * dim + k..(k + 1) * dim];
            for (g, r) in dst.iter_mut().zip(&row[k..]) {
                *g += a * r;
            }
        }
    }
    for k in 0..dim {
        for l in 0..k {
            gram[k * dim + l] = gram[l * dim + k];
        }
    }
    Ok(gram)
}

fn sym_matvec(m: &[f64], dim: usize, v: &[f64], out: &mut [f64]) {
    for (o, row) in out.iter_mut().zip(m.chunks_exact(dim)) {
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Estimates the MZ constant `η = ‖G - I‖₂` by power iteration on `(G - I)²`.
///
/// Squaring makes the iteration indifferent to the sign of the extreme
/// eigenvalue. The iteration stops once the eigen-residual
/// `‖(G-I)² v - μ v‖` falls below [`MZ_TOLERANCE`]; after
/// [`MZ_MAX_ITERATIONS`] the best estimate is returned with `converged = false`.
/// The start vector is drawn from a fixed ChaCha8 stream, so results are
/// deterministic.
pub fn mz_constant(rule: &QuadratureRule, degree: usize) -> Result<MzReport> {
    if rule.is_empty() {
        return Err(Error::EmptyRule);
    }
    let dim = num_coeffs(degree);
    let mut b = gram_matrix(rule, degree)?;
    for k in 0..dim {
        b[k * dim + k] -= 1.0;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x4d5a);
    let mut v: Vec<f64> = (0..dim)
        .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    let n0 = norm(&v);
    v.iter_mut().for_each(|x| *x /= n0);

    let mut y = vec![0.0; dim];
    let mut z = vec![0.0; dim];
    let mut mu = 0.0;
    for it in 1..=MZ_MAX_ITERATIONS {
        sym_matvec(&b, dim, &v, &mut y);
        mu = y.iter().map(|x| x * x).sum::<f64>();
        sym_matvec(&b, dim, &y, &mut z);
        let residual = z
            .iter()
            .zip(&v)
            .map(|(zi, vi)| (zi - mu * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        let nz = norm(&z);
        if residual <= MZ_TOLERANCE || nz == 0.0 {
            return Ok(MzReport {
                eta: mu.sqrt(),
                degree,
                iterations: it,
                converged: true,
            });
        }
        for (vi, zi) in v.iter_mut().zip(&z) {
            *vi = zi / nz;
        }
    }
    Ok(MzReport {
        eta: mu.sqrt(),
        degree,
        iterations: MZ_MAX_ITERATIONS,
        converged: false,
    })
}

/// Largest error of the rule on a single basis function of degree `≤ t`:
/// `max |Σ w_j Y_{ℓ,k}(x_j) - ∫ Y_{ℓ,k}|`, where only `∫ Y_{0,0} = √(4π)`
/// is nonzero.
pub fn exactness_error(rule: &QuadratureRule, t: usize) -> Result<f64> {
    Ok(exactness_profile(rule, t)?.into_iter().fold(0.0, f64::max))
}

/// Per-degree version of [`exactness_error`]: entry `ℓ` is the largest error
/// over the `2ℓ + 1` basis functions of degree `ℓ`. Sums are compensated
/// (Neumaier) so the result reflects the rule rather than round-off.
pub fn exactness_profile(rule: &QuadratureRule, t: usize) -> Result<Vec<f64>> {
    let basis = SphericalBasis::new(t);
    let mut ws = basis.workspace();
    let mut row = vec![0.0; basis.len()];
    let mut sums = vec![0.0; basis.len()];
    let mut comp = vec![0.0; basis.len()];
    for (p, &w) in rule.points().iter().zip(rule.weights()) {
        p.check_unit()?;
        basis.fill_values(p, &mut ws, &mut row);
        for ((s, c), r) in sums.iter_mut().zip(comp.iter_mut()).zip(&row) {
            let x = w * r;
            let t = *s + x;
            *c += if s.abs() >= x.abs() {
                (*s - t) + x
            } else {
                (x - t) + *s
            };
            *s = t;
        }
    }
    let y00 = (4.0 * std::f64::consts::PI).sqrt();
    let mut profile = vec![0.0f64; t + 1];
    for (k, (s, c)) in sums.iter().zip(&comp).enumerate() {
        let exact = if k == 0 { y00 } else { 0.0 };
        let l = BasisIndex::from_flat(k).degree;
        profile[l] = profile[l].max(((s - exact) + c).abs());
    }
    Ok(profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{gauss_product_rule, random_rule};

    #[test]
    fn profile_locates_the_first_inexact_degree() {
        let p = exactness_profile(&gauss_product_rule(9), 14).unwrap();
        assert!(p[..=9].iter().all(|e| *e < 1e-13));
        assert!(p[10..].iter().any(|e| *e > 1e-6));
    }

    #[test]
    fn gram_is_identity_for_exact_rules() {
        let g = gram_matrix(&gauss_product_rule(12), 6).unwrap();
        let dim = 49;
        for i in 0..dim {
            for j in 0..dim {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((g[i * dim + j] - e).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn small_rules_are_not_mz() {
        let r = random_rule(10, 3);
        let rep = mz_constant(&r, 5).unwrap();
        assert!(rep.eta >= 1.0 - 1e-12, "{rep:?}");
        assert!(!rep.is_mz_system());
    }

    #[test]
    fn empty_rule_is_an_error() {
        let r = QuadratureRule::new(vec![], vec![], "empty").unwrap();
        assert!(matches!(mz_constant(&r, 2), Err(Error::EmptyRule)));
    }

    #[test]
    fn random_rule_integrates_constants_exactly() {
        let r = random_rule(333, 5);
        let e = exactness_error(&r, 0).unwrap();
        assert!(e < 1e-14, "{e}");
    }
}
