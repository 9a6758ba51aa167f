//! Real orthonormal spherical harmonics on S².
//!
//! Degree `ℓ` has `2ℓ + 1` functions, indexed by an order `m'` in `-ℓ..=ℓ`:
//! sines for `m' < 0`, the zonal function for `m' = 0`, cosines for `m' > 0`.
//! Coefficient vectors are laid out with `ℓ` ascending and `m'` ascending
//! within a degree, so `(ℓ, m')` lives at `ℓ² + ℓ + m'`.

mod basis;
mod legendre;
mod point;

pub use basis::{
    eval_basis, eval_expansion, eval_surface_gradient, kernel_value, BasisMatrix, GradientMatrices,
    SphericalBasis,
};
pub use point::{SphericalPoint, POLE_TOLERANCE, UNIT_TOLERANCE};

pub(crate) use legendre::{tri_index, LegendreRecurrence};

use crate::error::{Error, Result};

/// Position of one basis function in a coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisIndex {
    /// Degree `ℓ ≥ 0`.
    pub degree: usize,
    /// Order index `k` in `1..=2ℓ+1`.
    pub k: usize,
    /// Linear position in the coefficient vector.
    pub flat: usize,
}

impl BasisIndex {
    /// Index of the function of degree `l` and signed order `m` (`|m| ≤ l`).
    pub fn from_order(l: usize, m: isize) -> Self {
        assert!(
            m.unsigned_abs() <= l,
            "order {m} out of range for degree {l}"
        );
        let k = (m + l as isize) as usize + 1;
        Self {
            degree: l,
            k,
            flat: l * l + k - 1,
        }
    }

    pub fn from_flat(flat: usize) -> Self {
        let l = (flat as f64).sqrt() as usize;
        // guard against rounding in the square root
        let l = if (l + 1) * (l + 1) <= flat {
            l + 1
        } else if l * l > flat {
            l - 1
        } else {
            l
        };
        Self {
            degree: l,
            k: flat - l * l + 1,
            flat,
        }
    }

    /// Signed order `m' = k - ℓ - 1`.
    pub fn order(&self) -> isize {
        self.k as isize - self.degree as isize - 1
    }

    /// All indices of a degree-`n` truncation, in storage order.
    pub fn iter(n: usize) -> impl Iterator<Item = BasisIndex> {
        (0..(n + 1) * (n + 1)).map(BasisIndex::from_flat)
    }
}

/// Flat position of the zonal (`m' = 0`) function of degree `l`.
#[inline]
pub fn zonal_index(l: usize) -> usize {
    l * l + l
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Dimension `Z(d, ℓ)` of the degree-`ℓ` spherical harmonics on `S^{d-1}`.
///
/// Uses `Z(d, ℓ) = (2ℓ + d - 2)/(d - 2) · C(ℓ + d - 3, ℓ)`, which is the Gamma
/// function form rewritten over integers.
pub fn z_dim(d: usize, l: usize) -> Result<u64> {
    if d < 3 {
        return Err(Error::Domain {
            name: "d",
            value: d as f64,
            reason: "the sphere dimension must satisfy d >= 3",
        });
    }
    if l == 0 {
        return Ok(1);
    }
    let overflow = || Error::Overflow { what: "Z(d, l)" };
    let (d, l) = (d as u128, l as u128);
    let top = l.checked_add(d - 3).ok_or_else(overflow)?;
    let c = binomial(top, l).ok_or_else(overflow)?;
    let num = c.checked_mul(2 * l + d - 2).ok_or_else(overflow)?;
    u64::try_from(num / (d - 2)).map_err(|_| overflow())
}

/// `dim P_N = Z(d + 1, N)`; `(N + 1)²` on S².
pub fn dim_pn(n: usize, d: usize) -> Result<u64> {
    z_dim(d + 1, n)
}

/// Number of coefficients of a degree-`n` expansion on S².
#[inline]
pub fn num_coeffs(n: usize) -> usize {
    (n + 1) * (n + 1)
}

/// Eigenvalue `λ_ℓ = ℓ(ℓ + d - 2)` of `-Δ` on `S^{d-1}`.
pub fn laplace_eigenvalue(l: usize, d: usize) -> f64 {
    (l as f64) * ((l + d) as f64 - 2.0)
}
