//! Fully normalized associated Legendre functions.
//!
//! `P̄_ℓ^m(cos θ)` is scaled so that `P̄_ℓ^m(cos θ)·√2·cos(mφ)` (or `sin`, and
//! without the `√2` for `m = 0`) has unit norm over the sphere with its surface
//! measure. The normalization is carried by the recurrence itself, so nothing
//! overflows at high degree. No Condon-Shortley phase is applied.

use std::f64::consts::PI;

/// Position of `(ℓ, m)`, `0 ≤ m ≤ ℓ`, in the packed triangular tables below.
#[inline]
pub(crate) fn tri_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

/// Precomputed recurrence coefficients up to a fixed degree.
#[derive(Debug, Clone)]
pub(crate) struct LegendreRecurrence {
    degree: usize,
    /// `a_ℓm = √((4ℓ²-1)/(ℓ²-m²))` for `ℓ > m`.
    a: Vec<f64>,
    /// `1 / a_{ℓ-1,m}` for `ℓ > m + 1`.
    b: Vec<f64>,
    /// `√((2m+1)/(2m))` for the diagonal, indexed by `m`.
    diag: Vec<f64>,
    /// `√((2ℓ+1)/(2ℓ-1)·(ℓ²-m²))`, used by the θ-derivative.
    deriv: Vec<f64>,
}

impl LegendreRecurrence {
    pub(crate) fn new(degree: usize) -> Self {
        let len = tri_index(degree, degree) + 1;
        let mut a = vec![0.0; len];
        let mut b = vec![0.0; len];
        let mut deriv = vec![0.0; len];
        for l in 1..=degree {
            let lf = l as f64;
            for m in 0..l {
                let mf = m as f64;
                let idx = tri_index(l, m);
                a[idx] = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                deriv[idx] = ((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf * lf - mf * mf)).sqrt();
                if l > m + 1 {
                    let lp = lf - 1.0;
                    b[idx] = ((lp * lp - mf * mf) / (4.0 * lp * lp - 1.0)).sqrt();
                }
            }
        }
        let diag = (0..=degree)
            .map(|m| {
                if m == 0 {
                    0.0
                } else {
                    let mf = m as f64;
                    ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt()
                }
            })
            .collect();
        Self {
            degree,
            a,
            b,
            diag,
            deriv,
        }
    }

    pub(crate) fn degree(&self) -> usize {
        self.degree
    }

    pub(crate) fn table_len(&self) -> usize {
        tri_index(self.degree, self.degree) + 1
    }

    /// Fills `out[tri_index(ℓ, m)] = P̄_ℓ^m(cos θ)` for all `m ≤ ℓ ≤ degree`.
    pub(crate) fn fill(&self, cos_theta: f64, sin_theta: f64, out: &mut [f64]) {
        let n = self.degree;
        debug_assert!(out.len() >= self.table_len());
        let mut pmm = 1.0 / (4.0 * PI).sqrt();
        for m in 0..=n {
            if m > 0 {
                pmm *= self.diag[m] * sin_theta;
            }
            out[tri_index(m, m)] = pmm;
            if m == n {
                break;
            }
            let mut prev2 = pmm;
            let mut prev1 = self.a[tri_index(m + 1, m)] * cos_theta * pmm;
            out[tri_index(m + 1, m)] = prev1;
            for l in (m + 2)..=n {
                let idx = tri_index(l, m);
                let cur = self.a[idx] * (cos_theta * prev1 - self.b[idx] * prev2);
                out[idx] = cur;
                prev2 = prev1;
                prev1 = cur;
            }
        }
    }

    /// Given a table from [`fill`](Self::fill), writes `sin θ · dP̄_ℓ^m/dθ`.
    pub(crate) fn fill_sin_dtheta(&self, cos_theta: f64, table: &[f64], out: &mut [f64]) {
        for l in 0..=self.degree {
            let lf = l as f64;
            for m in 0..=l {
                let idx = tri_index(l, m);
                let mut v = lf * cos_theta * table[idx];
                if m < l {
                    v -= self.deriv[idx] * table[tri_index(l - 1, m)];
                }
                out[idx] = v;
            }
        }
    }
}

/// Legendre polynomials `P_0(x), …, P_n(x)` by Bonnet's recurrence.
pub(crate) fn legendre_polynomials(n: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if n == 0 {
        return;
    }
    out.push(x);
    for l in 2..=n {
        let lf = l as f64;
        let next = ((2.0 * lf - 1.0) * x * out[l - 1] - (lf - 1.0) * out[l - 2]) / lf;
        out.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(n: usize, theta: f64) -> Vec<f64> {
        let rec = LegendreRecurrence::new(n);
        let mut out = vec![0.0; rec.table_len()];
        rec.fill(theta.cos(), theta.sin(), &mut out);
        out
    }

    #[test]
    fn low_degree_closed_forms() {
        let theta = 0.83f64;
        let (c, s) = (theta.cos(), theta.sin());
        let t = table(2, theta);
        let k = 1.0 / (4.0 * PI).sqrt();
        assert!((t[tri_index(0, 0)] - k).abs() < 1e-15);
        assert!((t[tri_index(1, 0)] - (3.0f64).sqrt() * k * c).abs() < 1e-15);
        // √2·P̄_11 = √(3/4π) sin θ
        assert!((2f64.sqrt() * t[tri_index(1, 1)] - (3.0 / (4.0 * PI)).sqrt() * s).abs() < 1e-15);
        // P̄_20 = √(5/4π)·(3c² - 1)/2
        let p20 = (5.0 / (4.0 * PI)).sqrt() * 0.5 * (3.0 * c * c - 1.0);
        assert!((t[tri_index(2, 0)] - p20).abs() < 1e-15);
        // √2·P̄_22 = √(15/16π) sin² θ
        let p22 = (15.0 / (16.0 * PI)).sqrt() * s * s;
        assert!((2f64.sqrt() * t[tri_index(2, 2)] - p22).abs() < 1e-15);
    }

    #[test]
    fn stays_finite_at_high_degree() {
        for &theta in &[1e-3, 0.5, std::f64::consts::FRAC_PI_2, 3.0] {
            let t = table(300, theta);
            assert!(t.iter().all(|v| v.is_finite()));
            assert!(t.iter().all(|v| v.abs() < 10.0));
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let n = 20;
        let rec = LegendreRecurrence::new(n);
        let theta = 1.1f64;
        let h = 1e-6;
        let (mut t, mut tp, mut tm, mut d) = (
            vec![0.0; rec.table_len()],
            vec![0.0; rec.table_len()],
            vec![0.0; rec.table_len()],
            vec![0.0; rec.table_len()],
        );
        rec.fill(theta.cos(), theta.sin(), &mut t);
        rec.fill((theta + h).cos(), (theta + h).sin(), &mut tp);
        rec.fill((theta - h).cos(), (theta - h).sin(), &mut tm);
        rec.fill_sin_dtheta(theta.cos(), &t, &mut d);
        for i in 0..rec.table_len() {
            let fd = (tp[i] - tm[i]) / (2.0 * h);
            assert!((d[i] / theta.sin() - fd).abs() < 1e-7, "index {i}");
        }
    }

    #[test]
    fn bonnet_recurrence() {
        let mut p = Vec::new();
        legendre_polynomials(3, 0.3, &mut p);
        assert!((p[2] - 0.5 * (3.0 * 0.09 - 1.0)).abs() < 1e-15);
        assert!((p[3] - 0.5 * (5.0 * 0.027 - 3.0 * 0.3)).abs() < 1e-15);
    }
}
