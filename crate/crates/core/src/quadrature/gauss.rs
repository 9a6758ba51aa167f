use std::f64::consts::PI;

use super::QuadratureRule;
use crate::harmonics::SphericalPoint;

/// `n`-point Gauss-Legendre nodes and weights on `[-1, 1]`, nodes ascending.
///
/// Newton iteration on `P_n` from the Tricomi initial guesses.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        // the middle node is exactly zero by symmetry
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule exact for spherical polynomials of degree `≤ t`.
///
/// `⌈(t+1)/2⌉` Gauss-Legendre nodes in `z` times `t + 1` equispaced longitudes,
/// with weights `w_GL · 2π/(t + 1)`. No node sits at a pole.
pub fn gauss_product_rule(t: usize) -> QuadratureRule {
    let n_z = (t + 1).div_ceil(2);
    let n_phi = t + 1;
    let (nodes, gl_weights) = gauss_legendre(n_z);
    let dphi = 2.0 * PI / n_phi as f64;
    let mut points = Vec::with_capacity(n_z * n_phi);
    let mut weights = Vec::with_capacity(n_z * n_phi);
    for (z, wz) in nodes.iter().zip(&gl_weights) {
        for j in 0..n_phi {
            points.push(SphericalPoint::from_z_phi(*z, j as f64 * dphi));
            weights.push(wz * dphi);
        }
    }
    QuadratureRule::new(points, weights, format!("gauss-product(t={t})"))
        .expect("Gauss product rules have positive weights")
}
