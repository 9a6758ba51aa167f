use std::f64::consts::PI;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::QuadratureRule;
use crate::harmonics::{SphericalPoint, POLE_TOLERANCE};

/// Uniform double in `[0, 1)` from the top 53 bits of one 64-bit draw.
fn unit_interval(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// `m` independent uniform points on S² with equal weights `4π/m`.
///
/// The stream is ChaCha8 seeded with `seed_from_u64(seed)`. Each point consumes
/// two 64-bit draws `a, b`, mapped to `z = 2·u(a) - 1` and `φ = 2π·u(b)` where
/// `u` keeps the top 53 bits; by Archimedes' theorem `z` uniform gives the
/// uniform surface measure. Draws with `|z|` within 1e-12 of 1 are discarded
/// so no point lands on a pole. This mapping is part of the file-level
/// reproducibility contract and must not change.
pub fn random_rule(m: usize, seed: u64) -> QuadratureRule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(m);
    while points.len() < m {
        let z = 2.0 * unit_interval(&mut rng) - 1.0;
        let phi = 2.0 * PI * unit_interval(&mut rng);
        if z.abs() >= 1.0 - POLE_TOLERANCE {
            continue;
        }
        points.push(SphericalPoint::from_z_phi(z, phi));
    }
    QuadratureRule::equal_weight(points, format!("random(m={m}, seed={seed})"))
        .expect("generated points are unit vectors")
}

/// Deterministic zonal equal-area point set with equal weights `4π/m`.
///
/// The polar angle is cut into `⌈√(mπ)/2⌉` collars of equal angular height,
/// which is the side length of a square cell of area `4π/m`. Each collar gets
/// a share of the points proportional to its area (largest-remainder
/// rounding), placed on the circle that halves the collar's area and spaced
/// evenly in longitude. Odd collars are shifted by half a spacing.
pub fn equal_area_rule(m: usize) -> QuadratureRule {
    let label = format!("equal-area(m={m})");
    if m <= 1 {
        let points = vec![SphericalPoint::new_unchecked(1.0, 0.0, 0.0); m];
        return QuadratureRule::equal_weight(points, label).expect("unit vector");
    }
    let bands = ((m as f64 * PI).sqrt() / 2.0).ceil().max(1.0) as usize;
    let edges: Vec<f64> = (0..=bands)
        .map(|k| (PI * k as f64 / bands as f64).cos())
        .collect();
    // ideal (fractional) number of points per collar
    let ideal: Vec<f64> = edges
        .windows(2)
        .map(|e| (e[0] - e[1]) / 2.0 * m as f64)
        .collect();
    let mut counts: Vec<usize> = ideal.iter().map(|x| x.floor() as usize).collect();
    let mut short = m - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..bands).collect();
    // stable sort keeps the assignment deterministic on ties
    order.sort_by(|&a, &b| {
        let ra = ideal[a] - ideal[a].floor();
        let rb = ideal[b] - ideal[b].floor();
        rb.total_cmp(&ra)
    });
    for &k in order.iter().cycle() {
        if short == 0 {
            break;
        }
        counts[k] += 1;
        short -= 1;
    }

    let mut points = Vec::with_capacity(m);
    for (k, &n_k) in counts.iter().enumerate() {
        if n_k == 0 {
            continue;
        }
        let z = 0.5 * (edges[k] + edges[k + 1]);
        let offset = if k % 2 == 1 { 0.5 } else { 0.0 };
        let dphi = 2.0 * PI / n_k as f64;
        for i in 0..n_k {
            points.push(SphericalPoint::from_z_phi(z, (i as f64 + offset) * dphi));
        }
    }
    QuadratureRule::equal_weight(points, label).expect("generated points are unit vectors")
}
