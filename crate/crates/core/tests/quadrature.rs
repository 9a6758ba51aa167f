//! Rule construction, file round-trips and the MZ constant against a dense
//! symmetric eigensolver.

use std::f64::consts::PI;
use std::io::Write;

use hyperac_core::quadrature::{gram_matrix, parse_rule, SPHERE_AREA};
use hyperac_core::{
    dim_pn, equal_area_rule, exactness_error, gauss_product_rule, load_rule, mesh_norm,
    mz_constant, random_rule, write_rule, Error, QuadratureRule, SphericalPoint,
};
use nalgebra::{DMatrix, SymmetricEigen};

fn dense_eta(rule: &QuadratureRule, degree: usize) -> f64 {
    let g = gram_matrix(rule, degree).unwrap();
    let k = (degree + 1) * (degree + 1);
    let mut m = DMatrix::from_row_slice(k, k, &g);
    for i in 0..k {
        m[(i, i)] -= 1.0;
    }
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .fold(0.0, |a: f64, e| a.max(e.abs()))
}

fn icosahedron() -> Vec<SphericalPoint> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let s = (1.0 + phi * phi).sqrt();
    let mut pts = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-1.0, 1.0] {
            let (u, v) = (a / s, b * phi / s);
            pts.push(SphericalPoint::new(0.0, u, v).unwrap());
            pts.push(SphericalPoint::new(u, v, 0.0).unwrap());
            pts.push(SphericalPoint::new(v, 0.0, u).unwrap());
        }
    }
    pts
}

#[test]
fn gauss_rules_are_exact_to_their_degree() {
    for t in [0, 1, 4, 9, 20, 31] {
        let rule = gauss_product_rule(t);
        assert_eq!(rule.len(), (t + 1).div_ceil(2) * (t + 1));
        assert!(rule.integrates_constants());
        assert!(exactness_error(&rule, t).unwrap() < 1e-12, "t={t}");
    }
    // One degree beyond the design degree should fail for a tight rule.
    let rule = gauss_product_rule(10);
    assert!(exactness_error(&rule, 12).unwrap() > 1e-6);
}

#[test]
fn icosahedron_file_is_a_five_design() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ico.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# icosahedron vertices").unwrap();
    for p in icosahedron() {
        writeln!(f, "{:.17e} {:.17e} {:.17e}", p.x, p.y, p.z).unwrap();
    }
    drop(f);
    let rule = load_rule(&path).unwrap();
    assert_eq!(rule.len(), 12);
    assert!((rule.total_weight() - SPHERE_AREA).abs() < 1e-12);
    assert!(exactness_error(&rule, 5).unwrap() <= 1e-8);
    assert!(exactness_error(&rule, 6).unwrap() > 1e-3);
}

#[test]
fn written_rules_round_trip_bitwise_close() {
    let dir = tempfile::tempdir().unwrap();
    for rule in [
        random_rule(200, 9),
        equal_area_rule(150),
        gauss_product_rule(7),
    ] {
        let path = dir.path().join("r.txt");
        write_rule(&rule, &path).unwrap();
        let back = load_rule(&path).unwrap();
        assert_eq!(back.len(), rule.len());
        for (a, b) in rule.points().iter().zip(back.points()) {
            assert!((a.x - b.x).abs() <= 1e-15);
            assert!((a.y - b.y).abs() <= 1e-15);
            assert!((a.z - b.z).abs() <= 1e-15);
        }
        for (a, b) in rule.weights().iter().zip(back.weights()) {
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0));
        }
    }
}

#[test]
fn malformed_files_name_the_line() {
    let text = "# header\n1 0 0\n0 1\n";
    match parse_rule(text, std::path::Path::new("mem")) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{other:?}"),
    }
    assert!(parse_rule("1 0 0 1\n0 1 0\n", std::path::Path::new("mem")).is_err());
    assert!(parse_rule("2 0 0\n", std::path::Path::new("mem")).is_err());
    assert!(parse_rule("1 0 0 -1\n", std::path::Path::new("mem")).is_err());
}

#[test]
fn generators_are_deterministic_with_exact_sizes() {
    assert_eq!(random_rule(321, 4).points(), random_rule(321, 4).points());
    assert_ne!(random_rule(321, 4).points(), random_rule(321, 5).points());
    for m in [1, 2, 7, 100, 961, 2000] {
        let r = equal_area_rule(m);
        assert_eq!(r.len(), m);
        assert!(r.integrates_constants());
        assert!(r.points().iter().all(|p| !p.is_near_pole()));
    }
}

#[test]
fn mz_constant_matches_dense_eigensolver() {
    let cases = [
        (random_rule(400, 1), 8),
        (random_rule(3000, 2), 15),
        (equal_area_rule(2500), 20),
        (random_rule(6000, 3), 29),
        (random_rule(100, 4), 12),
    ];
    for (rule, n) in cases {
        let report = mz_constant(&rule, n).unwrap();
        assert!(report.converged);
        let dense = dense_eta(&rule, n);
        assert!(
            (report.eta - dense).abs() <= 1e-8,
            "N={n}: power {} dense {dense}",
            report.eta
        );
    }
}

#[test]
fn eta_is_monotone_in_degree_and_zero_under_exactness() {
    let rule = random_rule(2000, 17);
    let etas: Vec<f64> = (0..=14)
        .map(|n| mz_constant(&rule, n).unwrap().eta)
        .collect();
    assert!(etas.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{etas:?}");

    for n in [3, 10, 15] {
        let eta = mz_constant(&gauss_product_rule(2 * n), n).unwrap().eta;
        assert!(eta <= 1e-10, "{eta}");
    }
}

#[test]
fn too_few_points_cannot_be_mz() {
    for (m, n) in [(10, 5), (35, 5), (200, 15), (255, 15)] {
        assert!((m as u64) < dim_pn(n, 3).unwrap());
        let report = mz_constant(&random_rule(m, 6), n).unwrap();
        assert!(report.eta >= 1.0, "m={m} N={n} eta={}", report.eta);
        assert!(!report.is_mz_system());
    }
}

#[test]
fn mesh_norm_geometry() {
    let north =
        QuadratureRule::equal_weight(vec![SphericalPoint::new(0.0, 0.0, 1.0).unwrap()], "north")
            .unwrap();
    let h = mesh_norm(&north, 64).unwrap();
    assert!((h - PI).abs() <= 2.0 * PI / 64.0);

    let pair = QuadratureRule::equal_weight(
        vec![
            SphericalPoint::new(0.0, 0.0, 1.0).unwrap(),
            SphericalPoint::new(0.0, 0.0, -1.0).unwrap(),
        ],
        "pair",
    )
    .unwrap();
    assert!((mesh_norm(&pair, 64).unwrap() - PI / 2.0).abs() < 1e-12);

    let rule = random_rule(500, 8);
    let coarse = mesh_norm(&rule, 32).unwrap();
    let fine = mesh_norm(&rule, 64).unwrap();
    assert!(fine >= coarse);
    let dense = mesh_norm(&random_rule(5000, 8), 64).unwrap();
    assert!(dense < fine);
}
