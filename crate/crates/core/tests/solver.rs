//! Time stepping against closed-form updates, invariance properties and
//! energy identities.

use std::f64::consts::PI;

use hyperac_core::harmonics::{num_coeffs, zonal_index};
use hyperac_core::solver::{steps_for, ProbeGrid};
use hyperac_core::{
    equal_area_rule, eval_expansion, gauss_product_rule, random_rule, reference_initial_condition,
    stability_constants, uniform_norm_estimate, Error, HarmonicCoefficients, Solver, SolverConfig,
    SolverState,
};
use proptest::prelude::*;

fn state(coeffs: HarmonicCoefficients) -> SolverState {
    SolverState {
        n: 0,
        time: 0.0,
        coeffs,
    }
}

#[test]
fn step_matches_closed_form_for_a_zonal_mode() {
    // u = a·Y₁₀ = a·k·z, so u³ - u only has Y₁₀ and Y₃₀ components:
    // z³ = (3/5) z + (2/5) P₃(z), with Y₁₀ = k z and Y₃₀ = k₃ P₃(z).
    let (n, nu, tau, a) = (15, 0.1, 0.5, 0.1);
    let k = (3.0 / (4.0 * PI)).sqrt();
    let k3 = (7.0 / (4.0 * PI)).sqrt();
    let h1 = a * a * a * k * k * 0.6 - a;
    let h3 = a * a * a * k * k * k * 0.4 / k3;
    let want1 = (a - tau * h1) / (1.0 + tau * nu * nu * 2.0);
    let want3 = -tau * h3 / (1.0 + tau * nu * nu * 12.0);

    let solver = Solver::new(SolverConfig::new(nu, tau, n, gauss_product_rule(4 * n))).unwrap();
    let mut c = HarmonicCoefficients::zeros(n);
    c.values_mut()[zonal_index(1)] = a;
    let next = solver.step(&state(c)).unwrap();
    for (i, v) in next.coeffs.values().iter().enumerate() {
        let want = if i == zonal_index(1) {
            want1
        } else if i == zonal_index(3) {
            want3
        } else {
            0.0
        };
        assert!((v - want).abs() < 1e-13, "coefficient {i}: {v} vs {want}");
    }
    assert_eq!(next.n, 1);
    assert!((next.time - tau).abs() < 1e-15);
}

#[test]
fn constant_states_are_fixed_points() {
    let n = 10;
    let solver = Solver::new(SolverConfig::new(0.1, 0.5, n, gauss_product_rule(2 * n))).unwrap();
    for v in [0.0, 1.0, -1.0] {
        let start = HarmonicCoefficients::constant(n, v);
        let mut s = state(start.clone());
        for _ in 0..120 {
            s = solver.step(&s).unwrap();
        }
        assert!(s.coeffs.max_abs_diff(&start) <= 1e-12, "u ≡ {v}");
    }
}

#[test]
fn step_costs_two_basis_products() {
    let solver = Solver::new(SolverConfig::new(0.1, 0.5, 6, equal_area_rule(300))).unwrap();
    let s = solver.init_from_fn(reference_initial_condition).unwrap();
    let matrix = solver.evolution().matrix();
    matrix.reset_matvec_count();
    let s = solver.step(&s).unwrap();
    assert_eq!(matrix.matvec_count(), 2);
    solver.step(&s).unwrap();
    assert_eq!(matrix.matvec_count(), 4);
}

#[test]
fn mixed_scheme_with_the_same_rule_is_bitwise_identical() {
    let n = 8;
    let rule = gauss_product_rule(2 * n);
    let plain = Solver::new(SolverConfig::new(0.1, 0.5, n, rule.clone())).unwrap();
    let mixed =
        Solver::new(SolverConfig::new(0.1, 0.5, n, rule.clone()).with_init_rule(rule)).unwrap();
    let mut a = plain.init_from_fn(reference_initial_condition).unwrap();
    let mut b = mixed.init_from_fn(reference_initial_condition).unwrap();
    for _ in 0..30 {
        assert_eq!(a.coeffs.values(), b.coeffs.values());
        a = plain.step(&a).unwrap();
        b = mixed.step_mixed(&b).unwrap();
    }
}

fn rotation(angle_z: f64, angle_x: f64) -> [[f64; 3]; 3] {
    let (cz, sz) = (angle_z.cos(), angle_z.sin());
    let (cx, sx) = (angle_x.cos(), angle_x.sin());
    let rz = [[cz, -sz, 0.0], [sz, cz, 0.0], [0.0, 0.0, 1.0]];
    let rx = [[1.0, 0.0, 0.0], [0.0, cx, -sx], [0.0, sx, cx]];
    let mut r = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            r[i][j] = (0..3).map(|k| rx[i][k] * rz[k][j]).sum();
        }
    }
    r
}

#[test]
fn trajectories_are_rotation_equivariant() {
    let n = 10;
    let r = rotation(0.7, 1.1);
    let rule = random_rule(900, 12);
    let rotated = rule.rotated(&r).unwrap();
    let base = Solver::new(SolverConfig::new(0.1, 0.5, n, rule.clone())).unwrap();
    let turned = Solver::new(SolverConfig::new(0.1, 0.5, n, rotated)).unwrap();
    // Same samples, attached to rotated points.
    let samples: Vec<f64> = rule
        .points()
        .iter()
        .map(reference_initial_condition)
        .collect();
    let mut a = base.init_state(&samples).unwrap();
    let mut b = turned.init_state(&samples).unwrap();
    for _ in 0..20 {
        a = base.step(&a).unwrap();
        b = turned.step(&b).unwrap();
    }
    let probe = equal_area_rule(400);
    let probe_rot = probe.rotated(&r).unwrap();
    let ua = eval_expansion(&a.coeffs, probe.points()).unwrap();
    let ub = eval_expansion(&b.coeffs, probe_rot.points()).unwrap();
    let l2: f64 = probe
        .weights()
        .iter()
        .zip(ua.iter().zip(&ub))
        .map(|(w, (x, y))| w * (x - y) * (x - y))
        .sum::<f64>()
        .sqrt();
    assert!(l2 <= 1e-8, "{l2}");
    assert!((a.coeffs.l2_norm() - b.coeffs.l2_norm()).abs() < 1e-10);
}

#[test]
fn energies_agree_under_sufficient_exactness() {
    let n = 8;
    let nu = 0.1;
    let exact = Solver::new(SolverConfig::new(nu, 0.5, n, gauss_product_rule(4 * n))).unwrap();
    let s = exact.init_from_fn(reference_initial_condition).unwrap();
    let discrete = exact.discrete_energy(&s.coeffs).unwrap();
    let continuous = exact.continuous_energy(&s.coeffs).unwrap();
    assert!((discrete - continuous).abs() < 1e-10 * continuous.abs().max(1.0));

    // A richer energy rule does not change E for a degree-N state.
    let richer = Solver::new(
        SolverConfig::new(nu, 0.5, n, gauss_product_rule(2 * n))
            .with_energy_rule(gauss_product_rule(6 * n)),
    )
    .unwrap();
    let again = richer.continuous_energy(&s.coeffs).unwrap();
    assert!((again - continuous).abs() < 1e-10 * continuous.abs().max(1.0));
}

#[test]
fn uniform_norm_of_first_zonal_mode() {
    let n = 4;
    let mut c = HarmonicCoefficients::zeros(n);
    c.values_mut()[zonal_index(1)] = 1.0;
    let peak = (3.0 / (4.0 * PI)).sqrt();
    let est = uniform_norm_estimate(&c, ProbeGrid::default_for(n)).unwrap();
    assert!((est - peak).abs() < 1e-12, "{est} vs {peak}");

    // Nested grids (nlat + 1 and nlon doubling) never lower the estimate.
    let u = {
        let s = Solver::new(SolverConfig::new(0.1, 0.5, 12, gauss_product_rule(24))).unwrap();
        s.init_from_fn(reference_initial_condition).unwrap().coeffs
    };
    let mut last = 0.0;
    for k in 0..4 {
        let grid = ProbeGrid::new(32 * (1 << k) - 1, 52 * (1 << k));
        let est = uniform_norm_estimate(&u, grid).unwrap();
        assert!(est >= last);
        last = est;
    }
    assert!(uniform_norm_estimate(&u, ProbeGrid::new(10, 20)).is_err());
}

#[test]
fn galerkin_residual_separates_exact_and_aliased_rules() {
    let n = 10;
    for (rule, expect_small) in [
        (gauss_product_rule(2 * n), true),
        (gauss_product_rule(n), false),
    ] {
        let solver = Solver::new(SolverConfig::new(0.1, 0.5, n, rule)).unwrap();
        let mut s = solver.init_from_fn(reference_initial_condition).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let next = solver.step(&s).unwrap();
            worst = worst.max(solver.galerkin_residual(&s, &next).unwrap());
            s = next;
        }
        if expect_small {
            assert!(worst <= 1e-10, "{worst}");
        } else {
            assert!(worst > 1e-6, "{worst}");
        }
    }
}

#[test]
fn runs_record_every_step_and_snapshot_on_schedule() {
    let n = 6;
    let cfg = SolverConfig::new(0.1, 0.5, n, gauss_product_rule(2 * n))
        .with_t_final(5.0)
        .with_snapshot_every(4);
    assert_eq!(cfg.steps, 10);
    let out = hyperac_core::run(cfg, reference_initial_condition).unwrap();
    assert_eq!(out.diagnostics.len(), 11);
    assert_eq!(
        out.snapshots.iter().map(|s| s.n).collect::<Vec<_>>(),
        vec![0, 4, 8]
    );
    let d0 = &out.diagnostics[0];
    assert!((out.alpha0 - (d0.uniform_norm - 1.0).max(0.0)).abs() < 1e-15);
    assert!(out.diagnostics.iter().all(|d| d.envelope.is_some()));
    assert_eq!(steps_for(70.0, 0.5), 140);
    assert_eq!(steps_for(70.0, 0.86), 82);
    assert_eq!(steps_for(0.3, 0.1), 3);
}

#[test]
fn unstable_step_reports_blow_up_with_partial_output() {
    let n = 10;
    let cfg = SolverConfig::new(0.1, 2.5, n, gauss_product_rule(2 * n)).with_steps(400);
    let failure = hyperac_core::run(cfg, |p| 3.0 * reference_initial_condition(p)).unwrap_err();
    assert!(matches!(failure.error, Error::BlowUp { .. }));
    assert!(!failure.partial.diagnostics.is_empty());
    assert!(failure.partial.final_state.unwrap().coeffs.is_finite());
}

#[test]
fn invalid_configurations_are_rejected() {
    let rule = gauss_product_rule(4);
    assert!(Solver::new(SolverConfig::new(0.0, 0.5, 2, rule.clone())).is_err());
    assert!(Solver::new(SolverConfig::new(0.1, -0.5, 2, rule.clone())).is_err());
    assert!(Solver::new(SolverConfig::new(0.1, 0.5, 0, rule.clone())).is_err());
    assert!(Solver::new(
        SolverConfig::new(0.1, 0.5, 2, rule.clone()).with_probe_grid(ProbeGrid::new(2, 4))
    )
    .is_err());
    assert!(Solver::new(SolverConfig::new(0.1, 0.5, 2, rule).with_alpha0(-1.0)).is_err());
}

#[test]
fn stability_constants_closed_forms() {
    let c = stability_constants(1.99, 0.05).unwrap();
    let k = 2.0 / 3.0 * 2.99f64.powf(1.5) / (3.0 * 1.99f64).sqrt();
    let m0 = 0.5 * (k + (3.99f64 / 1.99).sqrt());
    assert!((c.m0 - m0).abs() < 1e-14);
    assert!((c.tau1 - 0.860018).abs() < 1e-6);
    assert!((c.theta - (1.0 - 2.0 * 1.99)).abs() < 1e-15);
    // τ₁ solves 1/2 + 1/x = (3/2)·K(x)².
    let t = c.tau1;
    let kt = 2.0 / 3.0 * (1.0 + t).powf(1.5) / (3.0 * t).sqrt();
    assert!((0.5 + 1.0 / t - 1.5 * kt * kt).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn linear_part_contracts_every_mode(tau in 0.01f64..2.0, nu in 0.01f64..1.0, seed in any::<u64>()) {
        // With zero reaction (u ≡ 0 stays put) and a tiny state, a step is
        // dominated by the damped linear map c ↦ (1 + τ) c / (1 + τν²λ).
        let n = 5;
        let solver = Solver::new(SolverConfig::new(nu, tau, n, gauss_product_rule(4 * n))).unwrap();
        let eps = 1e-9;
        let values: Vec<f64> = (0..num_coeffs(n))
            .map(|i| eps * (((seed >> (i % 64)) & 1) as f64 - 0.5))
            .collect();
        let s = state(HarmonicCoefficients::new(n, values.clone()).unwrap());
        let next = solver.step(&s).unwrap();
        for (i, (c, v)) in values.iter().zip(next.coeffs.values()).enumerate() {
            let l = (i as f64).sqrt().floor();
            let lambda = l * (l + 1.0);
            let want = (1.0 + tau) * c / (1.0 + tau * nu * nu * lambda);
            prop_assert!((v - want).abs() < 1e-20);
        }
    }
}
