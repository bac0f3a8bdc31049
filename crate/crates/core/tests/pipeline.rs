//! End-to-end pipeline checks at the reference operating point.

use approx::assert_relative_eq;
use magnomech::dynamics::{build_diffusion, build_drift, default_margin};
use magnomech::entanglement::{entanglement_of, Pair};
use magnomech::lyapunov::solve_lyapunov;
use magnomech::model::SystemParams;
use magnomech::steady_state::solve_steady_state;
use magnomech::sweep::{preset, run_sweep, Preset};

fn documented_gamma() -> f64 {
    -SystemParams::<f64>::default().kappa_a
}

fn entanglement_at(theta_pi: f64, g_ma_mhz: f64) -> (f64, f64) {
    let mut p = SystemParams::<f64>::default();
    p.theta = theta_pi * std::f64::consts::PI;
    p.g_ma = std::f64::consts::TAU * g_ma_mhz * 1e6;
    p.gamma_gain = documented_gamma();
    let ss = solve_steady_state(&p).unwrap();
    let a = build_drift(&p, &ss);
    let d = build_diffusion(&p).unwrap();
    let v = solve_lyapunov(&a, &d, default_margin(&p)).unwrap();
    let am = entanglement_of(&v, Pair::CavityMagnon).unwrap();
    let bm = entanglement_of(&v, Pair::PhononMagnon).unwrap();
    (am.e_n, bm.e_n)
}

#[test]
fn reference_entanglement_matches_independent_evaluation() {
    // Frozen values from an independent implementation of the same model.
    let (am, bm) = entanglement_at(0.44, 3.5);
    assert_relative_eq!(am, 0.007535, max_relative = 2e-3);
    assert_relative_eq!(bm, 0.042628, max_relative = 2e-3);
    let (am, bm) = entanglement_at(0.44, 4.7);
    assert_relative_eq!(am, 0.013054, max_relative = 2e-3);
    assert_relative_eq!(bm, 0.032909, max_relative = 2e-3);
}

#[test]
fn cavity_magnon_entanglement_peaks_in_the_first_half_turn() {
    let spec = preset(Preset::Fig2, documented_gamma()).unwrap();
    let result = run_sweep(&spec).unwrap();
    for g in [3.5, 4.7] {
        let curve: Vec<(f64, f64)> = result
            .rows
            .iter()
            .filter(|r| r.curve_value == Some(g))
            .map(|r| (r.axis_value, r.outcome.en_am.unwrap()))
            .collect();
        assert_eq!(curve.len(), 401);
        let (theta_star, peak) = curve
            .iter()
            .copied()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        assert!(peak > 0.0);
        assert!(
            theta_star > 0.3 && theta_star < 0.6,
            "peak at theta = {theta_star}π for g_ma = {g} MHz"
        );
    }
}

#[test]
fn zero_squeezing_removes_the_phase_dependence() {
    let evaluate = |theta_pi: f64| -> (f64, f64) {
        let mut p = SystemParams::<f64>::default();
        p.chi = 0.0;
        p.theta = theta_pi * std::f64::consts::PI;
        let ss = solve_steady_state(&p).unwrap();
        let a = build_drift(&p, &ss);
        let d = build_diffusion(&p).unwrap();
        let v = solve_lyapunov(&a, &d, default_margin(&p)).unwrap();
        (
            entanglement_of(&v, Pair::CavityMagnon).unwrap().e_n,
            entanglement_of(&v, Pair::PhononMagnon).unwrap().e_n,
        )
    };
    let (am1, bm1) = evaluate(0.3);
    let (am2, bm2) = evaluate(1.2);
    assert_relative_eq!(bm1, bm2, max_relative = 1e-10);
    // The cavity-magnon pair is separable without squeezing here.
    assert_eq!(am1, 0.0);
    assert_eq!(am2, 0.0);
    assert!(bm1 > 0.0);
}

#[test]
fn pipeline_is_two_pi_periodic_in_the_squeezing_phase() {
    let at = |theta: f64| {
        let mut p = SystemParams::<f64>::default();
        p.theta = theta;
        let ss = solve_steady_state(&p).unwrap();
        let a = build_drift(&p, &ss);
        let d = build_diffusion(&p).unwrap();
        let v = solve_lyapunov(&a, &d, default_margin(&p)).unwrap();
        entanglement_of(&v, Pair::PhononMagnon).unwrap().e_n
    };
    let theta = 0.44 * std::f64::consts::PI;
    let base = at(theta);
    let shifted = at(theta + std::f64::consts::TAU);
    assert_relative_eq!(base, shifted, max_relative = 1e-9);
}

#[test]
fn backaction_correction_barely_moves_the_reference_point() {
    use magnomech::steady_state::solve_steady_state_selfconsistent;
    let p = SystemParams::<f64>::default();
    let direct = solve_steady_state(&p).unwrap();
    let corrected = solve_steady_state_selfconsistent(&p, p.delta_m_eff, 1e-6, 10_000).unwrap();
    // The static shift g_mb q_s stays at the percent level of the
    // 2π·10 MHz detuning.
    let shift = (corrected.delta_m_eff_used - p.delta_m_eff).abs();
    assert!(
        shift > 0.0 && shift < 0.05 * p.delta_m_eff,
        "shift {shift:e}"
    );
    assert_relative_eq!(corrected.ms_abs(), direct.ms_abs(), max_relative = 0.05);
}
