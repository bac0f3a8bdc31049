//! Scans the net cavity gain and reports, for each value, how much of the
//! full squeezing-phase grid is stable and where the cavity-magnon
//! entanglement peaks. This is the calibration evidence behind the
//! documented operating gain `gamma_gain = -kappa_a`.
//!
//! Run with: cargo run --release -p magnomech --example gamma_scan

use magnomech::model::SystemParams;
use magnomech::sweep::{run_sweep, CurveSpec, SweepSpec};

fn main() {
    let base = SystemParams::<f64>::default();
    let kappa = base.kappa_a;
    println!("gamma/kappa_a  stable_frac  max_en_am   argmax_theta_pi  en_am_at_0.44pi");
    for ratio in [
        -1.0, -0.99, -0.98, -0.9, -0.5, -0.2, -0.1, -0.05, 0.0, 0.25, 0.5, 0.9,
    ] {
        let mut b = base.clone();
        b.gamma_gain = ratio * kappa;
        let spec = SweepSpec {
            base: b,
            axis: "theta_pi".into(),
            grid: (0..=400).map(|i| i as f64 * 0.005).collect(),
            curves: Some(CurveSpec {
                key: "g_ma_mhz_over_2pi".into(),
                values: vec![3.5],
            }),
        };
        let result = run_sweep(&spec).expect("sweep layout is valid");
        let total = result.rows.len();
        let stable = result.rows.iter().filter(|r| r.outcome.stable).count();
        let peak = result
            .rows
            .iter()
            .filter_map(|r| r.outcome.en_am.map(|e| (r.axis_value, e)))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        let at_044 = result
            .rows
            .iter()
            .find(|r| (r.axis_value - 0.44).abs() < 1e-12)
            .and_then(|r| r.outcome.en_am);
        match (peak, at_044) {
            (Some((theta, en)), Some(e44)) => println!(
                "{ratio:>12.2}  {:>10.3}  {en:>9.6}  {theta:>14.3}  {e44:>14.6}",
                stable as f64 / total as f64,
            ),
            _ => println!(
                "{ratio:>12.2}  {:>10.3}  {:>9}  {:>14}  {:>14}",
                stable as f64 / total as f64,
                "-",
                "-",
                "-",
            ),
        }
    }
}
