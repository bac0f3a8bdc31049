//! Parameter sweeps: the full pipeline evaluated over a grid, with one
//! output curve per value of an optional second parameter.
//!
//! Rows come out curve-major (grid index varying fastest) and are computed
//! in parallel without affecting order. A point whose drift spectrum is not
//! strictly stable keeps its steady-state amplitude but reports no
//! entanglement numbers at all.

use std::io;

use rayon::prelude::*;

use crate::config::{self, GridSpec, SweepDef};
use crate::dynamics::{build_diffusion, build_drift, default_margin, is_stable};
use crate::entanglement::{entanglement_of, Pair};
use crate::error::{Error, Result};
use crate::lyapunov::solve_lyapunov;
use crate::model::SystemParams;
use crate::steady_state::solve_steady_state;

/// A sweep ready to run: resolved base parameters, the axis key, its grid
/// in interface units, and the optional curve family.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams<f64>,
    pub axis: String,
    pub grid: Vec<f64>,
    pub curves: Option<CurveSpec>,
}

/// Family parameter producing one curve per value.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSpec {
    pub key: String,
    pub values: Vec<f64>,
}

/// Pipeline outputs at one parameter point. Fields are `None` whenever the
/// stage that produces them did not run or failed; `stable` is `false` for
/// anything but a strictly stable drift.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointOutcome {
    pub ms_abs: Option<f64>,
    pub stable: bool,
    /// Largest real part of the drift spectrum (rad/s).
    pub max_re: Option<f64>,
    pub en_am: Option<f64>,
    pub en_bm: Option<f64>,
    pub eta_am: Option<f64>,
    pub eta_bm: Option<f64>,
}

/// One output row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Axis value in interface units.
    pub axis_value: f64,
    /// Curve value in interface units, when a curve family is present.
    pub curve_value: Option<f64>,
    pub outcome: PointOutcome,
}

/// Ordered result table of one sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: String,
    pub curve_key: Option<String>,
    pub rows: Vec<SweepRow>,
}

/// Runs the full pipeline at one parameter point, folding every failure
/// mode into the outcome instead of erroring.
pub fn evaluate_point(params: &SystemParams<f64>) -> PointOutcome {
    let mut out = PointOutcome::default();
    let Ok(ss) = solve_steady_state(params) else {
        return out;
    };
    out.ms_abs = Some(ss.ms_abs());
    let a = build_drift(params, &ss);
    let Ok(d) = build_diffusion(params) else {
        return out;
    };
    let margin = default_margin(params);
    let Ok(report) = is_stable(&a, margin) else {
        return out;
    };
    out.max_re = Some(report.max_re);
    if !report.is_strictly_stable() {
        return out;
    }
    out.stable = true;
    let Ok(v) = solve_lyapunov(&a, &d, margin) else {
        return out;
    };
    if let Ok(r) = entanglement_of(&v, Pair::CavityMagnon) {
        out.en_am = Some(r.e_n);
        out.eta_am = Some(r.eta);
    }
    if let Ok(r) = entanglement_of(&v, Pair::PhononMagnon) {
        out.en_bm = Some(r.e_n);
        out.eta_bm = Some(r.eta);
    }
    out
}

/// Runs the sweep. Grid and curve layout problems are configuration
/// errors; per-point physics failures land in the rows.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    if spec.grid.is_empty() {
        return Err(Error::Config("sweep grid must not be empty".into()));
    }
    if !config::is_param_key(&spec.axis) {
        return Err(Error::Config(format!(
            "sweep axis `{}` is not a parameter key",
            spec.axis
        )));
    }
    for v in &spec.grid {
        if !v.is_finite() {
            return Err(Error::Config("sweep grid values must be finite".into()));
        }
    }
    if let Some(curves) = &spec.curves {
        if !config::is_param_key(&curves.key) {
            return Err(Error::Config(format!(
                "curve key `{}` is not a parameter key",
                curves.key
            )));
        }
        if curves.key == spec.axis {
            return Err(Error::Config(
                "curve key must differ from the sweep axis".into(),
            ));
        }
        if curves.values.is_empty() {
            return Err(Error::Config("curve values must not be empty".into()));
        }
        for v in &curves.values {
            if !v.is_finite() {
                return Err(Error::Config("curve values must be finite".into()));
            }
        }
    }

    let points: Vec<(Option<f64>, f64)> = match &spec.curves {
        Some(curves) => curves
            .values
            .iter()
            .flat_map(|cv| spec.grid.iter().map(move |av| (Some(*cv), *av)))
            .collect(),
        None => spec.grid.iter().map(|av| (None, *av)).collect(),
    };

    let rows: Result<Vec<SweepRow>> = points
        .par_iter()
        .map(|(curve_value, axis_value)| {
            let mut params = spec.base.clone();
            if let (Some(cv), Some(curves)) = (curve_value, &spec.curves) {
                config::apply_param_key(&mut params, &curves.key, *cv)?;
            }
            config::apply_param_key(&mut params, &spec.axis, *axis_value)?;
            Ok(SweepRow {
                axis_value: *axis_value,
                curve_value: *curve_value,
                outcome: evaluate_point(&params),
            })
        })
        .collect();

    Ok(SweepResult {
        axis: spec.axis.clone(),
        curve_key: spec.curves.as_ref().map(|c| c.key.clone()),
        rows: rows?,
    })
}

/// Writes the result as CSV. Missing outcome fields stay empty, never zero.
pub fn write_csv<W: io::Write>(result: &SweepResult, w: &mut W) -> io::Result<()> {
    writeln!(
        w,
        "axis,axis_value,curve,curve_value,en_am,en_bm,eta_am,eta_bm,ms_abs,stable"
    )?;
    let fmt_opt = |v: Option<f64>| v.map(config::fmt_f64).unwrap_or_default();
    for row in &result.rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            result.axis,
            config::fmt_f64(row.axis_value),
            result.curve_key.as_deref().unwrap_or(""),
            fmt_opt(row.curve_value),
            fmt_opt(row.outcome.en_am),
            fmt_opt(row.outcome.en_bm),
            fmt_opt(row.outcome.eta_am),
            fmt_opt(row.outcome.eta_bm),
            fmt_opt(row.outcome.ms_abs),
            row.outcome.stable,
        )?;
    }
    Ok(())
}

/// The four bundled sweep presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Entanglement against the squeezing phase over a full turn, one curve
    /// per magnon-photon coupling.
    Fig2,
    /// Entanglement against the squeezing strength in units of ω_b, one
    /// curve per magnon-photon coupling.
    Fig3,
    /// Entanglement against temperature at three squeezing strengths, at
    /// the lower magnon-photon coupling.
    Fig4,
    /// Same as [`Preset::Fig4`] at the higher coupling.
    Fig5,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    /// Base-parameter overrides, as canonical config pairs.
    pub fn base_overrides(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Preset::Fig2 => &[("chi_mhz_over_2pi", "0.4"), ("temperature_mk", "12")],
            Preset::Fig3 => &[("theta_pi", "0.8"), ("temperature_mk", "12")],
            Preset::Fig4 => &[("theta_pi", "0.8"), ("g_ma_mhz_over_2pi", "3.5")],
            Preset::Fig5 => &[("theta_pi", "0.8"), ("g_ma_mhz_over_2pi", "4.7")],
        }
    }

    /// Axis, grid, and curve family of the preset.
    pub fn sweep_def(self) -> SweepDef {
        match self {
            Preset::Fig2 => SweepDef {
                axis: "theta_pi".into(),
                grid: GridSpec::Linspace {
                    start: 0.0,
                    stop: 2.0,
                    n: 401,
                },
                curve: Some(("g_ma_mhz_over_2pi".into(), vec![3.5, 4.7])),
            },
            Preset::Fig3 => SweepDef {
                axis: "chi_over_omega_b".into(),
                grid: GridSpec::Linspace {
                    start: 0.0,
                    stop: 0.2,
                    n: 201,
                },
                curve: Some(("g_ma_mhz_over_2pi".into(), vec![3.5, 4.7])),
            },
            Preset::Fig4 | Preset::Fig5 => SweepDef {
                axis: "temperature_mk".into(),
                grid: GridSpec::Linspace {
                    start: 0.0,
                    stop: 300.0,
                    n: 301,
                },
                curve: Some(("chi_over_omega_b".into(), vec![0.04, 0.1, 0.15])),
            },
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            "fig5" => Ok(Preset::Fig5),
            _ => Err(Error::Config(format!(
                "unknown preset `{s}` (expected fig2, fig3, fig4, or fig5)"
            ))),
        }
    }
}

/// Builds a preset sweep at an explicit net cavity gain (rad/s).
pub fn preset(p: Preset, gamma_gain: f64) -> Result<SweepSpec> {
    let mut cfg = config::ResolvedConfig::new();
    for (k, v) in p.base_overrides() {
        cfg.set(k, v)?;
    }
    let mut base = cfg.build_params()?;
    base.gamma_gain = gamma_gain;
    let def = p.sweep_def();
    Ok(SweepSpec {
        base,
        axis: def.axis,
        grid: def.grid.values(),
        curves: def.curve.map(|(key, values)| CurveSpec { key, values }),
    })
}
