//! Flat `key = value` run configuration shared by the command line and the
//! sweep presets.
//!
//! Keys use interface units: frequencies and rates as `*_mhz_over_2pi`,
//! temperature as `temperature_mk`, the squeezing phase as `theta_pi`
//! (units of π), and the drive strength as `eps_d_rad_per_s`. The squeezing
//! strength accepts either `chi_mhz_over_2pi` or, relative to the final
//! mechanical frequency, `chi_over_omega_b`; setting one clears the other.
//! [`apply_param_key`] is the single conversion into [`SystemParams`]
//! fields, used by files, `--set` overrides, sweep axes, and presets alike.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::model::SystemParams;

const MHZ: f64 = TAU * 1e6;

/// Every accepted parameter key, in the order they are applied when a
/// configuration is materialized. `omega_b_mhz_over_2pi` precedes
/// `chi_over_omega_b`, so the relative squeezing strength always refers to
/// the final mechanical frequency.
pub const PARAM_KEYS: &[&str] = &[
    "delta_a_mhz_over_2pi",
    "delta_m_eff_mhz_over_2pi",
    "omega_b_mhz_over_2pi",
    "g_ma_mhz_over_2pi",
    "g_mb_mhz_over_2pi",
    "kappa_a_mhz_over_2pi",
    "kappa_m_mhz_over_2pi",
    "gamma_b_mhz_over_2pi",
    "gamma_gain_mhz_over_2pi",
    "eps_d_rad_per_s",
    "chi_mhz_over_2pi",
    "chi_over_omega_b",
    "theta_pi",
    "temperature_mk",
    "omega_a_abs_mhz_over_2pi",
    "omega_m_abs_mhz_over_2pi",
    "omega_b_abs_mhz_over_2pi",
];

/// Default configuration, as canonical key strings. `gamma_gain_mhz_over_2pi`
/// is absent here: unless set explicitly it resolves to `-kappa_a` after all
/// other keys are known.
const DEFAULTS: &[(&str, &str)] = &[
    ("delta_a_mhz_over_2pi", "10"),
    ("delta_m_eff_mhz_over_2pi", "10"),
    ("omega_b_mhz_over_2pi", "10"),
    ("g_ma_mhz_over_2pi", "3.5"),
    ("g_mb_mhz_over_2pi", "2e-7"),
    ("kappa_a_mhz_over_2pi", "0.5"),
    ("kappa_m_mhz_over_2pi", "1"),
    ("gamma_b_mhz_over_2pi", "1e-5"),
    ("eps_d_rad_per_s", "3.5e14"),
    ("chi_mhz_over_2pi", "0.4"),
    ("theta_pi", "0.8"),
    ("temperature_mk", "12"),
    ("omega_a_abs_mhz_over_2pi", "1e4"),
    ("omega_m_abs_mhz_over_2pi", "1e4"),
    ("omega_b_abs_mhz_over_2pi", "10"),
];

/// `true` when `key` names a [`SystemParams`] field.
pub fn is_param_key(key: &str) -> bool {
    PARAM_KEYS.contains(&key)
}

/// Applies one interface-unit value onto the parameter set.
pub fn apply_param_key(params: &mut SystemParams<f64>, key: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::Config(format!("value for `{key}` must be finite")));
    }
    match key {
        "delta_a_mhz_over_2pi" => params.delta_a = value * MHZ,
        "delta_m_eff_mhz_over_2pi" => params.delta_m_eff = value * MHZ,
        "omega_b_mhz_over_2pi" => params.omega_b = value * MHZ,
        "g_ma_mhz_over_2pi" => params.g_ma = value * MHZ,
        "g_mb_mhz_over_2pi" => params.g_mb = value * MHZ,
        "kappa_a_mhz_over_2pi" => params.kappa_a = value * MHZ,
        "kappa_m_mhz_over_2pi" => params.kappa_m = value * MHZ,
        "gamma_b_mhz_over_2pi" => params.gamma_b = value * MHZ,
        "gamma_gain_mhz_over_2pi" => params.gamma_gain = value * MHZ,
        "eps_d_rad_per_s" => params.eps_d = value,
        "chi_mhz_over_2pi" => params.chi = value * MHZ,
        "chi_over_omega_b" => params.chi = value * params.omega_b,
        "theta_pi" => params.theta = value * PI,
        "temperature_mk" => params.temperature = value * 1e-3,
        "omega_a_abs_mhz_over_2pi" => params.omega_a_abs = value * MHZ,
        "omega_m_abs_mhz_over_2pi" => params.omega_m_abs = value * MHZ,
        "omega_b_abs_mhz_over_2pi" => params.omega_b_abs = value * MHZ,
        _ => return Err(Error::Config(format!("unknown parameter key `{key}`"))),
    }
    Ok(())
}

/// Formats with 17 significant digits, enough for an exact `f64` round trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A sweep grid: either an inclusive linear space or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Linspace { start: f64, stop: f64, n: usize },
    Explicit(Vec<f64>),
}

impl GridSpec {
    /// Parses `linspace:START:STOP:N` or a comma-separated list.
    pub fn parse(raw: &str) -> Result<Self> {
        let raw = raw.trim();
        if let Some(rest) = raw.strip_prefix("linspace:") {
            let parts: Vec<&str> = rest.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::Config(format!(
                    "grid `{raw}` must be linspace:START:STOP:N"
                )));
            }
            let start = parse_f64(parts[0], "grid start")?;
            let stop = parse_f64(parts[1], "grid stop")?;
            let n: usize = parts[2].trim().parse().map_err(|_| {
                Error::Config(format!("grid count `{}` is not an integer", parts[2]))
            })?;
            if n == 0 {
                return Err(Error::Config("grid count must be at least 1".into()));
            }
            Ok(GridSpec::Linspace { start, stop, n })
        } else {
            let values = parse_f64_list(raw, "grid")?;
            Ok(GridSpec::Explicit(values))
        }
    }

    /// Materializes the grid values in order.
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Linspace { start, stop, n } => {
                if *n == 1 {
                    return vec![*start];
                }
                let step = (stop - start) / ((n - 1) as f64);
                (0..*n).map(|i| start + (i as f64) * step).collect()
            }
            GridSpec::Explicit(values) => values.clone(),
        }
    }

    /// Canonical config-value string; parsing it back reproduces the same
    /// grid values bit for bit.
    pub fn canonical(&self) -> String {
        match self {
            GridSpec::Linspace { start, stop, n } => {
                format!("linspace:{}:{}:{n}", fmt_f64(*start), fmt_f64(*stop))
            }
            GridSpec::Explicit(values) => values
                .iter()
                .map(|v| fmt_f64(*v))
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

/// A sweep request in interface units.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepDef {
    /// Parameter key swept along the grid.
    pub axis: String,
    pub grid: GridSpec,
    /// Optional family parameter: one output curve per value.
    pub curve: Option<(String, Vec<f64>)>,
}

/// Accumulated configuration state: canonical defaults overlaid with
/// explicit settings, applied onto [`SystemParams`] in registry order only
/// when [`ResolvedConfig::build_params`] is called. Keeping raw strings
/// makes an echoed configuration reproduce the identical parameter set.
#[derive(Debug, Clone)]
pub struct ResolvedConfig {
    values: BTreeMap<String, String>,
    sweep_axis: Option<String>,
    sweep_grid: Option<GridSpec>,
    sweep_curve_key: Option<String>,
    sweep_curve_values: Option<Vec<f64>>,
}

impl Default for ResolvedConfig {
    fn default() -> Self {
        Self::new()
    }
}

impl ResolvedConfig {
    pub fn new() -> Self {
        let mut values = BTreeMap::new();
        for (k, v) in DEFAULTS {
            values.insert((*k).to_string(), (*v).to_string());
        }
        Self {
            values,
            sweep_axis: None,
            sweep_grid: None,
            sweep_curve_key: None,
            sweep_curve_values: None,
        }
    }

    /// Sets one key from its raw string form. Unknown keys and malformed
    /// values are configuration errors.
    pub fn set(&mut self, key: &str, raw: &str) -> Result<()> {
        let key = key.trim();
        let raw = raw.trim();
        match key {
            "sweep_axis" => {
                if !is_param_key(raw) {
                    return Err(Error::Config(format!(
                        "sweep_axis `{raw}` is not a parameter key"
                    )));
                }
                self.sweep_axis = Some(raw.to_string());
            }
            "sweep_grid" => self.sweep_grid = Some(GridSpec::parse(raw)?),
            "sweep_curve_key" => {
                if !is_param_key(raw) {
                    return Err(Error::Config(format!(
                        "sweep_curve_key `{raw}` is not a parameter key"
                    )));
                }
                self.sweep_curve_key = Some(raw.to_string());
            }
            "sweep_curve_values" => {
                self.sweep_curve_values = Some(parse_f64_list(raw, "sweep_curve_values")?);
            }
            _ if is_param_key(key) => {
                parse_f64(raw, key)?;
                if key == "chi_mhz_over_2pi" {
                    self.values.remove("chi_over_omega_b");
                } else if key == "chi_over_omega_b" {
                    self.values.remove("chi_mhz_over_2pi");
                }
                self.values.insert(key.to_string(), raw.to_string());
            }
            _ => return Err(Error::Config(format!("unknown configuration key `{key}`"))),
        }
        Ok(())
    }

    /// Applies a whole config file: one `key = value` per line, `#` lines
    /// and blank lines ignored.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", idx + 1))
            })?;
            self.set(key, value)
                .map_err(|e| Error::Config(format!("line {}: {e}", idx + 1)))?;
        }
        Ok(())
    }

    /// `true` once `gamma_gain_mhz_over_2pi` has been set explicitly.
    pub fn gamma_gain_set(&self) -> bool {
        self.values.contains_key("gamma_gain_mhz_over_2pi")
    }

    /// Fills the gain default `-kappa_a` if it was never set.
    pub fn resolve_gamma_default(&mut self) {
        if !self.gamma_gain_set() {
            let kappa: f64 = self
                .values
                .get("kappa_a_mhz_over_2pi")
                .and_then(|v| v.trim().parse().ok())
                .unwrap_or(0.5);
            self.values
                .insert("gamma_gain_mhz_over_2pi".into(), fmt_f64(-kappa));
        }
    }

    /// Materializes the parameter set, applying keys in registry order.
    pub fn build_params(&self) -> Result<SystemParams<f64>> {
        let mut params = SystemParams::default();
        for key in PARAM_KEYS {
            if let Some(raw) = self.values.get(*key) {
                let value = parse_f64(raw, key)?;
                apply_param_key(&mut params, key, value)?;
            }
        }
        Ok(params)
    }

    /// The sweep request, if the sweep keys are present and consistent.
    pub fn sweep_def(&self) -> Result<Option<SweepDef>> {
        match (&self.sweep_axis, &self.sweep_grid) {
            (None, None) => {
                if self.sweep_curve_key.is_some() || self.sweep_curve_values.is_some() {
                    return Err(Error::Config(
                        "sweep_curve_* keys require sweep_axis and sweep_grid".into(),
                    ));
                }
                Ok(None)
            }
            (Some(axis), Some(grid)) => {
                let curve = match (&self.sweep_curve_key, &self.sweep_curve_values) {
                    (None, None) => None,
                    (Some(k), Some(v)) => {
                        if k == axis {
                            return Err(Error::Config(
                                "sweep_curve_key must differ from sweep_axis".into(),
                            ));
                        }
                        Some((k.clone(), v.clone()))
                    }
                    _ => {
                        return Err(Error::Config(
                            "sweep_curve_key and sweep_curve_values must be set together".into(),
                        ))
                    }
                };
                Ok(Some(SweepDef {
                    axis: axis.clone(),
                    grid: grid.clone(),
                    curve,
                }))
            }
            _ => Err(Error::Config(
                "sweep_axis and sweep_grid must be set together".into(),
            )),
        }
    }

    /// Every resolved key as canonical strings: feeding these back through
    /// [`ResolvedConfig::set`] reproduces this configuration exactly.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut out = self.values.clone();
        if let Some(axis) = &self.sweep_axis {
            out.insert("sweep_axis".into(), axis.clone());
        }
        if let Some(grid) = &self.sweep_grid {
            out.insert("sweep_grid".into(), grid.canonical());
        }
        if let Some(k) = &self.sweep_curve_key {
            out.insert("sweep_curve_key".into(), k.clone());
        }
        if let Some(v) = &self.sweep_curve_values {
            out.insert(
                "sweep_curve_values".into(),
                v.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(","),
            );
        }
        out
    }
}

fn parse_f64(raw: &str, what: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("value `{raw}` for {what} is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Config(format!("value for {what} must be finite")));
    }
    Ok(v)
}

fn parse_f64_list(raw: &str, what: &str) -> Result<Vec<f64>> {
    let values: Result<Vec<f64>> = raw.split(',').map(|p| parse_f64(p, what)).collect();
    let values = values?;
    if values.is_empty() {
        return Err(Error::Config(format!("{what} must not be empty")));
    }
    Ok(values)
}
