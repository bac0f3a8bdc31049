//! Command-line front end of the steady-state pipeline.
//!
//! Configuration flows one way: canonical defaults, then `--config` file
//! lines, then `--set` overrides in order, then (for `figure`) the
//! mandatory gain flag; the net cavity gain falls back to `-kappa_a` if
//! never set. Exit codes: 0 on success, 1 for physics or numerical
//! failures, 2 for configuration and usage errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use magnomech::config::{fmt_f64, ResolvedConfig};
use magnomech::dynamics::{build_diffusion, build_drift, default_margin, is_stable};
use magnomech::entanglement::{entanglement_of, Pair};
use magnomech::error::{Error, Result};
use magnomech::lyapunov::solve_lyapunov;
use magnomech::steady_state::solve_steady_state;
use magnomech::sweep::{run_sweep, write_csv, CurveSpec, Preset, SweepResult, SweepSpec};

#[derive(Parser)]
#[command(
    name = "magnomech",
    about = "Steady-state entanglement of a driven cavity magnomechanical system",
    version
)]
struct Cli {
    /// Config file with one `key = value` per line (`#` comments).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override one config key, e.g. --set theta_pi=0.44. Repeatable;
    /// later settings win.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Write the result here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format for sweep and figure result tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the classical fixed point as JSON.
    Steady,
    /// Print the drift and diffusion matrices as CSV blocks.
    Matrix,
    /// Print the stationary covariance matrix as CSV.
    Cm,
    /// Evaluate both entanglement pairs at one parameter point (JSON).
    Point,
    /// Run the sweep configured via sweep_axis / sweep_grid keys.
    Sweep,
    /// Run a bundled preset sweep at an explicit net cavity gain.
    Figure {
        /// Preset name: fig2, fig3, fig4, or fig5.
        preset: String,
        /// Net cavity gain in MHz/2π; -0.5 is the passive cavity.
        #[arg(long, allow_hyphen_values = true)]
        gamma_gain_mhz_over_2pi: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| run(&cli)),
        Ok(None) => run(&cli),
        Err(e) => Err(e),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

/// Honors MAGNOMECH_THREADS for the sweep parallelism.
fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(raw) = std::env::var("MAGNOMECH_THREADS") else {
        return Ok(None);
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("MAGNOMECH_THREADS `{raw}` is not a thread count")))?;
    if n == 0 {
        return Err(Error::Config("MAGNOMECH_THREADS must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::Config(format!("cannot build thread pool: {e}")))?;
    Ok(Some(pool))
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Steady => steady_cmd(cli),
        Cmd::Matrix => matrix_cmd(cli),
        Cmd::Cm => cm_cmd(cli),
        Cmd::Point => point_cmd(cli),
        Cmd::Sweep => {
            let cfg = resolve_config(cli)?;
            sweep_cmd(cli, cfg)
        }
        Cmd::Figure {
            preset,
            gamma_gain_mhz_over_2pi,
        } => {
            let p: Preset = preset.parse()?;
            let mut cfg = ResolvedConfig::new();
            for (k, v) in p.base_overrides() {
                cfg.set(k, v)?;
            }
            apply_cli_overrides(cli, &mut cfg)?;
            if cfg.sweep_def()?.is_some() {
                return Err(Error::Config(
                    "figure presets define their own sweep; remove sweep_* keys".into(),
                ));
            }
            cfg.set(
                "gamma_gain_mhz_over_2pi",
                &fmt_f64(*gamma_gain_mhz_over_2pi),
            )?;
            cfg.resolve_gamma_default();
            let def = p.sweep_def();
            cfg.set("sweep_axis", &def.axis)?;
            cfg.set("sweep_grid", &def.grid.canonical())?;
            if let Some((key, values)) = &def.curve {
                cfg.set("sweep_curve_key", key)?;
                let joined = values
                    .iter()
                    .map(|v| fmt_f64(*v))
                    .collect::<Vec<_>>()
                    .join(",");
                cfg.set("sweep_curve_values", &joined)?;
            }
            sweep_cmd(cli, cfg)
        }
    }
}

/// Defaults, then the config file, then `--set` pairs in order.
fn apply_cli_overrides(cli: &Cli, cfg: &mut ResolvedConfig) -> Result<()> {
    if let Some(path) = &cli.config {
        let text = fs::read_to_string(path).map_err(|e| {
            Error::Config(format!("cannot read config file {}: {e}", path.display()))
        })?;
        cfg.apply_text(&text)?;
    }
    for pair in &cli.set {
        let (key, value) = pair
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set `{pair}` must look like KEY=VALUE")))?;
        cfg.set(key, value)?;
    }
    Ok(())
}

fn resolve_config(cli: &Cli) -> Result<ResolvedConfig> {
    let mut cfg = ResolvedConfig::new();
    apply_cli_overrides(cli, &mut cfg)?;
    cfg.resolve_gamma_default();
    Ok(cfg)
}

fn emit(cli: &Cli, content: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, content).map_err(|e| {
            Error::Config(format!("cannot write output file {}: {e}", path.display()))
        }),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            match lock.write_all(content.as_bytes()) {
                // A closed pipe (e.g. `| head`) is not our failure.
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                other => {
                    other.map_err(|e| Error::Numerical(format!("cannot write to stdout: {e}")))
                }
            }
        }
    }
}

fn steady_cmd(cli: &Cli) -> Result<()> {
    let cfg = resolve_config(cli)?;
    let params = cfg.build_params()?;
    let ss = solve_steady_state(&params)?;
    let mhz = std::f64::consts::TAU * 1e6;
    let value = serde_json::json!({
        "m_s_re": ss.m_s.re,
        "m_s_im": ss.m_s.im,
        "ms_abs": ss.ms_abs(),
        "q_s": ss.q_s,
        "g_enh_mhz_over_2pi": ss.g_enh / mhz,
    });
    emit(
        cli,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&value).expect("serializable")
        ),
    )
}

fn matrix_cmd(cli: &Cli) -> Result<()> {
    let cfg = resolve_config(cli)?;
    let params = cfg.build_params()?;
    let ss = solve_steady_state(&params)?;
    let a = build_drift(&params, &ss);
    let d = build_diffusion(&params)?;
    let mut out = String::from("A\n");
    push_matrix(&mut out, &a.entries);
    out.push_str("D\n");
    push_matrix(&mut out, &d.entries);
    emit(cli, &out)
}

fn push_matrix(out: &mut String, m: &nalgebra::Matrix6<f64>) {
    for r in 0..6 {
        let row: Vec<String> = (0..6).map(|c| fmt_f64(m[(r, c)])).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
}

fn cm_cmd(cli: &Cli) -> Result<()> {
    let cfg = resolve_config(cli)?;
    let params = cfg.build_params()?;
    let ss = solve_steady_state(&params)?;
    let a = build_drift(&params, &ss);
    let d = build_diffusion(&params)?;
    let v = solve_lyapunov(&a, &d, default_margin(&params))?;
    let mut out = String::from("dX1,dX2,dY1,dY2,dx,dp\n");
    push_matrix(&mut out, &v.entries);
    emit(cli, &out)
}

fn point_cmd(cli: &Cli) -> Result<()> {
    let cfg = resolve_config(cli)?;
    let params = cfg.build_params()?;
    let ss = solve_steady_state(&params)?;
    let a = build_drift(&params, &ss);
    let d = build_diffusion(&params)?;
    let margin = default_margin(&params);
    let report = is_stable(&a, margin)?;
    if !report.is_strictly_stable() {
        return Err(Error::NotStable {
            max_re: report.max_re,
            margin,
        });
    }
    let v = solve_lyapunov(&a, &d, margin)?;
    let am = entanglement_of(&v, Pair::CavityMagnon)?;
    let bm = entanglement_of(&v, Pair::PhononMagnon)?;
    let value = serde_json::json!({
        "en_am": am.e_n,
        "en_bm": bm.e_n,
        "eta_am": am.eta,
        "eta_bm": bm.eta,
        "ms_abs": ss.ms_abs(),
        "max_re_rad_per_s": report.max_re,
        "stable": true,
    });
    emit(
        cli,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&value).expect("serializable")
        ),
    )
}

fn sweep_cmd(cli: &Cli, cfg: ResolvedConfig) -> Result<()> {
    let def = cfg
        .sweep_def()?
        .ok_or_else(|| Error::Config("sweep requires sweep_axis and sweep_grid keys".into()))?;
    let spec = SweepSpec {
        base: cfg.build_params()?,
        axis: def.axis.clone(),
        grid: def.grid.values(),
        curves: def.curve.as_ref().map(|(key, values)| CurveSpec {
            key: key.clone(),
            values: values.clone(),
        }),
    };
    let result = run_sweep(&spec)?;
    match cli.format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&result, &mut buf)
                .map_err(|e| Error::Numerical(format!("cannot format table: {e}")))?;
            emit(cli, &String::from_utf8(buf).expect("csv output is utf-8"))
        }
        Format::Json => {
            let value = json_result(&cfg, &result);
            emit(
                cli,
                &format!(
                    "{}\n",
                    serde_json::to_string_pretty(&value).expect("serializable")
                ),
            )
        }
    }
}

/// JSON form: the full resolved config under `meta` (reusable as a config
/// file to reproduce the run), the ordered rows under `rows`.
fn json_result(cfg: &ResolvedConfig, result: &SweepResult) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = result
        .rows
        .iter()
        .map(|row| {
            serde_json::json!({
                "axis": result.axis,
                "axis_value": row.axis_value,
                "curve": result.curve_key,
                "curve_value": row.curve_value,
                "en_am": row.outcome.en_am,
                "en_bm": row.outcome.en_bm,
                "eta_am": row.outcome.eta_am,
                "eta_bm": row.outcome.eta_bm,
                "ms_abs": row.outcome.ms_abs,
                "stable": row.outcome.stable,
            })
        })
        .collect();
    serde_json::json!({
        "meta": cfg.echo(),
        "rows": rows,
    })
}
