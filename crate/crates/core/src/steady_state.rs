//! Classical fixed point of the driven system.
//!
//! Eliminating the cavity amplitude from the coupled fixed-point equations
//! gives the steady magnon amplitude
//!
//! ```text
//! m_s = eps_d (iΔ_a - Γ) / (g_ma² + (iΔ_a - Γ) β),
//! β   = (κ_m - 2χ cosθ) + i (Δ̃_m + 2χ sinθ),
//! ```
//!
//! with Γ the net cavity gain rate. The static mechanical displacement and
//! the drive-enhanced magnomechanical coupling follow from `|m_s|`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::real::{lit, Real};

/// Classical operating point of the linearization.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState<T = f64> {
    /// Steady magnon amplitude (dimensionless).
    pub m_s: Complex<T>,
    /// Static mechanical displacement (dimensionless quadrature units).
    pub q_s: T,
    /// Drive-enhanced magnomechanical coupling `√2 g_mb |m_s|` (rad/s).
    pub g_enh: T,
    /// Squeezing-dressed magnon response `β` (rad/s).
    pub beta: Complex<T>,
    /// The magnon detuning the solution was evaluated at (rad/s).
    pub delta_m_eff_used: T,
}

impl<T: Real> SteadyState<T> {
    /// `|m_s|`.
    pub fn ms_abs(&self) -> T {
        self.m_s.norm_sqr().sqrt()
    }
}

/// Squeezing-dressed magnon response at the reduced phase.
pub(crate) fn beta_of<T: Real>(params: &SystemParams<T>) -> Complex<T> {
    let theta = params.theta_reduced();
    let two_chi = lit::<T>(2.0) * params.chi;
    Complex::new(
        params.kappa_m - two_chi * theta.cos(),
        params.delta_m_eff + two_chi * theta.sin(),
    )
}

/// Solves the classical fixed point at the given `delta_m_eff`.
///
/// Fails when the eliminated linear system is singular, i.e. when
/// `g_ma² + (iΔ_a - Γ)β` vanishes to within relative roundoff.
pub fn solve_steady_state<T: Real>(params: &SystemParams<T>) -> Result<SteadyState<T>> {
    params.validate()?;
    if params.omega_b <= T::zero() {
        return Err(Error::Domain(
            "omega_b must be positive to define the static displacement".into(),
        ));
    }
    let beta = beta_of(params);
    // Cavity response iΔ_a - Γ.
    let a_resp = Complex::new(-params.gamma_gain, params.delta_a);
    let g2 = params.g_ma * params.g_ma;
    let denom = Complex::new(g2, T::zero()) + a_resp * beta;
    let scale = g2 + a_resp.norm_sqr().sqrt() * beta.norm_sqr().sqrt();
    if denom.norm_sqr().sqrt() <= lit::<T>(1e-14) * scale || scale == T::zero() {
        return Err(Error::SingularSteadyState(format!(
            "g_ma² + (iΔ_a - Γ)β vanishes (|denom| = {:e}, scale = {:e})",
            denom.norm_sqr().sqrt().to_f64().unwrap_or(f64::NAN),
            scale.to_f64().unwrap_or(f64::NAN),
        )));
    }
    let m_s = a_resp * params.eps_d / denom;
    let ms_abs2 = m_s.norm_sqr();
    let q_s = -params.g_mb * ms_abs2 / params.omega_b;
    let g_enh = lit::<T>(2.0).sqrt() * params.g_mb * ms_abs2.sqrt();
    Ok(SteadyState {
        m_s,
        q_s,
        g_enh,
        beta,
        delta_m_eff_used: params.delta_m_eff,
    })
}

/// Solves the fixed point with the magnon detuning determined
/// self-consistently from the displacement it causes:
/// `Δ̃_m = Δ_m + g_mb q_s(Δ̃_m)`.
///
/// Damped fixed-point iteration; `tol` is the absolute detuning residual in
/// rad/s and must sit above the floating-point granularity of the detuning
/// itself (one ulp of `Δ̃_m`), or the iteration can two-cycle forever one
/// ulp from the fixed point. With `g_mb = 0` (or an undriven system) the
/// first iterate is already exact.
pub fn solve_steady_state_selfconsistent<T: Real>(
    params: &SystemParams<T>,
    delta_m_bare: T,
    tol: T,
    max_iter: usize,
) -> Result<SteadyState<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Config("tol must be positive".into()));
    }
    if max_iter == 0 {
        return Err(Error::Config("max_iter must be at least 1".into()));
    }
    let damping = lit::<T>(0.5);
    let mut p = params.clone();
    p.delta_m_eff = delta_m_bare;
    let mut residual = T::zero();
    for _ in 0..max_iter {
        let ss = solve_steady_state(&p)?;
        let target = delta_m_bare + p.g_mb * ss.q_s;
        residual = (p.delta_m_eff - target).abs();
        if residual < tol {
            return Ok(ss);
        }
        p.delta_m_eff += damping * (target - p.delta_m_eff);
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        residual: residual.to_f64().unwrap_or(f64::NAN),
    })
}
