//! Drift and diffusion of the linearized fluctuation dynamics, and the
//! stability classification of the drift spectrum.
//!
//! Quadrature ordering, fixed across the crate:
//! `u = (δX₁, δX₂, δY₁, δY₂, δx, δp)` for cavity, magnon, and mechanics.
//! The fluctuations obey `du = A u dt + noise`, with stationary covariance
//! `V` solving `A V + V Aᵀ + D = 0`.

use nalgebra::Matrix6;

use crate::error::{Error, Result};
use crate::model::{thermal_occupancy, SystemParams};
use crate::real::{lit, Real};
use crate::steady_state::SteadyState;

/// Drift matrix `A` of the linearized dynamics (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct DriftMatrix<T = f64> {
    pub entries: Matrix6<T>,
}

/// Diffusion matrix `D` of the input noise (rad/s).
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionMatrix<T = f64> {
    pub entries: Matrix6<T>,
}

/// Assembles the drift matrix at the given operating point.
///
/// Squeezing phase convention: with `θ` the reduced phase, the magnon
/// quadrature block reads
///
/// ```text
/// μ± = -κ_m ± 2χ cosθ,    ν± = ±Δ̃_m - 2χ sinθ,
/// ```
///
/// and the cavity rows carry the net gain `Γ` on their diagonal.
pub fn build_drift<T: Real>(params: &SystemParams<T>, ss: &SteadyState<T>) -> DriftMatrix<T> {
    let z = T::zero();
    let theta = params.theta_reduced();
    let two_chi_cos = lit::<T>(2.0) * params.chi * theta.cos();
    let two_chi_sin = lit::<T>(2.0) * params.chi * theta.sin();
    let gam = params.gamma_gain;
    let da = params.delta_a;
    let dm = ss.delta_m_eff_used;
    let g = params.g_ma;
    let mu_p = -params.kappa_m + two_chi_cos;
    let mu_m = -params.kappa_m - two_chi_cos;
    let nu_p = dm - two_chi_sin;
    let nu_m = -dm - two_chi_sin;
    let gq = ss.g_enh;
    let wb = params.omega_b;
    let gb = params.gamma_b;
    #[rustfmt::skip]
    let entries = Matrix6::new(
        gam,  da,   z,    g,    z,   z,
        -da,  gam,  -g,   z,    z,   z,
        z,    g,    mu_p, nu_p, -gq, z,
        -g,   z,    nu_m, mu_m, z,   z,
        z,    z,    z,    z,    z,   wb,
        z,    z,    z,    gq,   -wb, -gb,
    );
    DriftMatrix { entries }
}

/// Assembles the diagonal diffusion matrix from the dissipation rates and
/// the thermal occupancies of the three modes.
///
/// The mechanical position row is exactly zero: thermal force noise enters
/// through the momentum only.
pub fn build_diffusion<T: Real>(params: &SystemParams<T>) -> Result<DiffusionMatrix<T>> {
    params.validate()?;
    let t = params.temperature;
    let one = T::one();
    let two = lit::<T>(2.0);
    let n_a = thermal_occupancy(params.omega_a_abs, t)?;
    let n_m = thermal_occupancy(params.omega_m_abs, t)?;
    let n_b = thermal_occupancy(params.omega_b_abs, t)?;
    let d_a = params.kappa_a * (two * n_a + one);
    let d_m = params.kappa_m * (two * n_m + one);
    let d_b = params.gamma_b * (two * n_b + one);
    let mut entries = Matrix6::zeros();
    entries[(0, 0)] = d_a;
    entries[(1, 1)] = d_a;
    entries[(2, 2)] = d_m;
    entries[(3, 3)] = d_m;
    entries[(5, 5)] = d_b;
    Ok(DiffusionMatrix { entries })
}

/// Stability classification of a drift spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Every eigenvalue satisfies `Re λ < -margin`.
    Stable,
    /// The spectrum touches the band `|Re λ| ≤ margin`.
    Marginal,
    /// Some eigenvalue satisfies `Re λ > margin`.
    Unstable,
}

/// Spectral stability report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport<T = f64> {
    pub verdict: Verdict,
    /// Largest real part over the drift spectrum (rad/s).
    pub max_re: T,
}

impl<T: Real> StabilityReport<T> {
    pub fn is_strictly_stable(&self) -> bool {
        self.verdict == Verdict::Stable
    }
}

/// Classifies the drift spectrum against a nonnegative margin (rad/s).
pub fn is_stable<T: Real>(a: &DriftMatrix<T>, margin: T) -> Result<StabilityReport<T>> {
    if !(margin >= T::zero()) {
        return Err(Error::Config("stability margin must be nonnegative".into()));
    }
    let max_re = max_re_eigenvalue(&a.entries)?;
    let verdict = if max_re < -margin {
        Verdict::Stable
    } else if max_re > margin {
        Verdict::Unstable
    } else {
        Verdict::Marginal
    };
    Ok(StabilityReport { verdict, max_re })
}

/// Default margin used by the sweep driver: `1e-6 ω_b`.
pub fn default_margin<T: Real>(params: &SystemParams<T>) -> T {
    lit::<T>(1e-6) * params.omega_b
}

pub(crate) fn max_re_eigenvalue<T: Real>(m: &Matrix6<T>) -> Result<T> {
    let schur = nalgebra::linalg::Schur::try_new(m.clone(), T::default_epsilon(), 100_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let eigs = schur.complex_eigenvalues();
    let mut max_re = eigs[0].re;
    for e in eigs.iter().skip(1) {
        if e.re > max_re {
            max_re = e.re;
        }
    }
    Ok(max_re)
}
