//! Physical parameters, unit conventions, and thermal noise quantities.
//!
//! Conventions used throughout the crate:
//! - rates, detunings, and couplings are angular frequencies in rad/s,
//! - temperatures are in kelvin,
//! - quadratures are normalized so the vacuum variance is 1/2,
//! - detunings are mode frequency minus drive frequency.

use crate::error::{Error, Result};
use crate::real::{finite, lit, Real};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;

/// Parameters of one system instance.
///
/// `gamma_gain` is the net cavity amplification rate: the cavity quadrature
/// decay enters the dynamics as `gamma_gain` directly, so `-kappa_a` is a
/// passive cavity and values above it describe partial gain compensation.
/// The `omega_*_abs` fields are the absolute mode frequencies that set the
/// thermal occupancies; they are independent of the (much smaller) detunings.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams<T = f64> {
    /// Cavity-drive detuning (rad/s).
    pub delta_a: T,
    /// Effective magnon-drive detuning, including the static mechanical
    /// shift (rad/s).
    pub delta_m_eff: T,
    /// Mechanical resonance frequency (rad/s).
    pub omega_b: T,
    /// Magnon-photon beam-splitter coupling (rad/s).
    pub g_ma: T,
    /// Bare magnomechanical coupling (rad/s).
    pub g_mb: T,
    /// Cavity dissipation rate (rad/s).
    pub kappa_a: T,
    /// Magnon dissipation rate (rad/s).
    pub kappa_m: T,
    /// Mechanical damping rate (rad/s).
    pub gamma_b: T,
    /// Net signed cavity gain rate; `-kappa_a` means no gain (rad/s).
    pub gamma_gain: T,
    /// Magnon drive strength (rad/s).
    pub eps_d: T,
    /// Magnon squeezing strength (rad/s).
    pub chi: T,
    /// Magnon squeezing phase (rad); consumers reduce it to [0, 2π).
    pub theta: T,
    /// Bath temperature (K), shared by all three modes.
    pub temperature: T,
    /// Absolute cavity frequency for its thermal occupancy (rad/s).
    pub omega_a_abs: T,
    /// Absolute magnon frequency for its thermal occupancy (rad/s).
    pub omega_m_abs: T,
    /// Absolute mechanical frequency for its thermal occupancy (rad/s).
    pub omega_b_abs: T,
}

impl<T: Real> Default for SystemParams<T> {
    /// Reference operating point: a resonant red-detuned drive
    /// (Δ_a = Δ̃_m = ω_b = 2π·10 MHz), kilohertz-scale dissipation
    /// hierarchy, a passive cavity, and a 12 mK bath.
    fn default() -> Self {
        let tau = T::two_pi();
        Self {
            delta_a: tau * lit(10e6),
            delta_m_eff: tau * lit(10e6),
            omega_b: tau * lit(10e6),
            g_ma: tau * lit(3.5e6),
            g_mb: tau * lit(0.2),
            kappa_a: tau * lit(0.5e6),
            kappa_m: tau * lit(1.0e6),
            gamma_b: tau * lit(10.0),
            gamma_gain: -(tau * lit(0.5e6)),
            eps_d: lit(3.5e14),
            chi: tau * lit(0.4e6),
            theta: lit::<T>(0.8) * T::pi(),
            temperature: lit(12e-3),
            omega_a_abs: tau * lit(10e9),
            omega_m_abs: tau * lit(10e9),
            omega_b_abs: tau * lit(10e6),
        }
    }
}

impl<T: Real> SystemParams<T> {
    /// Squeezing phase reduced to [0, 2π).
    pub fn theta_reduced(&self) -> T {
        let tau = T::two_pi();
        let k = (self.theta / tau).floor();
        let th = self.theta - k * tau;
        // Guard against roundoff pushing the result onto the upper edge.
        if th >= tau {
            th - tau
        } else {
            th
        }
    }

    /// Checks sign and finiteness constraints on every field.
    pub fn validate(&self) -> Result<()> {
        let all = [
            ("delta_a", self.delta_a),
            ("delta_m_eff", self.delta_m_eff),
            ("omega_b", self.omega_b),
            ("g_ma", self.g_ma),
            ("g_mb", self.g_mb),
            ("kappa_a", self.kappa_a),
            ("kappa_m", self.kappa_m),
            ("gamma_b", self.gamma_b),
            ("gamma_gain", self.gamma_gain),
            ("eps_d", self.eps_d),
            ("chi", self.chi),
            ("theta", self.theta),
            ("temperature", self.temperature),
            ("omega_a_abs", self.omega_a_abs),
            ("omega_m_abs", self.omega_m_abs),
            ("omega_b_abs", self.omega_b_abs),
        ];
        for (name, value) in all {
            if !finite(value) {
                return Err(Error::Domain(format!("{name} must be finite")));
            }
        }
        let nonnegative = [
            ("omega_b", self.omega_b),
            ("g_ma", self.g_ma),
            ("g_mb", self.g_mb),
            ("kappa_a", self.kappa_a),
            ("kappa_m", self.kappa_m),
            ("gamma_b", self.gamma_b),
            ("eps_d", self.eps_d),
            ("chi", self.chi),
            ("temperature", self.temperature),
        ];
        for (name, value) in nonnegative {
            if value < T::zero() {
                return Err(Error::Domain(format!("{name} must be nonnegative")));
            }
        }
        let positive = [
            ("omega_a_abs", self.omega_a_abs),
            ("omega_m_abs", self.omega_m_abs),
            ("omega_b_abs", self.omega_b_abs),
        ];
        for (name, value) in positive {
            if value <= T::zero() {
                return Err(Error::Domain(format!("{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Geometry and drive of a uniformly magnetized sphere, used to convert a
/// drive field amplitude into the Rabi rate `eps_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DriveSpec<T = f64> {
    /// Drive magnetic field amplitude (T).
    pub b0: T,
    /// Sphere diameter (m).
    pub sphere_diameter: T,
    /// Spin density (m⁻³).
    pub spin_density: T,
    /// Gyromagnetic ratio (rad/s per T).
    pub gyromagnetic_ratio: T,
    /// Static bias field setting the magnon frequency (T).
    pub bias_field: T,
}

impl<T: Real> Default for DriveSpec<T> {
    /// A 250 µm yttrium-iron-garnet sphere (spin density 4.22e27 m⁻³,
    /// gyromagnetic ratio 2π·28 GHz/T) biased to a 10 GHz magnon mode,
    /// driven at the amplitude that yields `eps_d = 3.5e14` rad/s.
    fn default() -> Self {
        Self {
            b0: lit(1.915312240388973e-5),
            sphere_diameter: lit(250e-6),
            spin_density: lit(4.22e27),
            gyromagnetic_ratio: T::two_pi() * lit(28e9),
            bias_field: lit(0.35714285714285715),
        }
    }
}

impl<T: Real> DriveSpec<T> {
    /// Total spin number `N = ρ · (π/6) d³`.
    pub fn total_spins(&self) -> T {
        let d = self.sphere_diameter;
        self.spin_density * T::pi() / lit(6.0) * d * d * d
    }
}

/// Mean thermal occupancy `n̄(ω, T) = 1 / (exp(ħω / k_B T) - 1)`.
///
/// `T = 0` returns exactly zero. For `ħω/k_B T < 1e-5` the denominator is
/// evaluated by series to avoid cancellation in `exp(x) - 1`.
pub fn thermal_occupancy<T: Real>(omega_abs: T, temperature: T) -> Result<T> {
    if !finite(omega_abs) || !finite(temperature) {
        return Err(Error::Domain("occupancy inputs must be finite".into()));
    }
    if omega_abs <= T::zero() {
        return Err(Error::Domain("omega_abs must be positive".into()));
    }
    if temperature < T::zero() {
        return Err(Error::Domain("temperature must be nonnegative".into()));
    }
    if temperature == T::zero() {
        return Ok(T::zero());
    }
    let x = lit::<T>(HBAR) * omega_abs / (lit::<T>(K_B) * temperature);
    let expm1 = if x < lit(1e-5) {
        x * (T::one() + x / lit(2.0) + x * x / lit(6.0))
    } else {
        x.exp() - T::one()
    };
    Ok(T::one() / expm1)
}

/// Rabi drive rate of a uniformly driven sphere:
/// `eps_d = (√5 / 4) γ √N B₀`.
pub fn rabi_from_drive<T: Real>(spec: &DriveSpec<T>) -> Result<T> {
    for (name, value) in [
        ("b0", spec.b0),
        ("sphere_diameter", spec.sphere_diameter),
        ("spin_density", spec.spin_density),
        ("gyromagnetic_ratio", spec.gyromagnetic_ratio),
    ] {
        if !finite(value) {
            return Err(Error::Domain(format!("{name} must be finite")));
        }
    }
    if spec.b0 < T::zero() {
        return Err(Error::Domain("b0 must be nonnegative".into()));
    }
    if spec.sphere_diameter <= T::zero()
        || spec.spin_density <= T::zero()
        || spec.gyromagnetic_ratio <= T::zero()
    {
        return Err(Error::Domain(
            "sphere_diameter, spin_density, gyromagnetic_ratio must be positive".into(),
        ));
    }
    let n = spec.total_spins();
    Ok(lit::<T>(5.0).sqrt() / lit(4.0) * spec.gyromagnetic_ratio * n.sqrt() * spec.b0)
}

/// Magnon frequency from the bias field: `ω_m = γ H`.
pub fn magnon_frequency<T: Real>(gyromagnetic_ratio: T, bias_field: T) -> Result<T> {
    if !finite(gyromagnetic_ratio) || !finite(bias_field) {
        return Err(Error::Domain(
            "magnon frequency inputs must be finite".into(),
        ));
    }
    if gyromagnetic_ratio <= T::zero() {
        return Err(Error::Domain("gyromagnetic_ratio must be positive".into()));
    }
    if bias_field < T::zero() {
        return Err(Error::Domain("bias_field must be nonnegative".into()));
    }
    Ok(gyromagnetic_ratio * bias_field)
}
