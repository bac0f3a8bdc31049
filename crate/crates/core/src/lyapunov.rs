//! Stationary covariance of the linear dynamics.
//!
//! Two independent routes to `V`:
//! - [`solve_lyapunov`]: direct solution of `A V + V Aᵀ + D = 0` via the
//!   36×36 Kronecker system `(I ⊗ A + A ⊗ I) vec(V) = -vec(D)`,
//! - [`integrate_covariance`]: fixed-step RK4 on `V̇ = A V + V Aᵀ + D`,
//!   which relaxes to the same matrix when `A` is strictly stable.

use nalgebra::{DMatrix, DVector, Matrix6};

use crate::dynamics::{is_stable, DiffusionMatrix, DriftMatrix};
use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Stationary covariance matrix `V` in the crate's quadrature ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix<T = f64> {
    pub entries: Matrix6<T>,
}

/// Solves `A V + V Aᵀ + D = 0` for a strictly stable `A`.
///
/// The solution is symmetrized and its residual is checked against
/// `1e-10 · max(‖D‖_F, ‖A‖_F ‖V‖_F)`; a larger residual reports a
/// numerical failure rather than returning a bad covariance.
pub fn solve_lyapunov<T: Real>(
    a: &DriftMatrix<T>,
    d: &DiffusionMatrix<T>,
    margin: T,
) -> Result<CovarianceMatrix<T>> {
    let report = is_stable(a, margin)?;
    if !report.is_strictly_stable() {
        return Err(Error::NotStable {
            max_re: report.max_re.to_f64().unwrap_or(f64::NAN),
            margin: margin.to_f64().unwrap_or(f64::NAN),
        });
    }
    check_symmetric_psd(&d.entries)?;

    // (I ⊗ A + A ⊗ I) vec(V) = -vec(D), column-major vec.
    let am = &a.entries;
    let mut m = DMatrix::<T>::zeros(36, 36);
    for c in 0..6 {
        for r in 0..6 {
            let row = c * 6 + r;
            for k in 0..6 {
                m[(row, c * 6 + k)] += am[(r, k)];
                m[(row, k * 6 + r)] += am[(c, k)];
            }
        }
    }
    let mut rhs = DVector::<T>::zeros(36);
    for c in 0..6 {
        for r in 0..6 {
            rhs[c * 6 + r] = -d.entries[(r, c)];
        }
    }
    let lu = nalgebra::linalg::LU::new(m);
    let x = lu
        .solve(&rhs)
        .ok_or_else(|| Error::Numerical("Kronecker Lyapunov system is singular".into()))?;
    let mut v = Matrix6::<T>::zeros();
    for c in 0..6 {
        for r in 0..6 {
            v[(r, c)] = x[c * 6 + r];
        }
    }
    v = symmetrized(&v);

    let residual = (am * v + v * am.transpose() + d.entries).norm();
    let scale = d.entries.norm().max(am.norm() * v.norm());
    if residual > lit::<T>(1e-10) * scale {
        return Err(Error::Numerical(format!(
            "Lyapunov residual {:e} exceeds 1e-10 of scale {:e}",
            residual.to_f64().unwrap_or(f64::NAN),
            scale.to_f64().unwrap_or(f64::NAN),
        )));
    }
    Ok(CovarianceMatrix { entries: v })
}

/// Integrates `V̇ = A V + V Aᵀ + D` from `v0` to `t_end` with fixed-step
/// RK4, re-symmetrizing after every step.
///
/// Requires `0 < dt ≤ 0.1 / ‖A‖₂` and `t_end ≥ dt`. See [`default_step`]
/// and [`default_horizon`] for step and horizon choices that relax a stable
/// system to its stationary covariance.
pub fn integrate_covariance<T: Real>(
    a: &DriftMatrix<T>,
    d: &DiffusionMatrix<T>,
    v0: &CovarianceMatrix<T>,
    dt: T,
    t_end: T,
) -> Result<CovarianceMatrix<T>> {
    if !(dt > T::zero()) {
        return Err(Error::Config("dt must be positive".into()));
    }
    if !(t_end >= dt) {
        return Err(Error::Config("t_end must be at least dt".into()));
    }
    let norm2 = spectral_norm(&a.entries);
    if dt * norm2 > lit(0.1) {
        return Err(Error::Config(format!(
            "dt {:e} exceeds the stiffness bound 0.1/‖A‖₂ = {:e}",
            dt.to_f64().unwrap_or(f64::NAN),
            (lit::<T>(0.1) / norm2).to_f64().unwrap_or(f64::NAN),
        )));
    }
    check_symmetric_psd(&d.entries)?;
    let asym = (v0.entries - v0.entries.transpose()).norm();
    if asym > lit::<T>(1e-12) * v0.entries.norm().max(T::one()) {
        return Err(Error::Domain("v0 must be symmetric".into()));
    }

    let steps = (t_end.to_f64().unwrap_or(f64::NAN) / dt.to_f64().unwrap_or(f64::NAN)).ceil();
    if !steps.is_finite() || steps < 1.0 {
        return Err(Error::Config("step count is not representable".into()));
    }
    let n = steps as usize;
    let h = t_end / lit(steps);
    let am = &a.entries;
    let at = am.transpose();
    let rate = |v: &Matrix6<T>| am * v + v * at + d.entries;

    let half = lit::<T>(0.5);
    let sixth = T::one() / lit::<T>(6.0);
    let two = lit::<T>(2.0);
    let mut v = symmetrized(&v0.entries);
    for _ in 0..n {
        let k1 = rate(&v);
        let k2 = rate(&(v + k1 * (h * half)));
        let k3 = rate(&(v + k2 * (h * half)));
        let k4 = rate(&(v + k3 * h));
        v += (k1 + k2 * two + k3 * two + k4) * (h * sixth);
        v = symmetrized(&v);
    }
    Ok(CovarianceMatrix { entries: v })
}

/// Relaxation horizon `20 / |max Re λ(A)|`; requires a strictly stable `A`.
pub fn default_horizon<T: Real>(a: &DriftMatrix<T>) -> Result<T> {
    let report = is_stable(a, T::zero())?;
    if report.max_re >= T::zero() {
        return Err(Error::NotStable {
            max_re: report.max_re.to_f64().unwrap_or(f64::NAN),
            margin: 0.0,
        });
    }
    Ok(lit::<T>(20.0) / -report.max_re)
}

/// Integration step `0.05 / ‖A‖₂`, half the stiffness bound.
pub fn default_step<T: Real>(a: &DriftMatrix<T>) -> Result<T> {
    let norm2 = spectral_norm(&a.entries);
    if norm2 <= T::zero() {
        return Err(Error::Domain("drift matrix is zero".into()));
    }
    Ok(lit::<T>(0.05) / norm2)
}

fn symmetrized<T: Real>(m: &Matrix6<T>) -> Matrix6<T> {
    (m + m.transpose()) * lit::<T>(0.5)
}

fn spectral_norm<T: Real>(m: &Matrix6<T>) -> T {
    let sv = m.singular_values();
    let mut max = T::zero();
    for s in sv.iter() {
        if *s > max {
            max = *s;
        }
    }
    max
}

fn check_symmetric_psd<T: Real>(d: &Matrix6<T>) -> Result<()> {
    let scale = d.norm().max(T::one());
    if (d - d.transpose()).norm() > lit::<T>(1e-12) * scale {
        return Err(Error::Domain("diffusion matrix must be symmetric".into()));
    }
    let eigs = d.symmetric_eigenvalues();
    for e in eigs.iter() {
        if *e < -lit::<T>(1e-12) * scale {
            return Err(Error::Domain(format!(
                "diffusion matrix must be positive semidefinite (eigenvalue {:e})",
                e.to_f64().unwrap_or(f64::NAN),
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{build_diffusion, build_drift, default_margin};
    use crate::model::SystemParams;
    use crate::steady_state::solve_steady_state;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn drift(m: Matrix6<f64>) -> DriftMatrix<f64> {
        DriftMatrix { entries: m }
    }

    fn diffusion(m: Matrix6<f64>) -> DiffusionMatrix<f64> {
        DiffusionMatrix { entries: m }
    }

    #[test]
    fn isotropic_decay_has_closed_form_covariance() {
        // A = -a I, D = d I  =>  V = d/(2a) I.
        let a = drift(Matrix6::from_diagonal_element(-2.5));
        let d = diffusion(Matrix6::from_diagonal_element(3.0));
        let v = solve_lyapunov(&a, &d, 0.0).unwrap().entries;
        for i in 0..6 {
            for j in 0..6 {
                let expect = if i == j { 3.0 / 5.0 } else { 0.0 };
                assert_relative_eq!(v[(i, j)], expect, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn anisotropic_decay_inverts_each_rate() {
        let rates = [-1.0, -2.0, -3.0, -4.0, -5.0, -6.0];
        let a = drift(Matrix6::from_diagonal(&nalgebra::Vector6::from_row_slice(
            &rates,
        )));
        let d = diffusion(Matrix6::identity());
        let v = solve_lyapunov(&a, &d, 0.0).unwrap().entries;
        for i in 0..6 {
            assert_relative_eq!(
                v[(i, i)],
                1.0 / (2.0 * rates[i].abs()),
                max_relative = 1e-13
            );
        }
    }

    #[test]
    fn rotation_does_not_disturb_isotropic_noise() {
        // Damped rotation block: V stays isotropic at d/(2κ).
        let mut m = Matrix6::from_diagonal_element(-1.0);
        m[(0, 0)] = -0.3;
        m[(0, 1)] = 7.0;
        m[(1, 0)] = -7.0;
        m[(1, 1)] = -0.3;
        let d = diffusion(Matrix6::identity());
        let v = solve_lyapunov(&drift(m), &d, 0.0).unwrap().entries;
        assert_relative_eq!(v[(0, 0)], 1.0 / 0.6, max_relative = 1e-12);
        assert_relative_eq!(v[(1, 1)], 1.0 / 0.6, max_relative = 1e-12);
        assert_relative_eq!(v[(0, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn unstable_and_marginal_drifts_are_rejected() {
        let d = diffusion(Matrix6::identity());
        let unstable = drift(Matrix6::from_diagonal_element(1.0));
        assert!(matches!(
            solve_lyapunov(&unstable, &d, 0.0),
            Err(Error::NotStable { .. })
        ));
        let mut m = Matrix6::from_diagonal_element(-1.0);
        m[(2, 2)] = 0.0;
        assert!(matches!(
            solve_lyapunov(&drift(m), &d, 1e-9),
            Err(Error::NotStable { .. })
        ));
    }

    #[test]
    fn asymmetric_diffusion_is_rejected() {
        let a = drift(Matrix6::from_diagonal_element(-1.0));
        let mut dm = Matrix6::zeros();
        dm[(0, 1)] = 1.0;
        assert!(matches!(
            solve_lyapunov(&a, &diffusion(dm), 0.0),
            Err(Error::Domain(_))
        ));
        let neg = Matrix6::from_diagonal_element(-1.0);
        assert!(matches!(
            solve_lyapunov(&a, &diffusion(neg), 0.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn solution_is_linear_in_the_diffusion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_stable(&mut rng);
        let d1 = random_psd(&mut rng);
        let d2 = random_psd(&mut rng);
        let sum = diffusion(d1.entries + d2.entries);
        let v1 = solve_lyapunov(&a, &d1, 0.0).unwrap().entries;
        let v2 = solve_lyapunov(&a, &d2, 0.0).unwrap().entries;
        let vs = solve_lyapunov(&a, &sum, 0.0).unwrap().entries;
        assert_relative_eq!((v1 + v2 - vs).norm(), 0.0, epsilon = 1e-10 * vs.norm());
    }

    #[test]
    fn joint_rescaling_of_rates_leaves_covariance_fixed() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_stable(&mut rng);
        let d = random_psd(&mut rng);
        let s = 1e6;
        let v1 = solve_lyapunov(&a, &d, 0.0).unwrap().entries;
        let v2 = solve_lyapunov(&drift(a.entries * s), &diffusion(d.entries * s), 0.0)
            .unwrap()
            .entries;
        assert_relative_eq!((v1 - v2).norm(), 0.0, epsilon = 1e-9 * v1.norm());
    }

    #[test]
    fn reference_covariance_is_positive_definite() {
        let mut p = SystemParams::<f64>::default();
        p.theta = 0.44 * std::f64::consts::PI;
        let ss = solve_steady_state(&p).unwrap();
        let a = build_drift(&p, &ss);
        let d = build_diffusion(&p).unwrap();
        let v = solve_lyapunov(&a, &d, default_margin(&p)).unwrap().entries;
        assert!(nalgebra::linalg::Cholesky::new(v).is_some());
    }

    #[test]
    fn undriven_mechanics_thermalizes_exactly() {
        // With eps_d = 0 the enhanced coupling vanishes and the mechanical
        // block must relax to (n̄ + 1/2) I₂; the 10 GHz modes sit in
        // near-perfect vacuum.
        let mut p = SystemParams::<f64>::default();
        p.eps_d = 0.0;
        p.chi = 0.0;
        let ss = solve_steady_state(&p).unwrap();
        let a = build_drift(&p, &ss);
        let d = build_diffusion(&p).unwrap();
        // The bare mechanical decay γ_b/2 is slower than the default
        // sweep margin, so classify against zero here.
        let v = solve_lyapunov(&a, &d, 0.0).unwrap().entries;
        assert_relative_eq!(v[(4, 4)], 25.00727568215782, max_relative = 1e-10);
        assert_relative_eq!(v[(5, 5)], 25.00727568215782, max_relative = 1e-10);
        assert_relative_eq!(v[(4, 5)], 0.0, epsilon = 1e-10);
        for i in 0..4 {
            assert_relative_eq!(v[(i, i)], 0.5, max_relative = 1e-8);
        }
    }

    #[test]
    fn integrator_matches_scalar_relaxation() {
        // V̇ = -2aV + d  =>  V(t) = d/(2a) (1 - exp(-2at)) from V(0) = 0.
        let a = drift(Matrix6::from_diagonal_element(-1.0));
        let d = diffusion(Matrix6::from_diagonal_element(2.0));
        let v0 = CovarianceMatrix {
            entries: Matrix6::zeros(),
        };
        let v = integrate_covariance(&a, &d, &v0, 1e-3, 1.0)
            .unwrap()
            .entries;
        let expect = 1.0 - (-2.0_f64).exp();
        for i in 0..6 {
            assert_relative_eq!(v[(i, i)], expect, max_relative = 1e-10);
        }
    }

    #[test]
    fn integrator_relaxes_to_the_direct_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..5 {
            let a = random_stable(&mut rng);
            let d = random_psd(&mut rng);
            let direct = solve_lyapunov(&a, &d, 0.0).unwrap().entries;
            let dt = default_step(&a).unwrap();
            let t_end = default_horizon(&a).unwrap();
            let v0 = CovarianceMatrix {
                entries: Matrix6::zeros(),
            };
            let relaxed = integrate_covariance(&a, &d, &v0, dt, t_end)
                .unwrap()
                .entries;
            let rel = (relaxed - direct).norm() / direct.norm();
            assert!(rel <= 1e-6, "relative gap {rel:e}");
        }
    }

    #[test]
    fn integrator_enforces_the_stiffness_bound() {
        let a = drift(Matrix6::from_diagonal_element(-100.0));
        let d = diffusion(Matrix6::identity());
        let v0 = CovarianceMatrix {
            entries: Matrix6::zeros(),
        };
        // ‖A‖₂ = 100, bound = 1e-3.
        assert!(matches!(
            integrate_covariance(&a, &d, &v0, 2e-3, 1.0),
            Err(Error::Config(_))
        ));
        integrate_covariance(&a, &d, &v0, 0.9e-3, 0.1).unwrap();
    }

    #[test]
    fn integrator_rejects_asymmetric_seed() {
        let a = drift(Matrix6::from_diagonal_element(-1.0));
        let d = diffusion(Matrix6::identity());
        let mut m = Matrix6::zeros();
        m[(0, 1)] = 1.0;
        let v0 = CovarianceMatrix { entries: m };
        assert!(matches!(
            integrate_covariance(&a, &d, &v0, 1e-2, 1.0),
            Err(Error::Domain(_))
        ));
    }

    fn random_stable(rng: &mut ChaCha8Rng) -> DriftMatrix<f64> {
        let mut m = Matrix6::zeros();
        for i in 0..6 {
            for j in 0..6 {
                m[(i, j)] = rng.random_range(-1.0..1.0);
            }
        }
        let max_re = crate::dynamics::max_re_eigenvalue(&m).unwrap();
        for i in 0..6 {
            m[(i, i)] -= max_re + 0.5;
        }
        DriftMatrix { entries: m }
    }

    fn random_psd(rng: &mut ChaCha8Rng) -> DiffusionMatrix<f64> {
        let mut m = Matrix6::zeros();
        for i in 0..6 {
            for j in 0..6 {
                m[(i, j)] = rng.random_range(-1.0..1.0);
            }
        }
        DiffusionMatrix {
            entries: m * m.transpose(),
        }
    }
}
