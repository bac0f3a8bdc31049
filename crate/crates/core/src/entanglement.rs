//! Bipartite Gaussian entanglement from the stationary covariance matrix.
//!
//! For a two-mode reduction `V_s = [[A, C], [Cᵀ, B]]` the logarithmic
//! negativity is `E_N = max(0, -ln 2η̃)`, where `η̃` is the smallest
//! symplectic eigenvalue of the partial transpose. It is evaluated two
//! independent ways and cross-checked:
//! - closed form, in the cancellation-free arrangement
//!   `η̃² = 2 det V_s / (Σ + √(Σ² - 4 det V_s))` with
//!   `Σ = det A + det B - 2 det C`,
//! - spectrally, as the smallest modulus among the eigenvalues of `Ω Ṽ`
//!   with the momentum of the second mode sign-flipped.

use nalgebra::Matrix4;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lyapunov::CovarianceMatrix;
use crate::real::{lit, Real};

/// Mode pair of a two-mode reduction. The named mode comes first, the
/// magnon second.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pair {
    CavityMagnon,
    PhononMagnon,
}

impl Pair {
    /// Quadrature indices of the reduction, in the six-mode ordering.
    pub fn indices(self) -> [usize; 4] {
        match self {
            Pair::CavityMagnon => [0, 1, 2, 3],
            Pair::PhononMagnon => [4, 5, 2, 3],
        }
    }
}

/// Two-mode covariance matrix extracted from the full six-mode one.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCM<T = f64> {
    pub entries: Matrix4<T>,
    pub pair: Pair,
}

/// Result of a log-negativity evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult<T = f64> {
    /// Logarithmic negativity, clamped at zero.
    pub e_n: T,
    /// Smallest symplectic eigenvalue of the partial transpose.
    pub eta: T,
    /// Partial-transpose invariant `det A + det B - 2 det C`.
    pub sigma: T,
    pub pair: Pair,
}

/// Extracts the two-mode covariance of `pair` from the full covariance.
pub fn reduce<T: Real>(v: &CovarianceMatrix<T>, pair: Pair) -> ReducedCM<T> {
    let idx = pair.indices();
    let entries = Matrix4::from_fn(|i, j| v.entries[(idx[i], idx[j])]);
    ReducedCM { entries, pair }
}

/// Logarithmic negativity of a two-mode covariance matrix.
///
/// Rejects matrices violating the uncertainty relation
/// `V_s + (i/2)Ω ⪰ 0`. The closed-form and spectral values of `η̃` must
/// agree to a relative 1e-9 or the call reports a numerical failure.
pub fn log_negativity<T: Real>(vs: &ReducedCM<T>) -> Result<EntanglementResult<T>> {
    let v = &vs.entries;
    check_physical(v)?;

    let det_a = det2(v[(0, 0)], v[(0, 1)], v[(1, 0)], v[(1, 1)]);
    let det_b = det2(v[(2, 2)], v[(2, 3)], v[(3, 2)], v[(3, 3)]);
    let det_c = det2(v[(0, 2)], v[(0, 3)], v[(1, 2)], v[(1, 3)]);
    let det_v = v.determinant();
    let sigma = det_a + det_b - lit::<T>(2.0) * det_c;

    let mut disc = sigma * sigma - lit::<T>(4.0) * det_v;
    if disc < T::zero() {
        // Physical states keep disc ≥ 0; allow roundoff-scale excursions.
        if disc >= -lit::<T>(1e-12) * sigma * sigma {
            disc = T::zero();
        } else {
            return Err(Error::Domain(
                "partial-transpose discriminant is negative beyond roundoff".into(),
            ));
        }
    }
    let denom = sigma + disc.sqrt();
    if !(denom > T::zero()) {
        return Err(Error::Numerical(
            "degenerate partial-transpose invariants".into(),
        ));
    }
    let eta2 = lit::<T>(2.0) * det_v.max(T::zero()) / denom;
    let eta = eta2.max(T::zero()).sqrt();

    let eta_spectral = smallest_symplectic_of_pt(v)?;
    let gap = (eta - eta_spectral).abs();
    if gap > lit::<T>(1e-9) * eta_spectral + lit::<T>(1e-18) {
        return Err(Error::Numerical(format!(
            "symplectic eigenvalue routes disagree: closed form {:e}, spectral {:e}",
            eta.to_f64().unwrap_or(f64::NAN),
            eta_spectral.to_f64().unwrap_or(f64::NAN),
        )));
    }

    let two_eta = lit::<T>(2.0) * eta;
    let e_n = (-two_eta.ln()).max(T::zero());
    Ok(EntanglementResult {
        e_n,
        eta,
        sigma,
        pair: vs.pair,
    })
}

/// Reduces and evaluates in one step.
pub fn entanglement_of<T: Real>(
    v: &CovarianceMatrix<T>,
    pair: Pair,
) -> Result<EntanglementResult<T>> {
    log_negativity(&reduce(v, pair))
}

/// Two-mode symplectic form `Ω = ⊕ [[0, 1], [-1, 0]]`.
fn omega4<T: Real>() -> Matrix4<T> {
    let z = T::zero();
    let one = T::one();
    #[rustfmt::skip]
    let m = Matrix4::new(
        z,    one, z,    z,
        -one, z,   z,    z,
        z,    z,   z,    one,
        z,    z,   -one, z,
    );
    m
}

fn det2<T: Real>(a: T, b: T, c: T, d: T) -> T {
    a * d - b * c
}

/// Uncertainty relation `V + (i/2)Ω ⪰ 0`, up to a roundoff allowance.
fn check_physical<T: Real>(v: &Matrix4<T>) -> Result<()> {
    let scale = v.norm().max(T::one());
    if (v - v.transpose()).norm() > lit::<T>(1e-12) * scale {
        return Err(Error::Domain("covariance matrix must be symmetric".into()));
    }
    let om = omega4::<T>();
    let half = lit::<T>(0.5);
    let h = Matrix4::from_fn(|i, j| Complex::new(v[(i, j)], half * om[(i, j)]));
    let eigs = h.symmetric_eigenvalues();
    for e in eigs.iter() {
        if *e < -lit::<T>(1e-9) * scale {
            return Err(Error::Domain(format!(
                "covariance matrix violates the uncertainty relation (eigenvalue {:e})",
                e.to_f64().unwrap_or(f64::NAN),
            )));
        }
    }
    Ok(())
}

/// Smallest modulus among the eigenvalues of `Ω Ṽ`, the spectral route to
/// the partial-transpose symplectic eigenvalue.
fn smallest_symplectic_of_pt<T: Real>(v: &Matrix4<T>) -> Result<T> {
    // Partial transpose flips the second mode's momentum.
    let mut pt = *v;
    for k in 0..4 {
        pt[(3, k)] = -pt[(3, k)];
    }
    for k in 0..4 {
        pt[(k, 3)] = -pt[(k, 3)];
    }
    let m = omega4::<T>() * pt;
    let schur = nalgebra::linalg::Schur::try_new(m, T::default_epsilon(), 100_000)
        .ok_or_else(|| Error::Numerical("Schur iteration did not converge".into()))?;
    let eigs = schur.complex_eigenvalues();
    let mut min = T::max_value().unwrap_or_else(T::one);
    for e in eigs.iter() {
        let modulus = e.norm_sqr().sqrt();
        if modulus < min {
            min = modulus;
        }
    }
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::{Matrix2, Matrix6};

    /// Two-mode squeezed thermal state in the vacuum-variance-1/2
    /// convention: `S (ν₁I₂ ⊕ ν₂I₂) Sᵀ` with the standard two-mode
    /// squeezer `S`.
    fn squeezed_thermal(nu1: f64, nu2: f64, r: f64) -> Matrix4<f64> {
        let c = (2.0 * r).cosh();
        let s = (2.0 * r).sinh();
        let _ = (c, s);
        let ch = r.cosh();
        let sh = r.sinh();
        let i2 = Matrix2::identity();
        let z = Matrix2::new(1.0, 0.0, 0.0, -1.0);
        let mut smat = Matrix4::zeros();
        smat.view_mut((0, 0), (2, 2)).copy_from(&(i2 * ch));
        smat.view_mut((0, 2), (2, 2)).copy_from(&(z * sh));
        smat.view_mut((2, 0), (2, 2)).copy_from(&(z * sh));
        smat.view_mut((2, 2), (2, 2)).copy_from(&(i2 * ch));
        let th = Matrix4::from_diagonal(&nalgebra::Vector4::new(nu1, nu1, nu2, nu2));
        smat * th * smat.transpose()
    }

    fn as_reduced(m: Matrix4<f64>) -> ReducedCM<f64> {
        ReducedCM {
            entries: m,
            pair: Pair::CavityMagnon,
        }
    }

    #[test]
    fn vacuum_is_separable_with_eta_half() {
        let vac = Matrix4::from_diagonal_element(0.5);
        let r = log_negativity(&as_reduced(vac)).unwrap();
        assert_eq!(r.e_n, 0.0);
        assert_relative_eq!(r.eta, 0.5, max_relative = 1e-12);
        assert_relative_eq!(r.sigma, 0.5, max_relative = 1e-12);
    }

    #[test]
    fn two_mode_squeezed_vacuum_has_log_negativity_two_r() {
        for r in [0.3, 0.5, 0.8] {
            let v = squeezed_thermal(0.5, 0.5, r);
            let res = log_negativity(&as_reduced(v)).unwrap();
            assert_relative_eq!(res.e_n, 2.0 * r, max_relative = 1e-11);
            assert_relative_eq!(res.eta, 0.5 * (-2.0 * r).exp(), max_relative = 1e-11);
            assert_relative_eq!(res.sigma, 0.5 * (4.0 * r).cosh(), max_relative = 1e-11);
        }
    }

    #[test]
    fn product_states_are_separable() {
        for (n1, n2) in [(0.5, 0.5), (0.8, 0.6), (3.0, 0.5)] {
            let v = squeezed_thermal(n1, n2, 0.0);
            let res = log_negativity(&as_reduced(v)).unwrap();
            assert_eq!(res.e_n, 0.0);
            assert_relative_eq!(res.eta, n1.min(n2), max_relative = 1e-11);
        }
    }

    #[test]
    fn squeezed_thermal_states_match_the_known_eta() {
        // For ν₁ = ν₂ = ν the partial-transpose eigenvalue is ν e^{-2r}.
        for (nu, r) in [(0.6, 0.4), (1.5, 0.9)] {
            let v = squeezed_thermal(nu, nu, r);
            let res = log_negativity(&as_reduced(v)).unwrap();
            assert_relative_eq!(res.eta, nu * (-2.0 * r).exp(), max_relative = 1e-10);
        }
    }

    #[test]
    fn eta_is_invariant_under_local_rotations() {
        let v = squeezed_thermal(0.7, 0.55, 0.6);
        let base = log_negativity(&as_reduced(v)).unwrap();
        for (p1, p2) in [(0.3, 1.1), (2.0, -0.4), (4.4, 0.9)] {
            let rot = |p: f64| Matrix2::new(p.cos(), p.sin(), -p.sin(), p.cos());
            let mut s = Matrix4::zeros();
            s.view_mut((0, 0), (2, 2)).copy_from(&rot(p1));
            s.view_mut((2, 2), (2, 2)).copy_from(&rot(p2));
            let vr = s * v * s.transpose();
            let res = log_negativity(&as_reduced(vr)).unwrap();
            assert_relative_eq!(res.eta, base.eta, max_relative = 1e-9);
            assert_relative_eq!(res.e_n, base.e_n, max_relative = 1e-8);
        }
    }

    #[test]
    fn mode_swap_preserves_eta() {
        let v = squeezed_thermal(0.9, 0.5, 0.7);
        let mut swapped = Matrix4::zeros();
        let map = [2, 3, 0, 1];
        for i in 0..4 {
            for j in 0..4 {
                swapped[(i, j)] = v[(map[i], map[j])];
            }
        }
        let a = log_negativity(&as_reduced(v)).unwrap();
        let b = log_negativity(&as_reduced(swapped)).unwrap();
        assert_relative_eq!(a.eta, b.eta, max_relative = 1e-10);
    }

    #[test]
    fn below_vacuum_variances_are_rejected() {
        let v = Matrix4::from_diagonal_element(0.1);
        assert!(matches!(
            log_negativity(&as_reduced(v)),
            Err(Error::Domain(_))
        ));
        let mut asym = Matrix4::from_diagonal_element(0.5);
        asym[(0, 1)] = 0.3;
        assert!(matches!(
            log_negativity(&as_reduced(asym)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn reduce_picks_the_documented_blocks() {
        let mut v6 = Matrix6::zeros();
        for i in 0..6 {
            for j in 0..6 {
                v6[(i, j)] = (10 * i + j) as f64;
            }
        }
        let full = CovarianceMatrix { entries: v6 };
        let cm = reduce(&full, Pair::CavityMagnon);
        assert_eq!(cm.entries[(0, 0)], 0.0);
        assert_eq!(cm.entries[(3, 3)], 33.0);
        assert_eq!(cm.entries[(0, 2)], 2.0);
        let bm = reduce(&full, Pair::PhononMagnon);
        // Mechanics first, magnon second.
        assert_eq!(bm.entries[(0, 0)], 44.0);
        assert_eq!(bm.entries[(1, 1)], 55.0);
        assert_eq!(bm.entries[(2, 2)], 22.0);
        assert_eq!(bm.entries[(0, 2)], 42.0);
        assert_eq!(bm.pair, Pair::PhononMagnon);
    }
}
