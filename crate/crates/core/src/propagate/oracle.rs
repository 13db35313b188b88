//! Closed-form eigen-picture solutions.
//!
//! When the adding term cancels the nonadiabatic coupling, the eigen-picture
//! Hamiltonian is diagonal, `diag(E₁ + χ, E₂ − χ)` with
//! `χ = η cos2θ − α sin2θ − φ̇ cos²θ`, so each amplitude `cₙ = ⟨φₙ|ψ⟩`
//! only picks up a phase. These routines evaluate that solution by
//! quadrature of the phase integrals and never touch the ODE integrator.

use crate::designer::{solve_add, AddParams, Nullify};
use crate::error::{Error, Result};
use crate::lz::{AngleState, LzSchedule};
use crate::smallmat::{CVec, C64};

/// Eigen-picture amplitudes `[c₁, c₂]` of `ψ` at time `t`:
/// `c₁ = a₁ cosθ e^{iφ} − a₂ sinθ`, `c₂ = a₁ sinθ + a₂ cosθ e^{−iφ}`.
pub fn eigen_amplitudes(s: &LzSchedule, t: f64, psi: &CVec) -> Result<[C64; 2]> {
    if psi.dim() != 2 {
        return Err(Error::DimensionMismatch { left: 2, right: psi.dim() });
    }
    let a = s.angle(t);
    let (sin, cos) = libm::sincos(a.theta);
    let e = C64::from_polar(1.0, a.phi);
    Ok([psi[0] * e * cos - psi[1] * sin, psi[0] * sin + psi[1] * e.conj() * cos])
}

/// The instantaneous eigenstate `|φ_level(τ)⟩` (1-based), built from `θ(τ)`
/// and `φ(τ)`.
pub fn initial_eigenstate(s: &LzSchedule, level: usize) -> Result<CVec> {
    let [phi1, phi2] = s.angle(s.tau).eigenvectors();
    match level {
        1 => Ok(phi1),
        2 => Ok(phi2),
        _ => Err(Error::LevelOutOfRange { level, dim: 2 }),
    }
}

/// `χ = η cos2θ − α sin2θ − φ̇ cos²θ`.
fn chi(a: &AngleState, alpha: f64, eta: f64) -> f64 {
    let c = libm::cos(a.theta);
    eta * a.cos2() - alpha * a.sin2() - a.phi_dot * c * c
}

/// Composite trapezoid rule on `[a, b]` with spacing at most `max_step`.
pub fn trapezoid(f: impl Fn(f64) -> Result<f64>, a: f64, b: f64, max_step: f64) -> Result<f64> {
    if b == a {
        return Ok(0.0);
    }
    let n = libm::ceil(((b - a) / max_step).abs()).max(1.0) as usize;
    let h = (b - a) / n as f64;
    let mut total = 0.5 * (f(a)? + f(b)?);
    for k in 1..n {
        total += f(a + k as f64 * h)?;
    }
    Ok(total * h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EigenSolution {
    /// `[c₁(τ), c₂(τ)]`.
    pub initial: [C64; 2],
    /// Accumulated phases `[−∫(E₁ + χ), −∫(E₂ − χ)]` over the window.
    pub phases: [f64; 2],
    /// `ψ(t_f) = c₁(τ) e^{iΦ₁}|φ₁(t_f)⟩ + c₂(τ) e^{iΦ₂}|φ₂(t_f)⟩`.
    pub final_state: CVec,
}

impl EigenSolution {
    pub fn final_amplitudes(&self) -> [C64; 2] {
        [self.initial[0] * C64::from_polar(1.0, self.phases[0]), self.initial[1] * C64::from_polar(1.0, self.phases[1])]
    }
}

/// Final state of a Hermitian shortcut started from `psi0`.
pub fn oracle_state(s: &LzSchedule, p: &AddParams, psi0: &CVec, quad_step: f64) -> Result<EigenSolution> {
    if p.nullify != Nullify::Both {
        return Err(Error::NotHermitian);
    }
    if !p.is_shortcut() {
        return Err(Error::NotAShortcut);
    }
    let initial = eigen_amplitudes(s, s.tau, psi0)?;
    let integrand = |t: f64, sign: f64, level: usize| -> Result<f64> {
        let a = s.angle(t);
        let solved = solve_add(&a, p, t)?;
        if solved.gamma != 0.0 {
            return Err(Error::NotHermitian);
        }
        Ok(s.energies(t)[level] + sign * chi(&a, solved.alpha, solved.eta))
    };
    let phase1 = -trapezoid(|t| integrand(t, 1.0, 0), s.tau, s.tf, quad_step)?;
    let phase2 = -trapezoid(|t| integrand(t, -1.0, 1), s.tau, s.tf, quad_step)?;

    let end = s.angle(s.tf);
    let (sin, cos) = libm::sincos(end.theta);
    let e = C64::from_polar(1.0, end.phi);
    let c1 = initial[0] * C64::from_polar(1.0, phase1);
    let c2 = initial[1] * C64::from_polar(1.0, phase2);
    let final_state = CVec::from_slice(&[c1 * cos * e.conj() + c2 * sin, c2 * cos * e - c1 * sin])?;
    Ok(EigenSolution { initial, phases: [phase1, phase2], final_state })
}

/// Amplitude of the protected eigenstate at time `t` for a non-Hermitian
/// shortcut started exactly in it: `c₁(t)` for [`Nullify::Lower`],
/// `c₂(t)` for [`Nullify::Upper`]. The other amplitude stays zero.
///
/// `c₁(t) = exp[−i∫(E₁ + (η + iγ)cos2θ − α sin2θ − φ̇cos²θ)]`, and
/// `c₂(t)` is the same with `E₂` and the remaining terms negated.
pub fn oracle_nonhermitian(s: &LzSchedule, p: &AddParams, t: f64, quad_step: f64) -> Result<C64> {
    let (level, sign) = match p.nullify {
        Nullify::Lower => (0, 1.0),
        Nullify::Upper => (1, -1.0),
        Nullify::Both => return Err(Error::InvalidParams("a single nullified direction is required")),
    };
    if !p.is_shortcut() {
        return Err(Error::NotAShortcut);
    }
    let parts = |t: f64| -> Result<(f64, f64)> {
        let a = s.angle(t);
        let solved = solve_add(&a, p, t)?;
        let real = s.energies(t)[level] + sign * chi(&a, solved.alpha, solved.eta);
        Ok((real, sign * solved.gamma * a.cos2()))
    };
    let phase = trapezoid(|t| Ok(parts(t)?.0), s.tau, t, quad_step)?;
    let growth = trapezoid(|t| Ok(parts(t)?.1), s.tau, t, quad_step)?;
    Ok(C64::from_polar(libm::exp(growth), -phase))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designer::{AlphaLaw, GammaLaw};
    use approx::assert_abs_diff_eq;

    const QUAD: f64 = 1e-5;

    #[test]
    fn eigenstate_start_keeps_magnitudes() {
        let s = LzSchedule::default().with_kappa(2.0);
        let p = AddParams::hermitian(AlphaLaw::ThetaDot(1.0));
        let psi0 = initial_eigenstate(&s, 1).unwrap();
        let sol = oracle_state(&s, &p, &psi0, 1e-4).unwrap();
        assert_abs_diff_eq!(sol.initial[0].norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(sol.initial[1].norm(), 0.0, epsilon = 1e-15);
        let c = eigen_amplitudes(&s, s.tf, &sol.final_state).unwrap();
        assert_abs_diff_eq!(c[0].norm(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(c[1].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn relative_phase_for_bare_cd_driving() {
        // α = 0, κ = 0: χ = 0, so the phase gap is −∫(E₁ − E₂) = ∫√(Ω₀² + ζ⁴t²)
        let s = LzSchedule::default();
        let p = AddParams::hermitian(AlphaLaw::Constant(0.0));
        let sol = oracle_state(&s, &p, &CVec::basis(2, 1).unwrap(), QUAD).unwrap();
        let exact = {
            // ∫_{−1}^{1} √(1 + 81t²) dt
            let f = |t: f64| {
                let u = 9.0 * t;
                (u * libm::sqrt(1.0 + u * u) + libm::asinh(u)) / 18.0
            };
            f(1.0) - f(-1.0)
        };
        assert_abs_diff_eq!(sol.phases[0] - sol.phases[1], exact, epsilon = 1e-5);
    }

    #[test]
    fn rejects_non_shortcuts() {
        let s = LzSchedule::default();
        let psi = CVec::basis(2, 1).unwrap();
        assert_eq!(oracle_state(&s, &AddParams::beta_dropped(3.0), &psi, 1e-3), Err(Error::NotAShortcut));
        let nh = AddParams::non_hermitian(AlphaLaw::Constant(0.0), GammaLaw::Constant(0.5), Nullify::Lower).unwrap();
        assert_eq!(oracle_state(&s, &nh, &psi, 1e-3), Err(Error::NotHermitian));
        let herm = AddParams::hermitian(AlphaLaw::Constant(0.0));
        assert!(oracle_nonhermitian(&s, &herm, 0.0, 1e-3).is_err());
    }

    #[test]
    fn lossless_protected_amplitude_has_unit_modulus() {
        let s = LzSchedule::default();
        for nullify in [Nullify::Upper, Nullify::Lower] {
            let p = AddParams::non_hermitian(AlphaLaw::Constant(0.0), GammaLaw::Constant(0.0), nullify).unwrap();
            for t in [-0.5, 0.0, 0.7, 1.0] {
                assert_abs_diff_eq!(oracle_nonhermitian(&s, &p, t, 1e-4).unwrap().norm(), 1.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn constant_gamma_restores_norm_at_the_end() {
        let s = LzSchedule::default();
        let p = AddParams::non_hermitian(AlphaLaw::Constant(0.0), GammaLaw::Constant(0.5), Nullify::Lower).unwrap();
        assert_abs_diff_eq!(oracle_nonhermitian(&s, &p, s.tf, QUAD).unwrap().norm(), 1.0, epsilon = 1e-3);
        // midway: exp(∫_{−1}^{0} γ cos2θ) with ∫ 9t/√(1+81t²) = (√(1+81t²))/9
        let mid = oracle_nonhermitian(&s, &p, 0.0, QUAD).unwrap().norm();
        let exact = libm::exp(0.5 * (1.0 - libm::sqrt(82.0)) / 9.0);
        assert_abs_diff_eq!(mid, exact, epsilon = 1e-8);
        assert!((mid - 1.0).abs() > 0.1);
    }

    #[test]
    fn trapezoid_is_second_order() {
        let f = |t: f64| Ok(libm::exp(t));
        let exact = libm::exp(1.0) - libm::exp(-1.0);
        let e1 = (trapezoid(f, -1.0, 1.0, 0.1).unwrap() - exact).abs();
        let e2 = (trapezoid(f, -1.0, 1.0, 0.05).unwrap() - exact).abs();
        assert_abs_diff_eq!(e1 / e2, 4.0, epsilon = 0.01);
        assert_eq!(trapezoid(f, 0.3, 0.3, 0.1).unwrap(), 0.0);
    }
}
