//! Landau-Zener drive `Ω(t) = Ω₀`, `Δ(t) = ζ²t`, `φ(t) = κt` in closed form.
//!
//! The two-level Hamiltonian is
//!
//! ```text
//! H₀(t) = ½ [[-Δ, Ω e^{-iφ}], [Ω e^{iφ}, Δ]]
//! ```
//!
//! with instantaneous eigenvectors
//! `|φ₁⟩ = cosθ e^{-iφ}|1⟩ − sinθ|2⟩` and `|φ₂⟩ = sinθ|1⟩ + cosθ e^{iφ}|2⟩`,
//! where `θ = ½·atan2(Ω, Δ) ∈ (0, π/2)`. With that branch, `|φ₁⟩` belongs to
//! `E₁ = −½√(Ω² + Δ²)` and `|φ₂⟩` to `E₂ = +½√(Ω² + Δ²)`.

use crate::error::{Error, Result};
use crate::smallmat::{CMat, CVec, C64, I};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LzSchedule {
    pub omega0: f64,
    pub zeta2: f64,
    pub kappa: f64,
    pub tau: f64,
    pub tf: f64,
}

impl Default for LzSchedule {
    /// `Ω₀ = 1`, `ζ = 3Ω₀`, `φ = 0`, symmetric window `[−1, 1]/Ω₀`.
    fn default() -> Self {
        Self { omega0: 1.0, zeta2: 9.0, kappa: 0.0, tau: -1.0, tf: 1.0 }
    }
}

impl LzSchedule {
    pub fn new(omega0: f64, zeta2: f64, kappa: f64, tau: f64, tf: f64) -> Result<Self> {
        let s = Self { omega0, zeta2, kappa, tau, tf };
        s.validate()?;
        Ok(s)
    }

    /// Symmetric window `[−tf, tf]`.
    pub fn symmetric(omega0: f64, zeta2: f64, kappa: f64, tf: f64) -> Result<Self> {
        Self::new(omega0, zeta2, kappa, -tf, tf)
    }

    pub fn with_kappa(self, kappa: f64) -> Self {
        Self { kappa, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [self.omega0, self.zeta2, self.kappa, self.tau, self.tf];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidSchedule("parameters must be finite"));
        }
        if self.omega0 <= 0.0 {
            return Err(Error::InvalidSchedule("omega0 must be positive"));
        }
        if self.tau >= self.tf {
            return Err(Error::InvalidSchedule("tau must precede tf"));
        }
        Ok(())
    }

    pub fn duration(&self) -> f64 {
        self.tf - self.tau
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (self.tau + self.tf).abs() <= tol
    }

    pub fn rabi(&self, _t: f64) -> f64 {
        self.omega0
    }

    pub fn detuning(&self, t: f64) -> f64 {
        self.zeta2 * t
    }

    pub fn phase(&self, t: f64) -> f64 {
        self.kappa * t
    }

    pub fn h0(&self, t: f64) -> CMat {
        let (omega, delta, phi) = (self.rabi(t), self.detuning(t), self.phase(t));
        let coupling = C64::from_polar(0.5 * omega, -phi);
        CMat::from_rows(&[&[C64::new(-0.5 * delta, 0.0), coupling], &[coupling.conj(), C64::new(0.5 * delta, 0.0)]])
            .expect("2x2")
    }

    /// Instantaneous eigenvalues `[E₁, E₂]` belonging to `[|φ₁⟩, |φ₂⟩]`.
    pub fn energies(&self, t: f64) -> [f64; 2] {
        let half_gap = 0.5 * libm::hypot(self.rabi(t), self.detuning(t));
        [-half_gap, half_gap]
    }

    pub fn angle(&self, t: f64) -> AngleState {
        let omega = self.omega0;
        let zeta2 = self.zeta2;
        AngleState {
            theta: 0.5 * libm::atan2(omega, self.detuning(t)),
            theta_dot: -omega * zeta2 / (2.0 * (omega * omega + zeta2 * zeta2 * t * t)),
            phi: self.phase(t),
            phi_dot: self.kappa,
        }
    }
}

/// Mixing angle, phase and their rates at one instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleState {
    pub theta: f64,
    pub theta_dot: f64,
    pub phi: f64,
    pub phi_dot: f64,
}

impl AngleState {
    pub fn sin2(&self) -> f64 {
        libm::sin(2.0 * self.theta)
    }

    pub fn cos2(&self) -> f64 {
        libm::cos(2.0 * self.theta)
    }

    pub fn cot2(&self) -> f64 {
        self.cos2() / self.sin2()
    }

    /// `[|φ₁⟩, |φ₂⟩]` in the analytic phase convention.
    pub fn eigenvectors(&self) -> [CVec; 2] {
        let (s, c) = libm::sincos(self.theta);
        let phase = C64::from_polar(1.0, self.phi);
        [
            CVec::from_slice(&[phase.conj() * c, C64::new(-s, 0.0)]).expect("2"),
            CVec::from_slice(&[C64::new(s, 0.0), phase * c]).expect("2"),
        ]
    }

    /// `(R, R†)` with the eigenvectors as the columns of `R`.
    pub fn rotation(&self) -> (CMat, CMat) {
        let [phi1, phi2] = self.eigenvectors();
        let r = CMat::from_columns(&[phi1, phi2]).expect("2x2");
        let r_adj = r.adjoint();
        (r, r_adj)
    }

    /// Eigen-picture amplitudes `c = R†ψ`.
    pub fn to_eigen(&self, psi: &CVec) -> Result<CVec> {
        self.rotation().1.apply(psi)
    }

    /// `iħR†Ṙ` in closed form.
    pub fn nonadiabatic(&self) -> CMat {
        let c = libm::cos(self.theta);
        let diag = self.phi_dot * c * c;
        let half = 0.5 * self.phi_dot * self.sin2();
        let e = C64::from_polar(1.0, self.phi);
        CMat::from_rows(&[
            &[C64::new(diag, 0.0), (I * self.theta_dot + half) * e],
            &[(-I * self.theta_dot + half) * e.conj(), C64::new(-diag, 0.0)],
        ])
        .expect("2x2")
    }

    /// Counterdiabatic Hamiltonian `iħΣₙ|φ̇ₙ⟩⟨φₙ|` in closed form.
    pub fn h_cd(&self) -> CMat {
        let c = libm::cos(self.theta);
        let diag = self.phi_dot * c * c;
        let half = 0.5 * self.phi_dot * self.sin2();
        let e = C64::from_polar(1.0, self.phi);
        CMat::from_rows(&[
            &[C64::new(diag, 0.0), (I * self.theta_dot - half) * e.conj()],
            &[(-I * self.theta_dot - half) * e, C64::new(-diag, 0.0)],
        ])
        .expect("2x2")
    }

    /// Adiabaticity ratio `|ħθ̇| / (E₂ − E₁)` for a given gap.
    pub fn adiabaticity_ratio(&self, gap: f64) -> f64 {
        if gap == 0.0 {
            return f64::INFINITY;
        }
        (self.theta_dot / gap).abs()
    }
}
