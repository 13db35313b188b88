//! Substitute adding Hamiltonians for the Landau-Zener drive.
//!
//! The adding term is parameterized as
//!
//! ```text
//! H_add = ħ [[η + iγ,            (α + iβ) e^{−iφ}],
//!            [(α − iβ) e^{iφ},   −η − iγ        ]]
//! ```
//!
//! with α and γ free and η, β fixed by cancelling the nonadiabatic coupling
//! in the eigen picture:
//!
//! - `α·cot2θ + η = φ̇/2` in every case;
//! - Hermitian (`γ = 0`), both couplings cancelled: `β = θ̇`;
//! - [`Nullify::Upper`] cancels the `(1,2)` entry: `β = θ̇ − γ·sin2θ`.
//!   Population starting in `|φ₂⟩` cannot leak into `|φ₁⟩`.
//! - [`Nullify::Lower`] cancels the `(2,1)` entry: `β = θ̇ + γ·sin2θ`.
//!   Population starting in `|φ₁⟩` cannot leak into `|φ₂⟩`.
//!
//! With `γ ≠ 0` only one of the two entries can be cancelled.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::lz::{AngleState, LzSchedule};
use crate::smallmat::{CMat, C64};

/// A design function of time and the instantaneous angles.
pub type DesignFn = Arc<dyn Fn(f64, &AngleState) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum AlphaLaw {
    /// `α = α₀`.
    Constant(f64),
    /// `α = α₀·θ̇`.
    ThetaDot(f64),
    /// `α = −(φ̇/2)·sin2θ`, which makes `H_add` the counterdiabatic term.
    Transitionless,
    Custom(DesignFn),
}

#[derive(Clone)]
pub enum GammaLaw {
    /// `γ = γ₀`.
    Constant(f64),
    /// `γ = 1/(offset + t²)`.
    InverseQuadratic {
        offset: f64,
    },
    /// `γ = ±θ̇/sin2θ`, the sign chosen so that `β` vanishes for the
    /// nullified direction (`+` for [`Nullify::Upper`], `−` for
    /// [`Nullify::Lower`]).
    BetaCancelling,
    Custom(DesignFn),
}

impl fmt::Debug for AlphaLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(a) => write!(f, "Constant({a})"),
            Self::ThetaDot(a) => write!(f, "ThetaDot({a})"),
            Self::Transitionless => write!(f, "Transitionless"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl fmt::Debug for GammaLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(g) => write!(f, "Constant({g})"),
            Self::InverseQuadratic { offset } => write!(f, "InverseQuadratic {{ offset: {offset} }}"),
            Self::BetaCancelling => write!(f, "BetaCancelling"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Which off-diagonal entries of the eigen-picture coupling are cancelled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nullify {
    /// Both entries; only possible for `γ ≡ 0`.
    Both,
    /// The `(1,2)` entry. Protects an evolution started in `|φ₂⟩`.
    Upper,
    /// The `(2,1)` entry. Protects an evolution started in `|φ₁⟩`.
    Lower,
}

impl Nullify {
    /// Ordered level pairs whose coupling is cancelled.
    pub fn pairs(self) -> &'static [(usize, usize)] {
        match self {
            Nullify::Both => &[(1, 2), (2, 1)],
            Nullify::Upper => &[(1, 2)],
            Nullify::Lower => &[(2, 1)],
        }
    }

    /// The eigenstate (1-based) that stays populated alone when started
    /// exactly; `None` for `Both`, where any superposition is preserved.
    pub fn protected_level(self) -> Option<usize> {
        match self {
            Nullify::Both => None,
            Nullify::Upper => Some(2),
            Nullify::Lower => Some(1),
        }
    }

    pub fn for_protected_level(level: usize) -> Option<Nullify> {
        match level {
            1 => Some(Nullify::Lower),
            2 => Some(Nullify::Upper),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AddParams {
    pub alpha: AlphaLaw,
    pub gamma: GammaLaw,
    pub nullify: Nullify,
    /// Drop `β` after solving. The result no longer cancels the coupling
    /// unless `γ` is [`GammaLaw::BetaCancelling`].
    pub force_beta_zero: bool,
}

impl AddParams {
    pub fn new(alpha: AlphaLaw, gamma: GammaLaw, nullify: Nullify, force_beta_zero: bool) -> Result<Self> {
        let p = Self { alpha, gamma, nullify, force_beta_zero };
        p.validate()?;
        Ok(p)
    }

    /// Hermitian family, both couplings cancelled.
    pub fn hermitian(alpha: AlphaLaw) -> Self {
        Self { alpha, gamma: GammaLaw::Constant(0.0), nullify: Nullify::Both, force_beta_zero: false }
    }

    /// `α = α₀θ̇` with the imaginary part of the off-diagonal dropped.
    pub fn beta_dropped(alpha0: f64) -> Self {
        Self { force_beta_zero: true, ..Self::hermitian(AlphaLaw::ThetaDot(alpha0)) }
    }

    pub fn non_hermitian(alpha: AlphaLaw, gamma: GammaLaw, nullify: Nullify) -> Result<Self> {
        Self::new(alpha, gamma, nullify, false)
    }

    pub fn validate(&self) -> Result<()> {
        let gamma_zero = matches!(self.gamma, GammaLaw::Constant(g) if g == 0.0);
        if self.nullify == Nullify::Both && !gamma_zero && !matches!(self.gamma, GammaLaw::Custom(_)) {
            return Err(Error::InvalidParams("cancelling both couplings requires gamma = 0"));
        }
        if self.force_beta_zero
            && !matches!(self.alpha, AlphaLaw::ThetaDot(_))
            && !matches!(self.gamma, GammaLaw::BetaCancelling)
        {
            return Err(Error::InvalidParams(
                "dropping beta needs alpha = alpha0*theta_dot or a beta-cancelling gamma",
            ));
        }
        match self.alpha {
            AlphaLaw::Constant(a) | AlphaLaw::ThetaDot(a) if !a.is_finite() => {
                return Err(Error::InvalidParams("alpha0 must be finite"))
            }
            _ => {}
        }
        match self.gamma {
            GammaLaw::Constant(g) if !g.is_finite() => return Err(Error::InvalidParams("gamma must be finite")),
            GammaLaw::InverseQuadratic { offset } if offset.is_nan() || offset <= 0.0 => {
                return Err(Error::InvalidParams("gamma offset must be positive"))
            }
            _ => {}
        }
        Ok(())
    }

    /// True when the constraints are solved exactly, i.e. the chosen
    /// couplings are cancelled at every instant.
    pub fn is_shortcut(&self) -> bool {
        !self.force_beta_zero || matches!(self.gamma, GammaLaw::BetaCancelling)
    }

    pub fn alpha_at(&self, t: f64, a: &AngleState) -> f64 {
        match &self.alpha {
            AlphaLaw::Constant(a0) => *a0,
            AlphaLaw::ThetaDot(a0) => a0 * a.theta_dot,
            AlphaLaw::Transitionless => -0.5 * a.phi_dot * a.sin2(),
            AlphaLaw::Custom(f) => f(t, a),
        }
    }

    pub fn gamma_at(&self, t: f64, a: &AngleState) -> f64 {
        match &self.gamma {
            GammaLaw::Constant(g) => *g,
            GammaLaw::InverseQuadratic { offset } => 1.0 / (offset + t * t),
            GammaLaw::BetaCancelling => {
                let g = a.theta_dot / a.sin2();
                match self.nullify {
                    Nullify::Lower => -g,
                    _ => g,
                }
            }
            GammaLaw::Custom(f) => f(t, a),
        }
    }

    pub fn solve(&self, a: &AngleState, t: f64) -> Result<SolvedAdd> {
        solve_add(a, self, t)
    }
}

/// Adding-Hamiltonian coefficients and matrix at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct SolvedAdd {
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub gamma: f64,
    pub h_add: CMat,
}

impl SolvedAdd {
    /// Off-diagonal amplitude `α + iβ` with the drive phase stripped.
    pub fn coupling(&self) -> C64 {
        C64::new(self.alpha, self.beta)
    }
}

pub fn solve_add(a: &AngleState, p: &AddParams, t: f64) -> Result<SolvedAdd> {
    let alpha = p.alpha_at(t, a);
    let gamma = p.gamma_at(t, a);
    let sin2 = a.sin2();
    let eta = 0.5 * a.phi_dot - alpha * a.cot2();
    let mut beta = match p.nullify {
        Nullify::Both if gamma != 0.0 => return Err(Error::BothDirectionsWithLoss { t, gamma }),
        Nullify::Both => a.theta_dot,
        Nullify::Upper => a.theta_dot - gamma * sin2,
        Nullify::Lower => a.theta_dot + gamma * sin2,
    };
    if p.force_beta_zero || matches!(p.gamma, GammaLaw::BetaCancelling) {
        beta = 0.0;
    }
    let values = [alpha, beta, eta, gamma];
    if values.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite { t });
    }
    let diag = C64::new(eta, gamma);
    let upper = C64::new(alpha, beta) * C64::from_polar(1.0, -a.phi);
    let lower = C64::new(alpha, -beta) * C64::from_polar(1.0, a.phi);
    let h_add = CMat::from_rows(&[&[diag, upper], &[lower, -diag]])?;
    Ok(SolvedAdd { alpha, beta, eta, gamma, h_add })
}

/// Magnitude of the eigenvalues `±√(η² + α² + β²)` of a Hermitian adding
/// term. When the constraints hold this is `√((φ̇/2 − α·cot2θ)² + α² + θ̇²)`.
pub fn energy_cost(solved: &SolvedAdd) -> Result<f64> {
    if solved.gamma != 0.0 {
        return Err(Error::NotHermitian);
    }
    Ok(libm::sqrt(solved.eta * solved.eta + solved.alpha * solved.alpha + solved.beta * solved.beta))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    Constant,
    VanishingAtEnds,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentBoundary {
    pub kind: BoundaryKind,
    pub at_start: f64,
    pub at_end: f64,
    /// `max − min` over the window.
    pub spread: f64,
}

impl ComponentBoundary {
    fn classify(values: &[f64], tol: f64) -> Self {
        let at_start = values[0];
        let at_end = values[values.len() - 1];
        let (lo, hi) = values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        let spread = hi - lo;
        let kind = if spread <= tol {
            BoundaryKind::Constant
        } else if at_start.abs() <= tol && at_end.abs() <= tol {
            BoundaryKind::VanishingAtEnds
        } else {
            BoundaryKind::Neither
        };
        Self { kind, at_start, at_end, spread }
    }

    pub fn passes(&self) -> bool {
        self.kind != BoundaryKind::Neither
    }
}

/// Boundary behaviour of the drive-phase-stripped off-diagonal `α + iβ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryReport {
    pub real: ComponentBoundary,
    pub imag: ComponentBoundary,
}

impl BoundaryReport {
    pub fn passes(&self) -> bool {
        self.real.passes() && self.imag.passes()
    }
}

/// Checks whether `Re A₁₂` and `Im A₁₂` are each constant over `[τ, t_f]`
/// or vanish at both ends, within `tol`, using `samples` equally spaced
/// instants.
pub fn boundary_check(p: &AddParams, s: &LzSchedule, samples: usize, tol: f64) -> Result<BoundaryReport> {
    let samples = samples.max(2);
    let h = s.duration() / (samples - 1) as f64;
    let mut re = Vec::with_capacity(samples);
    let mut im = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = s.tau + k as f64 * h;
        let solved = solve_add(&s.angle(t), p, t)?;
        re.push(solved.alpha);
        im.push(solved.beta);
    }
    Ok(BoundaryReport { real: ComponentBoundary::classify(&re, tol), imag: ComponentBoundary::classify(&im, tol) })
}

/// `|∫ γ cos2θ dt|` over the grid by the trapezoid rule. The modulus of the
/// protected amplitude at `t_f` is `exp(±∫γ cos2θ dt)`, so a small value
/// certifies that the norm returns to its initial value.
pub fn gamma_odd_check(p: &AddParams, s: &LzSchedule, grid: &[f64]) -> Result<f64> {
    if grid.len() < 2 {
        return Err(Error::InvalidGrid);
    }
    let span = s.duration();
    let tol = 1e-9 * span;
    let n = grid.len();
    let symmetric = s.is_symmetric(tol)
        && (0..n).all(|k| (grid[k] + grid[n - 1 - k]).abs() <= tol)
        && (grid[0] - s.tau).abs() <= tol
        && (grid[n - 1] - s.tf).abs() <= tol;
    if !symmetric {
        return Err(Error::AsymmetricGrid);
    }
    let integrand = |t: f64| {
        let a = s.angle(t);
        p.gamma_at(t, &a) * a.cos2()
    };
    let mut total = 0.0;
    let mut prev = integrand(grid[0]);
    for w in grid.windows(2) {
        let next = integrand(w[1]);
        total += 0.5 * (w[1] - w[0]) * (prev + next);
        prev = next;
    }
    Ok(total.abs())
}
