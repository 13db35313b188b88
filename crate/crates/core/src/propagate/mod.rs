//! Time evolution under `H(t) = H₀(t) + H_add(t)`.
//!
//! States follow `iħ∂ₜψ = Hψ`; density operators follow
//! `dρ/dt = (1/iħ)(Hρ − ρH†)`, which reduces to the von Neumann equation
//! when `H` is Hermitian and otherwise lets the trace drift. Both use
//! classical fixed-step RK4 with `H` evaluated in closed form at the
//! stage times.

pub mod oracle;

use alloc::vec::Vec;

use crate::designer::{solve_add, AddParams};
use crate::error::{Error, Result};
use crate::lz::LzSchedule;
use crate::observables::Populations;
use crate::smallmat::{CMat, CVec, C64, I};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    #[default]
    Rk4,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub step: f64,
    pub method: Method,
    /// Target accuracy of convergence-by-halving checks.
    pub tolerance: f64,
    /// Keep every n-th step in the trajectory (the last step is always kept).
    pub record_every: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self { step: 1e-4, method: Method::Rk4, tolerance: 1e-8, record_every: 1 }
    }
}

impl IntegratorConfig {
    pub fn with_step(step: f64) -> Self {
        Self { step, ..Self::default() }
    }

    pub fn recording_every(self, record_every: usize) -> Self {
        Self { record_every, ..self }
    }

    /// Number of steps covering `duration`; the step is shrunk slightly so
    /// the grid lands on the final time.
    pub fn steps_for(&self, duration: f64) -> Result<usize> {
        let max = duration / 100.0;
        // allow for rounding in `duration / 100`
        if self.step.is_nan() || self.step <= 0.0 || self.step > max * (1.0 + 1e-12) || self.record_every == 0 {
            return Err(Error::InvalidStep { step: self.step, max });
        }
        Ok(libm::ceil(duration / self.step - 1e-9) as usize)
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub populations: Vec<[f64; 2]>,
    pub norm: Vec<f64>,
}

impl<S> Trajectory<S> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &S {
        self.states.last().expect("trajectory has the initial sample")
    }

    pub fn final_populations(&self) -> [f64; 2] {
        *self.populations.last().expect("trajectory has the initial sample")
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(&self.states)
    }
}

/// `H₀(t) + H_add(t)`, or `H₀(t)` alone when `add` is `None`.
pub fn total_hamiltonian(s: &LzSchedule, add: Option<&AddParams>, t: f64) -> Result<CMat> {
    let h0 = s.h0(t);
    match add {
        None => Ok(h0),
        Some(p) => Ok(&h0 + &solve_add(&s.angle(t), p, t)?.h_add),
    }
}

trait OdeState: Clone + Populations {
    fn axpy(&self, k: f64, d: &Self) -> Self;
    fn finite(&self) -> bool;
}

impl OdeState for CVec {
    fn axpy(&self, k: f64, d: &Self) -> Self {
        self.add_scaled(d, C64::new(k, 0.0)).expect("same dim")
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

impl OdeState for CMat {
    fn axpy(&self, k: f64, d: &Self) -> Self {
        self.add_scaled(d, C64::new(k, 0.0)).expect("same dim")
    }
    fn finite(&self) -> bool {
        self.is_finite()
    }
}

fn two_populations<S: Populations>(state: &S) -> [f64; 2] {
    let p = state.populations();
    [p[0], p[1]]
}

fn integrate<S: OdeState>(
    s: &LzSchedule,
    cfg: &IntegratorConfig,
    y0: S,
    hamiltonian: impl Fn(f64) -> Result<CMat>,
    rhs: impl Fn(&CMat, &S) -> S,
) -> Result<Trajectory<S>> {
    s.validate()?;
    let n = cfg.steps_for(s.duration())?;
    let h = s.duration() / n as f64;
    let capacity = n / cfg.record_every + 2;
    let mut traj = Trajectory {
        times: Vec::with_capacity(capacity),
        states: Vec::with_capacity(capacity),
        populations: Vec::with_capacity(capacity),
        norm: Vec::with_capacity(capacity),
    };
    let mut record = |t: f64, y: &S| {
        let p = two_populations(y);
        traj.times.push(t);
        traj.populations.push(p);
        traj.norm.push(p[0] + p[1]);
        traj.states.push(y.clone());
    };

    let mut y = y0;
    record(s.tau, &y);
    let mut h_start = hamiltonian(s.tau)?;
    for k in 0..n {
        let t = s.tau + k as f64 * h;
        let t_next = if k + 1 == n { s.tf } else { s.tau + (k + 1) as f64 * h };
        let h_mid = hamiltonian(t + 0.5 * h)?;
        let h_end = hamiltonian(t_next)?;
        let k1 = rhs(&h_start, &y);
        let k2 = rhs(&h_mid, &y.axpy(0.5 * h, &k1));
        let k3 = rhs(&h_mid, &y.axpy(0.5 * h, &k2));
        let k4 = rhs(&h_end, &y.axpy(h, &k3));
        y = y.axpy(h / 6.0, &k1).axpy(h / 3.0, &k2).axpy(h / 3.0, &k3).axpy(h / 6.0, &k4);
        if !y.finite() {
            return Err(Error::NonFinite { t: t_next });
        }
        if (k + 1) % cfg.record_every == 0 || k + 1 == n {
            record(t_next, &y);
        }
        h_start = h_end;
    }
    Ok(traj)
}

/// Integrates `iħ∂ₜψ = (H₀ + H_add)ψ` over the schedule window.
pub fn evolve_state(
    s: &LzSchedule,
    add: Option<&AddParams>,
    psi0: &CVec,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<CVec>> {
    if psi0.dim() != 2 {
        return Err(Error::DimensionMismatch { left: 2, right: psi0.dim() });
    }
    if psi0.norm_sqr() == 0.0 {
        return Err(Error::ZeroState);
    }
    integrate(s, cfg, psi0.clone(), |t| total_hamiltonian(s, add, t), |h, psi| (h * psi).scale(-I))
}

/// Integrates `dρ/dt = −i(Hρ − ρH†)` over the schedule window.
pub fn evolve_density(
    s: &LzSchedule,
    add: Option<&AddParams>,
    rho0: &CMat,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<CMat>> {
    if rho0.dim() != 2 {
        return Err(Error::DimensionMismatch { left: 2, right: rho0.dim() });
    }
    integrate(
        s,
        cfg,
        rho0.clone(),
        |t| total_hamiltonian(s, add, t),
        |h, rho| {
            let left = h * rho;
            let right = rho * &h.adjoint();
            (&left - &right).scale(-I)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designer::{AlphaLaw, GammaLaw, Nullify};
    use approx::assert_abs_diff_eq;

    #[test]
    fn step_limits() {
        let s = LzSchedule::default();
        assert_eq!(IntegratorConfig::with_step(0.02).steps_for(2.0).unwrap(), 100);
        assert_eq!(IntegratorConfig::with_step(1e-4).steps_for(2.0).unwrap(), 20000);
        assert_eq!(
            IntegratorConfig::with_step(0.03).steps_for(2.0).unwrap_err(),
            Error::InvalidStep { step: 0.03, max: 0.02 }
        );
        assert!(IntegratorConfig::with_step(0.0).steps_for(2.0).is_err());
        assert!(IntegratorConfig::with_step(-1e-3).steps_for(2.0).is_err());
        let psi = CVec::basis(2, 1).unwrap();
        assert!(matches!(
            evolve_state(&s, None, &psi, &IntegratorConfig::with_step(0.05)),
            Err(Error::InvalidStep { .. })
        ));
    }

    #[test]
    fn rejects_bad_initial_states() {
        let s = LzSchedule::default();
        let cfg = IntegratorConfig::with_step(1e-2);
        assert_eq!(evolve_state(&s, None, &CVec::zeros(2).unwrap(), &cfg).unwrap_err(), Error::ZeroState);
        assert!(evolve_state(&s, None, &CVec::basis(3, 1).unwrap(), &cfg).is_err());
        assert!(evolve_density(&s, None, &CMat::identity(3).unwrap(), &cfg).is_err());
    }

    #[test]
    fn blow_up_is_reported() {
        let s = LzSchedule::default();
        let gain: crate::designer::DesignFn = alloc::sync::Arc::new(|_, _| 1e4);
        let p = AddParams::non_hermitian(AlphaLaw::Constant(0.0), GammaLaw::Custom(gain), Nullify::Upper).unwrap();
        let psi = CVec::basis(2, 1).unwrap();
        let err = evolve_state(&s, Some(&p), &psi, &IntegratorConfig::with_step(1e-2)).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }), "{err:?}");
    }

    #[test]
    fn recording_stride_keeps_endpoints() {
        let s = LzSchedule::default();
        let psi = CVec::basis(2, 1).unwrap();
        let cfg = IntegratorConfig::with_step(1e-3).recording_every(7);
        let traj = evolve_state(&s, None, &psi, &cfg).unwrap();
        assert_eq!(traj.times[0], -1.0);
        assert_eq!(*traj.times.last().unwrap(), 1.0);
        assert_eq!(traj.len(), 2000 / 7 + 2);
    }

    #[test]
    fn hermitian_norm_is_conserved() {
        let s = LzSchedule::default().with_kappa(3.0);
        let psi = CVec::basis(2, 1).unwrap();
        let p = AddParams::hermitian(AlphaLaw::ThetaDot(2.0));
        let traj = evolve_state(&s, Some(&p), &psi, &IntegratorConfig::default().recording_every(100)).unwrap();
        for n in &traj.norm {
            assert_abs_diff_eq!(*n, 1.0, epsilon = 1e-8);
        }
        let rho = psi.outer(&psi).unwrap();
        let dens = evolve_density(&s, Some(&p), &rho, &IntegratorConfig::default().recording_every(100)).unwrap();
        for (rho, n) in dens.states.iter().zip(&dens.norm) {
            assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-8);
            assert_abs_diff_eq!(*n, 1.0, epsilon = 1e-8);
            assert!(rho.is_hermitian(1e-10));
        }
    }

    #[test]
    fn density_stays_hermitian_under_gain_and_loss() {
        let s = LzSchedule::default();
        let p = AddParams::non_hermitian(AlphaLaw::Constant(0.0), GammaLaw::Constant(0.5), Nullify::Lower).unwrap();
        let psi = s.angle(s.tau).eigenvectors()[0].clone();
        let rho = psi.outer(&psi).unwrap();
        let dens = evolve_density(&s, Some(&p), &rho, &IntegratorConfig::default().recording_every(50)).unwrap();
        for rho in &dens.states {
            assert!(rho.is_hermitian(1e-10));
        }
    }
}
