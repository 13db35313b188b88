//! JSON configuration for single simulations.
//!
//! ```json
//! {
//!   "schedule": { "omega0": 1, "zeta2": 9, "kappa": 0, "tau": -1, "tf": 1 },
//!   "add": { "alpha": { "theta_dot": 2.0 }, "gamma": { "constant": 0.5 }, "nullify": "lower" },
//!   "integrator": { "step": 1e-4, "record_every": 10 },
//!   "initial": { "eigenstate": 1 },
//!   "evolution": "density"
//! }
//! ```
//!
//! Every section and field is optional; unknown keys are rejected.

use std::fs;
use std::path::Path;

use serde::Deserialize;
use stalab_core::observables::relative_populations;
use stalab_core::propagate::oracle::initial_eigenstate;
use stalab_core::propagate::{evolve_density, evolve_state, Method};
use stalab_core::{AddParams, AlphaLaw, CVec, GammaLaw, IntegratorConfig, LzSchedule, Nullify, C64};

use crate::error::{Error, Result};
use crate::sweep::Evolution;
use crate::table::{Cell, Table};

pub const SIMULATION_HEADER: &[&str] = &["t", "p1", "p2", "p1_rel", "p2_rel", "norm"];

#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub add: Option<AddConfig>,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub initial: InitialState,
    #[serde(default)]
    pub evolution: EvolutionKind,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleConfig {
    pub omega0: f64,
    pub zeta2: f64,
    pub kappa: f64,
    pub tau: f64,
    pub tf: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        let s = LzSchedule::default();
        ScheduleConfig { omega0: s.omega0, zeta2: s.zeta2, kappa: s.kappa, tau: s.tau, tf: s.tf }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlphaConfig {
    Constant(f64),
    #[serde(alias = "proportional_theta_dot")]
    ThetaDot(f64),
    Transitionless,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GammaConfig {
    Constant(f64),
    InverseQuadratic { offset: f64 },
    BetaCancelling,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum NullifyConfig {
    #[default]
    #[serde(alias = "suppress_both")]
    Both,
    /// Cancels the (1,2) coupling, protecting eigenstate 2.
    #[serde(alias = "suppress_into2")]
    Upper,
    /// Cancels the (2,1) coupling, protecting eigenstate 1.
    #[serde(alias = "suppress_into1")]
    Lower,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AddConfig {
    #[serde(default = "AddConfig::default_alpha")]
    pub alpha: AlphaConfig,
    #[serde(default = "AddConfig::default_gamma")]
    pub gamma: GammaConfig,
    #[serde(default, alias = "direction")]
    pub nullify: NullifyConfig,
    #[serde(default)]
    pub force_beta_zero: bool,
}

impl AddConfig {
    fn default_alpha() -> AlphaConfig {
        AlphaConfig::Constant(0.0)
    }

    fn default_gamma() -> GammaConfig {
        GammaConfig::Constant(0.0)
    }

    pub fn to_params(&self) -> Result<AddParams> {
        let alpha = match self.alpha {
            AlphaConfig::Constant(a) => AlphaLaw::Constant(a),
            AlphaConfig::ThetaDot(a) => AlphaLaw::ThetaDot(a),
            AlphaConfig::Transitionless => AlphaLaw::Transitionless,
        };
        let gamma = match self.gamma {
            GammaConfig::Constant(g) => GammaLaw::Constant(g),
            GammaConfig::InverseQuadratic { offset } => GammaLaw::InverseQuadratic { offset },
            GammaConfig::BetaCancelling => GammaLaw::BetaCancelling,
        };
        let nullify = match self.nullify {
            NullifyConfig::Both => Nullify::Both,
            NullifyConfig::Upper => Nullify::Upper,
            NullifyConfig::Lower => Nullify::Lower,
        };
        Ok(AddParams::new(alpha, gamma, nullify, self.force_beta_zero)?)
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MethodConfig {
    #[default]
    Rk4,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSection {
    pub step: f64,
    pub method: MethodConfig,
    pub tolerance: f64,
    pub record_every: usize,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        let c = IntegratorConfig::default();
        IntegratorSection { step: c.step, method: MethodConfig::Rk4, tolerance: c.tolerance, record_every: 10 }
    }
}

impl IntegratorSection {
    pub fn to_config(&self) -> IntegratorConfig {
        let method = match self.method {
            MethodConfig::Rk4 => Method::Rk4,
        };
        IntegratorConfig { step: self.step, method, tolerance: self.tolerance, record_every: self.record_every }
    }
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    /// Bare state `|n⟩`.
    Basis(usize),
    /// Instantaneous eigenstate `|φₙ(τ)⟩`.
    Eigenstate(usize),
    /// Amplitudes as `[re, im]` pairs.
    Amplitudes(Vec<[f64; 2]>),
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Basis(1)
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum EvolutionKind {
    #[default]
    State,
    Density,
}

impl SimulationConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::ReadConfig { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn schedule(&self) -> Result<LzSchedule> {
        let c = self.schedule;
        Ok(LzSchedule::new(c.omega0, c.zeta2, c.kappa, c.tau, c.tf)?)
    }

    pub fn initial_state(&self, s: &LzSchedule) -> Result<CVec> {
        Ok(match &self.initial {
            InitialState::Basis(n) => CVec::basis(2, *n)?,
            InitialState::Eigenstate(n) => initial_eigenstate(s, *n)?,
            InitialState::Amplitudes(a) => {
                let v: Vec<C64> = a.iter().map(|[re, im]| C64::new(*re, *im)).collect();
                CVec::from_slice(&v)?
            }
        })
    }

    pub fn evolution(&self) -> Evolution {
        match self.evolution {
            EvolutionKind::State => Evolution::State,
            EvolutionKind::Density => Evolution::Density,
        }
    }

    /// Runs the configured propagation and tabulates populations.
    pub fn run(&self) -> Result<Table> {
        let s = self.schedule()?;
        let add = self.add.as_ref().map(AddConfig::to_params).transpose()?;
        let psi0 = self.initial_state(&s)?;
        let cfg = self.integrator.to_config();
        let (times, populations, norm) = match self.evolution() {
            Evolution::State => {
                let t = evolve_state(&s, add.as_ref(), &psi0, &cfg)?;
                (t.times, t.populations, t.norm)
            }
            Evolution::Density => {
                let t = evolve_density(&s, add.as_ref(), &psi0.outer(&psi0)?, &cfg)?;
                (t.times, t.populations, t.norm)
            }
        };
        let mut table = Table::new(SIMULATION_HEADER);
        for k in 0..times.len() {
            let [p1, p2] = populations[k];
            let rel = relative_populations(p1, p2).ok();
            table.push(vec![
                Cell::Num(times[k]),
                Cell::Num(p1),
                Cell::Num(p2),
                Cell::opt(rel.map(|r| r.0)),
                Cell::opt(rel.map(|r| r.1)),
                Cell::Num(norm[k]),
            ]);
        }
        Ok(table)
    }
}
