//! Sweep definitions and the parallel runner.
//!
//! Each grid value is an independent propagation. Points run on a rayon
//! pool of the requested size and are merged in grid order, so the output
//! does not depend on scheduling.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use stalab_core::observables::relative_populations;
use stalab_core::propagate::oracle::initial_eigenstate;
use stalab_core::propagate::{evolve_density, evolve_state};
use stalab_core::{AddParams, AlphaLaw, CVec, GammaLaw, IntegratorConfig, LzSchedule, Nullify};

use crate::error::{Error, Result};
use crate::figures::{Figure, Grid};
use crate::table::{Cell, Table};

/// CSV time resolution.
pub const SAMPLE_INTERVAL: f64 = 1e-3;

/// Constant gain/loss rate of the fixed-γ runs.
pub const GAMMA_CONSTANT: f64 = 0.5;

/// Offset `c` of the time-dependent rate `γ = 1/(c + t²)`.
pub const GAMMA_OFFSET: f64 = 2.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub figure: Figure,
    /// Sweep values; `None` uses the axis default. Ignored by unswept figures.
    pub grid: Option<Grid>,
    pub schedule: LzSchedule,
    pub integrator: IntegratorConfig,
    /// Eigenstate (1 or 2) that the non-Hermitian runs start in and protect.
    pub protect: Option<usize>,
    pub workers: usize,
}

impl SweepSpec {
    pub fn new(figure: Figure) -> Self {
        SweepSpec {
            figure,
            grid: None,
            schedule: LzSchedule::default(),
            integrator: IntegratorConfig::default(),
            protect: None,
            workers: 1,
        }
    }

    pub fn with_grid(self, grid: Grid) -> Self {
        SweepSpec { grid: Some(grid), ..self }
    }

    /// The sweep values, or `[None]` for an unswept figure.
    pub fn values(&self) -> Vec<Option<f64>> {
        match self.figure.axis() {
            Some(axis) => self.grid.unwrap_or_else(|| axis.default_grid()).values().into_iter().map(Some).collect(),
            None => vec![None],
        }
    }

    pub fn protected_level(&self) -> usize {
        self.protect.or(self.figure.default_protected_level()).unwrap_or(2)
    }

    /// Integrator copy that records at [`SAMPLE_INTERVAL`].
    pub fn sampling_integrator(&self) -> IntegratorConfig {
        let every = (SAMPLE_INTERVAL / self.integrator.step).round().max(1.0) as usize;
        self.integrator.recording_every(every)
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        self.integrator.steps_for(self.schedule.duration())?;
        if let Some(g) = &self.grid {
            g.validate()?;
        }
        if !matches!(self.protect, None | Some(1) | Some(2)) {
            return Err(Error::Config(format!("protected level must be 1 or 2, got {:?}", self.protect)));
        }
        if self.workers == 0 {
            return Err(Error::Config("at least one worker is required".into()));
        }
        Ok(())
    }
}

/// Whether the figure integrates a state or a density operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Evolution {
    State,
    Density,
}

/// Schedule, adding term and initial state for one sweep point.
#[derive(Clone, Debug)]
pub struct PointSetup {
    pub schedule: LzSchedule,
    pub add: Option<AddParams>,
    pub psi0: CVec,
    pub evolution: Evolution,
}

fn protecting(level: usize) -> stalab_core::Result<Nullify> {
    Nullify::for_protected_level(level).ok_or(stalab_core::Error::LevelOutOfRange { level, dim: 2 })
}

/// The figure's drive at sweep value `value`.
pub fn point_setup(spec: &SweepSpec, value: Option<f64>) -> stalab_core::Result<PointSetup> {
    let v = value.unwrap_or(0.0);
    let base = spec.schedule;
    let ground = CVec::basis(2, 1)?;
    let level = spec.protected_level();
    let state = |schedule, add| PointSetup { schedule, add, psi0: ground.clone(), evolution: Evolution::State };
    let density = |gamma| -> stalab_core::Result<PointSetup> {
        Ok(PointSetup {
            schedule: base,
            add: Some(AddParams::non_hermitian(AlphaLaw::Constant(0.0), gamma, protecting(level)?)?),
            psi0: initial_eigenstate(&base, level)?,
            evolution: Evolution::Density,
        })
    };
    match spec.figure {
        Figure::Fig1a => Ok(state(base, Some(AddParams::hermitian(AlphaLaw::Constant(v))))),
        Figure::Fig1b => Ok(state(base, Some(AddParams::hermitian(AlphaLaw::ThetaDot(v))))),
        Figure::Fig1c => Ok(state(base, Some(AddParams::beta_dropped(v)))),
        Figure::Fig2a => Ok(state(base.with_kappa(v), Some(AddParams::hermitian(AlphaLaw::Transitionless)))),
        Figure::Fig2b => Ok(state(base.with_kappa(v), Some(AddParams::hermitian(AlphaLaw::Constant(0.0))))),
        Figure::Fig2c => Ok(state(base.with_kappa(v), None)),
        Figure::Fig3 | Figure::Fig6 => density(GammaLaw::Constant(GAMMA_CONSTANT)),
        Figure::Fig4 => density(GammaLaw::Constant(v)),
        Figure::Fig5 => density(GammaLaw::InverseQuadratic { offset: GAMMA_OFFSET }),
    }
}

/// Sampled populations of one sweep point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointRun {
    pub value: Option<f64>,
    pub times: Vec<f64>,
    pub populations: Vec<[f64; 2]>,
    pub norm: Vec<f64>,
}

impl PointRun {
    pub fn final_populations(&self) -> [f64; 2] {
        *self.populations.last().expect("runs keep the initial sample")
    }

    pub fn final_relative(&self) -> Option<(f64, f64)> {
        let [p1, p2] = self.final_populations();
        relative_populations(p1, p2).ok()
    }
}

pub fn run_point(spec: &SweepSpec, value: Option<f64>) -> stalab_core::Result<PointRun> {
    let setup = point_setup(spec, value)?;
    let cfg = spec.sampling_integrator();
    let add = setup.add.as_ref();
    let (times, populations, norm) = match setup.evolution {
        Evolution::State => {
            let t = evolve_state(&setup.schedule, add, &setup.psi0, &cfg)?;
            (t.times, t.populations, t.norm)
        }
        Evolution::Density => {
            let rho0 = setup.psi0.outer(&setup.psi0)?;
            let t = evolve_density(&setup.schedule, add, &rho0, &cfg)?;
            (t.times, t.populations, t.norm)
        }
    };
    Ok(PointRun { value, times, populations, norm })
}

/// Runs every sweep point on a pool of `spec.workers` threads; results come
/// back in grid order.
pub fn run_points(spec: &SweepSpec) -> Result<Vec<PointRun>> {
    spec.validate()?;
    let values = spec.values();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(spec.workers).build()?;
    let results: Vec<_> = pool.install(|| values.par_iter().map(|v| run_point(spec, *v)).collect());
    let axis = spec.figure.axis().map_or("point", |a| a.name());
    let mut runs = results
        .into_iter()
        .zip(&values)
        .map(|(r, v)| {
            r.map_err(|source| Error::Point { figure: spec.figure.name(), axis, value: v.unwrap_or(f64::NAN), source })
        })
        .collect::<Result<Vec<_>>>()?;
    runs.sort_by(|a, b| a.value.unwrap_or(0.0).total_cmp(&b.value.unwrap_or(0.0)));
    Ok(runs)
}

/// Labels and γ laws of the pulse-shape series. `γ = 0` cancels both
/// couplings; the others cancel one.
fn pulse_series() -> [(&'static str, GammaLaw); 3] {
    [
        ("gamma_0", GammaLaw::Constant(0.0)),
        ("gamma_0.5", GammaLaw::Constant(GAMMA_CONSTANT)),
        ("gamma_inverse_quadratic", GammaLaw::InverseQuadratic { offset: GAMMA_OFFSET }),
    ]
}

/// `Im A₁₂(t)` for the three pulse series on the CSV time grid.
pub fn pulse_table(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let s = spec.schedule;
    let n = (s.duration() / SAMPLE_INTERVAL).round().max(1.0) as usize;
    let nullify = protecting(spec.protected_level())?;
    let mut table = Table::new(Figure::Fig6.header());
    for (label, gamma) in pulse_series() {
        let p = match gamma {
            GammaLaw::Constant(0.0) => AddParams::hermitian(AlphaLaw::Constant(0.0)),
            _ => AddParams::non_hermitian(AlphaLaw::Constant(0.0), gamma, nullify)?,
        };
        for k in 0..=n {
            let t = if k == n { s.tf } else { s.tau + s.duration() * k as f64 / n as f64 };
            let a = s.angle(t);
            let solved = p.solve(&a, t)?;
            table.push(vec![
                Cell::Text(label),
                Cell::Num(t),
                Cell::Num(solved.gamma),
                Cell::Num(solved.h_add[(0, 1)].im),
            ]);
        }
    }
    Ok(table)
}

fn relative_cells(p: [f64; 2]) -> [Cell; 2] {
    match relative_populations(p[0], p[1]) {
        Ok((r1, r2)) => [Cell::Num(r1), Cell::Num(r2)],
        Err(_) => [Cell::Empty, Cell::Empty],
    }
}

/// The figure's full table.
pub fn run_sweep(spec: &SweepSpec) -> Result<Table> {
    if spec.figure == Figure::Fig6 {
        return pulse_table(spec);
    }
    let runs = run_points(spec)?;
    let mut table = Table::new(spec.figure.header());
    for run in &runs {
        for k in 0..run.times.len() {
            let p = run.populations[k];
            let mut row = Vec::with_capacity(table.header.len());
            if let Some(v) = run.value {
                row.push(Cell::Num(v));
            }
            row.extend([Cell::Num(run.times[k]), Cell::Num(p[0]), Cell::Num(p[1])]);
            if matches!(spec.figure, Figure::Fig3 | Figure::Fig4 | Figure::Fig5) {
                row.extend(relative_cells(p));
            }
            row.push(Cell::Num(run.norm[k]));
            table.push(row);
        }
    }
    Ok(table)
}

/// Runs the sweep and writes `<dir>/<figure>.csv`.
pub fn write_figure(spec: &SweepSpec, dir: &Path) -> Result<PathBuf> {
    let table = run_sweep(spec)?;
    fs::create_dir_all(dir).map_err(|source| Error::Write { path: dir.to_path_buf(), source })?;
    let path = dir.join(spec.figure.file_name());
    let file = fs::File::create(&path).map_err(|source| Error::Write { path: path.clone(), source })?;
    table.write(std::io::BufWriter::new(file))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick(figure: Figure) -> SweepSpec {
        SweepSpec { integrator: IntegratorConfig::with_step(1e-3), ..SweepSpec::new(figure) }
    }

    #[test]
    fn default_values() {
        assert_eq!(quick(Figure::Fig1b).values().len(), 101);
        assert_eq!(quick(Figure::Fig3).values(), vec![None]);
        let g = quick(Figure::Fig4).values();
        assert_eq!((g[0], g[100]), (Some(0.0), Some(1.0)));
    }

    #[test]
    fn protected_levels() {
        assert_eq!(quick(Figure::Fig3).protected_level(), 1);
        assert_eq!(quick(Figure::Fig4).protected_level(), 2);
        let spec = SweepSpec { protect: Some(2), ..quick(Figure::Fig5) };
        assert_eq!(spec.protected_level(), 2);
        assert_eq!(point_setup(&spec, None).unwrap().add.unwrap().nullify, Nullify::Upper);
        assert!(SweepSpec { protect: Some(3), ..quick(Figure::Fig3) }.validate().is_err());
        assert!(SweepSpec { workers: 0, ..quick(Figure::Fig3) }.validate().is_err());
    }

    #[test]
    fn sampling_matches_csv_resolution() {
        assert_eq!(SweepSpec::new(Figure::Fig1a).sampling_integrator().record_every, 10);
        assert_eq!(quick(Figure::Fig1a).sampling_integrator().record_every, 1);
    }

    #[test]
    fn swept_rows_are_ordered() {
        let spec = quick(Figure::Fig1a).with_grid(Grid::new(2.0, 0.0, 3).unwrap());
        let table = run_sweep(&spec).unwrap();
        assert_eq!(table.rows.len(), 3 * 2001);
        let key = |r: &Vec<Cell>| match (&r[0], &r[1]) {
            (Cell::Num(a), Cell::Num(t)) => (*a, *t),
            _ => panic!(),
        };
        for w in table.rows.windows(2) {
            let (a, b) = (key(&w[0]), key(&w[1]));
            assert!(a.0 < b.0 || (a.0 == b.0 && a.1 < b.1));
        }
    }

    #[test]
    fn pulse_table_peaks_at_the_crossing() {
        let table = pulse_table(&quick(Figure::Fig6)).unwrap();
        assert_eq!(table.rows.len(), 3 * 2001);
        let hermitian: Vec<(f64, f64)> = table
            .rows
            .iter()
            .filter(|r| r[0] == Cell::Text("gamma_0"))
            .map(|r| match (&r[1], &r[3]) {
                (Cell::Num(t), Cell::Num(v)) => (*t, *v),
                _ => panic!(),
            })
            .collect();
        let (t_peak, v_peak) = hermitian.iter().copied().max_by(|a, b| a.1.abs().total_cmp(&b.1.abs())).unwrap();
        assert!(t_peak.abs() < 1e-12);
        assert!((v_peak.abs() - 4.5).abs() < 1e-12);
    }

    #[test]
    fn failures_name_the_grid_point() {
        let mut spec = quick(Figure::Fig4).with_grid(Grid::new(0.0, 1e6, 2).unwrap());
        spec.integrator = IntegratorConfig::with_step(1e-2);
        let err = run_points(&spec).unwrap_err();
        assert!(err.to_string().contains("gamma = 1000000"), "{err}");
    }
}
