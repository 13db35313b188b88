//! Acceptance checks with measured values, thresholds and verdicts.

use std::fmt;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use stalab_core::designer::gamma_odd_check;
use stalab_core::frame::TwoLevelSolver;
use stalab_core::observables::relative_populations;
use stalab_core::propagate::oracle::{eigen_amplitudes, initial_eigenstate, oracle_nonhermitian, oracle_state};
use stalab_core::propagate::{evolve_density, evolve_state};
use stalab_core::{AddParams, AlphaLaw, CMat, CVec, Frame, FramePath, GammaLaw, IntegratorConfig, LzSchedule, Nullify};

use crate::error::Result;
use crate::figures::{Axis, Figure, Grid};
use crate::sweep::{run_point, run_points, run_sweep, SweepSpec, GAMMA_CONSTANT, GAMMA_OFFSET};

/// Quadrature spacing of the closed-form phase integrals.
pub const ORACLE_QUAD_STEP: f64 = 1e-5;

const FRAME_TOL: f64 = 1e-10;
const RANDOM_SEED: u64 = 0x5eed_2024;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Below,
    Above,
    Equals,
    Within,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub quantity: String,
    pub measured: f64,
    pub relation: Relation,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
    pub pass: bool,
}

impl Check {
    pub fn new(quantity: impl Into<String>, measured: f64, relation: Relation, threshold: f64) -> Check {
        let pass = match relation {
            Relation::AtMost => measured <= threshold,
            Relation::AtLeast => measured >= threshold,
            Relation::Below => measured < threshold,
            Relation::Above => measured > threshold,
            Relation::Equals => measured == threshold,
            Relation::Within => unreachable!("use Check::within"),
        };
        Check { quantity: quantity.into(), measured, relation, threshold, upper: None, pass }
    }

    pub fn within(quantity: impl Into<String>, measured: f64, lo: f64, hi: f64) -> Check {
        let pass = (lo..=hi).contains(&measured);
        Check { quantity: quantity.into(), measured, relation: Relation::Within, threshold: lo, upper: Some(hi), pass }
    }

    pub fn at_most(q: impl Into<String>, m: f64, t: f64) -> Check {
        Check::new(q, m, Relation::AtMost, t)
    }

    pub fn at_least(q: impl Into<String>, m: f64, t: f64) -> Check {
        Check::new(q, m, Relation::AtLeast, t)
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = match self.relation {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Below => "<",
            Relation::Above => ">",
            Relation::Equals => "==",
            Relation::Within => "in",
        };
        match self.upper {
            Some(hi) => write!(f, "{} = {:.6e} {rel} [{}, {}]", self.quantity, self.measured, self.threshold, hi),
            None => write!(f, "{} = {:.6e} {rel} {:e}", self.quantity, self.measured, self.threshold),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Criterion {
    pub fn new(id: u32, name: &'static str, checks: Vec<Check>) -> Criterion {
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Criterion { id, name, checks, pass }
    }

    /// One line: verdict, id, name and every check.
    pub fn summary(&self) -> String {
        let checks: Vec<String> = self.checks.iter().map(|c| c.to_string()).collect();
        format!("[{}] {:>2} {}: {}", if self.pass { "PASS" } else { "FAIL" }, self.id, self.name, checks.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub criteria: Vec<Criterion>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Shared settings of the checks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub integrator: IntegratorConfig,
    pub workers: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { integrator: IntegratorConfig::default(), workers: 1 }
    }
}

impl VerifyOptions {
    fn spec(&self, figure: Figure) -> SweepSpec {
        SweepSpec { integrator: self.integrator, workers: self.workers, ..SweepSpec::new(figure) }
    }

    fn fine(&self) -> IntegratorConfig {
        self.integrator.recording_every(1)
    }
}

fn uniform_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step).round() as usize;
    (0..=n).map(|k| if k == n { end } else { start + (end - start) * k as f64 / n as f64 }).collect()
}

/// Largest change of `|cₙ(t)|` along a trajectory.
fn magnitude_drift(s: &LzSchedule, times: &[f64], states: &[CVec]) -> Result<f64> {
    let c0 = eigen_amplitudes(s, times[0], &states[0])?;
    let mut worst = 0.0f64;
    for (t, psi) in times.iter().zip(states) {
        let c = eigen_amplitudes(s, *t, psi)?;
        for n in 0..2 {
            worst = worst.max((c[n].norm() - c0[n].norm()).abs());
        }
    }
    Ok(worst)
}

/// Eigenpair residual and unitarity of the frames at random times.
pub fn eigen_structure() -> Result<Criterion> {
    let mut rng = StdRng::seed_from_u64(RANDOM_SEED);
    let (mut analytic, mut numeric, mut unitarity) = (0.0f64, 0.0f64, 0.0f64);
    for kappa in [0.0, 5.0] {
        let s = LzSchedule::default().with_kappa(kappa);
        for _ in 0..1000 {
            let t: f64 = rng.gen_range(-1.0..=1.0);
            let h = s.h0(t);
            let vecs = s.angle(t).eigenvectors();
            for (v, e) in vecs.iter().zip(s.energies(t)) {
                let r = h.apply(v)?.add_scaled(v, (-e).into())?;
                analytic = analytic.max(r.norm());
            }
            let r = CMat::from_columns(&vecs)?;
            let id = CMat::identity(2)?;
            unitarity = unitarity.max(r.adjoint().mul(&r)?.max_abs_diff(&id)?);
            let frame = Frame::build(t, &h, &TwoLevelSolver, FRAME_TOL)?;
            numeric = numeric.max(frame.eigen_residual(&h)?);
            unitarity = unitarity.max(frame.unitarity_residual());
        }
    }
    Ok(Criterion::new(
        1,
        "eigen-structure",
        vec![
            Check::at_most("max |H phi - E phi| (closed form)", analytic, 1e-10),
            Check::at_most("max |H phi - E phi| (solver)", numeric, 1e-10),
            Check::at_most("max |R^dag R - I|", unitarity, 1e-12),
        ],
    ))
}

fn cd_deviation(s: &LzSchedule, step: f64) -> Result<f64> {
    let times = uniform_grid(s.tau, s.tf, step);
    let path = FramePath::sample(&times, |t| s.h0(t), &TwoLevelSolver, FRAME_TOL)?;
    let mut worst = 0.0f64;
    for i in path.interior() {
        let exact = s.angle(times[i]).h_cd();
        worst = worst.max(path.cd_term(i)?.max_abs_diff(&exact)?);
    }
    Ok(worst)
}

/// Finite-difference counterdiabatic term against the closed form.
pub fn cd_equivalence() -> Result<Criterion> {
    let mut checks = Vec::new();
    for kappa in [0.0, 5.0] {
        let s = LzSchedule::default().with_kappa(kappa);
        let fine = cd_deviation(&s, 1e-3)?;
        let coarse = cd_deviation(&s, 2e-3)?;
        checks.push(Check::at_most(format!("kappa={kappa}: max |H_cd(fd) - H_cd|"), fine, 1e-6));
        checks.push(Check::at_least(format!("kappa={kappa}: residual ratio on halving"), coarse / fine, 3.0));
    }
    Ok(Criterion::new(2, "counterdiabatic equivalence", checks))
}

/// Hermitian shortcuts preserve eigen-picture magnitudes and match the
/// closed-form final state.
pub fn shortcut_invariance(opts: &VerifyOptions) -> Result<Criterion> {
    let base = LzSchedule::default();
    let cases = [
        ("alpha=0", base, AddParams::hermitian(AlphaLaw::Constant(0.0))),
        ("alpha=1*theta_dot", base, AddParams::hermitian(AlphaLaw::ThetaDot(1.0))),
        ("alpha=5*theta_dot", base, AddParams::hermitian(AlphaLaw::ThetaDot(5.0))),
        ("alpha=-(kappa/2)sin2theta, kappa=5", base.with_kappa(5.0), AddParams::hermitian(AlphaLaw::Transitionless)),
    ];
    let psi0 = CVec::basis(2, 1)?;
    let (mut drift, mut mismatch, mut residual) = (0.0f64, 0.0f64, 0.0f64);
    for (_, s, p) in &cases {
        let traj = evolve_state(s, Some(p), &psi0, &opts.fine())?;
        drift = drift.max(magnitude_drift(s, &traj.times, &traj.states)?);
        let exact = oracle_state(s, p, &psi0, ORACLE_QUAD_STEP)?;
        mismatch = mismatch.max(traj.final_state().max_abs_diff(&exact.final_state)?);

        let times = uniform_grid(s.tau, s.tf, 1e-3);
        let path = FramePath::sample(&times, |t| s.h0(t), &TwoLevelSolver, FRAME_TOL)?;
        for i in path.interior() {
            let h_add = p.solve(&s.angle(times[i]), times[i])?.h_add;
            residual = residual.max(path.nullification_residual(i, &h_add, p.nullify.pairs())?);
        }
    }
    Ok(Criterion::new(
        3,
        "shortcut invariance",
        vec![
            Check::at_most("max drift of |c_n(t)|", drift, 1e-6),
            Check::at_most("max |psi_ode(tf) - psi_oracle(tf)|", mismatch, 1e-6),
            Check::at_most("max nullification residual", residual, 1e-6),
        ],
    ))
}

fn final_p2(spec: &SweepSpec, value: f64) -> Result<f64> {
    Ok(run_point(spec, Some(value))?.final_populations()[1])
}

/// Transfer with `α = α₀θ̇` for a handful of `α₀`, timed.
pub fn fig1b_transfer(opts: &VerifyOptions) -> Result<Criterion> {
    let start = Instant::now();
    let spec = opts.spec(Figure::Fig1b);
    let psi0 = CVec::basis(2, 1)?;
    let (mut worst, mut oracle_gap) = (f64::INFINITY, 0.0f64);
    for alpha0 in [0.0, 1.0, 2.0, 5.0] {
        let p2 = final_p2(&spec, alpha0)?;
        worst = worst.min(p2);
        let exact =
            oracle_state(&spec.schedule, &AddParams::hermitian(AlphaLaw::ThetaDot(alpha0)), &psi0, ORACLE_QUAD_STEP)?;
        oracle_gap = oracle_gap.max((exact.final_state[1].norm_sqr() - p2).abs());
    }
    let elapsed = start.elapsed().as_secs_f64();
    Ok(Criterion::new(
        4,
        "alpha = alpha0*theta_dot transfer",
        vec![
            Check::at_least("min P2(tf) over alpha0 in {0,1,2,5}", worst, 0.98),
            Check::at_most("max |P2(tf) - P2 oracle|", oracle_gap, 1e-6),
            Check::new("runtime [s]", elapsed, Relation::Below, 10.0),
        ],
    ))
}

/// Transfer with `β` dropped improves with `α₀` and is high beyond 2.5.
pub fn fig1c_threshold(opts: &VerifyOptions) -> Result<Criterion> {
    let spec = opts.spec(Figure::Fig1c);
    let margin = final_p2(&spec, 3.0)? - final_p2(&spec, 1.0)?;
    let grid: Vec<f64> = Axis::Alpha0.default_grid().values().into_iter().filter(|a| *a >= 2.5).collect();
    let lo = grid[0];
    let hi = *grid.last().expect("nonempty");
    let tail = SweepSpec { grid: Some(Grid::new(lo, hi, grid.len())?), ..spec };
    let worst = run_points(&tail)?.iter().map(|r| r.final_populations()[1]).fold(f64::INFINITY, f64::min);
    Ok(Criterion::new(
        5,
        "beta dropped",
        vec![
            Check::new("P2(tf; alpha0=3) - P2(tf; alpha0=1)", margin, Relation::Above, 0.05),
            Check::at_least(format!("min P2(tf) over alpha0 in [{lo}, {hi}]"), worst, 0.9),
        ],
    ))
}

/// Tracking variants over κ and the bare sweep.
pub fn fig2_comparison(opts: &VerifyOptions) -> Result<Criterion> {
    let kappas = Grid::new(0.0, 10.0, 6)?;
    let p2 = |figure| -> Result<Vec<f64>> {
        let spec = SweepSpec { grid: Some(kappas), ..opts.spec(figure) };
        Ok(run_points(&spec)?.iter().map(|r| r.final_populations()[1]).collect())
    };
    let (a, b, c) = (p2(Figure::Fig2a)?, p2(Figure::Fig2b)?, p2(Figure::Fig2c)?);
    let margin = a.iter().zip(&b).map(|(pa, pb)| pb - pa).fold(f64::INFINITY, f64::min);
    let bare = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s = LzSchedule::default();
    let gap = s.energies(0.0)[1] - s.energies(0.0)[0];
    let ratio = s.angle(0.0).adiabaticity_ratio(gap);
    Ok(Criterion::new(
        6,
        "kappa sweep comparison",
        vec![
            Check::at_least("min over kappa of P2(alpha=0) - P2(transitionless)", margin, -0.02),
            Check::new("max over kappa of P2(tf) without adding term", bare, Relation::Below, 0.5),
            Check::new("adiabaticity ratio at t=0", ratio, Relation::Equals, 4.5),
        ],
    ))
}

/// Leakage, protected amplitude and oracle mismatch for a non-Hermitian
/// run started in the protected eigenstate.
struct OneWay {
    leak: f64,
    kept_modulus: f64,
    oracle_gap: f64,
}

fn one_way(s: &LzSchedule, p: &AddParams, cfg: &IntegratorConfig) -> Result<OneWay> {
    let level = p.nullify.protected_level().expect("single direction");
    let psi0 = initial_eigenstate(s, level)?;
    let traj = evolve_state(s, Some(p), &psi0, cfg)?;
    let mut leak = 0.0f64;
    for (t, psi) in traj.iter() {
        leak = leak.max(eigen_amplitudes(s, t, psi)?[2 - level].norm());
    }
    let kept = eigen_amplitudes(s, s.tf, traj.final_state())?[level - 1];
    let exact = oracle_nonhermitian(s, p, s.tf, ORACLE_QUAD_STEP)?;
    Ok(OneWay { leak, kept_modulus: kept.norm(), oracle_gap: (kept - exact).norm() })
}

fn one_way_checks(label: &str, s: &LzSchedule, p: &AddParams, opts: &VerifyOptions) -> Result<Vec<Check>> {
    let level = p.nullify.protected_level().expect("single direction");
    let run = one_way(s, p, &opts.fine())?;
    let odd = gamma_odd_check(p, s, &uniform_grid(s.tau, s.tf, 1e-4))?;
    Ok(vec![
        Check::at_most(format!("{label}: max |c{}(t)|", 3 - level), run.leak, 1e-6),
        Check::at_most(format!("{label}: ||c{level}(tf)| - 1|"), (run.kept_modulus - 1.0).abs(), 1e-3),
        Check::at_most(format!("{label}: |c{level}(tf) - oracle|"), run.oracle_gap, 1e-6),
        Check::at_most(format!("{label}: |int gamma cos2theta|"), odd, 1e-6),
    ])
}

fn final_relative(spec: &SweepSpec, level: usize) -> Result<f64> {
    let run = run_point(spec, None)?;
    Ok(run.final_relative().map_or(f64::NAN, |(r1, r2)| if level == 1 { r1 } else { r2 }))
}

/// One-way suppression with gain and loss.
pub fn nonhermitian_suppression(opts: &VerifyOptions) -> Result<Criterion> {
    let s = LzSchedule::default();
    let mut checks = Vec::new();
    for (label, figure, gamma) in [
        ("gamma=0.5", Figure::Fig3, GammaLaw::Constant(GAMMA_CONSTANT)),
        ("gamma=1/(2+t^2)", Figure::Fig5, GammaLaw::InverseQuadratic { offset: GAMMA_OFFSET }),
    ] {
        let p = AddParams::non_hermitian(AlphaLaw::Constant(0.0), gamma, Nullify::Lower)?;
        checks.extend(one_way_checks(label, &s, &p, opts)?);
        checks.push(Check::at_least(format!("{label}: P1'(tf)"), final_relative(&opts.spec(figure), 1)?, 0.98));
    }
    let sweep = run_points(&opts.spec(Figure::Fig4))?;
    let worst = sweep.iter().map(|r| r.final_relative().map_or(f64::NAN, |(_, r2)| r2)).fold(f64::INFINITY, |m, x| {
        if x.is_nan() {
            f64::NAN
        } else {
            m.min(x)
        }
    });
    checks.push(Check::at_least("gamma in [0,1]: min P2'(tf)", worst, 0.98));
    let mut leak = 0.0f64;
    for g in Grid::new(0.0, 1.0, 5)?.values() {
        let p = AddParams::non_hermitian(AlphaLaw::Constant(0.0), GammaLaw::Constant(g), Nullify::Upper)?;
        leak = leak.max(one_way(&s, &p, &opts.fine())?.leak);
    }
    checks.push(Check::at_most("gamma in {0,0.25,..,1}: max |c1(t)|", leak, 1e-6));
    Ok(Criterion::new(7, "non-Hermitian one-way suppression", checks))
}

/// `γ = θ̇/sin2θ` removes `β` and keeps the suppression.
pub fn beta_free_gain(opts: &VerifyOptions) -> Result<Criterion> {
    let s = LzSchedule::default();
    let p = AddParams::non_hermitian(AlphaLaw::ThetaDot(1.0), GammaLaw::BetaCancelling, Nullify::Upper)?;
    let (mut beta, mut imag, mut real) = (0.0f64, 0.0f64, 0.0f64);
    for t in uniform_grid(s.tau, s.tf, 1e-3) {
        let solved = p.solve(&s.angle(t), t)?;
        beta = beta.max(solved.beta.abs());
        imag = imag.max(solved.h_add[(0, 1)].im.abs()).max(solved.h_add[(1, 0)].im.abs());
        real = real.max(solved.h_add[(0, 1)].re.abs());
    }
    let mut checks = vec![
        Check::new("max |beta|", beta, Relation::Equals, 0.0),
        Check::new("max |Im A12|, |Im A21|", imag, Relation::Equals, 0.0),
        Check::new("max |Re A12|", real, Relation::Above, 0.0),
    ];
    checks.extend(one_way_checks("gamma=theta_dot/sin2theta", &s, &p, opts)?);
    let psi0 = initial_eigenstate(&s, 2)?;
    let traj = evolve_density(&s, Some(&p), &psi0.outer(&psi0)?, &opts.integrator.recording_every(usize::MAX))?;
    let [p1, p2] = traj.final_populations();
    checks.push(Check::at_least("P2'(tf)", relative_populations(p1, p2)?.1, 0.98));
    Ok(Criterion::new(8, "beta removed by gain", checks))
}

/// Terminal error against a quarter-step reference shrinks ~16x per halving.
pub fn integrator_order() -> Result<Criterion> {
    let s = LzSchedule::default().with_kappa(5.0);
    let p = AddParams::hermitian(AlphaLaw::Transitionless);
    let psi0 = CVec::basis(2, 1)?;
    let run = |h: f64| -> Result<CVec> {
        let cfg = IntegratorConfig::with_step(h).recording_every(usize::MAX);
        Ok(evolve_state(&s, Some(&p), &psi0, &cfg)?.final_state().clone())
    };
    let reference = run(0.005)?;
    let e1 = run(0.02)?.max_abs_diff(&reference)?;
    let e2 = run(0.01)?.max_abs_diff(&reference)?;
    Ok(Criterion::new(9, "RK4 order", vec![Check::within("error ratio, step 0.02 -> 0.01", e1 / e2, 8.0, 32.0)]))
}

/// Two runs of the same sweep give identical CSV bytes, also across
/// different worker counts.
pub fn determinism(opts: &VerifyOptions) -> Result<Criterion> {
    let spec = opts.spec(Figure::Fig1b);
    let first = run_sweep(&spec)?.to_csv_string()?;
    let second = run_sweep(&SweepSpec { workers: spec.workers + 1, ..spec })?.to_csv_string()?;
    let differing = first.lines().zip(second.lines()).filter(|(a, b)| a != b).count()
        + first.lines().count().abs_diff(second.lines().count());
    Ok(Criterion::new(
        10,
        "determinism",
        vec![Check::new("differing CSV lines", differing as f64, Relation::Equals, 0.0)],
    ))
}

pub fn criterion(id: u32, opts: &VerifyOptions) -> Result<Criterion> {
    match id {
        1 => eigen_structure(),
        2 => cd_equivalence(),
        3 => shortcut_invariance(opts),
        4 => fig1b_transfer(opts),
        5 => fig1c_threshold(opts),
        6 => fig2_comparison(opts),
        7 => nonhermitian_suppression(opts),
        8 => beta_free_gain(opts),
        9 => integrator_order(),
        10 => determinism(opts),
        _ => Err(crate::error::Error::Config(format!("no criterion {id}"))),
    }
}

pub const CRITERIA: std::ops::RangeInclusive<u32> = 1..=10;

/// Runs every criterion; an error inside one becomes a failed entry.
pub fn verify(opts: &VerifyOptions) -> Report {
    let criteria: Vec<Criterion> = CRITERIA
        .map(|id| {
            criterion(id, opts).unwrap_or_else(|e| Criterion {
                id,
                name: "error",
                checks: vec![Check {
                    quantity: e.to_string(),
                    measured: f64::NAN,
                    relation: Relation::Equals,
                    threshold: 0.0,
                    upper: None,
                    pass: false,
                }],
                pass: false,
            })
        })
        .collect();
    let pass = criteria.iter().all(|c| c.pass);
    Report { criteria, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::at_most("x", 1.0, 1.0).pass);
        assert!(!Check::new("x", 1.0, Relation::Below, 1.0).pass);
        assert!(!Check::at_least("x", f64::NAN, 0.0).pass);
        assert!(Check::within("x", 16.0, 8.0, 32.0).pass);
        assert!(!Check::within("x", 33.0, 8.0, 32.0).pass);
    }

    #[test]
    fn empty_criterion_fails() {
        assert!(!Criterion::new(0, "none", vec![]).pass);
    }

    #[test]
    fn summary_line() {
        let c = Criterion::new(9, "order", vec![Check::within("ratio", 16.0, 8.0, 32.0)]);
        assert_eq!(c.summary(), "[PASS]  9 order: ratio = 1.600000e1 in [8, 32]");
    }

    #[test]
    fn report_json_shape() {
        let r = Report { criteria: vec![Criterion::new(1, "a", vec![Check::at_most("q", 0.5, 1.0)])], pass: true };
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["criteria"][0]["checks"][0]["relation"], "at_most");
        assert_eq!(v["criteria"][0]["checks"][0]["measured"], 0.5);
        assert!(v["criteria"][0]["checks"][0].get("upper").is_none());
    }

    #[test]
    fn unknown_criterion() {
        assert!(criterion(11, &VerifyOptions::default()).is_err());
    }
}
