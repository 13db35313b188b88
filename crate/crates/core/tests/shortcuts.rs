use stalab_core::propagate::oracle::{eigen_amplitudes, initial_eigenstate, oracle_nonhermitian, oracle_state};
use stalab_core::propagate::{evolve_density, evolve_state};
use stalab_core::{AddParams, AlphaLaw, CVec, GammaLaw, IntegratorConfig, LzSchedule, Nullify};

const QUAD: f64 = 1e-5;

fn hermitian_cases() -> Vec<(LzSchedule, AddParams)> {
    let s = LzSchedule::default();
    vec![
        (s, AddParams::hermitian(AlphaLaw::Constant(0.0))),
        (s, AddParams::hermitian(AlphaLaw::ThetaDot(1.0))),
        (s, AddParams::hermitian(AlphaLaw::ThetaDot(5.0))),
        (s.with_kappa(5.0), AddParams::hermitian(AlphaLaw::Transitionless)),
    ]
}

#[test]
fn eigen_magnitudes_stay_constant() {
    let psi0 = CVec::basis(2, 1).unwrap();
    for (s, p) in hermitian_cases() {
        let traj = evolve_state(&s, Some(&p), &psi0, &IntegratorConfig::default().recording_every(20)).unwrap();
        let c0 = eigen_amplitudes(&s, s.tau, &psi0).unwrap();
        let mut worst: f64 = 0.0;
        for (t, psi) in traj.iter() {
            let c = eigen_amplitudes(&s, t, psi).unwrap();
            for n in 0..2 {
                worst = worst.max((c[n].norm() - c0[n].norm()).abs());
            }
        }
        assert!(worst <= 1e-6, "{p:?}: drift {worst:e}");
    }
}

#[test]
fn ode_matches_eigen_picture_solution() {
    let inputs =
        [CVec::basis(2, 1).unwrap(), CVec::from_slice(&[(0.6).into(), stalab_core::C64::new(0.0, 0.8)]).unwrap()];
    for (s, p) in hermitian_cases() {
        for psi0 in &inputs {
            let ode = evolve_state(&s, Some(&p), psi0, &IntegratorConfig::default().recording_every(1000)).unwrap();
            let exact = oracle_state(&s, &p, psi0, QUAD).unwrap();
            let diff = ode.final_state().max_abs_diff(&exact.final_state).unwrap();
            assert!(diff <= 1e-6, "{p:?}: {diff:e}");
        }
    }
}

#[test]
fn transitionless_tracking_lands_in_the_target_eigenstate() {
    let s = LzSchedule::default().with_kappa(5.0);
    let p = AddParams::hermitian(AlphaLaw::Transitionless);
    let psi0 = initial_eigenstate(&s, 2).unwrap();
    let traj = evolve_state(&s, Some(&p), &psi0, &IntegratorConfig::default().recording_every(1000)).unwrap();
    let target = s.angle(s.tf).eigenvectors()[1].clone();
    let overlap = target.inner(traj.final_state()).unwrap().norm_sqr();
    assert!(overlap >= 1.0 - 1e-6, "{overlap}");
}

#[test]
fn density_and_state_agree() {
    let s = LzSchedule::default().with_kappa(2.0);
    let p = AddParams::beta_dropped(1.5);
    let psi0 = CVec::basis(2, 1).unwrap();
    let cfg = IntegratorConfig::with_step(1e-3).recording_every(100);
    let states = evolve_state(&s, Some(&p), &psi0, &cfg).unwrap();
    let densities = evolve_density(&s, Some(&p), &psi0.outer(&psi0).unwrap(), &cfg).unwrap();
    for (psi, rho) in states.states.iter().zip(&densities.states) {
        assert!(psi.outer(psi).unwrap().max_abs_diff(rho).unwrap() < 1e-8);
    }
}

#[test]
fn rk4_is_fourth_order() {
    let s = LzSchedule::default().with_kappa(5.0);
    let p = AddParams::hermitian(AlphaLaw::ThetaDot(2.0));
    let psi0 = CVec::basis(2, 1).unwrap();
    let run = |h: f64| {
        let cfg = IntegratorConfig::with_step(h).recording_every(usize::MAX);
        evolve_state(&s, Some(&p), &psi0, &cfg).unwrap().final_state().clone()
    };
    let reference = run(0.005);
    let e1 = run(0.02).max_abs_diff(&reference).unwrap();
    let e2 = run(0.01).max_abs_diff(&reference).unwrap();
    let ratio = e1 / e2;
    assert!((8.0..=32.0).contains(&ratio), "ratio {ratio}");
}

fn nonhermitian_run(gamma: GammaLaw, nullify: Nullify, start: usize) -> (f64, stalab_core::C64, stalab_core::C64) {
    let s = LzSchedule::default();
    let p = AddParams::non_hermitian(AlphaLaw::Constant(0.0), gamma, nullify).unwrap();
    let psi0 = initial_eigenstate(&s, start).unwrap();
    let traj = evolve_state(&s, Some(&p), &psi0, &IntegratorConfig::default().recording_every(10)).unwrap();
    let other = 2 - start;
    let mut leak: f64 = 0.0;
    for (t, psi) in traj.iter() {
        leak = leak.max(eigen_amplitudes(&s, t, psi).unwrap()[other].norm());
    }
    let kept = eigen_amplitudes(&s, s.tf, traj.final_state()).unwrap()[start - 1];
    (leak, kept, oracle_nonhermitian(&s, &p, s.tf, QUAD).unwrap())
}

#[test]
fn one_way_suppression_protects_the_matching_eigenstate() {
    for gamma in [GammaLaw::Constant(0.5), GammaLaw::InverseQuadratic { offset: 2.0 }] {
        for (nullify, start) in [(Nullify::Lower, 1), (Nullify::Upper, 2)] {
            let (leak, kept, exact) = nonhermitian_run(gamma.clone(), nullify, start);
            assert!(leak <= 1e-6, "{gamma:?} {nullify:?}: leak {leak:e}");
            assert!((kept - exact).norm() <= 1e-6, "{kept} vs {exact}");
            assert!((kept.norm() - 1.0).abs() <= 1e-3);
        }
    }
}

#[test]
fn one_way_suppression_does_not_protect_the_other_eigenstate() {
    let (leak, _, _) = nonhermitian_run(GammaLaw::Constant(0.5), Nullify::Upper, 1);
    assert!(leak > 0.1, "{leak}");
}

#[test]
fn beta_cancelling_gain_keeps_suppression() {
    let (leak, kept, exact) = nonhermitian_run(GammaLaw::BetaCancelling, Nullify::Upper, 2);
    assert!(leak <= 1e-6);
    assert!((kept - exact).norm() <= 1e-6);
    assert!((kept.norm() - 1.0).abs() <= 1e-3);
}
