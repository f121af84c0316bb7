use super::*;
use crate::families::HhmSine;
use alloc::vec::Vec;
use core::f64::consts::PI;

fn circle_cfg(model: Model, points: usize, dt: f64, t_end: f64) -> SimulationConfig {
    SimulationConfig::new(model, points, SpaceKind::Circle, dt, t_end)
}

fn polar(state: &State) -> (&[f64], &[f64]) {
    match state {
        State::HhmPolar { theta, phi } | State::Hsm { theta, phi, .. } => (theta, phi),
        State::HhmAmbient { .. } => panic!("polar state expected"),
    }
}

fn sine_exact(f: &HhmSine, t: f64, points: usize) -> State {
    seeds::hhm_travelling(f, f.params.v, f.params.c, t, points, SpaceKind::Circle).unwrap()
}

/// `max |Δθ|` and `max |Δφ|` after aligning the lifts.
fn field_error(a: &State, b: &State) -> f64 {
    let (ta, pa) = a.angles();
    let (tb, pb) = b.angles();
    let shift = TAU * ((pa[0] - pb[0]) / TAU).round();
    let dphi = pa.iter().zip(&pb).map(|(x, y)| principal_increment(x - y - shift).abs()).fold(0.0, f64::max);
    max_abs_diff(&ta, &tb).max(dphi)
}

#[test]
fn static_seed_rotates_uniformly() {
    let m = 256;
    let init = seeds::static_winding(1.0, 1, m, SpaceKind::Circle);
    let cutoff = growth_limited_cutoff(SpaceKind::Circle, 1.0, 1e-8);
    assert_eq!(cutoff, 4);
    let cfg = circle_cfg(Model::Hhm, m, 2.5e-4, 1.0).with_cadence(400).with_filter(Some(cutoff));
    let out = run(cfg, init, &[]).unwrap();
    assert!(out.diagnostics.abort.is_none(), "{:?}", out.diagnostics.abort);
    assert_eq!(out.final_time, 1.0);
    let (theta, phi) = polar(&out.final_state);
    let grid = SpaceKind::Circle.grid(m);
    let err = phi.iter().zip(&grid).map(|(p, x)| (p - (x + 1.0)).abs()).fold(0.0, f64::max);
    assert!(err < 1e-6, "{err}");
    assert!(theta.iter().all(|t| (t - 1f64.asinh()).abs() < 1e-6));
    let h0 = out.diagnostics.records[0].energy;
    // ½∫cosh²θ φ_x² = ½·2·2π
    assert!((h0 - TAU).abs() < 1e-12, "{h0}");
    for r in &out.diagnostics.records {
        assert_eq!(r.winding, Some(1));
        assert!((r.energy - h0).abs() < 1e-6 * (h0.abs() + 1.0));
    }
}

#[test]
fn unfiltered_roundoff_grows_without_bound() {
    let m = 256;
    let init = seeds::static_winding(1.0, 1, m, SpaceKind::Circle);
    let out = run(circle_cfg(Model::Hhm, m, 2.5e-4, 1.0), init, &[]).unwrap();
    assert!(out.diagnostics.abort.is_some());
}

#[test]
fn linearized_modes_grow_like_exp_k_squared() {
    // about θ = φ = 0: θ_tt = θ_xxxx, so ε cos kx ↦ ε cosh(k²t) cos kx and
    // φ = −ε sinh(k²t) cos kx
    let (m, k, eps, t) = (32, 3.0, 1e-9, 0.2);
    let grid = SpaceKind::Circle.grid(m);
    let theta = grid.iter().map(|x| eps * (k * x).cos()).collect();
    let init = State::HhmPolar { theta, phi: vec![0.0; m] };
    let cfg = circle_cfg(Model::Hhm, m, 1e-4, t)
        .with_scheme(SpatialScheme::Spectral)
        .with_filter(Some(growth_limited_cutoff(SpaceKind::Circle, t, 1e-12)))
        .with_cadence(usize::MAX);
    let out = run(cfg, init, &[]).unwrap();
    let (theta, phi) = polar(&out.final_state);
    let g = k * k * t;
    for (i, x) in grid.iter().enumerate() {
        let c = (k * x).cos();
        assert!((theta[i] - eps * g.cosh() * c).abs() < 1e-6 * eps * g.cosh(), "{i}");
        assert!((phi[i] + eps * g.sinh() * c).abs() < 1e-6 * eps * g.cosh(), "{i}");
    }
}

#[test]
fn fixed_points_do_not_move() {
    let m = 32;
    for (th, ph) in [(0.0, 0.3), (1.5, -2.0), (-0.7, 0.0)] {
        let init = State::HhmPolar { theta: vec![th; m], phi: vec![ph; m] };
        let out = run(circle_cfg(Model::Hhm, m, 1e-3, 0.1), init.clone(), &[]).unwrap();
        assert!(field_error(&out.final_state, &init) < 1e-14);
        let hsm = State::hsm(vec![th; m], vec![ph; m], vec![0.0; m], &vec![0.0; m]);
        let out = run(circle_cfg(Model::Hsm, m, 1e-3, 0.1), hsm.clone(), &[]).unwrap();
        assert!(field_error(&out.final_state, &hsm) < 1e-14);
    }
}

#[test]
fn travelling_seed_tracks_exact_solution_briefly() {
    let f = HhmSine::new(2.0, 1.0, 1, 0.0).unwrap();
    let (m, t) = (64, 0.005);
    let cfg = circle_cfg(Model::Hhm, m, 5e-4, t).with_scheme(SpatialScheme::Spectral);
    let out = run(cfg, sine_exact(&f, 0.0, m), &[]).unwrap();
    assert!(out.diagnostics.abort.is_none());
    let err = field_error(&out.final_state, &sine_exact(&f, t, m));
    assert!(err < 1e-6, "{err}");
    let h0 = out.diagnostics.records[0].energy;
    for r in &out.diagnostics.records {
        assert_eq!(r.winding, Some(1));
        assert!((r.energy - h0).abs() < 1e-6 * (h0.abs() + 1.0), "{} {h0}", r.energy);
    }
}

#[test]
fn fd4_converges_at_fourth_order_in_space() {
    let f = HhmSine::new(2.0, 1.0, 1, 0.0).unwrap();
    let t = 0.001;
    let errs: Vec<f64> = [64, 128, 256]
        .iter()
        .map(|&m| {
            let cfg = circle_cfg(Model::Hhm, m, 5e-5, t).with_cadence(usize::MAX);
            let out = run(cfg, sine_exact(&f, 0.0, m), &[]).unwrap();
            field_error(&out.final_state, &sine_exact(&f, t, m))
        })
        .collect();
    assert!(errs[0] / errs[1] > 14.0 && errs[1] / errs[2] > 14.0, "{errs:?}");
}

#[test]
fn rk4_converges_at_fourth_order_in_time() {
    // spatially uniform family: the error is purely temporal
    let family = HsmBlowup::new(1, 2.0, 0.0).unwrap();
    let t = 0.8;
    let errs: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&dt| {
            let init = seeds::hsm_blowup(&family, 0.0, 8, SpaceKind::Circle).unwrap();
            let out = run(circle_cfg(Model::Hsm, 8, dt, t).with_cadence(usize::MAX), init, &[]).unwrap();
            (polar(&out.final_state).0[0] - family.theta(t).unwrap()).abs()
        })
        .collect();
    assert!(errs[0] / errs[1] > 14.0 && errs[1] / errs[2] > 14.0, "{errs:?}");
}

#[test]
fn filtered_hhm_self_converges_in_time() {
    let f = HhmSine::new(1.2, 0.5, 1, 0.0).unwrap();
    let m = 64;
    let cutoff = growth_limited_cutoff(SpaceKind::Circle, 1.0, 1e-10);
    let init = sine_exact(&f, 0.0, m);
    let solve = |dt: f64| {
        let cfg = circle_cfg(Model::Hhm, m, dt, 1.0)
            .with_scheme(SpatialScheme::Spectral)
            .with_filter(Some(cutoff))
            .with_cadence(usize::MAX);
        run(cfg, init.clone(), &[]).unwrap().final_state
    };
    let reference = solve(1.25e-4);
    let errs: Vec<f64> = [2e-3, 1e-3, 5e-4].iter().map(|&dt| field_error(&solve(dt), &reference)).collect();
    assert!(errs[0] / errs[1] > 14.0 && errs[1] / errs[2] > 14.0, "{errs:?}");
}

#[test]
fn winding_is_constant_over_long_filtered_runs() {
    let f = HhmSine::new(1.2, 0.5, 1, 0.0).unwrap();
    let m = 64;
    let cfg = circle_cfg(Model::Hhm, m, 1e-3, 5.0)
        .with_scheme(SpatialScheme::Spectral)
        .with_filter(Some(growth_limited_cutoff(SpaceKind::Circle, 5.0, 1e-8)))
        .with_cadence(100);
    let out = run(cfg, sine_exact(&f, 0.0, m), &[]).unwrap();
    assert!(out.diagnostics.abort.is_none());
    assert_eq!(out.diagnostics.records.len(), 51);
    assert!(out.diagnostics.records.iter().all(|r| r.winding == Some(1)));
}

#[test]
fn ambient_rhs_matches_polar_rhs() {
    let f = HhmSine::new(1.2, 0.5, 1, 0.3).unwrap();
    let m = 64;
    let s = sine_exact(&f, 0.0, m);
    let (theta, phi) = polar(&s);
    let amb = State::ambient_from_polar(theta, phi);
    let mut ops = Derivatives::new(SpatialScheme::Spectral, m, TAU);
    let mut polar_rhs = vec![0.0; 2 * m];
    let mut ambient_rhs = vec![0.0; 3 * m];
    let jump = seam_jump(phi);
    let mut w = Workspace::new(0, m);
    let mut scratch = RhsScratch { a: &mut w.a, b: &mut w.b, c: &mut w.c, d: &mut w.d, e: &mut w.e };
    Simulation::rhs(&mut ops, &mut scratch, &s, jump, &s.flatten(), &mut polar_rhs);
    Simulation::rhs(&mut ops, &mut scratch, &amb, 0.0, &amb.flatten(), &mut ambient_rhs);
    for i in 0..m {
        let (t, p) = (theta[i], phi[i]);
        let (tt, pt) = (polar_rhs[i], polar_rhs[m + i]);
        // ψ = (cosh θ cos φ, cosh θ sin φ, sinh θ)
        let expect = [
            t.sinh() * p.cos() * tt - t.cosh() * p.sin() * pt,
            t.sinh() * p.sin() * tt + t.cosh() * p.cos() * pt,
            t.cosh() * tt,
        ];
        for c in 0..3 {
            let got = ambient_rhs[c * m + i];
            assert!((got - expect[c]).abs() < 1e-9 * (1.0 + expect[c].abs()), "{i} {c} {got} {}", expect[c]);
        }
    }
}

#[test]
fn ambient_evolution_agrees_with_polar() {
    let f = HhmSine::new(1.2, 0.5, 1, 0.0).unwrap();
    let m = 32;
    let s = sine_exact(&f, 0.0, m);
    let (theta, phi) = polar(&s);
    let amb = State::ambient_from_polar(theta, phi);
    let base = circle_cfg(Model::Hhm, m, 1e-3, 0.02).with_scheme(SpatialScheme::Spectral);
    let p = run(base, s.clone(), &[]).unwrap();
    let a = run(base.with_representation(Representation::Ambient), amb, &[]).unwrap();
    let err = field_error(&p.final_state, &a.final_state);
    assert!(err < 1e-8, "{err}");
    for r in &a.diagnostics.records {
        assert!(r.constraint_residual < 1e-9, "{}", r.constraint_residual);
        assert_eq!(r.winding, Some(1));
    }
    // ½∫η(ψ_x, ψ_x) equals ∫ℋ from the polar form
    let (e_p, e_a) = (p.diagnostics.records[0].energy, a.diagnostics.records[0].energy);
    assert!((e_p - e_a).abs() < 1e-9 * e_p.abs().max(1.0), "{e_p} {e_a}");
}

#[test]
fn projection_removes_constraint_drift() {
    let m = 512;
    let s = seeds::static_winding(1.0, 1, m, SpaceKind::Circle);
    let (theta, phi) = polar(&s);
    let amb = State::ambient_from_polar(theta, phi);
    let base = circle_cfg(Model::Hhm, m, 5e-5, 1.0)
        .with_representation(Representation::Ambient)
        .with_filter(Some(growth_limited_cutoff(SpaceKind::Circle, 1.0, 1e-8)))
        .with_cadence(2000);
    let on = run(base, amb.clone(), &[]).unwrap();
    let off = run(base.with_renormalize(false), amb, &[]).unwrap();
    assert!(on.diagnostics.abort.is_none() && off.diagnostics.abort.is_none());
    for (a, b) in on.diagnostics.records.iter().zip(&off.diagnostics.records) {
        assert!(a.constraint_residual < 1e-9, "{}", a.constraint_residual);
        assert!(b.constraint_residual < 1e-6, "{}", b.constraint_residual);
        assert_eq!((a.winding, b.winding), (Some(1), Some(1)));
    }
    let (_, phi) = on.final_state.angles();
    let x0 = SpaceKind::Circle.x(0, m);
    assert!(principal_increment(phi[0] - (x0 + 1.0)).abs() < 1e-6);
}

#[test]
fn hsm_blowup_tracks_exact_and_aborts() {
    let family = HsmBlowup::new(1, 2.0, 0.0).unwrap();
    let t_star = family.blowup_time();
    let m = 256;
    let dt = 1e-4;
    let init = seeds::hsm_blowup(&family, 0.0, m, SpaceKind::Circle).unwrap();
    let cfg = circle_cfg(Model::Hsm, m, dt, 2.0 * t_star).with_cadence(10);
    let out = run(cfg, init, &[]).unwrap();
    let abort = out.diagnostics.abort.expect("run should abort");
    assert_eq!(abort.kind, AbortKind::BlowUp);
    assert!((abort.time - t_star).abs() < 0.02 * t_star, "{} {t_star}", abort.time);
    let e = family.energy();
    assert!((e + 6.0 * PI).abs() < 1e-12);
    for r in &out.diagnostics.records {
        let Ok(tanh) = family.tanh_theta(r.t) else { break };
        if tanh > 0.99 {
            break;
        }
        assert!((r.theta_max - tanh.atanh()).abs() < 1e-3, "t = {}", r.t);
        assert!((r.energy - e).abs() < 1e-5 * e.abs(), "t = {} E = {}", r.t, r.energy);
        assert_eq!(r.winding, Some(1));
    }
}

#[test]
fn hsm_is_time_reversible() {
    let m = 64;
    let grid = SpaceKind::Circle.grid(m);
    let theta: Vec<f64> = grid.iter().map(|x| 0.3 * x.sin()).collect();
    let phi: Vec<f64> = grid.iter().map(|x| x + 0.2 * x.cos()).collect();
    let theta_t: Vec<f64> = grid.iter().map(|x| 0.1 * x.cos()).collect();
    let phi_t: Vec<f64> = grid.iter().map(|x| 0.05 * (2.0 * x).sin()).collect();
    let init = State::hsm(theta, phi, theta_t, &phi_t);
    let cfg = circle_cfg(Model::Hsm, m, 1e-3, 1.0).with_cadence(usize::MAX);
    let fwd = run(cfg, init.clone(), &[]).unwrap().final_state;
    let State::Hsm { theta, phi, theta_t, momentum } = fwd else { unreachable!() };
    let flipped = State::Hsm {
        theta,
        phi,
        theta_t: theta_t.iter().map(|v| -v).collect(),
        momentum: momentum.iter().map(|v| -v).collect(),
    };
    let back = run(cfg, flipped, &[]).unwrap().final_state;
    assert!(field_error(&back, &init) < 1e-5);
}

#[test]
fn config_errors() {
    let init = seeds::static_winding(1.0, 1, 64, SpaceKind::Circle);
    let too_big = circle_cfg(Model::Hhm, 64, 0.1, 1.0);
    assert!(matches!(run(too_big, init.clone(), &[]), Err(Error::Config(_))));
    let spectral = circle_cfg(Model::Hhm, 60, 1e-5, 1.0).with_scheme(SpatialScheme::Spectral);
    assert!(spectral.validate().is_err());
    let ambient_hsm = circle_cfg(Model::Hsm, 64, 1e-5, 1.0).with_representation(Representation::Ambient);
    assert!(ambient_hsm.validate().is_err());
    assert!(circle_cfg(Model::Hhm, 4, 1e-5, 1.0).validate().is_err());
    assert!(matches!(run(circle_cfg(Model::Hsm, 64, 1e-5, 1.0), init, &[]), Err(Error::Config(_))));
}

#[test]
fn schedule_shortens_last_step() {
    let cfg = circle_cfg(Model::Hhm, 16, 0.3, 1.0);
    let (n, last) = cfg.schedule();
    assert_eq!(n, 4);
    assert!((last - 0.1).abs() < 1e-12);
    let cfg = circle_cfg(Model::Hhm, 16, 0.25, 1.0);
    assert_eq!(cfg.schedule(), (4, 0.25));
}

