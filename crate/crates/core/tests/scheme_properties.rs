use proptest::prelude::*;
use std::f64::consts::PI;
use wcd_core::scheme::{
    spatial_residual_entropy_stable, spatial_residual_scalar, spatial_residual_system, ssp_rk3_step,
};
use wcd_core::{
    run, BoundaryCondition, CubicModel, FieldState, GridSpec, Model, RiemannData, RunConfig,
    StencilSet, SystemModel, WcdConfig,
};

fn periodic(n: usize, len: f64) -> GridSpec {
    GridSpec::new(0.0, len, n, BoundaryCondition::Periodic).unwrap()
}

fn fit_slope(h: &[f64], e: &[f64]) -> f64 {
    let xs: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let ys: Vec<f64> = e.iter().map(|v| v.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    num / den
}

#[test]
fn flux_stencil_refinement_order() {
    let m = CubicModel::new(0.0).unwrap();
    let ladders: [(usize, &[usize]); 4] = [
        (1, &[32, 64, 128, 256]),
        (2, &[16, 32, 64, 128]),
        (3, &[24, 48, 96]),
        (4, &[20, 40, 80]),
    ];
    for (p, ns) in ladders {
        let s = StencilSet::build(p).unwrap();
        let mut h = Vec::new();
        let mut err = Vec::new();
        for &n in ns {
            let g = periodic(n, 2.0 * PI);
            let f = FieldState::from_fn(g, 1, |x| vec![x.sin()]).unwrap();
            let r = spatial_residual_scalar(&f, &s, 0.0, &m).unwrap();
            let e = g
                .nodes()
                .iter()
                .zip(&r)
                .map(|(x, v)| (v + 3.0 * x.sin().powi(2) * x.cos()).abs())
                .fold(0.0, f64::max);
            h.push(g.dx());
            err.push(e);
        }
        let order = fit_slope(&h, &err);
        assert!(
            (order - 2.0 * p as f64).abs() <= 0.3,
            "p = {p}: measured order {order}, errors {err:?}"
        );
    }
}

#[test]
fn ssp_rk3_measured_order() {
    let g = periodic(3, 1.0);
    let mut h = Vec::new();
    let mut err = Vec::new();
    for steps in [10usize, 20, 40, 80] {
        let dt = 1.0 / steps as f64;
        let mut f = FieldState::scalar(g, vec![1.0; 3]).unwrap();
        for _ in 0..steps {
            f = ssp_rk3_step(&f, dt, |u, out| {
                for (o, v) in out[0].iter_mut().zip(&u[0]) {
                    *o = -v;
                }
                Ok(())
            })
            .unwrap();
        }
        h.push(dt);
        err.push((f.components[0][0] - (-1.0f64).exp()).abs());
    }
    let order = fit_slope(&h, &err);
    assert!(order >= 2.9, "measured order {order}");
}

#[test]
fn ssp_rk3_decay_example() {
    let g = periodic(3, 1.0);
    let f = FieldState::scalar(g, vec![1.0; 3]).unwrap();
    let out = ssp_rk3_step(&f, 0.1, |u, o| {
        for (a, b) in o[0].iter_mut().zip(&u[0]) {
            *a = -b;
        }
        Ok(())
    })
    .unwrap();
    assert!((out.components[0][1] - 0.9048333333333334).abs() < 1e-15);
}

fn entropy_rate(f: &FieldState, r: &[f64]) -> f64 {
    f.components[0]
        .iter()
        .zip(r)
        .map(|(u, v)| u * v)
        .sum::<f64>()
        * f.grid.dx()
}

#[test]
fn entropy_conservative_identity_and_inequality() {
    let m = CubicModel::new(1.0).unwrap();
    for p in [2usize, 3, 4] {
        let s = StencilSet::build(p).unwrap();
        let g = periodic(200, 1.0);
        let f = FieldState::from_fn(g, 1, |x| {
            vec![1.5 * (2.0 * PI * x).sin() + 0.4 * (6.0 * PI * x).cos() + 0.2]
        })
        .unwrap();
        let scale = f.components[0]
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max)
            .powi(4);
        let r0 = spatial_residual_entropy_stable(&f, &s, 0.0, &m).unwrap();
        let rate0 = entropy_rate(&f, &r0);
        assert!(rate0.abs() <= 1e-10 * scale, "p = {p}: c = 0 rate {rate0}");
        for c in [0.1, 1.0, 5.0] {
            let r = spatial_residual_entropy_stable(&f, &s, c, &m).unwrap();
            assert!(entropy_rate(&f, &r) <= 0.0, "p = {p}, c = {c}");
        }
    }
}

fn random_periodic_field(n: usize, coeffs: &[(f64, f64)]) -> FieldState {
    let g = periodic(n, 1.0);
    FieldState::from_fn(g, 1, |x| {
        vec![coeffs
            .iter()
            .enumerate()
            .map(|(k, (a, b))| a * (2.0 * PI * (k + 1) as f64 * x).sin() + b)
            .sum()]
    })
    .unwrap()
}

#[test]
fn periodic_runs_conserve_mass() {
    let m = Model::Cubic(CubicModel::new(1.0).unwrap());
    let f = random_periodic_field(160, &[(1.2, 0.1), (0.5, -0.05), (0.3, 0.0)]);
    let mass0 = f.integral()[0];
    let t_end = 0.05;
    let traj = run(&RunConfig::new(m, f, WcdConfig::adaptive(3, 0.1), t_end)).unwrap();
    let mass1 = traj.final_state().integral()[0];
    let scale = mass0.abs().max(1.0);
    assert!(
        (mass1 - mass0).abs() / scale <= 1e-12 * t_end.max(1.0),
        "{mass0} -> {mass1}"
    );

    let sys = Model::System(SystemModel::hall_mhd(2.0));
    let g = periodic(120, 1.0);
    let f = FieldState::from_fn(g, 2, |x| {
        vec![0.8 * (2.0 * PI * x).cos(), 0.5 + 0.3 * (4.0 * PI * x).sin()]
    })
    .unwrap();
    let m0 = f.integral();
    let traj = run(&RunConfig::new(sys, f, WcdConfig::adaptive(2, 0.1), t_end)).unwrap();
    let m1 = traj.final_state().integral();
    for k in 0..2 {
        assert!(
            (m1[k] - m0[k]).abs() <= 1e-12,
            "component {k}: {} -> {}",
            m0[k],
            m1[k]
        );
    }
}

#[test]
fn cubic_runs_are_odd_equivariant() {
    let m = Model::Cubic(CubicModel::new(1.0).unwrap());
    let g = GridSpec::new(0.0, 1.0, 200, BoundaryCondition::OutflowExtrapolation).unwrap();
    let f = FieldState::riemann(g, &RiemannData::scalar(2.0, -2.0, 0.4)).unwrap();
    let mut neg = f.clone();
    neg.components[0].iter_mut().for_each(|v| *v = -*v);
    let t_end = 0.01;
    let a = run(&RunConfig::new(m, f, WcdConfig::adaptive(4, 0.1), t_end)).unwrap();
    let b = run(&RunConfig::new(m, neg, WcdConfig::adaptive(4, 0.1), t_end)).unwrap();
    for (x, y) in a.final_state().components[0]
        .iter()
        .zip(&b.final_state().components[0])
    {
        assert!((x + y).abs() <= 1e-13 * (1.0 + x.abs()));
    }
}

fn rotate(theta: f64, v: [f64; 2]) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [c * v[0] - s * v[1], s * v[0] + c * v[1]]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constant_states_are_exact(u in -5.0f64..5.0, p in 2usize..=4, c in 0.0f64..10.0) {
        let s = StencilSet::build(p).unwrap();
        let m = CubicModel::new(1.0).unwrap();
        let f = FieldState::scalar(periodic(20, 1.0), vec![u; 20]).unwrap();
        prop_assert!(spatial_residual_scalar(&f, &s, c, &m).unwrap().iter().all(|&v| v == 0.0));
        prop_assert!(spatial_residual_entropy_stable(&f, &s, c, &m).unwrap().iter().all(|&v| v == 0.0));
        let sys = SystemModel::hall_mhd(1.5);
        let f = FieldState::new(periodic(20, 1.0), vec![vec![u; 20], vec![0.3 * u; 20]], 0.0).unwrap();
        prop_assert!(spatial_residual_system(&f, &s, c, &sys).unwrap().iter().flatten().all(|&v| v == 0.0));
    }

    #[test]
    fn mhd_residual_is_rotation_equivariant(
        theta in 0.0f64..(2.0 * PI),
        amps in proptest::collection::vec(-1.0f64..1.0, 4),
        alpha in 0.5f64..10.0,
        c in 0.0f64..3.0,
    ) {
        let sys = SystemModel::hall_mhd(alpha);
        let s = StencilSet::build(2).unwrap();
        let g = periodic(40, 1.0);
        let f = FieldState::from_fn(g, 2, |x| {
            vec![amps[0] * (2.0 * PI * x).sin() + amps[1], amps[2] * (4.0 * PI * x).cos() + amps[3]]
        }).unwrap();
        let mut rf = f.clone();
        for i in 0..40 {
            let r = rotate(theta, [f.components[0][i], f.components[1][i]]);
            rf.components[0][i] = r[0];
            rf.components[1][i] = r[1];
        }
        let a = spatial_residual_system(&f, &s, c, &sys).unwrap();
        let b = spatial_residual_system(&rf, &s, c, &sys).unwrap();
        let scale = a.iter().flatten().map(|v| v.abs()).fold(1.0, f64::max);
        for i in 0..40 {
            let ra = rotate(theta, [a[0][i], a[1][i]]);
            prop_assert!((ra[0] - b[0][i]).abs() <= 1e-12 * scale);
            prop_assert!((ra[1] - b[1][i]).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn scalar_residual_telescopes(
        coeffs in proptest::collection::vec((-1.5f64..1.5, -0.5f64..0.5), 1..4),
        p in 2usize..=4,
        c in 0.0f64..5.0,
    ) {
        let m = CubicModel::new(1.0).unwrap();
        let s = StencilSet::build(p).unwrap();
        let f = random_periodic_field(64, &coeffs);
        let scale = f.components[0].iter().map(|v| v.abs()).fold(1.0, f64::max);
        for r in [
            spatial_residual_scalar(&f, &s, c, &m).unwrap(),
            spatial_residual_entropy_stable(&f, &s, c, &m).unwrap(),
        ] {
            let total: f64 = r.iter().sum::<f64>() * f.grid.dx();
            prop_assert!(total.abs() <= 1e-12 * scale.powi(3) * (1.0 + c * c) * 64.0);
        }
    }
}
