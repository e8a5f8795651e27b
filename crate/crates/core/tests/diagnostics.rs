//! G, the commutator harnesses, the velocity form, monitors and twin distances.

use std::f64::consts::PI;

use bsqlab::diagnostics::*;
use bsqlab::dynamics::*;
use bsqlab::io::{read_series, read_snapshot, Preset, RunConfig};
use bsqlab::random::{band_limited_field, BandLimited, FieldRng};
use bsqlab::spectral::*;
use num_complex::Complex64;

fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn seeded(grid: &Grid, k_max: u32, rms: f64, seed: u64) -> ScalarField {
    band_limited_field(grid, BandLimited { k_max, slope: 1.0, rms }, &mut FieldRng::new(seed)).unwrap()
}

fn tg(grid: &Grid) -> ScalarField {
    ScalarField::from_fn(grid, |x, y| x.sin() * y.sin())
}

#[test]
fn g_field_examples() {
    let grid = make_grid(32).unwrap();
    let w = seeded(&grid, 8, 1.0, 1);
    let zero = ScalarField::zeros(&grid);
    assert!(max_diff(&g_field(&w, &zero).unwrap(), &w) < 1e-14);
    let s = ScalarField::from_fn(&grid, |x, _| x.sin());
    let g = g_field(&zero, &s).unwrap();
    assert!(max_diff(&g, &ScalarField::from_fn(&grid, |x, _| -x.cos())) < 1e-14);
    assert!(g_field(&w, &ScalarField::zeros(&make_grid(16).unwrap())).is_err());
}

#[test]
fn commutator_examples() {
    let grid = make_grid(32).unwrap();
    let theta = seeded(&grid, 10, 1.0, 4);
    let u = VectorField::new(ScalarField::constant(&grid, 0.7), ScalarField::constant(&grid, -1.3)).unwrap();
    assert!(commutator_r_u_grad(&u, &theta).unwrap().max_abs() < 1e-12);
    let u = velocity_from_vorticity(&seeded(&grid, 8, 1.0, 5), 0.2, 1.0).unwrap();
    assert!(commutator_r_u_grad(&u, &ScalarField::constant(&grid, 3.0)).unwrap().max_abs() < 1e-12);
    let c = commutator_r_u_grad(&u, &theta).unwrap();
    assert!(c.mean().abs() < 1e-12);
}

#[test]
fn commutator_self_convergence() {
    let eval = |n: usize| {
        let grid = make_grid(n).unwrap();
        let u = velocity_from_vorticity(&tg(&grid), 0.0, 0.0).unwrap();
        commutator_r_u_grad(&u, &ScalarField::from_fn(&grid, |_, y| y.cos())).unwrap()
    };
    let (coarse, fine) = (eval(64), eval(128));
    let mut worst: f64 = 0.0;
    for i2 in 0..64 {
        for i1 in 0..64 {
            worst = worst.max((coarse.at(i1, i2) - fine.at(2 * i1, 2 * i2)).abs());
        }
    }
    assert!(worst < 1e-10, "{worst}");
    assert!(coarse.max_abs() > 0.1);
}

#[test]
fn energy_balance_examples() {
    let grid = make_grid(32).unwrap();
    let params = SystemParams::default();
    let a = State::zero(&grid);
    let b = State { t: 0.01, ..State::zero(&grid) };
    assert_eq!(g_energy_balance(&a, &b, &params).unwrap(), 0.0);
    assert!(g_energy_balance(&b, &a, &params).is_err());

    let residual_at = |dt: f64| {
        let grid = make_grid(64).unwrap();
        let mut rng = FieldRng::new(11);
        let bl = BandLimited { k_max: 4, slope: 1.0, rms: 0.1 };
        let w = band_limited_field(&grid, bl, &mut rng).unwrap();
        let t = band_limited_field(&grid, bl, &mut rng).unwrap();
        let s0 = State::new(0.0, w, t).unwrap();
        let mut integ = Integrator::new(&grid, params, true).unwrap();
        let s1 = integ.step(&s0, dt).unwrap();
        g_energy_balance(&s0, &s1, &params).unwrap()
    };
    let ratio = residual_at(2e-3) / residual_at(1e-3);
    assert!((3.5..4.5).contains(&ratio), "{ratio}");
}

#[test]
fn velocity_form_examples() {
    let grid = make_grid(64).unwrap();
    let params = SystemParams::default();
    let s = State::new(0.0, tg(&grid), ScalarField::zeros(&grid)).unwrap();
    let r = velocity_formulation_residual(&s, &params).unwrap();
    assert!(r.norm < 1e-10, "{}", r.norm);
    let s = State::new(0.0, ScalarField::zeros(&grid), ScalarField::from_fn(&grid, |_, y| y.sin())).unwrap();
    let r = velocity_formulation_residual(&s, &params).unwrap();
    assert!(r.norm < 1e-11, "{}", r.norm);

    let params = SystemParams::gbou(0.25, 1.0);
    let s = State::new(0.0, seeded(&grid, 20, 1.0, 60), seeded(&grid, 20, 1.0, 61)).unwrap();
    let r = velocity_formulation_residual(&s, &params).unwrap();
    assert!(r.norm < 1e-10 && r.identity_norm < 1e-10, "{} {}", r.norm, r.identity_norm);

    let vortices = InitialCondition::Vortices { seed: 3, count: 6, amplitude: 1.0, width: 0.2 };
    let norm_at = |n: usize| {
        let s = vortices.build(&make_grid(n).unwrap()).unwrap();
        velocity_formulation_residual(&s, &params).unwrap().norm
    };
    let (coarse, fine) = (norm_at(64), norm_at(128));
    assert!(coarse / fine >= 1e2, "{coarse} -> {fine}");
}

#[test]
fn zero_state_gives_zero_row() {
    let grid = make_grid(32).unwrap();
    let row = snapshot_row(&State::zero(&grid), &SystemParams::default(), 3.0).unwrap();
    let v = row.to_vec();
    assert_eq!(v.len(), NORM_COLUMNS.len());
    assert!(v[..v.len() - 1].iter().all(|&x| x == 0.0), "{v:?}");
    assert!(row.in_window);
}

#[test]
fn layered_preset_has_constant_temperature_columns() {
    let config = RunConfig {
        n: 32,
        t_end: 0.3,
        init_preset: Preset::Layered,
        init_mode: 2,
        series_interval: 0.05,
        ..RunConfig::default()
    };
    let out = run(&config).unwrap();
    let first = out.series.rows()[0];
    for row in out.series.rows() {
        assert!((row.theta_l2 - first.theta_l2).abs() < 1e-12);
        assert!((row.theta_linf - first.theta_linf).abs() < 1e-12);
        assert!((row.theta_besov - first.theta_besov).abs() < 1e-12);
        assert!(row.omega_l2 < 1e-12);
    }
}

/// Reads a snapshot by hand and measures `ω − Rθ` with a direct DFT.
fn scripted_g_l2(bytes: &[u8]) -> f64 {
    assert_eq!(&bytes[..4], b"GBSQ");
    let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let field = |offset: usize| -> Vec<f64> {
        (0..n * n)
            .map(|i| f64::from_le_bytes(bytes[offset + 8 * i..offset + 8 * i + 8].try_into().unwrap()))
            .collect()
    };
    let omega = field(68);
    let theta = field(68 + 8 * n * n);
    let h = 2.0 * PI / n as f64;
    let half = n as i64 / 2;
    let mut power = 0.0;
    for k2 in -half + 1..half {
        for k1 in -half + 1..half {
            let mut w_hat = Complex64::new(0.0, 0.0);
            let mut t_hat = Complex64::new(0.0, 0.0);
            for i2 in 0..n {
                for i1 in 0..n {
                    let e = Complex64::from_polar(1.0, -h * (k1 * i1 as i64 + k2 * i2 as i64) as f64);
                    w_hat += omega[i2 * n + i1] * e;
                    t_hat += theta[i2 * n + i1] * e;
                }
            }
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            let riesz = if r == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, k1 as f64 / r) };
            let g = (w_hat - riesz * t_hat) / (n * n) as f64;
            power += g.norm_sqr();
        }
    }
    2.0 * PI * power.sqrt()
}

#[test]
fn monitors_agree_with_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig {
        n: 16,
        t_end: 0.1,
        init_kmax: 5,
        init_preset: Preset::Random,
        output_dir: Some(dir.path().to_path_buf()),
        snapshot_interval: 0.05,
        series_interval: 0.05,
        ..RunConfig::default()
    };
    let out = run(&config).unwrap();
    assert_eq!(out.snapshot_times.len(), 3);
    let series = read_series(dir.path().join("series.csv")).unwrap();
    assert_eq!(series.rows(), out.series.rows());
    for (index, row) in series.rows().iter().enumerate() {
        let path = dir.path().join(format!("snapshot_{index:05}.bin"));
        let bytes = std::fs::read(&path).unwrap();
        let g = scripted_g_l2(&bytes);
        assert!((row.g_l2 - g).abs() < 1e-12 * g.max(1.0), "{} vs {g}", row.g_l2);

        let (state, params) = read_snapshot(&path).unwrap();
        assert_eq!(state.t, row.t);
        let again = snapshot_row(&state, &params, config.q_norm).unwrap();
        for (a, b) in [
            (again.omega_l2, row.omega_l2),
            (again.omega_lq, row.omega_lq),
            (again.theta_linf, row.theta_linf),
            (again.theta_l2, row.theta_l2),
            (again.g_l2, row.g_l2),
            (again.g_lq, row.g_lq),
            (again.omega_besov, row.omega_besov),
            (again.theta_besov, row.theta_besov),
            (again.tail_mass, row.tail_mass),
        ] {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}

#[test]
fn commutator_ratio_examples() {
    let grid = make_grid(32).unwrap();
    let w = seeded(&grid, 5, 1.0, 30);
    let t = seeded(&grid, 5, 1.0, 31);
    let zero = ScalarField::zeros(&grid);
    assert!(commutator_estimate_ratio(&w, &zero, 0.0, 0.0, 0.5, 8.0).is_err());
    let a = commutator_estimate_ratio(&w, &t, 0.0, 0.0, 0.5, 8.0).unwrap();
    let b = commutator_estimate_ratio(&w.scaled(2.0), &t.scaled(3.0), 0.0, 0.0, 0.5, 8.0).unwrap();
    assert!((a - b).abs() < 1e-12 * a);
    assert!(a > 0.0 && a.is_finite());
    assert!(commutator_estimate_ratio(&w, &t, 0.5, 0.0, 0.2, 8.0).is_err());
    assert!(commutator_estimate_ratio(&w, &t, 0.0, 0.0, 1.0, 8.0).is_err());
    assert!(commutator_estimate_ratio(&w, &t, 0.0, 0.0, 0.5, 3.0).is_err());
    assert_eq!(default_p3(0.5, 0.0), 8.0);
    assert_eq!(default_p3(0.875, 0.0), 16.0);
}

#[test]
fn log_commutator_examples() {
    let grid = make_grid(32).unwrap();
    let w = seeded(&grid, 5, 1.0, 40);
    let t = seeded(&grid, 5, 1.0, 41);
    let c = log_commutator_norm(&w, &ScalarField::constant(&grid, 2.0), 1.0, 4.0).unwrap();
    assert!(c.numerator < 1e-12);
    let a = log_commutator_norm(&w, &t, 1.0, 4.0).unwrap();
    let b = log_commutator_norm(&w.scaled(2.0), &t.scaled(3.0), 1.0, 4.0).unwrap();
    assert!((a.ratio - b.ratio).abs() < 1e-12 * a.ratio);
    assert!((a.ratio - a.numerator / a.denominator).abs() == 0.0);
    assert!(log_commutator_norm(&w, &ScalarField::zeros(&grid), 1.0, 4.0).is_err());
    assert!(log_commutator_norm(&w, &t, 1.0, 1.5).is_err());
}

#[test]
fn uniqueness_examples() {
    let grid = make_grid(32).unwrap();
    let s = State::new(0.0, seeded(&grid, 6, 1.0, 50), seeded(&grid, 6, 1.0, 51)).unwrap();
    let row = uniqueness_functional(&s, &s, 0.0, 0.0).unwrap();
    assert_eq!((row.y, row.theta_diff, row.v_diff), (0.0, 0.0, 0.0));
    assert!(row.in_regime);

    let bump = periodic_bump(&grid, 1.0, 2.0, 0.5);
    let perturbed = |eps: f64| State::new(0.0, s.omega.clone(), s.theta.add(&bump.scaled(eps)).unwrap()).unwrap();
    let y1 = uniqueness_functional(&s, &perturbed(1e-3), 0.0, 0.0).unwrap().y;
    let y2 = uniqueness_functional(&s, &perturbed(2e-3), 0.0, 0.0).unwrap().y;
    assert!((y2 - 2.0 * y1).abs() < 1e-12 * y2.max(1e-300) + 1e-18, "{y1} {y2}");
    assert!(y1 > 0.0);

    let later = State { t: 1.0, ..s.clone() };
    assert!(uniqueness_functional(&s, &later, 0.0, 0.0).is_err());
    assert!(!uniqueness_functional(&s, &s, 0.2, 0.0).unwrap().in_regime);
}

#[test]
fn twin_runs() {
    let config = RunConfig {
        n: 32,
        t_end: 0.2,
        init_preset: Preset::Random,
        init_kmax: 6,
        series_interval: 0.05,
        ..RunConfig::default()
    };
    let mut rows = Vec::new();
    let out = run_twin(&config, 0.0, &mut |r| {
        rows.push(*r);
        Ok(())
    })
    .unwrap();
    assert!(!out.diverged);
    assert!(rows.iter().all(|r| r.y == 0.0));
    assert!((rows.last().unwrap().t - 0.2).abs() < 1e-12);
    let out = run_twin(&config, 1e-6, &mut |_| Ok(())).unwrap();
    let y = out.divergence.max_y();
    assert!(y > 0.0 && y < 1e-3, "{y}");
}

#[test]
fn bound_windows() {
    let w = BoundWindows::classify(0.0, 1.0, 3.0);
    assert!(w.l2 && w.lq && w.spacetime && w.besov);
    let w = BoundWindows::classify(0.3, 0.0, 3.0);
    assert!(w.l2 && !w.lq && !w.spacetime && !w.besov);
    assert!(BoundWindows::classify(0.0, 0.0, 4.0).lq);
    assert!(!BoundWindows::classify(0.0, 1.0, 4.0).lq);
    assert!(!BoundWindows::classify(0.6, 0.0, 2.5).l2);
}
