//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::LN_2;
use std::time::{Duration, Instant};

use bsqlab::diagnostics::{
    commutator_estimate_ratio, g_energy_balance, log_commutator_norm,
    velocity_formulation_residual, MonitorAccumulator, NormRow,
};
use bsqlab::dynamics::{run_from_state, run_twin, InitialCondition, Integrator, NullSink, SystemParams};
use bsqlab::io::{parse_config, RunConfig};
use bsqlab::littlewood_paley::{bernstein_ratio, make_partition};
use bsqlab::random::{annulus_field, band_limited_field, BandLimited, FieldRng};
use bsqlab::spectral::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_rel_err(got: &ScalarField, want: &ScalarField) -> f64 {
    let scale = want.max_abs();
    let diff = got.values().iter().zip(want.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        diff
    } else {
        diff / scale
    }
}

fn multiplier_exactness() -> Outcome {
    let g = make_grid(32).unwrap();
    let f = |h: fn(f64, f64) -> f64| ScalarField::from_fn(&g, h);
    let mut errs: Vec<(&str, f64)> = Vec::new();
    let c1 = f(|x, _| x.cos());
    let c2 = f(|x, _| (2.0 * x).cos());
    let s1 = f(|x, _| x.sin());
    let s2x = f(|_, y| y.sin());
    let tg = f(|x, y| x.sin() * y.sin());
    errs.push(("|k| cos2x", max_rel_err(&apply_multiplier(&c2, &MultiplierSymbol::radial("abs", vec![], |r| r)).unwrap(), &c2.scaled(2.0))));
    let s12 = f(|x, y| (x + y).sin());
    errs.push(("|k|^2 sin(x+y)", max_rel_err(&apply_multiplier(&s12, &MultiplierSymbol::radial("sq", vec![], |r| r * r)).unwrap(), &s12.scaled(2.0))));
    errs.push(("L^1 cos x", max_rel_err(&lambda_pow(&c1, 1.0), &c1)));
    errs.push(("L^1/2 cos 2x", max_rel_err(&lambda_pow(&c2, 0.5), &c2.scaled(2f64.sqrt()))));
    errs.push(("L^s const", lambda_pow(&ScalarField::constant(&g, 3.0), 0.7).max_abs()));
    errs.push(("log^0", max_rel_err(&log_laplacian_pow(&tg, 0.0).unwrap(), &tg)));
    errs.push(("log^1 cos x", max_rel_err(&log_laplacian_pow(&c1, 1.0).unwrap(), &c1.scaled(LN_2))));
    errs.push(("log^2 cos 2x", max_rel_err(&log_laplacian_pow(&c2, 2.0).unwrap(), &c2.scaled(5f64.ln().powi(2)))));
    errs.push(("R sin x", max_rel_err(&riesz_x1(&s1), &c1)));
    errs.push(("R cos x", max_rel_err(&riesz_x1(&c1), &s1.scaled(-1.0))));
    errs.push(("R sin y", riesz_x1(&s2x).max_abs()));
    errs.push(("D^-1 sin x", max_rel_err(&inv_laplacian(&s1), &s1.scaled(-1.0))));
    let cxy = f(|x, y| (x + y).cos());
    errs.push(("D^-1 cos(x+y)", max_rel_err(&inv_laplacian(&cxy), &cxy.scaled(-0.5))));
    errs.push(("D^-1 const", inv_laplacian(&ScalarField::constant(&g, 2.0)).max_abs()));
    let u = perp_gradient(&s2x);
    errs.push(("perp sin y", max_rel_err(&u.x, &f(|_, y| -y.cos())).max(u.y.max_abs())));
    let u = perp_gradient(&s1);
    errs.push(("perp sin x", u.x.max_abs().max(max_rel_err(&u.y, &c1))));
    let u = perp_gradient(&tg);
    errs.push(("perp tg", max_rel_err(&u.x, &f(|x, y| -x.sin() * y.cos())).max(max_rel_err(&u.y, &f(|x, y| x.cos() * y.sin())))));
    let ux = f(|x, y| 0.5 * x.sin() * y.cos());
    let uy = f(|x, y| -0.5 * x.cos() * y.sin());
    let u = velocity_from_vorticity(&tg, 0.0, 0.0).unwrap();
    errs.push(("u tg", max_rel_err(&u.x, &ux).max(max_rel_err(&u.y, &uy))));
    let l3 = 3f64.ln();
    let u = velocity_from_vorticity(&tg, 0.0, 1.0).unwrap();
    errs.push(("u tg log", max_rel_err(&u.x, &ux.scaled(l3)).max(max_rel_err(&u.y, &uy.scaled(l3)))));
    let v = quasi_velocity(&tg);
    errs.push(("v tg", max_rel_err(&v.x, &ux).max(max_rel_err(&v.y, &uy))));
    let v = quasi_velocity(&f(|x, _| (2.0 * x).sin()));
    errs.push(("v sin 2x", v.x.max_abs().max(max_rel_err(&v.y, &c2.scaled(-0.5)))));
    let (name, worst) = errs.iter().fold(("", 0.0), |acc, &(n, e)| if e > acc.1 { (n, e) } else { acc });
    outcome(worst < 1e-12, format!("{} single-mode cases, worst relative error {worst:.2e} ({name})", errs.len()))
}

fn partition_of_unity() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [64, 256] {
        let grid = make_grid(n).unwrap();
        let part = make_partition(&grid);
        let radius = part.coverage_radius();
        let one = Spectrum::zeros(&grid);
        for (i, k1, k2) in one.modes() {
            if ((k1 * k1 + k2 * k2) as f64).sqrt() > radius {
                continue;
            }
            let s: f64 = part.block_indices().map(|j| part.symbol(j).unwrap().values()[i].re).sum();
            worst = worst.max((s - 1.0).abs());
        }
    }
    outcome(worst < 1e-12, format!("max |sum - 1| = {worst:.2e} at n = 64, 256"))
}

fn equivalence() -> Outcome {
    let mut ok = true;
    let mut worst_exact: f64 = 0.0;
    let mut worst_drop = f64::INFINITY;
    for (s, g) in [(0.0, 0.0), (0.0, 1.0), (0.25, 0.5)] {
        let p = SystemParams::gbou(s, g);
        let grid = make_grid(128).unwrap();
        for ic in [InitialCondition::TaylorGreen { amplitude: 1.0 }, InitialCondition::Layered { amplitude: 1.0, mode: 1 }] {
            let r = velocity_formulation_residual(&ic.build(&grid).unwrap(), &p).unwrap().norm;
            worst_exact = worst_exact.max(r);
        }
        let vort = InitialCondition::Vortices { seed: 3, count: 6, amplitude: 1.0, width: 0.2 };
        let r = |n| {
            let grid = make_grid(n).unwrap();
            velocity_formulation_residual(&vort.build(&grid).unwrap(), &p).unwrap().norm
        };
        let (r64, r128) = (r(64), r(128));
        let drop = r64 / r128;
        worst_drop = worst_drop.min(drop);
        ok &= drop >= 1e2;
    }
    ok &= worst_exact < 1e-9;
    outcome(ok, format!("closed-form states residual <= {worst_exact:.2e}; seeded state n=64->128 drop >= {worst_drop:.2e}"))
}

fn taylor_green() -> Outcome {
    let grid = make_grid(64).unwrap();
    let w0 = InitialCondition::TaylorGreen { amplitude: 1.0 }.build(&grid).unwrap();
    let target = (-(2f64.sqrt()) * 0.5).exp();
    let norm0 = w0.omega.inner(&w0.omega).unwrap();
    let mut worst_amp: f64 = 0.0;
    let mut worst_off: f64 = 0.0;
    for (s, g) in [(0.0, 0.0), (0.0, 1.0), (0.4, 2.0)] {
        let mut integ = Integrator::new(&grid, SystemParams::gbou(s, g), true).unwrap();
        let mut x = w0.clone();
        for _ in 0..500 {
            x = integ.step(&x, 1e-3).unwrap();
            let amp = x.omega.inner(&w0.omega).unwrap() / norm0;
            let off = l2_norm(&x.omega.sub(&w0.omega.scaled(amp)).unwrap()).powi(2) + l2_norm(&x.theta).powi(2);
            worst_off = worst_off.max(off);
        }
        let amp = x.omega.inner(&w0.omega).unwrap() / norm0;
        worst_amp = worst_amp.max((amp - target).abs());
    }
    outcome(
        worst_amp < 1e-5 && worst_off < 1e-10,
        format!("amplitude error {worst_amp:.2e} vs e^(-sqrt2/2) = {target:.5}, off-shell energy <= {worst_off:.2e}"),
    )
}

fn balance_run(dt: f64) -> f64 {
    let grid = make_grid(128).unwrap();
    let bl = BandLimited { k_max: 4, slope: 1.0, rms: 0.1 };
    let mut x = InitialCondition::Random { seed: 11, omega: bl, theta: bl }.build(&grid).unwrap();
    let p = SystemParams::gbou(0.0, 0.0);
    let mut integ = Integrator::new(&grid, p, true).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..(0.5 / dt).round() as usize {
        let y = integ.step(&x, dt).unwrap();
        worst = worst.max(g_energy_balance(&x, &y, &p).unwrap());
        x = y;
    }
    worst
}

fn g_energy_identity() -> Outcome {
    let coarse = balance_run(1e-3);
    let fine = balance_run(5e-4);
    let order = (coarse / fine).log2();
    outcome(
        coarse < 1e-6 && order >= 1.7,
        format!("max per-step residual {coarse:.2e} at dt=1e-3, {fine:.2e} at dt=5e-4, order {order:.2}"),
    )
}

fn maximum_principle() -> Outcome {
    let cfg = parse_config(
        "n = 128\nt_end = 1.0\nsigma = 0\ngamma = 1\ninit_preset = blob\ninit_seed = 5\n\
         init_amplitude = 1.0\ninit_kmax = 6\ninit_width = 0.8\ninit_theta_amplitude = 1.0\n\
         dt_max = 0.01\nseries_interval = 0.01",
    )
    .unwrap();
    let out = run_from_state(bsqlab::dynamics::initial_state(&cfg).unwrap(), &cfg, &mut NullSink).unwrap();
    let th0 = out.initial.theta.max_abs();
    let peak = out.series.rows().iter().map(|r| r.theta_linf).fold(0.0, f64::max);
    let drift = (out.final_state.theta.mean() - out.initial.theta.mean()).abs();
    let ok = !out.diverged && out.series.len() == out.steps + 1 && peak <= th0 * (1.0 + 1e-3) && drift < 1e-11;
    outcome(ok, format!("max ||theta||_inf / ||theta0||_inf = {:.6}, mean drift {drift:.2e}, {} steps", peak / th0, out.steps))
}

/// Pinned maxima of the commutator ensembles at n = 64.
const PINNED_COR_MAX: f64 = 4.756_989_192_251_451e-2;
const PINNED_LOG_MAX: f64 = 1.408_948_961_221_809e-1;

fn ensemble_maxima(n: usize) -> (f64, f64) {
    let grid = make_grid(n).unwrap();
    let bl = BandLimited { k_max: 5, slope: 1.0, rms: 1.0 };
    let mut cor: f64 = 0.0;
    let mut log: f64 = 0.0;
    for seed in 0..100 {
        let mut rng = FieldRng::new(1000 + seed);
        let w = band_limited_field(&grid, bl, &mut rng).unwrap();
        let t = band_limited_field(&grid, bl, &mut rng).unwrap();
        cor = cor.max(commutator_estimate_ratio(&w, &t, 0.0, 0.0, 0.5, 8.0).unwrap());
        log = log.max(log_commutator_norm(&w, &t, 1.0, 4.0).unwrap().ratio);
    }
    (cor, log)
}

fn commutator_harnesses() -> Outcome {
    let a = ensemble_maxima(64);
    let b = ensemble_maxima(64);
    let c = ensemble_maxima(128);
    let repro = a.0.to_bits() == b.0.to_bits() && a.1.to_bits() == b.1.to_bits();
    let drift = ((c.0 - a.0).abs() / a.0).max((c.1 - a.1).abs() / a.1);
    let pinned = ((a.0 - PINNED_COR_MAX).abs() <= 1e-9 * PINNED_COR_MAX) && ((a.1 - PINNED_LOG_MAX).abs() <= 1e-9 * PINNED_LOG_MAX);
    outcome(
        a.0.is_finite() && a.1.is_finite() && repro && pinned && drift < 0.1,
        format!("max ratios {:.17e} (H^s) and {:.17e} (log), pinned {pinned}, reproducible {repro}, n-doubling drift {drift:.2e}", a.0, a.1),
    )
}

/// Pinned regression caps for the seeded runs, per γ ∈ {0, 1}:
/// `∫‖Λ^{1/2}G‖²`, `‖G‖³_{L³} + ∫‖G‖³_{L⁶}`, `∫‖ω‖_{B^{0,γ}_{∞,1}}`, `∫‖θ‖_{B^{0,γ}_{∞,1}}`.
const MONITOR_CAPS: [[f64; 4]; 2] = [[29.2, 6.15, 3.34, 5.14], [29.8, 6.27, 8.70, 15.2]];

fn monitor_quantities(row: &NormRow) -> [f64; 4] {
    [row.cum_lambda_half_g_sq, row.g_lq.powi(3) + row.cum_g_l2q_pow_q, row.cum_omega_besov, row.cum_theta_besov]
}

fn monitor_finiteness() -> Outcome {
    let mut ok = true;
    let mut report = Vec::new();
    for (i, gamma) in [0.0, 1.0].into_iter().enumerate() {
        let cfg = RunConfig { n: 128, t_end: 1.0, gamma, q_norm: 3.0, series_interval: 0.1, ..RunConfig::default() };
        let out = run_from_state(bsqlab::dynamics::initial_state(&cfg).unwrap(), &cfg, &mut NullSink).unwrap();
        let last = out.series.last().unwrap();
        let q = monitor_quantities(last);
        let rows_in = out.series.rows().iter().all(|r| r.in_window);
        let below = q.iter().zip(MONITOR_CAPS[i]).all(|(v, cap)| v.is_finite() && *v <= cap);
        ok &= !out.diverged && rows_in && below;
        report.push(format!("gamma={gamma}: [{}]", q.iter().map(|v| format!("{v:.10e}")).collect::<Vec<_>>().join(", ")));
    }
    let grid = make_grid(32).unwrap();
    let state = InitialCondition::TaylorGreen { amplitude: 1.0 }.build(&grid).unwrap();
    let flagged = !MonitorAccumulator::new(&grid, SystemParams::gbou(0.4, 0.0), 3.0).unwrap().observe(&state).unwrap().in_window;
    ok &= flagged;
    outcome(ok, format!("{}; sigma=0.4,q=3 flagged out of window: {flagged}", report.join("; ")))
}

fn uniqueness() -> Outcome {
    let cfg = RunConfig { n: 64, t_end: 0.5, series_interval: 0.05, ..RunConfig::default() };
    let perturbed = run_twin(&cfg, 1e-6, &mut |_| Ok(())).unwrap();
    let identical = run_twin(&cfg, 0.0, &mut |_| Ok(())).unwrap();
    let y_max = perturbed.divergence.max_y();
    let y_zero = identical.divergence.max_y();
    let reached = perturbed.divergence.rows.last().map(|r| r.t).unwrap_or(0.0);
    outcome(
        !perturbed.diverged && (reached - 0.5).abs() < 1e-12 && y_max < 1e-3 && y_zero <= 1e-14,
        format!("max Y = {y_max:.3e} for the 1e-6 perturbation, {y_zero:.1e} for identical twins, to t = {reached}"),
    )
}

fn bernstein_maxima(n: usize) -> Vec<f64> {
    let grid = make_grid(n).unwrap();
    let part = make_partition(&grid);
    let mut out = Vec::new();
    for (p, q) in [(2.0, 2.0), (2.0, f64::INFINITY)] {
        for j in 1..=3 {
            let mut worst: f64 = 0.0;
            for seed in 0..30 {
                let mut rng = FieldRng::new(7000 + seed);
                let g = annulus_field(&grid, 0.0, 64.0, 21, &mut rng).unwrap();
                let f = part.block(&g, j).unwrap();
                worst = worst.max(bernstein_ratio(&f, j, 0.5, p, q).unwrap());
            }
            out.push(worst);
        }
    }
    out
}

fn bernstein() -> Outcome {
    let grid = make_grid(32).unwrap();
    let f = ScalarField::from_fn(&grid, |x, _| (2.0 * x).cos());
    let single = bernstein_ratio(&f, 1, 0.5, 2.0, 2.0).unwrap();
    let a = bernstein_maxima(64);
    let b = bernstein_maxima(128);
    let drift = a.iter().zip(&b).map(|(x, y)| (x - y).abs() / x).fold(0.0, f64::max);
    outcome(
        (single - 1.0).abs() < 1e-14 && drift < 0.1 && a.iter().all(|v| v.is_finite()),
        format!("single mode ratio {single:.16}; ensemble max drift {drift:.2e} over {} (p,q,j) cases", a.len()),
    )
}

type Criterion = (&'static str, fn() -> Outcome, Duration);

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 multiplier exactness", multiplier_exactness, Duration::from_secs(1)),
        ("2 partition of unity", partition_of_unity, Duration::from_secs(1)),
        ("3 velocity-formulation equivalence", equivalence, Duration::from_secs(10)),
        ("4 Taylor-Green closed form", taylor_green, Duration::from_secs(30)),
        ("5 G energy identity", g_energy_identity, Duration::from_secs(120)),
        ("6 maximum principle", maximum_principle, Duration::from_secs(120)),
        ("7 commutator estimate harnesses", commutator_harnesses, Duration::from_secs(120)),
        ("8 monitor finiteness in windows", monitor_finiteness, Duration::from_secs(180)),
        ("9 uniqueness diagnostic", uniqueness, Duration::from_secs(120)),
        ("10 Bernstein ratios", bernstein, Duration::from_secs(60)),
    ];
    let only: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, check, budget) in criteria {
        if !only.is_empty() && !only.iter().any(|o| name.contains(o.as_str())) {
            continue;
        }
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let pass = result.pass && elapsed <= budget;
        if !pass {
            failed += 1;
        }
        println!(
            "[{}] criterion {name}: {} ({:.2?}, budget {:?})",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed,
            budget
        );
    }
    println!("acceptance: {failed} criteria failed");
    if failed > 0 {
        std::process::exit(1);
    }
}
