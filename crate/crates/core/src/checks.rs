//! Built-in invariant suite behind `bsqlab check`.

use std::f64::consts::LN_2;

use crate::diagnostics::{g_energy_balance, velocity_formulation_residual};
use crate::dynamics::{InitialCondition, Integrator, State, SystemParams};
use crate::io::{decode_snapshot, encode_snapshot};
use crate::littlewood_paley::make_partition;
use crate::random::{band_limited_field, BandLimited, FieldRng};
use crate::spectral::{
    inv_laplacian, l2_norm, lambda_pow, log_laplacian_pow, make_grid, riesz_x1, ScalarField,
    Spectrum,
};
use crate::Result;

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn max_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn partition_of_unity() -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for n in [64, 256] {
        let grid = make_grid(n)?;
        let part = make_partition(&grid);
        let r = part.coverage_radius();
        for (i, k1, k2) in Spectrum::zeros(&grid).modes() {
            if ((k1 * k1 + k2 * k2) as f64).sqrt() <= r {
                let s: f64 = part
                    .block_indices()
                    .map(|j| part.symbol(j).map(|t| t.values()[i].re))
                    .sum::<Result<f64>>()?;
                worst = worst.max((s - 1.0).abs());
            }
        }
    }
    Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
}

fn eigenfunctions() -> Result<(bool, String)> {
    let g = make_grid(32)?;
    let c1 = ScalarField::from_fn(&g, |x, _| x.cos());
    let s1 = ScalarField::from_fn(&g, |x, _| x.sin());
    let c2 = ScalarField::from_fn(&g, |x, _| (2.0 * x).cos());
    let c11 = ScalarField::from_fn(&g, |x, y| (x + y).cos());
    let worst = [
        max_diff(&lambda_pow(&c2, 0.5), &c2.scaled(2f64.sqrt())),
        max_diff(&log_laplacian_pow(&c1, 1.0)?, &c1.scaled(LN_2)),
        max_diff(&log_laplacian_pow(&c2, 2.0)?, &c2.scaled(5f64.ln().powi(2))),
        max_diff(&riesz_x1(&s1), &c1),
        max_diff(&inv_laplacian(&c11), &c11.scaled(-0.5)),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok((worst < 1e-12, format!("max error {worst:.2e}")))
}

fn taylor_green_decay() -> Result<(bool, String)> {
    let grid = make_grid(32)?;
    let w0 = InitialCondition::TaylorGreen { amplitude: 1.0 }.build(&grid)?;
    let mut worst: f64 = 0.0;
    for (s, g) in [(0.0, 0.0), (0.4, 2.0)] {
        let mut integ = Integrator::new(&grid, SystemParams::gbou(s, g), true)?;
        let mut x = w0.clone();
        for _ in 0..100 {
            x = integ.step(&x, 1e-3)?;
        }
        let exact = w0.omega.scaled((-(2f64.sqrt()) * x.t).exp());
        worst = worst.max(max_diff(&x.omega, &exact));
    }
    Ok((worst < 1e-10, format!("max error at t=0.1: {worst:.2e}")))
}

fn seeded_state(n: usize, rms_theta: f64) -> Result<State> {
    let grid = make_grid(n)?;
    let bl = BandLimited { k_max: 4, slope: 1.0, rms: 0.1 };
    let mut rng = FieldRng::new(11);
    let w = band_limited_field(&grid, bl, &mut rng)?;
    let t = band_limited_field(&grid, BandLimited { rms: rms_theta, ..bl }, &mut rng)?;
    State::new(0.0, w, t)
}

fn energy_balances() -> Result<(bool, String)> {
    let p = SystemParams::gbou(0.0, 0.0);
    let mut worst_w: f64 = 0.0;
    let mut worst_g: f64 = 0.0;
    for (rms_theta, slot) in [(0.0, 0), (0.1, 1)] {
        let mut x = seeded_state(64, rms_theta)?;
        let mut integ = Integrator::new(x.grid(), p, true)?;
        for _ in 0..50 {
            let y = integ.step(&x, 1e-3)?;
            let r = g_energy_balance(&x, &y, &p)?;
            if slot == 0 {
                worst_w = worst_w.max(r);
            } else {
                worst_g = worst_g.max(r);
            }
            x = y;
        }
    }
    Ok((
        worst_w < 1e-6 && worst_g < 1e-6,
        format!("theta=0 vorticity balance {worst_w:.2e}, G balance {worst_g:.2e}"),
    ))
}

fn velocity_formulation() -> Result<(bool, String)> {
    let grid = make_grid(64)?;
    let p = SystemParams::gbou(0.25, 0.5);
    let tg = InitialCondition::TaylorGreen { amplitude: 1.0 }.build(&grid)?;
    let ly = InitialCondition::Layered { amplitude: 1.0, mode: 1 }.build(&grid)?;
    let a = velocity_formulation_residual(&tg, &p)?.norm;
    let b = velocity_formulation_residual(&ly, &p)?.norm;
    Ok((a < 1e-10 && b < 1e-11, format!("Taylor-Green {a:.2e}, layered {b:.2e}")))
}

fn snapshot_round_trip() -> Result<(bool, String)> {
    let s = seeded_state(16, 0.1)?;
    let p = SystemParams::gbou(0.1, 0.5);
    let (back, q) = decode_snapshot(&encode_snapshot(&s, &p))?;
    let same = back == s && q == p;
    Ok((same, format!("bit-exact: {same}")))
}

fn mean_conservation() -> Result<(bool, String)> {
    let mut x = seeded_state(32, 0.1)?;
    let m0 = (x.omega.mean(), x.theta.mean());
    let mut integ = Integrator::new(x.grid(), SystemParams::gbou(0.0, 1.0), true)?;
    for _ in 0..50 {
        x = integ.step(&x, 5e-3)?;
    }
    let drift = (x.omega.mean() - m0.0).abs().max((x.theta.mean() - m0.1).abs());
    let scale = l2_norm(&x.theta);
    Ok((drift < 1e-11, format!("mean drift {drift:.2e} (theta L2 {scale:.2e})")))
}

type Check = fn() -> Result<(bool, String)>;

/// Runs every check; errors count as failures.
pub fn run_checks() -> Vec<CheckOutcome> {
    let suite: [(&'static str, Check); 7] = [
        ("partition of unity", partition_of_unity),
        ("multiplier eigenfunctions", eigenfunctions),
        ("Taylor-Green decay", taylor_green_decay),
        ("energy balances", energy_balances),
        ("velocity formulation", velocity_formulation),
        ("mean conservation", mean_conservation),
        ("snapshot round trip", snapshot_round_trip),
    ];
    suite
        .into_iter()
        .map(|(name, f)| match f() {
            Ok((pass, detail)) => CheckOutcome { name, pass, detail },
            Err(e) => CheckOutcome {
                name,
                pass: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}
