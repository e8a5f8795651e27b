//! Initial data.

use std::f64::consts::PI;

use super::state::State;
use crate::error::{Error, Result};
use crate::random::{band_limited_field, BandLimited, FieldRng};
use crate::spectral::{Grid, ScalarField};

/// Built-in initial conditions.
#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    Zero,
    /// `ω = A sin x₁ sin x₂`, `θ = 0`.
    TaylorGreen { amplitude: f64 },
    /// `ω = 0`, `θ = A sin(m x₂)`.
    Layered { amplitude: f64, mode: u32 },
    /// Independent seeded band-limited `ω` and `θ`, drawn in that order.
    Random {
        seed: u64,
        omega: BandLimited,
        theta: BandLimited,
    },
    /// Seeded band-limited `ω` and a smooth temperature bump of height
    /// `theta_amplitude` centred on the grid node `(π, π)`.
    Blob {
        seed: u64,
        omega: BandLimited,
        theta_amplitude: f64,
        width: f64,
    },
    /// `count` seeded periodic bumps of random sign for each of `ω` and `θ`,
    /// mean removed from `ω`. Analytic but not band-limited.
    Vortices {
        seed: u64,
        count: u32,
        amplitude: f64,
        width: f64,
    },
}

/// Periodic bump `exp((cos(x₁−c₁) + cos(x₂−c₂) − 2)/w²)`, equal to 1 at the centre.
pub fn periodic_bump(grid: &Grid, c1: f64, c2: f64, width: f64) -> ScalarField {
    let kappa = 1.0 / (width * width);
    ScalarField::from_fn(grid, |x1, x2| {
        (kappa * ((x1 - c1).cos() + (x2 - c2).cos() - 2.0)).exp()
    })
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

fn bump_sum(grid: &Grid, rng: &mut FieldRng, count: u32, amplitude: f64, width: f64) -> ScalarField {
    let mut acc = vec![0.0; grid.len()];
    for _ in 0..count {
        let c1 = 2.0 * PI * rng.uniform();
        let c2 = 2.0 * PI * rng.uniform();
        let sign = if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
        let scale = amplitude * sign * (0.5 + rng.uniform());
        let b = periodic_bump(grid, c1, c2, width);
        for (a, v) in acc.iter_mut().zip(b.values()) {
            *a += scale * v;
        }
    }
    ScalarField::new(grid, acc).expect("shape")
}

impl InitialCondition {
    pub fn build(&self, grid: &Grid) -> Result<State> {
        match *self {
            InitialCondition::Zero => Ok(State::zero(grid)),
            InitialCondition::TaylorGreen { amplitude } => {
                let omega = ScalarField::from_fn(grid, |x1, x2| amplitude * x1.sin() * x2.sin());
                State::new(0.0, omega, ScalarField::zeros(grid))
            }
            InitialCondition::Layered { amplitude, mode } => {
                if mode == 0 || mode as i64 >= grid.nyquist() {
                    return Err(Error::InvalidParameter(format!(
                        "layer mode {mode} must lie in 1..{}",
                        grid.nyquist()
                    )));
                }
                let m = mode as f64;
                let theta = ScalarField::from_fn(grid, |_, x2| amplitude * (m * x2).sin());
                State::new(0.0, ScalarField::zeros(grid), theta)
            }
            InitialCondition::Random { seed, omega, theta } => {
                let mut rng = FieldRng::new(seed);
                let w = band_limited_field(grid, omega, &mut rng)?;
                let t = band_limited_field(grid, theta, &mut rng)?;
                State::new(0.0, w, t)
            }
            InitialCondition::Blob {
                seed,
                omega,
                theta_amplitude,
                width,
            } => {
                check_positive("width", width)?;
                let mut rng = FieldRng::new(seed);
                let w = band_limited_field(grid, omega, &mut rng)?;
                let t = periodic_bump(grid, PI, PI, width).scaled(theta_amplitude);
                State::new(0.0, w, t)
            }
            InitialCondition::Vortices {
                seed,
                count,
                amplitude,
                width,
            } => {
                check_positive("width", width)?;
                let mut rng = FieldRng::new(seed);
                let w = bump_sum(grid, &mut rng, count, amplitude, width);
                let mean = w.mean();
                let w = w.map(|v| v - mean);
                let t = bump_sum(grid, &mut rng, count, amplitude, width);
                State::new(0.0, w, t)
            }
        }
    }
}
