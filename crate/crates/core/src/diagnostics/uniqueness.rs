//! Distance between two solutions in the norms of the uniqueness argument.

use crate::dynamics::State;
use crate::error::{Error, Result};
use crate::littlewood_paley::{BesovSpec, DyadicPartition};
use crate::spectral::{check_same_grid, quasi_velocity};

/// `(t, ‖θ¹−θ²‖_{B^{−1}_{2,∞}}, ‖v¹−v²‖_{B^0_{2,∞}}, Y)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwinRow {
    pub t: f64,
    pub theta_diff: f64,
    pub v_diff: f64,
    pub y: f64,
    /// `σ = 0`, where the uniqueness argument applies.
    pub in_regime: bool,
}

pub const TWIN_COLUMNS: [&str; 5] = ["t", "theta_diff", "v_diff", "y", "in_regime"];

impl TwinRow {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.t,
            self.theta_diff,
            self.v_diff,
            self.y,
            if self.in_regime { 1.0 } else { 0.0 },
        ]
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TwinDivergence {
    pub rows: Vec<TwinRow>,
}

impl TwinDivergence {
    pub fn push(&mut self, row: TwinRow) {
        self.rows.push(row);
    }

    pub fn max_y(&self) -> f64 {
        self.rows.iter().map(|r| r.y).fold(0.0, f64::max)
    }
}

/// `Y = ‖θ¹−θ²‖_{B^{−1}_{2,∞}} + ‖v¹−v²‖_{B^0_{2,∞}}` with `v = ∇⊥Δ⁻¹ω`.
pub fn uniqueness_functional(a: &State, b: &State, sigma: f64, _gamma: f64) -> Result<TwinRow> {
    check_same_grid(a.grid(), b.grid())?;
    if (a.t - b.t).abs() > 1e-12 * a.t.abs().max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "twin states at different times ({} and {})",
            a.t, b.t
        )));
    }
    let partition = DyadicPartition::new(a.grid());
    let d_theta = a.theta.sub(&b.theta)?;
    let d_v = quasi_velocity(&a.omega.sub(&b.omega)?);
    let theta_diff = partition.besov_norm(&d_theta, &BesovSpec::plain(-1.0, 2.0, f64::INFINITY))?;
    let v_diff = partition.besov_norm_vector(&d_v, &BesovSpec::plain(0.0, 2.0, f64::INFINITY))?;
    Ok(TwinRow {
        t: a.t,
        theta_diff,
        v_diff,
        y: theta_diff + v_diff,
        in_regime: sigma == 0.0,
    })
}
