//! Empirical constants of the commutator bounds.

use crate::error::{Error, Result};
use crate::littlewood_paley::{BesovSpec, DyadicPartition};
use crate::spectral::{check_same_grid, l2_norm, lp_norm, ScalarField, VelocityOperator};

use super::commutator::{commutator_r_u, commutator_spectrum};

/// `max(8, ⌈2/(1−s−σ)⌉)`.
pub fn default_p3(s: f64, sigma: f64) -> f64 {
    (2.0 / (1.0 - s - sigma)).ceil().max(8.0)
}

/// `‖[R,u]θ‖_{H^s} / (‖ω‖_{L²} (‖θ‖_{L^{p₃}} + ‖θ‖_{L^{2/(1−σ)}}))` with
/// `u = ∇⊥Δ⁻¹Λ^σ(log(I−Δ))^γ ω` and `H^s` measured as `B^s_{2,2}`.
pub fn commutator_estimate_ratio(
    omega: &ScalarField,
    theta: &ScalarField,
    sigma: f64,
    gamma: f64,
    s: f64,
    p3: f64,
) -> Result<f64> {
    check_same_grid(omega.grid(), theta.grid())?;
    if !(0.0..0.5).contains(&sigma) {
        return Err(Error::InvalidParameter(format!("need 0 <= sigma < 1/2, got {sigma}")));
    }
    if !(s >= 0.0 && s < 1.0 - sigma) {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= s < 1 - sigma, got s={s}, sigma={sigma}"
        )));
    }
    let p3_min = 2.0 / (1.0 - s - sigma);
    if !(p3 >= p3_min) {
        return Err(Error::InvalidParameter(format!("need p3 >= {p3_min}, got {p3}")));
    }
    let denom = l2_norm(omega) * (lp_norm(theta, p3) + lp_norm(theta, 2.0 / (1.0 - sigma)));
    if denom == 0.0 {
        return Err(Error::Degenerate("vorticity or temperature vanishes".into()));
    }
    let u = VelocityOperator::new(omega.grid(), sigma, gamma)?.apply(&omega.to_spectrum());
    let c = commutator_r_u(&u, theta)?;
    let partition = DyadicPartition::new(omega.grid());
    let num = partition.besov_norm_vector(&c, &BesovSpec::plain(s, 2.0, 2.0))?;
    Ok(num / denom)
}

/// Both sides of `‖[R,u·∇]θ‖_{B^0_{q,1}} ≲ ‖ω‖_{L^q} ‖θ‖_{B^{0,γ}_{∞,1}}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogCommutator {
    pub numerator: f64,
    pub denominator: f64,
    pub ratio: f64,
}

/// Evaluates the logarithmic commutator bound with `u = ∇⊥Δ⁻¹(log(I−Δ))^γ ω`.
pub fn log_commutator_norm(
    omega: &ScalarField,
    theta: &ScalarField,
    gamma: f64,
    q: f64,
) -> Result<LogCommutator> {
    check_same_grid(omega.grid(), theta.grid())?;
    if !(q >= 2.0) || !(gamma >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need q >= 2 and gamma >= 0, got q={q}, gamma={gamma}"
        )));
    }
    let partition = DyadicPartition::new(omega.grid());
    let theta_b = partition.besov_norm(theta, &BesovSpec::new(0.0, gamma, f64::INFINITY, 1.0, false)?)?;
    let denominator = lp_norm(omega, q) * theta_b;
    if denominator == 0.0 {
        return Err(Error::Degenerate("vorticity or temperature vanishes".into()));
    }
    let u = VelocityOperator::new(omega.grid(), 0.0, gamma)?.apply(&omega.to_spectrum());
    let c = commutator_spectrum(&u, &theta.to_spectrum()).to_field();
    let numerator = partition.besov_norm(&c, &BesovSpec::plain(0.0, q, 1.0))?;
    Ok(LogCommutator {
        numerator,
        denominator,
        ratio: numerator / denominator,
    })
}
