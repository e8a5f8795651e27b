//! Fourier-multiplier operators and the pseudo-spectral transport term.

use num_complex::Complex64;

use super::field::{check_same_grid, ScalarField, Spectrum, VectorField};
use super::grid::Grid;
use super::norms::l2_norm;
use super::symbol::{log_symbol, MultiplierSymbol, SymbolTable};
use crate::error::{Error, Result};

pub fn transform(field: &ScalarField) -> Spectrum {
    field.to_spectrum()
}

pub fn inverse_transform(coeffs: &Spectrum) -> ScalarField {
    coeffs.to_field()
}

/// Multiplies every coefficient of `field` by `m(k)`.
pub fn apply_multiplier(field: &ScalarField, m: &MultiplierSymbol) -> Result<ScalarField> {
    let table = m.tabulate(field.grid())?;
    Ok(field.to_spectrum().apply_unchecked(&table).to_field())
}

fn apply_builtin(field: &ScalarField, m: &MultiplierSymbol) -> ScalarField {
    let table = SymbolTable::build(field.grid(), m);
    field.to_spectrum().apply_unchecked(&table).to_field()
}

/// `Λ^s f`.
pub fn lambda_pow(field: &ScalarField, s: f64) -> ScalarField {
    apply_builtin(field, &MultiplierSymbol::lambda_pow(s))
}

/// `(log(I − Δ))^γ f` for `γ ≥ 0`.
pub fn log_laplacian_pow(field: &ScalarField, gamma: f64) -> Result<ScalarField> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "log exponent must be finite and >= 0, got {gamma}"
        )));
    }
    Ok(apply_builtin(field, &MultiplierSymbol::log_laplacian_pow(gamma)))
}

/// Riesz transform `R = Λ⁻¹∂₁`.
pub fn riesz_x1(field: &ScalarField) -> ScalarField {
    apply_builtin(field, &MultiplierSymbol::riesz_x1())
}

/// `Δ⁻¹ f`, dropping the mean of `f`.
pub fn inv_laplacian(field: &ScalarField) -> ScalarField {
    warn_if_not_mean_zero(field, "inv_laplacian");
    apply_builtin(field, &MultiplierSymbol::inv_laplacian())
}

/// `∇⊥ψ = (−∂₂ψ, ∂₁ψ)`.
pub fn perp_gradient(psi: &ScalarField) -> VectorField {
    let hat = psi.to_spectrum();
    VectorField {
        x: hat.d2().scaled(-1.0).to_field(),
        y: hat.d1().to_field(),
    }
}

/// `∇f = (∂₁f, ∂₂f)`.
pub fn gradient(f: &ScalarField) -> VectorField {
    let hat = f.to_spectrum();
    VectorField {
        x: hat.d1().to_field(),
        y: hat.d2().to_field(),
    }
}

pub fn dx1(f: &ScalarField) -> ScalarField {
    f.to_spectrum().d1().to_field()
}

pub fn dx2(f: &ScalarField) -> ScalarField {
    f.to_spectrum().d2().to_field()
}

/// Velocity `u = ∇⊥Δ⁻¹Λ^σ(log(I − Δ))^γ ω`.
pub fn velocity_from_vorticity(omega: &ScalarField, sigma: f64, gamma: f64) -> Result<VectorField> {
    let op = VelocityOperator::new(omega.grid(), sigma, gamma)?;
    warn_if_not_mean_zero(omega, "velocity_from_vorticity");
    Ok(op.apply(&omega.to_spectrum()))
}

/// Quasi-velocity `v = ∇⊥Δ⁻¹ω`.
pub fn quasi_velocity(omega: &ScalarField) -> VectorField {
    warn_if_not_mean_zero(omega, "quasi_velocity");
    VelocityOperator::new(omega.grid(), 0.0, 0.0)
        .expect("zero exponents are valid")
        .apply(&omega.to_spectrum())
}

pub fn dealias(coeffs: &Spectrum) -> Spectrum {
    coeffs.dealiased()
}

/// Pseudo-spectral product `f g`, optionally 2/3-truncated.
pub fn product(f: &ScalarField, g: &ScalarField, dealias: bool) -> Result<ScalarField> {
    let prod = f.mul(g)?;
    if !dealias {
        return Ok(prod);
    }
    Ok(prod.to_spectrum().dealiased().to_field())
}

/// Transport term `u·∇f` with the 2/3-rule applied to the product.
pub fn advect(u: &VectorField, f: &ScalarField) -> Result<ScalarField> {
    advect_with(u, f, true)
}

pub fn advect_with(u: &VectorField, f: &ScalarField, dealias: bool) -> Result<ScalarField> {
    check_same_grid(u.grid(), f.grid())?;
    Ok(advect_spectrum(u, &f.to_spectrum(), dealias).to_field())
}

/// `u·∇f` with `f` given spectrally; returns the (optionally truncated) spectrum.
pub(crate) fn advect_spectrum(u: &VectorField, f_hat: &Spectrum, dealias: bool) -> Spectrum {
    let fx = f_hat.d1().to_field();
    let fy = f_hat.d2().to_field();
    let values: Vec<f64> = u
        .x
        .values()
        .iter()
        .zip(u.y.values())
        .zip(fx.values().iter().zip(fy.values()))
        .map(|((a, b), (c, d))| a * c + b * d)
        .collect();
    let prod = ScalarField::new(u.grid(), values).expect("shared grid");
    let mut hat = prod.to_spectrum();
    if dealias {
        hat.dealias_in_place();
    }
    hat
}

/// Precomputed symbols of `ω ↦ u = ∇⊥Δ⁻¹P(Λ)ω` with `P(r) = r^σ (ln(1+r²))^γ`.
#[derive(Clone, Debug)]
pub struct VelocityOperator {
    sigma: f64,
    gamma: f64,
    ux: SymbolTable,
    uy: SymbolTable,
}

impl VelocityOperator {
    pub fn new(grid: &Grid, sigma: f64, gamma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma must be finite and >= 0, got {sigma}"
            )));
        }
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )));
        }
        // û = (i k₂, −i k₁) P(|k|)/|k|² ω̂
        let stream = move |k1: f64, k2: f64| -> f64 {
            let r2 = k1 * k1 + k2 * k2;
            if r2 == 0.0 {
                return 0.0;
            }
            let r = r2.sqrt();
            let p = if sigma == 0.0 { 1.0 } else { r.powf(sigma) } * log_symbol(r, gamma);
            p / r2
        };
        let ux = SymbolTable::from_fn(grid, |k1, k2| Complex64::new(0.0, k2 * stream(k1, k2)));
        let uy = SymbolTable::from_fn(grid, |k1, k2| Complex64::new(0.0, -k1 * stream(k1, k2)));
        Ok(VelocityOperator {
            sigma,
            gamma,
            ux,
            uy,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn apply(&self, omega_hat: &Spectrum) -> VectorField {
        VectorField {
            x: omega_hat.apply_unchecked(&self.ux).to_field(),
            y: omega_hat.apply_unchecked(&self.uy).to_field(),
        }
    }
}

fn warn_if_not_mean_zero(field: &ScalarField, op: &str) {
    let mean = field.mean();
    let norm = l2_norm(field);
    if mean.abs() > 1e-10 * norm.max(f64::MIN_POSITIVE) && mean != 0.0 {
        log::warn!("{op}: input mean {mean:.3e} is dropped (L2 norm {norm:.3e})");
    }
}
