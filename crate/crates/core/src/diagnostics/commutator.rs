//! The combined quantity `G = ω − Rθ`, the commutators it generates and
//! its energy balance.

use crate::dynamics::{State, SystemParams};
use crate::error::{Error, Result};
use crate::spectral::{
    advect_spectrum, check_same_grid, MultiplierSymbol, ScalarField, Spectrum, SymbolTable,
    VectorField, VelocityOperator,
};

fn riesz_table(f: &Spectrum) -> SymbolTable {
    SymbolTable::build(f.grid(), &MultiplierSymbol::riesz_x1())
}

/// `Ĝ = ω̂ − (ik₁/|k|) θ̂`.
pub fn g_spectrum(omega: &Spectrum, theta: &Spectrum) -> Result<Spectrum> {
    check_same_grid(omega.grid(), theta.grid())?;
    omega.sub(&theta.apply_unchecked(&riesz_table(theta)))
}

/// `G = ω − Rθ`.
pub fn g_field(omega: &ScalarField, theta: &ScalarField) -> Result<ScalarField> {
    Ok(g_spectrum(&omega.to_spectrum(), &theta.to_spectrum())?.to_field())
}

fn warn_if_compressible(u: &VectorField) {
    let div = u.divergence().max_abs();
    let scale = u.max_magnitude();
    if div > 1e-10 * scale.max(1.0) {
        log::warn!("velocity is not divergence-free (max |div u| = {div:.3e})");
    }
}

pub(crate) fn commutator_spectrum(u: &VectorField, theta: &Spectrum) -> Spectrum {
    let r = riesz_table(theta);
    let r_adv = advect_spectrum(u, theta, true).apply_unchecked(&r);
    let adv_r = advect_spectrum(u, &theta.apply_unchecked(&r), true);
    r_adv.sub(&adv_r).expect("shared grid")
}

/// `[R, u·∇]θ = R(u·∇θ) − u·∇(Rθ)`, products 2/3-truncated.
pub fn commutator_r_u_grad(u: &VectorField, theta: &ScalarField) -> Result<ScalarField> {
    check_same_grid(u.grid(), theta.grid())?;
    warn_if_compressible(u);
    Ok(commutator_spectrum(u, &theta.to_spectrum()).to_field())
}

/// `[R, u]θ = R(uθ) − u Rθ`, componentwise, products 2/3-truncated.
pub fn commutator_r_u(u: &VectorField, theta: &ScalarField) -> Result<VectorField> {
    check_same_grid(u.grid(), theta.grid())?;
    let hat = theta.to_spectrum();
    let table = riesz_table(&hat);
    let r_theta = hat.apply_unchecked(&table).to_field();
    let comp = |ui: &ScalarField| -> Result<ScalarField> {
        let a = ui.mul(theta)?.to_spectrum().dealiased().apply_unchecked(&table);
        let b = ui.mul(&r_theta)?.to_spectrum().dealiased();
        Ok(a.sub(&b)?.to_field())
    };
    VectorField::new(comp(&u.x)?, comp(&u.y)?)
}

/// Terms of `d/dt ½‖G‖² + ν‖Λ^{α/2}G‖² = ⟨G, [R,u·∇]θ⟩ + ⟨G, F⟩` with
/// `F = ∂₁θ − νΛ^αRθ + κΛ^βRθ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GBalance {
    /// `(½‖G_{k+1}‖² − ½‖G_k‖²)/dt`.
    pub rate: f64,
    pub dissipation: f64,
    pub commutator: f64,
    pub forcing: f64,
    pub residual: f64,
}

/// `4π² Σ w(k) a(k) conj b(k)`, real part; equals the quadrature inner product
/// for `w ≡ 1`.
fn weighted_inner(a: &Spectrum, b: &Spectrum, w: impl Fn(f64) -> f64) -> f64 {
    let area = a.grid().period().powi(2);
    let mut acc = 0.0;
    for (i, k1, k2) in a.modes() {
        let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
        acc += w(r) * (a.coeffs()[i] * b.coeffs()[i].conj()).re;
    }
    area * acc
}

fn pow_or_zero(r: f64, s: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        r.powf(s)
    }
}

/// All terms of the `G` energy balance between two consecutive states,
/// evaluated at their average.
pub fn g_energy_terms(before: &State, after: &State, params: &SystemParams) -> Result<GBalance> {
    check_same_grid(before.grid(), after.grid())?;
    let dt = after.t - before.t;
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "states must be ordered in time (dt = {dt})"
        )));
    }
    let g0 = g_spectrum(&before.omega.to_spectrum(), &before.theta.to_spectrum())?;
    let g1 = g_spectrum(&after.omega.to_spectrum(), &after.theta.to_spectrum())?;
    let e0 = 0.5 * weighted_inner(&g0, &g0, |_| 1.0);
    let e1 = 0.5 * weighted_inner(&g1, &g1, |_| 1.0);
    let rate = (e1 - e0) / dt;

    let mid = before.midpoint(after)?;
    let w = mid.omega.to_spectrum();
    let th = mid.theta.to_spectrum();
    let g = g_spectrum(&w, &th)?;
    let dissipation = params.nu * weighted_inner(&g, &g, |r| pow_or_zero(r, params.alpha));

    let u = VelocityOperator::new(mid.grid(), params.sigma, params.gamma)?.apply(&w);
    let c = commutator_spectrum(&u, &th);
    let commutator = weighted_inner(&g, &c, |_| 1.0);

    let r_th = th.apply_unchecked(&riesz_table(&th));
    let forcing = weighted_inner(&g, &th.d1(), |_| 1.0)
        - params.nu * weighted_inner(&g, &r_th, |r| pow_or_zero(r, params.alpha))
        + params.kappa * weighted_inner(&g, &r_th, |r| pow_or_zero(r, params.beta));

    let residual = (rate + dissipation - commutator - forcing).abs();
    Ok(GBalance {
        rate,
        dissipation,
        commutator,
        forcing,
        residual,
    })
}

/// Residual of the `G` energy balance between two consecutive states.
pub fn g_energy_balance(before: &State, after: &State, params: &SystemParams) -> Result<f64> {
    Ok(g_energy_terms(before, after, params)?.residual)
}
