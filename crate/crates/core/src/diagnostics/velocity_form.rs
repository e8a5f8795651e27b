//! Consistency of the vorticity form with the modified momentum equation
//! `∂t v + u·∇v − Σⱼ uⱼ∇vⱼ + νΛ^α v = −∇p + θe₂`, `v = ∇⊥Δ⁻¹ω`.

use crate::dynamics::{State, SystemParams};
use crate::error::Result;
use crate::spectral::{
    advect_spectrum, l2_norm, lp_norm_vector, MultiplierSymbol, ScalarField, Spectrum,
    SymbolTable, VectorField, VelocityOperator,
};

/// Output of [`velocity_formulation_residual`].
#[derive(Clone, Debug)]
pub struct VelocityResidual {
    /// `∂t v` from the vorticity equation minus `∂t v` from the momentum form,
    /// mean removed.
    pub field: VectorField,
    pub norm: f64,
    /// L² norm of `u^⊥(∇^⊥·v) − (u·∇v − Σⱼ uⱼ∇vⱼ)`.
    pub identity_norm: f64,
}

fn truncate(f: ScalarField, dealias: bool) -> Spectrum {
    let mut hat = f.to_spectrum();
    if dealias {
        hat.dealias_in_place();
    }
    hat
}

fn drop_mean(mut hat: Spectrum) -> Spectrum {
    hat.coeffs_mut()[0] = 0.0.into();
    hat
}

/// Evaluates `∂t v` both ways for `state` with products 2/3-truncated.
pub fn velocity_formulation_residual(state: &State, params: &SystemParams) -> Result<VelocityResidual> {
    velocity_formulation_residual_with(state, params, true)
}

pub fn velocity_formulation_residual_with(
    state: &State,
    params: &SystemParams,
    dealias: bool,
) -> Result<VelocityResidual> {
    params.validate()?;
    let grid = state.grid();
    let w = state.omega.to_spectrum();
    let th = state.theta.to_spectrum();
    let u = VelocityOperator::new(grid, params.sigma, params.gamma)?.apply(&w);
    let quasi = VelocityOperator::new(grid, 0.0, 0.0)?;
    let diss = SymbolTable::build(grid, &MultiplierSymbol::lambda_pow(params.alpha));
    let inv_lap = SymbolTable::build(grid, &MultiplierSymbol::inv_laplacian());

    // (a) ∂t v = ∇⊥Δ⁻¹(∂₁θ − u·∇ω − νΛ^α ω)
    let adv_w = advect_spectrum(&u, &w, dealias);
    let dw = th
        .d1()
        .sub(&adv_w)?
        .sub(&w.apply_unchecked(&diss).scaled(params.nu))?;
    let route_a = quasi.apply(&dw);

    // (b) ∂t v = −(u·∇v − Σⱼ uⱼ∇vⱼ) − νΛ^α v − ∇p + θe₂
    let v = quasi.apply(&w);
    let vx = v.x.to_spectrum();
    let vy = v.y.to_spectrum();
    let (v1x, v1y) = (vx.d1().to_field(), vx.d2().to_field());
    let (v2x, v2y) = (vy.d1().to_field(), vy.d2().to_field());
    let pointwise = |f: &dyn Fn(usize) -> f64| -> ScalarField {
        ScalarField::new(grid, (0..grid.len()).map(f).collect()).expect("shape")
    };
    let (ux, uy) = (u.x.values(), u.y.values());
    // u·∇v₁ − (u₁∂₁v₁ + u₂∂₁v₂) and u·∇v₂ − (u₁∂₂v₁ + u₂∂₂v₂)
    let nl1 = pointwise(&|i| {
        ux[i] * v1x.values()[i] + uy[i] * v1y.values()[i]
            - (ux[i] * v1x.values()[i] + uy[i] * v2x.values()[i])
    });
    let nl2 = pointwise(&|i| {
        ux[i] * v2x.values()[i] + uy[i] * v2y.values()[i]
            - (ux[i] * v1y.values()[i] + uy[i] * v2y.values()[i])
    });
    // u^⊥ ω with u^⊥ = (−u₂, u₁)
    let om = state.omega.values();
    let perp1 = pointwise(&|i| -uy[i] * om[i]);
    let perp2 = pointwise(&|i| ux[i] * om[i]);
    let identity = VectorField::new(nl1.sub(&perp1)?, nl2.sub(&perp2)?)?;
    let identity_norm = lp_norm_vector(&identity, 2.0);

    let nl1 = truncate(nl1, dealias);
    let nl2 = truncate(nl2, dealias);
    // p = −Δ⁻¹(∇·(u^⊥ω) − ∂₂θ)
    let perp1 = truncate(perp1, dealias);
    let perp2 = truncate(perp2, dealias);
    let div = perp1.d1().add(&perp2.d2())?;
    let p = div.sub(&th.d2())?.apply_unchecked(&inv_lap).scaled(-1.0);
    let b1 = nl1
        .scaled(-1.0)
        .sub(&vx.apply_unchecked(&diss).scaled(params.nu))?
        .sub(&p.d1())?;
    let b2 = nl2
        .scaled(-1.0)
        .sub(&vy.apply_unchecked(&diss).scaled(params.nu))?
        .sub(&p.d2())?
        .add(&th)?;

    let r1 = drop_mean(route_a.x.to_spectrum().sub(&b1)?).to_field();
    let r2 = drop_mean(route_a.y.to_spectrum().sub(&b2)?).to_field();
    let norm = l2_norm(&r1).hypot(l2_norm(&r2));
    Ok(VelocityResidual {
        field: VectorField::new(r1, r2)?,
        norm,
        identity_norm,
    })
}
