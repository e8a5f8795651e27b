//! Second-order exponential time differencing (ETD-RK2).
//!
//! With the diagonal linear part `L(k) = −ν|k|^α` (vorticity) or `−κ|k|^β`
//! (temperature) and the explicit part `N`, one step of size `h` is
//!
//! ```text
//! a      = e^{hL} x + h φ₁(hL) N(x)
//! x_next = a + h φ₂(hL) (N(a) − N(x))
//! ```
//!
//! with `φ₁(z) = (e^z − 1)/z` and `φ₂(z) = (e^z − 1 − z)/z²`.

use super::params::{NumericsParams, SystemParams};
use super::state::State;
use crate::error::{Error, Result};
use crate::spectral::{advect_spectrum, Grid, ScalarField, Spectrum, VelocityOperator};

pub(crate) fn phi1(z: f64) -> f64 {
    if z.abs() < 1e-5 {
        1.0 + z / 2.0 + z * z / 6.0
    } else {
        z.exp_m1() / z
    }
}

pub(crate) fn phi2(z: f64) -> f64 {
    if z.abs() < 1e-3 {
        0.5 + z / 6.0 + z * z / 24.0 + z * z * z / 120.0
    } else {
        (z.exp_m1() - z) / (z * z)
    }
}

#[derive(Clone, Debug)]
struct Propagator {
    decay: Vec<f64>,
    h_phi1: Vec<f64>,
    h_phi2: Vec<f64>,
}

impl Propagator {
    fn new(rates: &[f64], h: f64) -> Self {
        let mut decay = Vec::with_capacity(rates.len());
        let mut h_phi1 = Vec::with_capacity(rates.len());
        let mut h_phi2 = Vec::with_capacity(rates.len());
        for &r in rates {
            let z = -r * h;
            decay.push(z.exp());
            h_phi1.push(h * phi1(z));
            h_phi2.push(h * phi2(z));
        }
        Propagator {
            decay,
            h_phi1,
            h_phi2,
        }
    }

    fn predict(&self, x: &Spectrum, n: &Spectrum) -> Spectrum {
        let mut out = x.clone();
        for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
            *c = *c * self.decay[i] + n.coeffs()[i] * self.h_phi1[i];
        }
        out
    }

    fn correct(&self, a: &Spectrum, n_a: &Spectrum, n_x: &Spectrum) -> Spectrum {
        let mut out = a.clone();
        for (i, c) in out.coeffs_mut().iter_mut().enumerate() {
            *c += (n_a.coeffs()[i] - n_x.coeffs()[i]) * self.h_phi2[i];
        }
        out
    }
}

/// Reusable integrator for one grid and parameter set.
#[derive(Clone, Debug)]
pub struct Integrator {
    grid: Grid,
    params: SystemParams,
    dealias: bool,
    velocity: VelocityOperator,
    omega_rates: Vec<f64>,
    theta_rates: Vec<f64>,
    cached: Option<(f64, Propagator, Propagator)>,
}

impl Integrator {
    pub fn new(grid: &Grid, params: SystemParams, dealias: bool) -> Result<Self> {
        params.validate()?;
        let velocity = VelocityOperator::new(grid, params.sigma, params.gamma)?;
        let rates = |coef: f64, order: f64| -> Vec<f64> {
            let n = grid.n();
            let mut out = Vec::with_capacity(grid.len());
            for j2 in 0..n {
                let k2 = grid.wavenumber(j2) as f64;
                for j1 in 0..n {
                    let k1 = grid.wavenumber(j1) as f64;
                    let r = k1.hypot(k2);
                    out.push(if r == 0.0 { 0.0 } else { coef * r.powf(order) });
                }
            }
            out
        };
        Ok(Integrator {
            grid: grid.clone(),
            params,
            dealias,
            velocity,
            omega_rates: rates(params.nu, params.alpha),
            theta_rates: rates(params.kappa, params.beta),
            cached: None,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn velocity_operator(&self) -> &VelocityOperator {
        &self.velocity
    }

    /// Explicit tendencies `(−u·∇ω + ∂₁θ, −u·∇θ)` in spectral space.
    pub(crate) fn nonlinear(&self, omega: &Spectrum, theta: &Spectrum) -> (Spectrum, Spectrum) {
        let u = self.velocity.apply(omega);
        let adv_w = advect_spectrum(&u, omega, self.dealias);
        let adv_t = advect_spectrum(&u, theta, self.dealias);
        let n_w = theta.d1().sub(&adv_w).expect("shared grid");
        let n_t = adv_t.scaled(-1.0);
        (n_w, n_t)
    }

    pub fn nonlinear_fields(&self, state: &State) -> Result<(ScalarField, ScalarField)> {
        let (a, b) = self.nonlinear(&state.omega.to_spectrum(), &state.theta.to_spectrum());
        let (a, b) = (a.to_field(), b.to_field());
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite("nonlinear tendency".into()));
        }
        Ok((a, b))
    }

    /// Advective time-step bound for `state`.
    pub fn cfl_dt(&self, state: &State, numerics: &NumericsParams) -> f64 {
        let u = self.velocity.apply(&state.omega.to_spectrum());
        advective_dt(u.max_magnitude(), self.grid.n(), numerics)
    }

    /// One ETD-RK2 step of size `dt`.
    pub fn step(&mut self, state: &State, dt: f64) -> Result<State> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        if self.cached.as_ref().map(|c| c.0) != Some(dt) {
            self.cached = Some((
                dt,
                Propagator::new(&self.omega_rates, dt),
                Propagator::new(&self.theta_rates, dt),
            ));
        }
        let (_, prop_w, prop_t) = self.cached.as_ref().expect("just filled");

        let w = state.omega.to_spectrum();
        let th = state.theta.to_spectrum();
        let (n_w, n_t) = self.nonlinear(&w, &th);
        let a_w = prop_w.predict(&w, &n_w);
        let a_t = prop_t.predict(&th, &n_t);
        let (na_w, na_t) = self.nonlinear(&a_w, &a_t);
        let w_next = prop_w.correct(&a_w, &na_w, &n_w).to_field();
        let t_next = prop_t.correct(&a_t, &na_t, &n_t).to_field();
        if !w_next.is_finite() || !t_next.is_finite() {
            return Err(Error::NonFinite(format!("step at t={}", state.t)));
        }
        Ok(State {
            t: state.t + dt,
            omega: w_next,
            theta: t_next,
        })
    }
}

pub(crate) fn advective_dt(max_speed: f64, n: usize, numerics: &NumericsParams) -> f64 {
    let h = 2.0 * std::f64::consts::PI / n as f64;
    numerics
        .dt_max
        .min(numerics.cfl_factor * h / (max_speed + 1e-12))
}

/// Explicit tendencies of `state` with dealiased products.
pub fn rhs_nonlinear(state: &State, params: &SystemParams) -> Result<(ScalarField, ScalarField)> {
    Integrator::new(state.grid(), *params, true)?.nonlinear_fields(state)
}

/// `min(dt_max, cfl_factor · (2π/n) / (max|u| + 1e−12))`.
pub fn cfl_dt(state: &State, params: &SystemParams, numerics: &NumericsParams) -> Result<f64> {
    let op = VelocityOperator::new(state.grid(), params.sigma, params.gamma)?;
    let u = op.apply(&state.omega.to_spectrum());
    Ok(advective_dt(u.max_magnitude(), state.grid().n(), numerics))
}

/// One ETD-RK2 step; `dt` must respect the advective bound of `state`.
pub fn step(state: &State, params: &SystemParams, numerics: &NumericsParams, dt: f64) -> Result<State> {
    let mut integ = Integrator::new(state.grid(), *params, numerics.dealias)?;
    let limit = integ.cfl_dt(state, numerics);
    if dt > limit * (1.0 + 1e-12) {
        return Err(Error::CflViolation { dt, limit });
    }
    integ.step(state, dt)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_functions_are_continuous_across_branches() {
        for z in [-1e-5_f64, -1e-3, -2e-3, -0.5, -10.0] {
            let d = 1e-9 * z.abs().max(1e-6);
            assert!((phi1(z) - phi1(z + d)).abs() < 1e-8);
            assert!((phi2(z) - phi2(z + d)).abs() < 1e-8);
        }
        assert_eq!(phi1(0.0), 1.0);
        assert_eq!(phi2(0.0), 0.5);
        let z: f64 = -0.7;
        assert!((phi1(z) - (z.exp() - 1.0) / z).abs() < 1e-15);
        assert!((phi2(z) - (z.exp() - 1.0 - z) / (z * z)).abs() < 1e-14);
    }

    #[test]
    fn cfl_formula() {
        let num = NumericsParams {
            n: 64,
            dt_max: 1.0,
            cfl_factor: 0.4,
            t_end: 1.0,
            dealias: true,
        };
        let dt = advective_dt(1.0, 64, &num);
        assert!((dt - 0.4 * 2.0 * std::f64::consts::PI / 64.0).abs() < 1e-12);
        assert!((advective_dt(1.0, 128, &num) - dt / 2.0).abs() < 1e-12);
        assert_eq!(advective_dt(0.0, 64, &NumericsParams { dt_max: 0.01, ..num }), 0.01);
    }
}
