use crate::error::{Error, Result};

/// Coefficients of the evolved system
/// `∂t ω + u·∇ω + ν Λ^α ω = ∂₁θ`, `∂t θ + u·∇θ + κ Λ^β θ = 0`,
/// `Δψ = Λ^σ (log(I − Δ))^γ ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub nu: f64,
    pub alpha: f64,
    pub kappa: f64,
    pub beta: f64,
    pub sigma: f64,
    pub gamma: f64,
}

impl SystemParams {
    /// Critical dissipation `ν = 1, α = 1`, no thermal diffusion.
    pub fn gbou(sigma: f64, gamma: f64) -> Self {
        SystemParams {
            nu: 1.0,
            alpha: 1.0,
            kappa: 0.0,
            beta: 1.0,
            sigma,
            gamma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = |name: &str, v: f64| {
            if v >= 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be finite and >= 0, got {v}")))
            }
        };
        let order = |name: &str, v: f64| {
            if v > 0.0 && v <= 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must lie in (0, 1], got {v}")))
            }
        };
        nonneg("nu", self.nu)?;
        nonneg("kappa", self.kappa)?;
        nonneg("sigma", self.sigma)?;
        nonneg("gamma", self.gamma)?;
        order("alpha", self.alpha)?;
        order("beta", self.beta)
    }
}

impl Default for SystemParams {
    fn default() -> Self {
        SystemParams::gbou(0.0, 0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericsParams {
    pub n: usize,
    pub dt_max: f64,
    pub cfl_factor: f64,
    pub t_end: f64,
    pub dealias: bool,
}

impl NumericsParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("dt_max", self.dt_max),
            ("cfl_factor", self.cfl_factor),
            ("t_end", self.t_end),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

impl Default for NumericsParams {
    fn default() -> Self {
        NumericsParams {
            n: 128,
            dt_max: 0.01,
            cfl_factor: 0.4,
            t_end: 1.0,
            dealias: true,
        }
    }
}
