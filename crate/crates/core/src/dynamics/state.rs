use crate::error::{Error, Result};
use crate::spectral::{check_same_grid, l2_norm, Grid, ScalarField};

/// Vorticity and temperature at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub t: f64,
    pub omega: ScalarField,
    pub theta: ScalarField,
}

impl State {
    pub fn new(t: f64, omega: ScalarField, theta: ScalarField) -> Result<Self> {
        check_same_grid(omega.grid(), theta.grid())?;
        Ok(State { t, omega, theta })
    }

    pub fn zero(grid: &Grid) -> Self {
        State {
            t: 0.0,
            omega: ScalarField::zeros(grid),
            theta: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.omega.grid()
    }

    /// Finite fields and mean-zero vorticity (relative to its L² norm).
    pub fn validate(&self) -> Result<()> {
        if !self.omega.is_finite() || !self.theta.is_finite() || !self.t.is_finite() {
            return Err(Error::NonFinite("state".into()));
        }
        let mean = self.omega.mean();
        let scale = l2_norm(&self.omega).max(1.0);
        if mean.abs() > 1e-10 * scale {
            return Err(Error::InvalidParameter(format!(
                "vorticity must be mean-zero, mean is {mean:.3e}"
            )));
        }
        Ok(())
    }

    /// Average of two states (used for midpoint diagnostics).
    pub fn midpoint(&self, other: &State) -> Result<State> {
        Ok(State {
            t: 0.5 * (self.t + other.t),
            omega: self.omega.zip_with(&other.omega, |a, b| 0.5 * (a + b))?,
            theta: self.theta.zip_with(&other.theta, |a, b| 0.5 * (a + b))?,
        })
    }

    pub(crate) fn dealiased(&self) -> State {
        State {
            t: self.t,
            omega: self.omega.to_spectrum().dealiased().to_field(),
            theta: self.theta.to_spectrum().dealiased().to_field(),
        }
    }
}
