//! Time integration of the vorticity–temperature system.

mod integrator;
mod params;
mod presets;
mod runner;
mod state;

pub use integrator::{cfl_dt, rhs_nonlinear, step, Integrator};
pub use params::{NumericsParams, SystemParams};
pub use presets::{periodic_bump, InitialCondition};
pub use runner::*;
pub use state::State;
