//! Derived quantities: `G = ω − Rθ`, commutators, balance residuals, norm
//! monitors and the twin-run distance.

mod commutator;
mod estimates;
mod monitor;
mod uniqueness;
mod velocity_form;

pub use commutator::{
    commutator_r_u, commutator_r_u_grad, g_energy_balance, g_energy_terms, g_field, g_spectrum,
    GBalance,
};
pub use estimates::{commutator_estimate_ratio, default_p3, log_commutator_norm, LogCommutator};
pub use monitor::{
    monitor_row, snapshot_row, tail_mass, MonitorAccumulator, NormRow, NormSeries,
    BoundWindows, NORM_COLUMNS,
};
pub use uniqueness::{uniqueness_functional, TwinDivergence, TwinRow, TWIN_COLUMNS};
pub use velocity_form::{
    velocity_formulation_residual, velocity_formulation_residual_with, VelocityResidual,
};
