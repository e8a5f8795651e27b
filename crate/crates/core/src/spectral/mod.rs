//! Grid, transforms and Fourier-multiplier operators on the periodic square.

mod field;
mod grid;
pub mod norms;
pub mod ops;
mod symbol;

pub use field::{ScalarField, Spectrum, VectorField};
pub use grid::{make_grid, Grid};
pub use norms::{l2_norm, lp_norm, lp_norm_vector};
pub use ops::{
    advect, advect_with, apply_multiplier, dealias, dx1, dx2, gradient, inv_laplacian,
    inverse_transform, lambda_pow, log_laplacian_pow, perp_gradient, product, quasi_velocity,
    riesz_x1, transform, velocity_from_vorticity, VelocityOperator,
};
pub use symbol::{MultiplierSymbol, SymbolTable};

pub(crate) use field::check_same_grid;
pub(crate) use ops::advect_spectrum;
