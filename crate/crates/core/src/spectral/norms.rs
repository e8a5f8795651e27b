//! Lebesgue norms by rectangle-rule quadrature on the torus.

use super::field::{ScalarField, VectorField};

/// `‖f‖_{L^p}` over `[0, 2π)²`; `p = ∞` is the grid maximum of `|f|`.
pub fn lp_norm(field: &ScalarField, p: f64) -> f64 {
    lp_of_values(field.values(), p, field.grid().cell_area())
}

pub fn l2_norm(field: &ScalarField) -> f64 {
    lp_norm(field, 2.0)
}

/// Norm of the pointwise Euclidean magnitude.
pub fn lp_norm_vector(field: &VectorField, p: f64) -> f64 {
    if p == 2.0 {
        let s: f64 = field
            .x
            .values()
            .iter()
            .zip(field.y.values())
            .map(|(a, b)| a * a + b * b)
            .sum();
        return (s * field.grid().cell_area()).sqrt();
    }
    lp_norm(&field.magnitude(), p)
}

pub(crate) fn lp_of_values(values: &[f64], p: f64, weight: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    }
    if p == 2.0 {
        let s: f64 = values.iter().map(|v| v * v).sum();
        return (s * weight).sqrt();
    }
    if p == 1.0 {
        return values.iter().map(|v| v.abs()).sum::<f64>() * weight;
    }
    // scale by the max to keep large p from overflowing
    let m = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m == 0.0 {
        return 0.0;
    }
    let s: f64 = values.iter().map(|v| (v.abs() / m).powf(p)).sum();
    m * (s * weight).powf(1.0 / p)
}
