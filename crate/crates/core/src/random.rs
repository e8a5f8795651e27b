//! Seeded, grid-independent random fields.
//!
//! The generator is SplitMix64. A uniform `f64` in `[0, 1)` is
//! `(next_u64() >> 11) · 2⁻⁵³`. A band-limited field draws, for every mode
//! of the upper half-plane with `1 ≤ |k| ≤ k_max` (ordered by `k₂` ascending,
//! then `k₁` ascending, `k₂ = 0` only for `k₁ > 0`), one phase `φ = 2π·u`,
//! and sets `f̂(k) = ½ |k|^{−slope} e^{iφ}`, `f̂(−k) = conj f̂(k)`. The result is
//! rescaled to the requested root-mean-square value.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::spectral::{Grid, ScalarField, Spectrum};

/// Thin wrapper fixing the `f64` conversion of SplitMix64.
#[derive(Clone, Debug)]
pub struct FieldRng {
    inner: SplitMix64,
}

impl FieldRng {
    pub fn new(seed: u64) -> Self {
        FieldRng {
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Shape of a seeded band-limited field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BandLimited {
    pub k_max: u32,
    pub slope: f64,
    pub rms: f64,
}

/// Upper half-plane modes with `1 ≤ |k| ≤ k_max`, in generation order.
fn half_plane_modes(k_max: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=k_max).flat_map(move |k2| {
        (-k_max..=k_max).filter_map(move |k1| {
            let r2 = k1 * k1 + k2 * k2;
            let upper = k2 > 0 || k1 > 0;
            (upper && r2 >= 1 && r2 <= k_max * k_max).then_some((k1, k2))
        })
    })
}

/// Draws a mean-zero band-limited field from `rng`.
pub fn band_limited_field(grid: &Grid, spec: BandLimited, rng: &mut FieldRng) -> Result<ScalarField> {
    let k_max = spec.k_max as i64;
    if k_max < 1 || k_max >= grid.nyquist() {
        return Err(Error::InvalidParameter(format!(
            "k_max {} must lie in 1..{} for n={}",
            spec.k_max,
            grid.nyquist(),
            grid.n()
        )));
    }
    let mut hat = Spectrum::zeros(grid);
    let mut power = 0.0;
    for (k1, k2) in half_plane_modes(k_max) {
        let phase = 2.0 * PI * rng.uniform();
        let amp = 0.5 * ((k1 * k1 + k2 * k2) as f64).sqrt().powf(-spec.slope);
        let c = Complex64::from_polar(amp, phase);
        hat.set(k1, k2, c)?;
        hat.set(-k1, -k2, c.conj())?;
        power += 2.0 * amp * amp;
    }
    let scale = if power > 0.0 { spec.rms / power.sqrt() } else { 0.0 };
    Ok(hat.scaled(scale).to_field())
}

/// Band-limited field supported on modes with `lo ≤ |k| ≤ hi` and
/// `max(|k₁|, |k₂|) ≤ box_max`, unit coefficients with random phases.
pub fn annulus_field(
    grid: &Grid,
    lo: f64,
    hi: f64,
    box_max: i64,
    rng: &mut FieldRng,
) -> Result<ScalarField> {
    if box_max >= grid.nyquist() {
        return Err(Error::InvalidParameter(format!(
            "box_max {box_max} not below the Nyquist wavenumber of n={}",
            grid.n()
        )));
    }
    let mut hat = Spectrum::zeros(grid);
    for (k1, k2) in half_plane_modes(box_max * 2) {
        if k1.abs() > box_max || k2.abs() > box_max {
            continue;
        }
        let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
        if r < lo || r > hi {
            continue;
        }
        let c = Complex64::from_polar(0.5, 2.0 * PI * rng.uniform());
        hat.set(k1, k2, c)?;
        hat.set(-k1, -k2, c.conj())?;
    }
    Ok(hat.to_field())
}
