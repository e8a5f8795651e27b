use num_complex::Complex64;

use super::grid::Grid;
use super::symbol::SymbolTable;
use crate::error::{Error, Result};

/// Real samples on the grid, row-major: `values[i2 * n + i1] = f(x₁ᵢ₁, x₂ᵢ₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        Ok(ScalarField {
            grid: grid.clone(),
            values,
        })
    }

    pub fn zeros(grid: &Grid) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
        }
    }

    pub fn constant(grid: &Grid, c: f64) -> Self {
        ScalarField {
            grid: grid.clone(),
            values: vec![c; grid.len()],
        }
    }

    /// Samples `f(x₁, x₂)` at every node.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> f64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(grid.len());
        for i2 in 0..n {
            let x2 = grid.coord(i2);
            for i1 in 0..n {
                values.push(f(grid.coord(i1), x2));
            }
        }
        ScalarField {
            grid: grid.clone(),
            values,
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i1: usize, i2: usize) -> f64 {
        self.values[i2 * self.grid.n() + i1]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        ScalarField {
            grid: self.grid.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &ScalarField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_same_grid(&self.grid, &other.grid)?;
        Ok(ScalarField {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &ScalarField) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    /// Grid quadrature of `∫ f g dx` over the torus.
    pub fn inner(&self, other: &ScalarField) -> Result<f64> {
        check_same_grid(&self.grid, &other.grid)?;
        let s: f64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum();
        Ok(s * self.grid.cell_area())
    }

    /// Mean-normalized forward transform.
    pub fn to_spectrum(&self) -> Spectrum {
        let scale = 1.0 / self.grid.len() as f64;
        let mut coeffs: Vec<Complex64> = self
            .values
            .iter()
            .map(|&v| Complex64::new(v * scale, 0.0))
            .collect();
        self.grid.fft2(&mut coeffs, true);
        Spectrum {
            grid: self.grid.clone(),
            coeffs,
        }
    }
}

/// A pair of scalar fields on a shared grid.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub x: ScalarField,
    pub y: ScalarField,
}

impl VectorField {
    pub fn new(x: ScalarField, y: ScalarField) -> Result<Self> {
        check_same_grid(x.grid(), y.grid())?;
        Ok(VectorField { x, y })
    }

    pub fn zeros(grid: &Grid) -> Self {
        VectorField {
            x: ScalarField::zeros(grid),
            y: ScalarField::zeros(grid),
        }
    }

    pub fn grid(&self) -> &Grid {
        self.x.grid()
    }

    /// Pointwise Euclidean magnitude.
    pub fn magnitude(&self) -> ScalarField {
        self.x
            .zip_with(&self.y, |a, b| a.hypot(b))
            .expect("components share a grid")
    }

    pub fn max_magnitude(&self) -> f64 {
        self.x
            .values()
            .iter()
            .zip(self.y.values())
            .fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)))
    }

    pub fn sub(&self, other: &VectorField) -> Result<Self> {
        Ok(VectorField {
            x: self.x.sub(&other.x)?,
            y: self.y.sub(&other.y)?,
        })
    }

    pub fn add(&self, other: &VectorField) -> Result<Self> {
        Ok(VectorField {
            x: self.x.add(&other.x)?,
            y: self.y.add(&other.y)?,
        })
    }

    pub fn scaled(&self, c: f64) -> Self {
        VectorField {
            x: self.x.scaled(c),
            y: self.y.scaled(c),
        }
    }

    /// Spectral divergence `∂₁x + ∂₂y`.
    pub fn divergence(&self) -> ScalarField {
        self.divergence_spectrum().to_field()
    }

    pub fn divergence_spectrum(&self) -> Spectrum {
        let a = self.x.to_spectrum().d1();
        let b = self.y.to_spectrum().d2();
        a.add(&b).expect("components share a grid")
    }

    /// Spectral scalar curl `∂₁y − ∂₂x`.
    pub fn curl(&self) -> ScalarField {
        let a = self.y.to_spectrum().d1();
        let b = self.x.to_spectrum().d2();
        a.sub(&b).expect("components share a grid").to_field()
    }
}

/// Mean-normalized Fourier coefficients, stored in FFT order with the same
/// row-major layout as [`ScalarField`]: `coeffs[j2 * n + j1]` holds the mode
/// `(k₁, k₂) = (wavenumber(j1), wavenumber(j2))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn zeros(grid: &Grid) -> Self {
        Spectrum {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::ShapeMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(Spectrum {
            grid: grid.clone(),
            coeffs,
        })
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient of mode `(k₁, k₂)`; zero when the mode is not representable.
    pub fn get(&self, k1: i64, k2: i64) -> Complex64 {
        match (self.grid.index_of(k1), self.grid.index_of(k2)) {
            (Some(j1), Some(j2)) => self.coeffs[j2 * self.grid.n() + j1],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    pub fn set(&mut self, k1: i64, k2: i64, value: Complex64) -> Result<()> {
        match (self.grid.index_of(k1), self.grid.index_of(k2)) {
            (Some(j1), Some(j2)) => {
                let n = self.grid.n();
                self.coeffs[j2 * n + j1] = value;
                Ok(())
            }
            _ => Err(Error::InvalidParameter(format!(
                "mode ({k1}, {k2}) not representable on n={}",
                self.grid.n()
            ))),
        }
    }

    /// Iterates `(index, k₁, k₂)` over every stored mode.
    pub fn modes(&self) -> impl Iterator<Item = (usize, i64, i64)> + '_ {
        let n = self.grid.n();
        (0..n).flat_map(move |j2| {
            let k2 = self.grid.wavenumber(j2);
            (0..n).map(move |j1| (j2 * n + j1, self.grid.wavenumber(j1), k2))
        })
    }

    /// Inverse transform; the imaginary residue is discarded.
    pub fn to_field(&self) -> ScalarField {
        let mut buf = self.coeffs.clone();
        self.grid.fft2(&mut buf, false);
        ScalarField {
            grid: self.grid.clone(),
            values: buf.into_iter().map(|c| c.re).collect(),
        }
    }

    pub fn apply(&self, table: &SymbolTable) -> Result<Spectrum> {
        check_same_grid(&self.grid, table.grid())?;
        Ok(self.apply_unchecked(table))
    }

    pub(crate) fn apply_unchecked(&self, table: &SymbolTable) -> Spectrum {
        Spectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(table.values())
                .map(|(c, m)| c * m)
                .collect(),
        }
    }

    /// 2/3-rule truncation: zero every mode with `max(|k₁|, |k₂|) > n/3`.
    pub fn dealiased(&self) -> Spectrum {
        let mut out = self.clone();
        out.dealias_in_place();
        out
    }

    pub fn dealias_in_place(&mut self) {
        let cutoff = self.grid.dealias_cutoff();
        let n = self.grid.n();
        for j2 in 0..n {
            let k2 = self.grid.wavenumber(j2).abs();
            for j1 in 0..n {
                let k1 = self.grid.wavenumber(j1).abs();
                if k1.max(k2) > cutoff {
                    self.coeffs[j2 * n + j1] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// `i k₁ f̂`, with the unpaired Nyquist line zeroed.
    pub fn d1(&self) -> Spectrum {
        let nyq = self.grid.nyquist();
        self.map_modes(|c, k1, _| {
            if k1 == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                c * Complex64::new(0.0, k1 as f64)
            }
        })
    }

    /// `i k₂ f̂`, with the unpaired Nyquist line zeroed.
    pub fn d2(&self) -> Spectrum {
        let nyq = self.grid.nyquist();
        self.map_modes(|c, _, k2| {
            if k2 == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                c * Complex64::new(0.0, k2 as f64)
            }
        })
    }

    pub fn map_modes(&self, f: impl Fn(Complex64, i64, i64) -> Complex64) -> Spectrum {
        let mut out = self.clone();
        let n = self.grid.n();
        for j2 in 0..n {
            let k2 = self.grid.wavenumber(j2);
            for j1 in 0..n {
                let idx = j2 * n + j1;
                out.coeffs[idx] = f(self.coeffs[idx], self.grid.wavenumber(j1), k2);
            }
        }
        out
    }

    pub fn add(&self, other: &Spectrum) -> Result<Spectrum> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Spectrum) -> Result<Spectrum> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, c: f64) -> Spectrum {
        Spectrum {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
        }
    }

    pub fn zip_with(
        &self,
        other: &Spectrum,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Spectrum> {
        check_same_grid(&self.grid, &other.grid)?;
        Ok(Spectrum {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// `Σ |f̂(k)|²`, equal to the grid mean of `|f|²` by Parseval.
    pub fn power(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Fraction of [`Self::power`] carried by modes with `|k| > radius`.
    pub fn tail_fraction(&self, radius: f64) -> f64 {
        let total = self.power();
        if total == 0.0 {
            return 0.0;
        }
        let r2 = radius * radius;
        let tail: f64 = self
            .modes()
            .filter(|&(_, k1, k2)| ((k1 * k1 + k2 * k2) as f64) > r2)
            .map(|(i, _, _)| self.coeffs[i].norm_sqr())
            .sum();
        tail / total
    }
}

pub(crate) fn check_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(Error::GridMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}
