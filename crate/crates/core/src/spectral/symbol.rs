use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{Error, Result};

type Rule = dyn Fn(f64, f64) -> Complex64 + Send + Sync;

/// A Fourier multiplier `m(k)`, evaluated on real wavevectors `(k₁, k₂)`.
///
/// Operators mapping real fields to real fields need `m(−k) = conj(m(k))`.
#[derive(Clone)]
pub struct MultiplierSymbol {
    name: String,
    params: Vec<(String, f64)>,
    rule: Arc<Rule>,
}

impl MultiplierSymbol {
    pub fn new(
        name: impl Into<String>,
        params: Vec<(String, f64)>,
        rule: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        MultiplierSymbol {
            name: name.into(),
            params,
            rule: Arc::new(rule),
        }
    }

    /// Real symbol depending on `|k|` only.
    pub fn radial(
        name: impl Into<String>,
        params: Vec<(String, f64)>,
        profile: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, params, move |k1, k2| {
            Complex64::new(profile(k1.hypot(k2)), 0.0)
        })
    }

    pub fn identity() -> Self {
        Self::radial("identity", vec![], |_| 1.0)
    }

    /// `Λ^s`, symbol `|k|^s`; the zero mode maps to zero unless `s = 0`.
    pub fn lambda_pow(s: f64) -> Self {
        Self::radial("lambda_pow", vec![("s".into(), s)], move |r| {
            if s == 0.0 {
                1.0
            } else if r == 0.0 {
                0.0
            } else {
                r.powf(s)
            }
        })
    }

    /// `(log(I − Δ))^γ`, symbol `(ln(1 + |k|²))^γ`.
    pub fn log_laplacian_pow(gamma: f64) -> Self {
        Self::radial("log_laplacian_pow", vec![("gamma".into(), gamma)], move |r| {
            log_symbol(r, gamma)
        })
    }

    /// `R = Λ⁻¹∂₁`, symbol `i k₁ / |k|`.
    pub fn riesz_x1() -> Self {
        Self::new("riesz_x1", vec![], |k1, k2| {
            let r = k1.hypot(k2);
            if r == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, k1 / r)
            }
        })
    }

    /// `Δ⁻¹`, symbol `−1/|k|²`, zero at the origin.
    pub fn inv_laplacian() -> Self {
        Self::new("inv_laplacian", vec![], |k1, k2| {
            let r2 = k1 * k1 + k2 * k2;
            if r2 == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-1.0 / r2, 0.0)
            }
        })
    }

    pub fn laplacian() -> Self {
        Self::new("laplacian", vec![], |k1, k2| {
            Complex64::new(-(k1 * k1 + k2 * k2), 0.0)
        })
    }

    pub fn d1() -> Self {
        Self::new("d1", vec![], |k1, _| Complex64::new(0.0, k1))
    }

    pub fn d2() -> Self {
        Self::new("d2", vec![], |_, k2| Complex64::new(0.0, k2))
    }

    /// Pointwise product of two symbols.
    pub fn compose(&self, other: &MultiplierSymbol) -> Self {
        let a = Arc::clone(&self.rule);
        let b = Arc::clone(&other.rule);
        let mut params = self.params.clone();
        params.extend(other.params.iter().cloned());
        MultiplierSymbol {
            name: format!("{}*{}", self.name, other.name),
            params,
            rule: Arc::new(move |k1, k2| a(k1, k2) * b(k1, k2)),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    #[inline]
    pub fn eval(&self, k1: f64, k2: f64) -> Complex64 {
        (self.rule)(k1, k2)
    }

    /// Effective symbol on every lattice mode of `grid`, rejecting non-finite values.
    pub fn tabulate(&self, grid: &Grid) -> Result<SymbolTable> {
        let table = SymbolTable::build(grid, self);
        let n = grid.n();
        if let Some(idx) = table
            .values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFiniteSymbol {
                name: self.name.clone(),
                k1: grid.wavenumber(idx % n),
                k2: grid.wavenumber(idx / n),
            });
        }
        Ok(table)
    }
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

pub(crate) fn log_symbol(r: f64, gamma: f64) -> f64 {
    if gamma == 0.0 {
        1.0
    } else {
        (r * r).ln_1p().powf(gamma)
    }
}

/// A symbol sampled on the FFT lattice of one grid.
///
/// On the Nyquist lines one stored coefficient represents both `±n/2`; the
/// table holds the average of the symbol over those aliases, so odd symbols
/// vanish there and real fields stay real.
#[derive(Clone, Debug)]
pub struct SymbolTable {
    grid: Grid,
    values: Vec<Complex64>,
}

impl SymbolTable {
    pub(crate) fn build(grid: &Grid, symbol: &MultiplierSymbol) -> Self {
        Self::from_fn(grid, |k1, k2| symbol.eval(k1, k2))
    }

    pub(crate) fn from_fn(grid: &Grid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let nyq = grid.nyquist();
        let aliases = |k: i64| -> ([f64; 2], usize) {
            if k == nyq {
                ([k as f64, -(k as f64)], 2)
            } else {
                ([k as f64, 0.0], 1)
            }
        };
        let mut values = Vec::with_capacity(grid.len());
        for j2 in 0..n {
            let (a2, c2) = aliases(grid.wavenumber(j2));
            for j1 in 0..n {
                let (a1, c1) = aliases(grid.wavenumber(j1));
                let mut acc = Complex64::new(0.0, 0.0);
                for &k2 in &a2[..c2] {
                    for &k1 in &a1[..c1] {
                        acc += f(k1, k2);
                    }
                }
                values.push(acc / (c1 * c2) as f64);
            }
        }
        SymbolTable {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, k1: i64, k2: i64) -> Option<Complex64> {
        let n = self.grid.n();
        Some(self.values[self.grid.index_of(k2)? * n + self.grid.index_of(k1)?])
    }

    /// Entrywise product.
    pub fn compose(&self, other: &SymbolTable) -> SymbolTable {
        SymbolTable {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_symbols_are_conjugate_symmetric() {
        let symbols = [
            MultiplierSymbol::lambda_pow(0.7),
            MultiplierSymbol::log_laplacian_pow(1.5),
            MultiplierSymbol::riesz_x1(),
            MultiplierSymbol::inv_laplacian(),
            MultiplierSymbol::d2(),
        ];
        for m in &symbols {
            for k1 in -5..=5 {
                for k2 in -5..=5 {
                    let (a, b) = (k1 as f64, k2 as f64);
                    let d = m.eval(a, b) - m.eval(-a, -b).conj();
                    assert!(d.norm() < 1e-15, "{} at ({k1},{k2})", m.name());
                }
            }
        }
    }

    #[test]
    fn odd_symbols_vanish_on_nyquist_line() {
        let g = Grid::new(8).unwrap();
        let t = MultiplierSymbol::riesz_x1().tabulate(&g).unwrap();
        for k2 in -3..=4 {
            assert_eq!(t.get(4, k2).unwrap().norm(), 0.0);
        }
        assert!(t.get(3, 1).unwrap().norm() > 0.0);
    }

    #[test]
    fn non_finite_symbol_rejected() {
        let g = Grid::new(8).unwrap();
        let bad = MultiplierSymbol::radial("inverse_radius", vec![], |r| 1.0 / r);
        assert!(matches!(
            bad.tabulate(&g),
            Err(Error::NonFiniteSymbol { k1: 0, k2: 0, .. })
        ));
    }

    #[test]
    fn log_symbol_values() {
        assert_eq!(log_symbol(0.0, 0.0), 1.0);
        assert_eq!(log_symbol(0.0, 1.0), 0.0);
        assert!((log_symbol(1.0, 1.0) - 2f64.ln()).abs() < 1e-15);
    }
}
