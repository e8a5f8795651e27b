//! Dyadic frequency decomposition and Besov-type norms on the torus.
//!
//! The low-pass profile is `χ(r) = 1 − t((r − ½)/(1 − ½))` with the smooth
//! step `t(x) = g(x)/(g(x) + g(1 − x))`, `g(x) = e^{−1/x}` for `x > 0`. Band
//! profiles telescope, `φ₀(r) = χ(r/2) − χ(r)` and `φⱼ(r) = φ₀(2^{−j} r)`, so
//! `χ + Σ_{j≤J} φⱼ = χ(2^{−J−1}·)` exactly and `supp φⱼ ⊂ {2^{j−1} ≤ |ξ| ≤ 2^{j+1}}`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{
    check_same_grid, lp_norm, lp_norm_vector, Grid, ScalarField, Spectrum, SymbolTable,
    VectorField,
};

const LOW_INNER: f64 = 0.5;
const LOW_OUTER: f64 = 1.0;

fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let g = |y: f64| if y > 0.0 { (-1.0 / y).exp() } else { 0.0 };
    let a = g(x);
    a / (a + g(1.0 - x))
}

/// Low-pass profile `χ(|ξ|)`.
pub fn low_pass_profile(r: f64) -> f64 {
    1.0 - smooth_step((r - LOW_INNER) / (LOW_OUTER - LOW_INNER))
}

/// Band profile `φⱼ(|ξ|)` for `j ≥ 0`.
pub fn band_profile(j: i32, r: f64) -> f64 {
    let x = r / 2f64.powi(j);
    low_pass_profile(x / 2.0) - low_pass_profile(x)
}

/// Symbol of block `j ≥ −1` at radius `r`.
pub fn block_profile(j: i32, r: f64) -> f64 {
    if j < 0 {
        low_pass_profile(r)
    } else {
        band_profile(j, r)
    }
}

/// The block symbols `Δ₋₁, Δ₀, …, Δ_{j_max}` tabulated on one grid.
#[derive(Clone, Debug)]
pub struct DyadicPartition {
    grid: Grid,
    j_max: i32,
    tables: Vec<SymbolTable>,
}

/// Builds the partition with the largest `j_max` satisfying `2^{j_max+1} ≤ n/2`.
pub fn make_partition(grid: &Grid) -> DyadicPartition {
    DyadicPartition::new(grid)
}

impl DyadicPartition {
    pub fn new(grid: &Grid) -> Self {
        let half = (grid.n() / 2) as u64;
        let mut j_max = -1;
        while 1u64 << (j_max + 2) <= half {
            j_max += 1;
        }
        let tables = (-1..=j_max)
            .map(|j| {
                SymbolTable::from_fn(grid, move |k1, k2| {
                    Complex64::new(block_profile(j, k1.hypot(k2)), 0.0)
                })
            })
            .collect();
        DyadicPartition {
            grid: grid.clone(),
            j_max,
            tables,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    /// Radius below which the blocks sum to one.
    pub fn coverage_radius(&self) -> f64 {
        2f64.powi(self.j_max)
    }

    pub fn block_indices(&self) -> impl Iterator<Item = i32> {
        -1..=self.j_max
    }

    fn check_block(&self, j: i32) -> Result<()> {
        if j < -1 || j > self.j_max {
            return Err(Error::BlockOutOfRange { j, j_max: self.j_max });
        }
        Ok(())
    }

    pub fn symbol(&self, j: i32) -> Result<&SymbolTable> {
        self.check_block(j)?;
        Ok(&self.tables[(j + 1) as usize])
    }

    /// `Δⱼ f`.
    pub fn block(&self, f: &ScalarField, j: i32) -> Result<ScalarField> {
        check_same_grid(&self.grid, f.grid())?;
        let table = self.symbol(j)?;
        Ok(f.to_spectrum().apply_unchecked(table).to_field())
    }

    /// Every block `Δ₋₁ f ..= Δ_{j_max} f`, in order.
    pub fn blocks(&self, f: &ScalarField) -> Result<Vec<ScalarField>> {
        check_same_grid(&self.grid, f.grid())?;
        Ok(self.blocks_of_spectrum(&f.to_spectrum()))
    }

    pub(crate) fn blocks_of_spectrum(&self, hat: &Spectrum) -> Vec<ScalarField> {
        self.tables
            .iter()
            .map(|t| hat.apply_unchecked(t).to_field())
            .collect()
    }

    /// `S_j f = Σ_{k=−1}^{j−1} Δ_k f` for `−1 ≤ j ≤ j_max + 1`.
    pub fn partial_sum(&self, f: &ScalarField, j: i32) -> Result<ScalarField> {
        check_same_grid(&self.grid, f.grid())?;
        if j < -1 || j > self.j_max + 1 {
            return Err(Error::BlockOutOfRange {
                j,
                j_max: self.j_max + 1,
            });
        }
        let hat = f.to_spectrum();
        let mut acc = Spectrum::zeros(&self.grid);
        for t in &self.tables[..(j + 1) as usize] {
            acc = acc.add(&hat.apply_unchecked(t))?;
        }
        Ok(acc.to_field())
    }

    /// `‖Δⱼ f‖_{L^p}` for every block.
    pub fn block_norms(&self, f: &ScalarField, p: f64) -> Result<Vec<f64>> {
        Ok(self.blocks(f)?.iter().map(|b| lp_norm(b, p)).collect())
    }

    pub fn block_norms_vector(&self, v: &VectorField, p: f64) -> Result<Vec<f64>> {
        let bx = self.blocks(&v.x)?;
        let by = self.blocks(&v.y)?;
        Ok(bx
            .into_iter()
            .zip(by)
            .map(|(x, y)| lp_norm_vector(&VectorField { x, y }, p))
            .collect())
    }

    pub fn besov_norm(&self, f: &ScalarField, spec: &BesovSpec) -> Result<f64> {
        let norms = self.block_norms(f, spec.p)?;
        Ok(spec.combine(&norms))
    }

    /// Besov norm of a vector field, blocks measured by pointwise magnitude.
    pub fn besov_norm_vector(&self, v: &VectorField, spec: &BesovSpec) -> Result<f64> {
        let norms = self.block_norms_vector(v, spec.p)?;
        Ok(spec.combine(&norms))
    }

    /// `L̃^r_t B^{s,γ}_{p,q}` over time samples `(t, f(t))`.
    pub fn spacetime_besov_norm(
        &self,
        samples: &[(f64, ScalarField)],
        spec: &SpaceTimeBesovSpec,
    ) -> Result<f64> {
        let mut acc = SpaceTimeAccumulator::new(self, *spec);
        for (t, f) in samples {
            acc.push(*t, f)?;
        }
        acc.value()
    }
}

/// Parameters of `B^{s,γ}_{p,q}` (or its homogeneous variant).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesovSpec {
    pub s: f64,
    pub log_weight: f64,
    pub p: f64,
    pub q: f64,
    pub homogeneous: bool,
}

impl BesovSpec {
    pub fn new(s: f64, log_weight: f64, p: f64, q: f64, homogeneous: bool) -> Result<Self> {
        let spec = BesovSpec {
            s,
            log_weight,
            p,
            q,
            homogeneous,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Inhomogeneous `B^s_{p,q}` without log weight.
    pub fn plain(s: f64, p: f64, q: f64) -> Self {
        BesovSpec {
            s,
            log_weight: 0.0,
            p,
            q,
            homogeneous: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(v >= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must lie in [1, inf], got {v}"
                )));
            }
        }
        if !self.s.is_finite() || !(self.log_weight >= 0.0 && self.log_weight.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "regularity {} and log weight {} must be finite, log weight >= 0",
                self.s, self.log_weight
            )));
        }
        Ok(())
    }

    /// `2^{js} (1 + |j|)^γ`.
    pub fn weight(&self, j: i32) -> f64 {
        2f64.powf(j as f64 * self.s) * (1.0 + j.unsigned_abs() as f64).powf(self.log_weight)
    }

    /// Weighted `l^q` sum of block norms listed from `j = −1`.
    pub fn combine(&self, block_norms: &[f64]) -> f64 {
        let terms = block_norms
            .iter()
            .enumerate()
            .map(|(i, &b)| (i as i32 - 1, b))
            .filter(|&(j, _)| !(self.homogeneous && j < 0))
            .map(|(j, b)| self.weight(j) * b);
        lq_sum(terms, self.q)
    }
}

fn lq_sum(terms: impl Iterator<Item = f64>, q: f64) -> f64 {
    if q.is_infinite() {
        terms.fold(0.0_f64, f64::max)
    } else if q == 1.0 {
        terms.sum()
    } else {
        terms.map(|t| t.powf(q)).sum::<f64>().powf(1.0 / q)
    }
}

/// `L̃^r_t B^{s,γ}_{p,q}`: the time norm is taken block by block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceTimeBesovSpec {
    pub besov: BesovSpec,
    pub r: f64,
}

/// Streaming evaluation of a space–time Besov norm.
///
/// Finite `r` uses the left rectangle rule over the sample schedule; `r = ∞`
/// takes the maximum over all samples.
#[derive(Clone, Debug)]
pub struct SpaceTimeAccumulator<'a> {
    partition: &'a DyadicPartition,
    spec: SpaceTimeBesovSpec,
    last: Option<(f64, Vec<f64>)>,
    per_block: Vec<f64>,
    samples: usize,
}

impl<'a> SpaceTimeAccumulator<'a> {
    pub fn new(partition: &'a DyadicPartition, spec: SpaceTimeBesovSpec) -> Self {
        SpaceTimeAccumulator {
            partition,
            spec,
            last: None,
            per_block: vec![0.0; (partition.j_max() + 2) as usize],
            samples: 0,
        }
    }

    pub fn push(&mut self, t: f64, f: &ScalarField) -> Result<()> {
        let norms = self.partition.block_norms(f, self.spec.besov.p)?;
        self.push_block_norms(t, norms)
    }

    pub fn push_block_norms(&mut self, t: f64, norms: Vec<f64>) -> Result<()> {
        let r = self.spec.r;
        if let Some((t_prev, prev)) = &self.last {
            if !(t > *t_prev) {
                return Err(Error::InvalidParameter(format!(
                    "time samples must increase strictly ({t_prev} then {t})"
                )));
            }
            if r.is_finite() {
                let dt = t - t_prev;
                for (acc, b) in self.per_block.iter_mut().zip(prev) {
                    *acc += b.powf(r) * dt;
                }
            }
        }
        if r.is_infinite() {
            for (acc, b) in self.per_block.iter_mut().zip(&norms) {
                *acc = acc.max(*b);
            }
        }
        self.last = Some((t, norms));
        self.samples += 1;
        Ok(())
    }

    pub fn value(&self) -> Result<f64> {
        if self.samples < 2 {
            return Err(Error::InvalidParameter(format!(
                "space-time norm needs at least 2 samples, got {}",
                self.samples
            )));
        }
        let r = self.spec.r;
        let in_time: Vec<f64> = if r.is_infinite() {
            self.per_block.clone()
        } else {
            self.per_block.iter().map(|v| v.powf(1.0 / r)).collect()
        };
        Ok(self.spec.besov.combine(&in_time))
    }
}

/// Empirical Bernstein constant
/// `‖(−Δ)^α f‖_{L^q} / (2^{2αj + 2j(1/p − 1/q)} ‖f‖_{L^p})` for block-localized `f`.
pub fn bernstein_ratio(f: &ScalarField, j: i32, alpha: f64, p: f64, q: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !(p >= 1.0) || !(q >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need alpha >= 0 and p, q >= 1 (alpha={alpha}, p={p}, q={q})"
        )));
    }
    let denom_norm = lp_norm(f, p);
    if denom_norm == 0.0 {
        return Err(Error::Degenerate("Bernstein ratio of the zero field".into()));
    }
    let lifted = crate::spectral::lambda_pow(f, 2.0 * alpha);
    let jf = j as f64;
    let exponent = 2.0 * alpha * jf + 2.0 * jf * (1.0 / p - 1.0 / q);
    Ok(lp_norm(&lifted, q) / (2f64.powf(exponent) * denom_norm))
}
