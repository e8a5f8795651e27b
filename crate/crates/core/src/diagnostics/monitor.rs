//! Time-series monitors.

use crate::dynamics::{State, SystemParams};
use crate::error::{Error, Result};
use crate::littlewood_paley::{BesovSpec, DyadicPartition};
use crate::spectral::{l2_norm, lp_norm, Grid, Spectrum};

use super::commutator::g_spectrum;

/// Parameter ranges covered by the a priori bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundWindows {
    /// `σ < ½`: global `L²` bound on `ω` and `∫‖Λ^{1/2}G‖²`.
    pub l2: bool,
    /// `2 < q < 4/(1+2σ)` (with `q = 4/(1+2σ)` admitted when `γ = 0`).
    pub lq: bool,
    /// `σ < ¼` and `2/(1−σ) < q < 4/(1+2σ)`.
    pub spacetime: bool,
    /// `σ = 0`: `L¹_t B^{0,γ}_{∞,1}` bounds and uniqueness.
    pub besov: bool,
}

impl BoundWindows {
    pub fn classify(sigma: f64, gamma: f64, q: f64) -> Self {
        let upper = 4.0 / (1.0 + 2.0 * sigma);
        let lq = q > 2.0 && (q < upper || (gamma == 0.0 && q == upper));
        BoundWindows {
            l2: sigma < 0.5,
            lq,
            spacetime: sigma < 0.25 && q > 2.0 / (1.0 - sigma) && q < upper,
            besov: sigma == 0.0,
        }
    }
}

/// Column names of [`NormRow`], in CSV order.
pub const NORM_COLUMNS: [&str; 16] = [
    "t",
    "omega_l2",
    "omega_lq",
    "theta_linf",
    "theta_l2",
    "g_l2",
    "g_lq",
    "cum_lambda_half_g_sq",
    "cum_g_l2q_pow_q",
    "omega_besov",
    "theta_besov",
    "g_balance_residual",
    "tail_mass",
    "cum_omega_besov",
    "cum_theta_besov",
    "in_window",
];

/// One monitor sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormRow {
    pub t: f64,
    pub omega_l2: f64,
    pub omega_lq: f64,
    pub theta_linf: f64,
    pub theta_l2: f64,
    pub g_l2: f64,
    pub g_lq: f64,
    /// `∫₀ᵗ ‖Λ^{1/2}G‖²_{L²}`.
    pub cum_lambda_half_g_sq: f64,
    /// `∫₀ᵗ ‖G‖^q_{L^{2q}}`.
    pub cum_g_l2q_pow_q: f64,
    /// `‖ω‖_{B^{0,γ}_{∞,1}}`.
    pub omega_besov: f64,
    pub theta_besov: f64,
    /// Largest per-step `G` energy-balance residual since the previous row.
    pub g_balance_residual: f64,
    /// Fraction of `‖ω‖² + ‖θ‖²` beyond the dyadic coverage radius.
    pub tail_mass: f64,
    /// `∫₀ᵗ ‖ω‖_{B^{0,γ}_{∞,1}}`.
    pub cum_omega_besov: f64,
    pub cum_theta_besov: f64,
    /// Whether `(σ, γ, q)` lies in the `L^q` window.
    pub in_window: bool,
}

impl NormRow {
    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.t,
            self.omega_l2,
            self.omega_lq,
            self.theta_linf,
            self.theta_l2,
            self.g_l2,
            self.g_lq,
            self.cum_lambda_half_g_sq,
            self.cum_g_l2q_pow_q,
            self.omega_besov,
            self.theta_besov,
            self.g_balance_residual,
            self.tail_mass,
            self.cum_omega_besov,
            self.cum_theta_besov,
            if self.in_window { 1.0 } else { 0.0 },
        ]
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        if v.len() != NORM_COLUMNS.len() {
            return Err(Error::ShapeMismatch {
                expected: NORM_COLUMNS.len(),
                actual: v.len(),
            });
        }
        Ok(NormRow {
            t: v[0],
            omega_l2: v[1],
            omega_lq: v[2],
            theta_linf: v[3],
            theta_l2: v[4],
            g_l2: v[5],
            g_lq: v[6],
            cum_lambda_half_g_sq: v[7],
            cum_g_l2q_pow_q: v[8],
            omega_besov: v[9],
            theta_besov: v[10],
            g_balance_residual: v[11],
            tail_mass: v[12],
            cum_omega_besov: v[13],
            cum_theta_besov: v[14],
            in_window: v[15] != 0.0,
        })
    }
}

/// Rows ordered by strictly increasing time.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormSeries {
    rows: Vec<NormRow>,
}

impl NormSeries {
    pub fn new() -> Self {
        NormSeries::default()
    }

    pub fn push(&mut self, row: NormRow) -> Result<()> {
        if let Some(last) = self.rows.last() {
            if !(row.t > last.t) {
                return Err(Error::InvalidParameter(format!(
                    "series times must increase ({} then {})",
                    last.t, row.t
                )));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn rows(&self) -> &[NormRow] {
        &self.rows
    }

    pub fn last(&self) -> Option<&NormRow> {
        self.rows.last()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Instantaneous quantities of one state.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Instant {
    omega_l2: f64,
    omega_lq: f64,
    theta_linf: f64,
    theta_l2: f64,
    g_l2: f64,
    g_lq: f64,
    lambda_half_g_sq: f64,
    g_l2q_pow_q: f64,
    omega_besov: f64,
    theta_besov: f64,
    tail_mass: f64,
}

/// Running time integrals (left rectangle rule) plus the partition used for
/// the Besov columns.
#[derive(Clone, Debug)]
pub struct MonitorAccumulator {
    partition: DyadicPartition,
    params: SystemParams,
    q: f64,
    last: Option<(f64, Instant)>,
    cum_lambda_half_g_sq: f64,
    cum_g_l2q_pow_q: f64,
    cum_omega_besov: f64,
    cum_theta_besov: f64,
    pending_residual: f64,
}

impl MonitorAccumulator {
    pub fn new(grid: &Grid, params: SystemParams, q: f64) -> Result<Self> {
        params.validate()?;
        if !(q >= 2.0 && q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "monitor exponent q must be finite and >= 2, got {q}"
            )));
        }
        Ok(MonitorAccumulator {
            partition: DyadicPartition::new(grid),
            params,
            q,
            last: None,
            cum_lambda_half_g_sq: 0.0,
            cum_g_l2q_pow_q: 0.0,
            cum_omega_besov: 0.0,
            cum_theta_besov: 0.0,
            pending_residual: 0.0,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn windows(&self) -> BoundWindows {
        BoundWindows::classify(self.params.sigma, self.params.gamma, self.q)
    }

    /// Folds a per-step energy-balance residual into the next row.
    pub fn record_balance(&mut self, residual: f64) {
        self.pending_residual = self.pending_residual.max(residual);
    }

    fn instant(&self, state: &State) -> Result<Instant> {
        let q = self.q;
        let w = state.omega.to_spectrum();
        let th = state.theta.to_spectrum();
        let g_hat = g_spectrum(&w, &th)?;
        let g = g_hat.to_field();
        let area = state.grid().period().powi(2);
        let lambda_half_g_sq = area
            * g_hat
                .modes()
                .map(|(i, k1, k2)| ((k1 * k1 + k2 * k2) as f64).sqrt() * g_hat.coeffs()[i].norm_sqr())
                .sum::<f64>();
        let besov = BesovSpec::new(0.0, self.params.gamma, f64::INFINITY, 1.0, false)?;
        Ok(Instant {
            omega_l2: l2_norm(&state.omega),
            omega_lq: lp_norm(&state.omega, q),
            theta_linf: state.theta.max_abs(),
            theta_l2: l2_norm(&state.theta),
            g_l2: l2_norm(&g),
            g_lq: lp_norm(&g, q),
            lambda_half_g_sq,
            g_l2q_pow_q: lp_norm(&g, 2.0 * q).powf(q),
            omega_besov: self.partition.besov_norm(&state.omega, &besov)?,
            theta_besov: self.partition.besov_norm(&state.theta, &besov)?,
            tail_mass: tail_mass(&w, &th, self.partition.coverage_radius()),
        })
    }

    /// Samples `state`, advancing the running integrals from the previous
    /// sample.
    pub fn observe(&mut self, state: &State) -> Result<NormRow> {
        let now = self.instant(state)?;
        if let Some((t_prev, prev)) = &self.last {
            let dt = state.t - t_prev;
            if !(dt > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "monitor times must increase ({t_prev} then {})",
                    state.t
                )));
            }
            self.cum_lambda_half_g_sq += prev.lambda_half_g_sq * dt;
            self.cum_g_l2q_pow_q += prev.g_l2q_pow_q * dt;
            self.cum_omega_besov += prev.omega_besov * dt;
            self.cum_theta_besov += prev.theta_besov * dt;
        }
        self.last = Some((state.t, now));
        let row = NormRow {
            t: state.t,
            omega_l2: now.omega_l2,
            omega_lq: now.omega_lq,
            theta_linf: now.theta_linf,
            theta_l2: now.theta_l2,
            g_l2: now.g_l2,
            g_lq: now.g_lq,
            cum_lambda_half_g_sq: self.cum_lambda_half_g_sq,
            cum_g_l2q_pow_q: self.cum_g_l2q_pow_q,
            omega_besov: now.omega_besov,
            theta_besov: now.theta_besov,
            g_balance_residual: self.pending_residual,
            tail_mass: now.tail_mass,
            cum_omega_besov: self.cum_omega_besov,
            cum_theta_besov: self.cum_theta_besov,
            in_window: self.windows().lq,
        };
        Ok(row)
    }

    /// Clears the per-row residual maximum after a row has been emitted.
    pub fn reset_residual(&mut self) {
        self.pending_residual = 0.0;
    }
}

/// `(Σ_{|k|>R} |ω̂|² + |θ̂|²) / Σ (|ω̂|² + |θ̂|²)`.
pub fn tail_mass(omega: &Spectrum, theta: &Spectrum, radius: f64) -> f64 {
    let total = omega.power() + theta.power();
    if total == 0.0 {
        return 0.0;
    }
    let tail = omega.tail_fraction(radius) * omega.power() + theta.tail_fraction(radius) * theta.power();
    tail / total
}

/// Monitor row of `state` with the running integrals of `acc`.
pub fn monitor_row(state: &State, acc: &mut MonitorAccumulator) -> Result<NormRow> {
    acc.observe(state)
}

/// Row of a single state with empty history.
pub fn snapshot_row(state: &State, params: &SystemParams, q: f64) -> Result<NormRow> {
    MonitorAccumulator::new(state.grid(), *params, q)?.observe(state)
}
