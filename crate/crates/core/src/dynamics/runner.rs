//! Driving a configured run: time stepping, monitors, output schedule and
//! blow-up detection.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;

use super::integrator::Integrator;
use super::presets::periodic_bump;
use super::state::State;
use super::params::SystemParams;
use crate::diagnostics::{
    g_energy_balance, uniqueness_functional, MonitorAccumulator, NormRow, NormSeries,
    TwinDivergence, TwinRow,
};
use crate::error::{Error, Result};
use crate::io::{append_series_row, append_twin_row, write_snapshot, RunConfig};
use crate::spectral::Grid;

/// Receives rows and snapshots as a run produces them.
pub trait RunSink {
    fn row(&mut self, _row: &NormRow) -> Result<()> {
        Ok(())
    }

    fn snapshot(&mut self, _index: usize, _state: &State, _params: &SystemParams) -> Result<()> {
        Ok(())
    }
}

/// Discards everything.
#[derive(Debug, Default)]
pub struct NullSink;

impl RunSink for NullSink {}

/// Writes `series.csv` and `snapshot_NNNNN.bin` into a directory.
#[derive(Debug)]
pub struct DirSink {
    dir: PathBuf,
}

impl DirSink {
    /// Creates `dir` if needed and removes a stale `series.csv`.
    pub fn create(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let series = dir.join("series.csv");
        if series.exists() {
            fs::remove_file(&series).map_err(|e| Error::io(&series, e))?;
        }
        Ok(DirSink { dir })
    }

    pub fn series_path(&self) -> PathBuf {
        self.dir.join("series.csv")
    }

    pub fn snapshot_path(&self, index: usize) -> PathBuf {
        self.dir.join(format!("snapshot_{index:05}.bin"))
    }
}

impl RunSink for DirSink {
    fn row(&mut self, row: &NormRow) -> Result<()> {
        append_series_row(self.series_path(), row)
    }

    fn snapshot(&mut self, index: usize, state: &State, params: &SystemParams) -> Result<()> {
        write_snapshot(self.snapshot_path(index), state, params)
    }
}

#[derive(Clone, Debug)]
pub struct RunOutput {
    pub initial: State,
    pub final_state: State,
    pub series: NormSeries,
    pub snapshot_times: Vec<f64>,
    pub steps: usize,
    /// Set when `max|ω|` exceeded the cap or a field became non-finite.
    pub diverged: bool,
    /// Largest per-step `G` energy-balance residual.
    pub max_balance_residual: f64,
}

/// Output times `k·interval`, `k = 0, 1, …`.
#[derive(Clone, Copy, Debug)]
struct Schedule {
    interval: f64,
    next: u64,
}

impl Schedule {
    fn new(interval: f64) -> Self {
        Schedule { interval, next: 1 }
    }

    fn time(&self) -> f64 {
        self.next as f64 * self.interval
    }

    /// True (and advances) if `t` has reached the pending output time.
    fn due(&mut self, t: f64) -> bool {
        if t >= self.time() - 1e-12 * self.interval {
            while self.time() <= t + 1e-12 * self.interval {
                self.next += 1;
            }
            true
        } else {
            false
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Builds the configured initial state (dealiased when the run dealiases).
pub fn initial_state(config: &RunConfig) -> Result<State> {
    let grid = Grid::new(config.n)?;
    let state = config.initial_condition().build(&grid)?;
    let state = if config.dealias { state.dealiased() } else { state };
    state.validate()?;
    Ok(state)
}

/// Runs `config`, writing into `output_dir` when one is set.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    match &config.output_dir {
        Some(dir) => {
            let mut sink = DirSink::create(dir)?;
            run_with_sink(config, &mut sink)
        }
        None => run_with_sink(config, &mut NullSink),
    }
}

pub fn run_with_sink(config: &RunConfig, sink: &mut dyn RunSink) -> Result<RunOutput> {
    config.validate()?;
    run_from_state(initial_state(config)?, config, sink)
}

/// Integrates `initial` to `config.t_end` with the configured parameters.
pub fn run_from_state(initial: State, config: &RunConfig, sink: &mut dyn RunSink) -> Result<RunOutput> {
    config.validate()?;
    let params = config.system_params();
    let numerics = config.numerics();
    initial.validate()?;
    let mut integ = Integrator::new(initial.grid(), params, numerics.dealias)?;
    let mut acc = MonitorAccumulator::new(initial.grid(), params, config.q_norm)?;
    let mut series = NormSeries::new();
    let mut snapshot_times = Vec::new();

    let first = acc.observe(&initial)?;
    series.push(first)?;
    sink.row(&first)?;
    sink.snapshot(0, &initial, &params)?;
    snapshot_times.push(initial.t);

    let mut rows_at = Schedule::new(config.series_interval);
    let mut snaps_at = Schedule::new(config.snapshot_interval);
    let t_end = config.t_end;
    let mut state = initial.clone();
    let mut steps = 0;
    let mut diverged = false;
    let mut max_residual: f64 = 0.0;
    let mut unsent: Option<NormRow> = None;

    while !close(state.t, t_end) && state.t < t_end {
        let target = rows_at.time().min(snaps_at.time()).min(t_end);
        let cfl = integ.cfl_dt(&state, &numerics);
        let (dt, lands) = if target - state.t <= cfl {
            (target - state.t, true)
        } else {
            (cfl, false)
        };
        let mut next = match integ.step(&state, dt) {
            Ok(s) => s,
            Err(Error::NonFinite(what)) => {
                log::warn!("run diverged at t={}: non-finite {what}", state.t);
                diverged = true;
                break;
            }
            Err(e) => return Err(e),
        };
        if lands {
            next.t = target;
        }
        let peak = next.omega.max_abs();
        if !(peak <= config.blowup_cap) {
            log::warn!("run diverged at t={}: max|omega| = {peak:.3e}", next.t);
            diverged = true;
            break;
        }
        let residual = g_energy_balance(&state, &next, &params)?;
        max_residual = max_residual.max(residual);
        acc.record_balance(residual);
        let row = acc.observe(&next)?;
        state = next;
        steps += 1;

        let at_end = close(state.t, t_end);
        if rows_at.due(state.t) || at_end {
            series.push(row)?;
            sink.row(&row)?;
            acc.reset_residual();
            unsent = None;
        } else {
            unsent = Some(row);
        }
        if snaps_at.due(state.t) || at_end {
            sink.snapshot(snapshot_times.len(), &state, &params)?;
            snapshot_times.push(state.t);
        }
    }
    if let (true, Some(row)) = (diverged, unsent) {
        series.push(row)?;
        sink.row(&row)?;
    }
    Ok(RunOutput {
        initial,
        final_state: state,
        series,
        snapshot_times,
        steps,
        diverged,
        max_balance_residual: max_residual,
    })
}

/// Perturbation profile of the twin experiment: a unit bump of width ½
/// centred at `(π/2, π/2)`.
pub fn twin_bump(grid: &Grid) -> crate::spectral::ScalarField {
    periodic_bump(grid, 0.5 * PI, 0.5 * PI, 0.5)
}

#[derive(Clone, Debug)]
pub struct TwinOutput {
    pub divergence: TwinDivergence,
    pub steps: usize,
    pub diverged: bool,
}

/// Integrates `θ₀` and `θ₀(1 + eps·bump)` side by side with a common step and
/// records their distance on the series schedule.
pub fn run_twin(config: &RunConfig, eps: f64, sink: &mut dyn FnMut(&TwinRow) -> Result<()>) -> Result<TwinOutput> {
    config.validate()?;
    if !eps.is_finite() {
        return Err(Error::InvalidParameter(format!("perturbation must be finite, got {eps}")));
    }
    let params = config.system_params();
    let numerics = config.numerics();
    let grid = Grid::new(config.n)?;
    let raw = config.initial_condition().build(&grid)?;
    let bump = twin_bump(&grid);
    let theta_b = raw.theta.zip_with(&bump, |t, b| t * (1.0 + eps * b))?;
    let raw_b = State::new(raw.t, raw.omega.clone(), theta_b)?;
    let (a0, b0) = if config.dealias {
        (raw.dealiased(), raw_b.dealiased())
    } else {
        (raw, raw_b)
    };
    a0.validate()?;

    let mut ia = Integrator::new(a0.grid(), params, numerics.dealias)?;
    let mut ib = ia.clone();
    let mut divergence = TwinDivergence::default();
    let first = uniqueness_functional(&a0, &b0, params.sigma, params.gamma)?;
    sink(&first)?;
    divergence.push(first);

    let mut rows_at = Schedule::new(config.series_interval);
    let t_end = config.t_end;
    let (mut a, mut b) = (a0, b0);
    let mut steps = 0;
    let mut diverged = false;
    while !close(a.t, t_end) && a.t < t_end {
        let target = rows_at.time().min(t_end);
        let cfl = ia.cfl_dt(&a, &numerics).min(ib.cfl_dt(&b, &numerics));
        let (dt, lands) = if target - a.t <= cfl {
            (target - a.t, true)
        } else {
            (cfl, false)
        };
        let (na, nb) = match (ia.step(&a, dt), ib.step(&b, dt)) {
            (Ok(x), Ok(y)) => (x, y),
            (Err(Error::NonFinite(_)), _) | (_, Err(Error::NonFinite(_))) => {
                diverged = true;
                break;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        a = na;
        b = nb;
        if lands {
            a.t = target;
            b.t = target;
        }
        steps += 1;
        if !(a.omega.max_abs() <= config.blowup_cap && b.omega.max_abs() <= config.blowup_cap) {
            diverged = true;
            break;
        }
        if rows_at.due(a.t) || close(a.t, t_end) {
            let row = uniqueness_functional(&a, &b, params.sigma, params.gamma)?;
            sink(&row)?;
            divergence.push(row);
        }
    }
    Ok(TwinOutput {
        divergence,
        steps,
        diverged,
    })
}

/// [`run_twin`] writing `twin.csv` into `output_dir` when one is set.
pub fn run_twin_to_dir(config: &RunConfig, eps: f64) -> Result<TwinOutput> {
    match &config.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let path = dir.join("twin.csv");
            if path.exists() {
                fs::remove_file(&path).map_err(|e| Error::io(&path, e))?;
            }
            run_twin(config, eps, &mut |row| append_twin_row(&path, row))
        }
        None => run_twin(config, eps, &mut |_| Ok(())),
    }
}
