//! C ABI for `bsqlab`.
//!
//! Every fallible function returns a [`BsqStatus`]. On failure a message is
//! kept per thread and can be read with [`bsq_last_error`]. Simulations are
//! opaque handles created by [`bsq_simulation_new`] and released with
//! [`bsq_simulation_free`]. Field buffers hold `n²` doubles, `x₁` varying
//! fastest.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bsqlab::diagnostics::{
    g_energy_balance, velocity_formulation_residual, MonitorAccumulator, NormRow,
};
use bsqlab::dynamics::{initial_state, Integrator, State, SystemParams};
use bsqlab::io::{parse_config, write_snapshot, RunConfig};
use bsqlab::littlewood_paley::{make_partition, BesovSpec};
use bsqlab::spectral::{Grid, ScalarField};
use bsqlab::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BsqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Io = 4,
    Format = 5,
    NonFinite = 6,
    Diverged = 7,
    BufferTooSmall = 8,
    Internal = 9,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn status_of(err: &Error) -> BsqStatus {
    match err {
        Error::Config { .. } => BsqStatus::Config,
        Error::Io { .. } => BsqStatus::Io,
        Error::Format(_) => BsqStatus::Format,
        Error::NonFinite(_) => BsqStatus::NonFinite,
        _ => BsqStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> BsqStatus {
    set_error(err.to_string());
    status_of(&err)
}

/// Runs `f`, converting panics into `BsqStatus::Internal`.
fn guard(f: impl FnOnce() -> BsqStatus) -> BsqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            BsqStatus::Internal
        }
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            set_error(concat!("null pointer: ", stringify!($p)));
            return BsqStatus::NullPointer;
        })+
    };
}

/// Message of the last failure on this thread (empty if none). The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bsq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bsq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Monitor sample, mirroring the CSV series columns.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BsqMonitorRow {
    pub t: f64,
    pub omega_l2: f64,
    pub omega_lq: f64,
    pub theta_linf: f64,
    pub theta_l2: f64,
    pub g_l2: f64,
    pub g_lq: f64,
    pub cum_lambda_half_g_sq: f64,
    pub cum_g_l2q_pow_q: f64,
    pub omega_besov: f64,
    pub theta_besov: f64,
    pub g_balance_residual: f64,
    pub tail_mass: f64,
    pub cum_omega_besov: f64,
    pub cum_theta_besov: f64,
    pub in_window: i32,
}

impl From<&NormRow> for BsqMonitorRow {
    fn from(r: &NormRow) -> Self {
        BsqMonitorRow {
            t: r.t,
            omega_l2: r.omega_l2,
            omega_lq: r.omega_lq,
            theta_linf: r.theta_linf,
            theta_l2: r.theta_l2,
            g_l2: r.g_l2,
            g_lq: r.g_lq,
            cum_lambda_half_g_sq: r.cum_lambda_half_g_sq,
            cum_g_l2q_pow_q: r.cum_g_l2q_pow_q,
            omega_besov: r.omega_besov,
            theta_besov: r.theta_besov,
            g_balance_residual: r.g_balance_residual,
            tail_mass: r.tail_mass,
            cum_omega_besov: r.cum_omega_besov,
            cum_theta_besov: r.cum_theta_besov,
            in_window: i32::from(r.in_window),
        }
    }
}

/// Opaque simulation handle.
pub struct BsqSimulation {
    config: RunConfig,
    params: SystemParams,
    integ: Integrator,
    monitor: MonitorAccumulator,
    state: State,
    last_row: NormRow,
    steps: u64,
    diverged: bool,
}

impl BsqSimulation {
    fn new(config: RunConfig) -> bsqlab::Result<Self> {
        let params = config.system_params();
        let state = initial_state(&config)?;
        let integ = Integrator::new(state.grid(), params, config.dealias)?;
        let mut monitor = MonitorAccumulator::new(state.grid(), params, config.q_norm)?;
        let last_row = monitor.observe(&state)?;
        Ok(BsqSimulation {
            config,
            params,
            integ,
            monitor,
            state,
            last_row,
            steps: 0,
            diverged: false,
        })
    }

    fn step(&mut self, dt: f64) -> BsqStatus {
        if self.diverged {
            set_error("simulation has diverged");
            return BsqStatus::Diverged;
        }
        let next = match self.integ.step(&self.state, dt) {
            Ok(s) => s,
            Err(Error::NonFinite(what)) => {
                self.diverged = true;
                set_error(format!("non-finite {what}"));
                return BsqStatus::Diverged;
            }
            Err(e) => return fail(e),
        };
        let peak = next.omega.max_abs();
        if peak.is_nan() || peak > self.config.blowup_cap {
            self.diverged = true;
            set_error(format!("max|omega| exceeded {}", self.config.blowup_cap));
            return BsqStatus::Diverged;
        }
        let res = g_energy_balance(&self.state, &next, &self.params)
            .and_then(|r| {
                self.monitor.reset_residual();
                self.monitor.record_balance(r);
                self.monitor.observe(&next)
            });
        match res {
            Ok(row) => self.last_row = row,
            Err(e) => return fail(e),
        }
        self.state = next;
        self.steps += 1;
        BsqStatus::Ok
    }

    fn cfl_dt(&self) -> f64 {
        self.integ.cfl_dt(&self.state, &self.config.numerics())
    }
}

/// Creates a simulation from configuration text (the `key = value` format).
///
/// # Safety
/// `config_text` must be a NUL-terminated UTF-8 string; `out` must be a
/// valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_new(
    config_text: *const c_char,
    out: *mut *mut BsqSimulation,
) -> BsqStatus {
    non_null!(config_text, out);
    guard(|| {
        let text = match CStr::from_ptr(config_text).to_str() {
            Ok(t) => t,
            Err(_) => {
                set_error("config text is not UTF-8");
                return BsqStatus::InvalidArgument;
            }
        };
        match parse_config(text).and_then(BsqSimulation::new) {
            Ok(sim) => {
                *out = Box::into_raw(Box::new(sim));
                BsqStatus::Ok
            }
            Err(e) => {
                *out = ptr::null_mut();
                fail(e)
            }
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `sim` must come from [`bsq_simulation_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_free(sim: *mut BsqSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Grid size `n` (fields hold `n²` values); 0 for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_grid_size(sim: *const BsqSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.state.grid().n())
}

/// Current time and number of steps taken.
///
/// # Safety
/// `sim` must be a live handle; `t` and `steps` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_time(
    sim: *const BsqSimulation,
    t: *mut f64,
    steps: *mut u64,
) -> BsqStatus {
    non_null!(sim, t, steps);
    *t = (*sim).state.t;
    *steps = (*sim).steps;
    BsqStatus::Ok
}

/// Takes one step. `dt <= 0` selects the advective limit; a positive `dt`
/// above the limit is rejected. The step actually taken is stored in
/// `dt_taken` when it is non-null.
///
/// # Safety
/// `sim` must be a live handle; `dt_taken` null or writable.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_step(
    sim: *mut BsqSimulation,
    dt: f64,
    dt_taken: *mut f64,
) -> BsqStatus {
    non_null!(sim);
    let sim = &mut *sim;
    guard(|| {
        let limit = sim.cfl_dt();
        let h = if dt > 0.0 { dt } else { limit };
        if h > limit * (1.0 + 1e-12) {
            return fail(Error::CflViolation { dt: h, limit });
        }
        let status = sim.step(h);
        if status == BsqStatus::Ok && !dt_taken.is_null() {
            *dt_taken = h;
        }
        status
    })
}

/// Steps with the advective limit until `t_target` is reached exactly.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_advance(sim: *mut BsqSimulation, t_target: f64) -> BsqStatus {
    non_null!(sim);
    let sim = &mut *sim;
    guard(|| {
        if !t_target.is_finite() {
            set_error("target time must be finite");
            return BsqStatus::InvalidArgument;
        }
        while sim.state.t < t_target && (t_target - sim.state.t) > 1e-12 * t_target.abs().max(1.0) {
            let limit = sim.cfl_dt();
            let remaining = t_target - sim.state.t;
            let lands = remaining <= limit;
            let status = sim.step(if lands { remaining } else { limit });
            if status != BsqStatus::Ok {
                return status;
            }
            if lands {
                sim.state.t = t_target;
            }
        }
        BsqStatus::Ok
    })
}

unsafe fn copy_field(field: &ScalarField, buf: *mut f64, len: usize) -> BsqStatus {
    let values = field.values();
    if len < values.len() {
        set_error(format!("buffer holds {len} values, need {}", values.len()));
        return BsqStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    BsqStatus::Ok
}

/// Copies ω into `buf` (capacity `len` doubles).
///
/// # Safety
/// `sim` must be a live handle; `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_copy_omega(
    sim: *const BsqSimulation,
    buf: *mut f64,
    len: usize,
) -> BsqStatus {
    non_null!(sim, buf);
    copy_field(&(*sim).state.omega, buf, len)
}

/// Copies θ into `buf` (capacity `len` doubles).
///
/// # Safety
/// `sim` must be a live handle; `buf` must be writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_copy_theta(
    sim: *const BsqSimulation,
    buf: *mut f64,
    len: usize,
) -> BsqStatus {
    non_null!(sim, buf);
    copy_field(&(*sim).state.theta, buf, len)
}

/// Monitor row of the current state.
///
/// # Safety
/// `sim` must be a live handle; `row` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_monitor(
    sim: *const BsqSimulation,
    row: *mut BsqMonitorRow,
) -> BsqStatus {
    non_null!(sim, row);
    *row = BsqMonitorRow::from(&(*sim).last_row);
    BsqStatus::Ok
}

/// Writes the current state as a binary snapshot.
///
/// # Safety
/// `sim` must be a live handle; `path` a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn bsq_simulation_write_snapshot(
    sim: *const BsqSimulation,
    path: *const c_char,
) -> BsqStatus {
    non_null!(sim, path);
    guard(|| {
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            set_error("path is not UTF-8");
            return BsqStatus::InvalidArgument;
        };
        match write_snapshot(path, &(*sim).state, &(*sim).params) {
            Ok(()) => BsqStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

unsafe fn field_from_raw(values: *const f64, n: usize) -> bsqlab::Result<ScalarField> {
    let grid = Grid::new(n)?;
    let slice = std::slice::from_raw_parts(values, n * n);
    ScalarField::new(&grid, slice.to_vec())
}

/// Besov norm `B^{s,γ}_{p,q}` of an `n × n` field. Pass `INFINITY` for
/// `p = ∞` or `q = ∞`; `homogeneous != 0` drops the low-frequency block.
///
/// # Safety
/// `values` must be readable for `n²` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bsq_besov_norm(
    values: *const f64,
    n: usize,
    s: f64,
    log_gamma: f64,
    p: f64,
    q: f64,
    homogeneous: i32,
    out: *mut f64,
) -> BsqStatus {
    non_null!(values, out);
    guard(|| {
        let res = field_from_raw(values, n).and_then(|f| {
            let spec = BesovSpec::new(s, log_gamma, p, q, homogeneous != 0)?;
            make_partition(f.grid()).besov_norm(&f, &spec)
        });
        match res {
            Ok(v) => {
                *out = v;
                BsqStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// L² norm of the velocity-formulation residual of `(ω, θ)` with the given
/// coefficients (`κ`, `β` do not enter).
///
/// # Safety
/// `omega` and `theta` must be readable for `n²` doubles; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn bsq_velocity_residual(
    omega: *const f64,
    theta: *const f64,
    n: usize,
    nu: f64,
    alpha: f64,
    sigma: f64,
    gamma: f64,
    out: *mut f64,
) -> BsqStatus {
    non_null!(omega, theta, out);
    guard(|| {
        let params = SystemParams {
            nu,
            alpha,
            kappa: 0.0,
            beta: 1.0,
            sigma,
            gamma,
        };
        let res = field_from_raw(omega, n)
            .and_then(|w| Ok((w, field_from_raw(theta, n)?)))
            .and_then(|(w, t)| State::new(0.0, w, t))
            .and_then(|st| velocity_formulation_residual(&st, &params));
        match res {
            Ok(r) => {
                *out = r.norm;
                BsqStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
