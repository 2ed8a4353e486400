//! C ABI for `rogonlab`.
//!
//! Every fallible function returns an [`RglStatus`]; on failure a
//! human-readable message is available from [`rgl_last_error_message`] on the
//! same thread. Complex numbers cross the boundary as `(re, im)` pairs of
//! doubles. Grids are row-major in `t` (index `it * ns + is`).
//!
//! Simulations live behind the opaque [`RglSim`] handle, created with
//! [`rgl_sim_new`] and released with [`rgl_sim_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rogonlab::residual::{self, FdOrder, Region};
use rogonlab::rogon;
use rogonlab::solver::{self, Diagnostics, Grid, SimState, SolverConfig, Stepper};
use rogonlab::{FieldPair, Order, PointST, RogonError, RogonParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RglStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParam = 2,
    NonPeriodicCarrier = 3,
    Singular = 4,
    NumericalAbort = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Model parameters. `alpha > 0`, `beta > 0`, `(a, b) != (0, 0)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RglParams {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub k: f64,
}

/// Both field components at one point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RglField {
    pub sigma_re: f64,
    pub sigma_im: f64,
    pub psi_re: f64,
    pub psi_im: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RglPeak {
    pub s: f64,
    pub t: f64,
    /// Peak modulus over background modulus (3 or 5).
    pub amplitude_ratio: f64,
    pub intensity_ratio: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RglResidual {
    pub max_abs_r_sigma: f64,
    pub max_abs_r_psi: f64,
    pub argmax_sigma_s: f64,
    pub argmax_sigma_t: f64,
    pub argmax_psi_s: f64,
    pub argmax_psi_t: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RglConserved {
    pub t: f64,
    pub n_sigma: f64,
    pub n_psi: f64,
    pub momentum: f64,
    pub hamiltonian: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RglAnalyticError {
    pub l2_rel: f64,
    pub linf_rel: f64,
}

/// Simulation options for `rgl_sim_new`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RglSimConfig {
    /// Periodic domain length.
    pub length: f64,
    /// Grid size, a power of two >= 16.
    pub n: usize,
    pub dt: f64,
    /// Initial time; the state is the closed-form solution at `t0`.
    pub t0: f64,
    pub dealias: bool,
    /// Replace `k` by the nearest wavenumber periodic on `length`.
    pub snap_k: bool,
}

/// Opaque simulation handle.
pub struct RglSim {
    params: RogonParams,
    order: Order,
    grid: Grid,
    stepper: Stepper,
    diagnostics: Diagnostics,
    state: SimState,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: RglStatus, message: impl Into<String>) -> RglStatus {
    set_error(message.into());
    status
}

fn from_error(e: RogonError) -> RglStatus {
    let status = match e {
        RogonError::InvalidParameter { .. } | RogonError::GridTooLarge { .. } => {
            RglStatus::InvalidParam
        }
        RogonError::NonPeriodicCarrier { .. } => RglStatus::NonPeriodicCarrier,
        RogonError::SingularDenominator { .. } => RglStatus::Singular,
        RogonError::NonFinite { .. } => RglStatus::NumericalAbort,
    };
    fail(status, e.to_string())
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard<F>(f: F) -> RglStatus
where
    F: FnOnce() -> Result<(), RglStatus>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RglStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(RglStatus::Panic, format!("panic: {msg}"))
        }
    }
}

unsafe fn read<'a, T>(p: *const T, what: &str) -> Result<&'a T, RglStatus> {
    p.as_ref()
        .ok_or_else(|| fail(RglStatus::NullPointer, format!("{what} is null")))
}

unsafe fn write<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, RglStatus> {
    p.as_mut()
        .ok_or_else(|| fail(RglStatus::NullPointer, format!("{what} is null")))
}

unsafe fn out_slice<'a, T>(
    p: *mut T,
    len: usize,
    need: usize,
    what: &str,
) -> Result<&'a mut [T], RglStatus> {
    if p.is_null() {
        return Err(fail(RglStatus::NullPointer, format!("{what} is null")));
    }
    if len < need {
        return Err(fail(
            RglStatus::BufferTooSmall,
            format!("{what} holds {len} elements, {need} required"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(p, need))
}

fn params(p: &RglParams) -> Result<RogonParams, RglStatus> {
    RogonParams::new(p.alpha, p.beta, p.a, p.b, p.k).map_err(from_error)
}

fn order(n: u32) -> Result<Order, RglStatus> {
    Order::from_int(n).map_err(from_error)
}

impl From<&FieldPair> for RglField {
    fn from(v: &FieldPair) -> Self {
        RglField {
            sigma_re: v.sigma.re,
            sigma_im: v.sigma.im,
            psi_re: v.psi.re,
            psi_im: v.psi.im,
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rgl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn rgl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Checks a parameter set without evaluating anything.
///
/// # Safety
/// `p` must be NULL or point to a valid `RglParams`.
#[no_mangle]
pub unsafe extern "C" fn rgl_params_validate(p: *const RglParams) -> RglStatus {
    guard(|| params(read(p, "params")?).map(|_| ()))
}

/// Closed-form field of order 1 or 2 at `(s, t)`.
///
/// # Safety
/// `p` and `out` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn rgl_eval(
    p: *const RglParams,
    order_n: u32,
    s: f64,
    t: f64,
    out: *mut RglField,
) -> RglStatus {
    guard(|| {
        let p = params(read(p, "params")?)?;
        let o = order(order_n)?;
        let out = write(out, "out")?;
        let v = rogon::eval_rogon(&p, o, PointST::new(s, t)).map_err(from_error)?;
        *out = RglField::from(&v);
        Ok(())
    })
}

/// Closed-form field on an `ns x nt` grid spanning `[s_min, s_max] x
/// [t_min, t_max]`. `out` must hold at least `ns * nt` elements.
///
/// # Safety
/// `p` must be NULL or valid; `out` must be NULL or valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn rgl_eval_grid(
    p: *const RglParams,
    order_n: u32,
    s_min: f64,
    s_max: f64,
    t_min: f64,
    t_max: f64,
    ns: usize,
    nt: usize,
    out: *mut RglField,
    out_len: usize,
) -> RglStatus {
    guard(|| {
        let p = params(read(p, "params")?)?;
        let o = order(order_n)?;
        let need = ns
            .checked_mul(nt)
            .ok_or_else(|| from_error(RogonError::GridTooLarge { ns, nt }))?;
        let out = out_slice(out, out_len, need, "out")?;
        let g =
            rogon::eval_grid(&p, o, (s_min, s_max), (t_min, t_max), ns, nt).map_err(from_error)?;
        for (dst, v) in out.iter_mut().zip(&g.values) {
            *dst = RglField::from(v);
        }
        Ok(())
    })
}

/// Location and height of the global intensity maximum.
///
/// # Safety
/// `p` and `out` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn rgl_peak_info(
    p: *const RglParams,
    order_n: u32,
    out: *mut RglPeak,
) -> RglStatus {
    guard(|| {
        let p = params(read(p, "params")?)?;
        let o = order(order_n)?;
        let out = write(out, "out")?;
        let peak = rogon::peak_info(&p, o).map_err(from_error)?;
        *out = RglPeak {
            s: peak.location.s,
            t: peak.location.t,
            amplitude_ratio: peak.amplitude_ratio,
            intensity_ratio: peak.intensity_ratio(),
        };
        Ok(())
    })
}

/// Maximum finite-difference residual of the closed form over a sample grid.
/// `fd_order` is 2, 4, 6 or 8.
///
/// # Safety
/// `p` and `out` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn rgl_residual_scan(
    p: *const RglParams,
    order_n: u32,
    s_min: f64,
    s_max: f64,
    t_min: f64,
    t_max: f64,
    ns: usize,
    nt: usize,
    h: f64,
    fd_order: u32,
    out: *mut RglResidual,
) -> RglStatus {
    guard(|| {
        let p = params(read(p, "params")?)?;
        let o = order(order_n)?;
        let fd = FdOrder::from_int(fd_order).map_err(from_error)?;
        let out = write(out, "out")?;
        let region = Region {
            s_range: (s_min, s_max),
            t_range: (t_min, t_max),
        };
        let field = move |p: &RogonParams, x: PointST| rogon::eval_rogon(p, o, x);
        let r = residual::residual_scan(field, &p, region, ns, nt, h, fd).map_err(from_error)?;
        *out = RglResidual {
            max_abs_r_sigma: r.max_abs_r_sigma,
            max_abs_r_psi: r.max_abs_r_psi,
            argmax_sigma_s: r.argmax_sigma.s,
            argmax_sigma_t: r.argmax_sigma.t,
            argmax_psi_s: r.argmax_psi.s,
            argmax_psi_t: r.argmax_psi.t,
        };
        Ok(())
    })
}

/// Creates a split-step simulation initialised from the closed form at
/// `cfg.t0`. On success `*out` owns a handle to release with `rgl_sim_free`.
///
/// # Safety
/// `p`, `cfg` and `out` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_new(
    p: *const RglParams,
    order_n: u32,
    cfg: *const RglSimConfig,
    out: *mut *mut RglSim,
) -> RglStatus {
    guard(|| {
        let mut p = params(read(p, "params")?)?;
        let o = order(order_n)?;
        let cfg = *read(cfg, "config")?;
        let out = write(out, "out")?;
        *out = ptr::null_mut();
        let grid = Grid::new(cfg.length, cfg.n).map_err(from_error)?;
        if cfg.snap_k {
            p = solver::snap_k(&p, &grid);
        }
        let mut sc = SolverConfig::new(cfg.dt, p.beta).map_err(from_error)?;
        sc.dealias = cfg.dealias;
        let stepper = Stepper::new(&grid, &sc).map_err(from_error)?;
        let state = solver::init_from_analytic(&p, o, &grid, cfg.t0).map_err(from_error)?;
        let sim = RglSim {
            params: p,
            order: o,
            diagnostics: Diagnostics::new(&grid, p.beta),
            grid,
            stepper,
            state,
        };
        *out = Box::into_raw(Box::new(sim));
        Ok(())
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `sim` must be NULL or a handle from `rgl_sim_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_free(sim: *mut RglSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advances the simulation to exactly `t_end` (>= current time).
///
/// # Safety
/// `sim` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_evolve(sim: *mut RglSim, t_end: f64) -> RglStatus {
    guard(|| {
        let sim = write(sim, "sim")?;
        solver::evolve(&mut sim.state, &mut sim.stepper, u64::MAX, t_end, &mut [])
            .map(|_| ())
            .map_err(from_error)
    })
}

/// Current simulation time, or NaN for a NULL handle.
///
/// # Safety
/// `sim` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_time(sim: *const RglSim) -> f64 {
    sim.as_ref().map_or(f64::NAN, |s| s.state.t)
}

/// Number of grid points, or 0 for a NULL handle.
///
/// # Safety
/// `sim` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_len(sim: *const RglSim) -> usize {
    sim.as_ref().map_or(0, |s| s.state.len())
}

/// Effective parameters, including a snapped `k`.
///
/// # Safety
/// `sim` and `out` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_params(sim: *const RglSim, out: *mut RglParams) -> RglStatus {
    guard(|| {
        let p = read(sim, "sim")?.params;
        *write(out, "out")? = RglParams {
            alpha: p.alpha,
            beta: p.beta,
            a: p.a,
            b: p.b,
            k: p.k,
        };
        Ok(())
    })
}

/// Copies the grid abscissae into `s_out` (length >= `rgl_sim_len`).
///
/// # Safety
/// `sim` must be NULL or a live handle; `s_out` NULL or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_grid(
    sim: *const RglSim,
    s_out: *mut f64,
    len: usize,
) -> RglStatus {
    guard(|| {
        let sim = read(sim, "sim")?;
        let s = sim.grid.s();
        out_slice(s_out, len, s.len(), "s_out")?.copy_from_slice(s);
        Ok(())
    })
}

/// Copies the current fields into `out` (length >= `rgl_sim_len`).
///
/// # Safety
/// `sim` must be NULL or a live handle; `out` NULL or valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_fields(
    sim: *const RglSim,
    out: *mut RglField,
    len: usize,
) -> RglStatus {
    guard(|| {
        let sim = read(sim, "sim")?;
        let st = &sim.state;
        let out = out_slice(out, len, st.len(), "out")?;
        for ((dst, sigma), psi) in out.iter_mut().zip(&st.sigma).zip(&st.psi) {
            *dst = RglField::from(&FieldPair {
                sigma: *sigma,
                psi: *psi,
            });
        }
        Ok(())
    })
}

/// Norms, momentum and Hamiltonian of the current state.
///
/// # Safety
/// `sim` and `out` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_conserved(sim: *mut RglSim, out: *mut RglConserved) -> RglStatus {
    guard(|| {
        let sim = write(sim, "sim")?;
        let out = write(out, "out")?;
        let c = sim.diagnostics.conserved(&sim.state);
        *out = RglConserved {
            t: c.t,
            n_sigma: c.n_sigma,
            n_psi: c.n_psi,
            momentum: c.momentum,
            hamiltonian: c.hamiltonian,
        };
        Ok(())
    })
}

/// Relative deviation of the current state from the closed form.
///
/// # Safety
/// `sim` and `out` must be NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn rgl_sim_compare(
    sim: *const RglSim,
    out: *mut RglAnalyticError,
) -> RglStatus {
    guard(|| {
        let sim = read(sim, "sim")?;
        let out = write(out, "out")?;
        let e = solver::compare_to_analytic(&sim.state, &sim.params, sim.order, &sim.grid)
            .map_err(from_error)?;
        *out = RglAnalyticError {
            l2_rel: e.l2_rel,
            linf_rel: e.linf_rel,
        };
        Ok(())
    })
}
