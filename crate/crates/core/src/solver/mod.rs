//! Strang split-step Fourier integrator for the coupled system on a periodic
//! `S` domain.
//!
//! One step of size `dt` is: half linear step (each Fourier mode times
//! `exp(-iκ²dt/4)`), full nonlinear step (each point times
//! `exp(iβ(|σ|² + |ψ|²)dt)`), half linear step. Both substeps are unitary and
//! apply the same multiplier to `σ` and `ψ`, so per-component norms and the
//! ratio `ψ/σ` are preserved up to roundoff.

mod diagnostics;
mod grid;
mod spectral;

pub use diagnostics::{
    compare_to_analytic, conserved_quantities, AnalyticError, ConservedReport, ConservedSeries,
    Diagnostics, SeriesRow,
};
pub use grid::{make_grid, Grid};
pub use spectral::Spectral;

use serde::Serialize;

use crate::error::{Result, RogonError};
use crate::params::{ComplexValue, Order, RogonParams};
use crate::rogon::eval_rogon;

/// Largest step count `evolve` accepts for one call.
pub const MAX_STEPS: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    pub dt: f64,
    pub beta: f64,
    /// Observers fire every this many steps.
    pub record_every: u64,
    /// Zero modes with `|j| > N/3` after each nonlinear substep.
    pub dealias: bool,
}

impl SolverConfig {
    pub const MAX_DT: f64 = 0.1;

    pub fn new(dt: f64, beta: f64) -> Result<Self> {
        let cfg = SolverConfig {
            dt,
            beta,
            record_every: 1,
            dealias: false,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= Self::MAX_DT) {
            return Err(RogonError::param(
                "dt",
                format!("must be in (0, {}], got {}", Self::MAX_DT, self.dt),
            ));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(RogonError::param(
                "beta",
                format!("must be finite and > 0, got {}", self.beta),
            ));
        }
        if self.record_every == 0 {
            return Err(RogonError::param("record-every", "must be >= 1"));
        }
        Ok(())
    }
}

/// Discretised `(σ, ψ)` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub sigma: Vec<ComplexValue>,
    pub psi: Vec<ComplexValue>,
}

impl SimState {
    pub fn zeros(n: usize, t: f64) -> Self {
        SimState {
            t,
            sigma: vec![ComplexValue::default(); n],
            psi: vec![ComplexValue::default(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.sigma
            .iter()
            .chain(&self.psi)
            .all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

/// Samples the closed-form solution on the grid at `t0`.
///
/// `p.k` must be a periodic carrier on the grid (see
/// [`Grid::check_periodic_k`]); use [`snap_k`] first to move it there.
pub fn init_from_analytic(p: &RogonParams, order: Order, g: &Grid, t0: f64) -> Result<SimState> {
    p.validate()?;
    if !t0.is_finite() {
        return Err(RogonError::param("t0", format!("must be finite, got {t0}")));
    }
    g.check_periodic_k(p.k)?;
    let mut state = SimState::zeros(g.n, t0);
    for (j, &s) in g.s().iter().enumerate() {
        let v = eval_rogon(p, order, crate::params::PointST::new(s, t0))?;
        state.sigma[j] = v.sigma;
        state.psi[j] = v.psi;
    }
    Ok(state)
}

/// Returns `p` with `k` moved to the nearest periodic carrier of `g`.
pub fn snap_k(p: &RogonParams, g: &Grid) -> RogonParams {
    p.with_k(g.nearest_periodic_k(p.k).0)
}

/// Precomputed propagator for a fixed grid and step.
#[derive(Debug, Clone)]
pub struct Stepper {
    kappa: Vec<f64>,
    dealias_mask: Option<Vec<bool>>,
    beta: f64,
    dt: f64,
    half_linear: Vec<ComplexValue>,
    spectral: Spectral,
    steps_taken: u64,
}

impl Stepper {
    pub fn new(g: &Grid, cfg: &SolverConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self::with_step(g, cfg.beta, cfg.dt, cfg.dealias))
    }

    /// Propagator for an arbitrary finite (possibly negative) step.
    pub fn with_step(g: &Grid, beta: f64, dt: f64, dealias: bool) -> Self {
        let dealias_mask = dealias.then(|| {
            let cutoff = g.n as i64 / 3;
            (0..g.n).map(|j| g.mode_index(j).abs() <= cutoff).collect()
        });
        Stepper {
            kappa: g.kappa().to_vec(),
            dealias_mask,
            beta,
            dt,
            half_linear: half_linear_multipliers(g.kappa(), dt),
            spectral: Spectral::new(g.n),
            steps_taken: 0,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    /// Advances `state` by the configured `dt`.
    pub fn step(&mut self, state: &mut SimState) -> Result<()> {
        let mult = std::mem::take(&mut self.half_linear);
        let r = self.strang(state, self.dt, &mult);
        self.half_linear = mult;
        r
    }

    /// Advances by an arbitrary step `h` without changing the configured one.
    pub fn step_by(&mut self, state: &mut SimState, h: f64) -> Result<()> {
        if h == self.dt {
            return self.step(state);
        }
        let mult = half_linear_multipliers(&self.kappa, h);
        self.strang(state, h, &mult)
    }

    fn strang(&mut self, state: &mut SimState, h: f64, half: &[ComplexValue]) -> Result<()> {
        debug_assert_eq!(state.len(), self.kappa.len());
        for u in [&mut state.sigma, &mut state.psi] {
            self.spectral.forward(u);
            for (v, m) in u.iter_mut().zip(half) {
                *v *= m;
            }
            self.spectral.inverse(u);
        }

        let bh = self.beta * h;
        for (s, p) in state.sigma.iter_mut().zip(state.psi.iter_mut()) {
            let rot = ComplexValue::cis(bh * (s.norm_sqr() + p.norm_sqr()));
            *s *= rot;
            *p *= rot;
        }

        for u in [&mut state.sigma, &mut state.psi] {
            self.spectral.forward(u);
            match &self.dealias_mask {
                Some(mask) => {
                    for ((v, m), &keep) in u.iter_mut().zip(half).zip(mask) {
                        *v = if keep {
                            *v * m
                        } else {
                            ComplexValue::default()
                        };
                    }
                }
                None => {
                    for (v, m) in u.iter_mut().zip(half) {
                        *v *= m;
                    }
                }
            }
            self.spectral.inverse(u);
        }

        self.steps_taken += 1;
        state.t += h;
        if !state.is_finite() {
            return Err(RogonError::NonFinite {
                step: self.steps_taken,
                t: state.t,
            });
        }
        Ok(())
    }
}

fn half_linear_multipliers(kappa: &[f64], dt: f64) -> Vec<ComplexValue> {
    kappa
        .iter()
        .map(|k| ComplexValue::cis(-k * k * dt / 4.0))
        .collect()
}

/// One Strang step with a freshly built propagator.
pub fn step(state: &mut SimState, g: &Grid, cfg: &SolverConfig) -> Result<()> {
    Stepper::new(g, cfg)?.step(state)
}

/// Receives the state at step 0, every `record_every` steps, and at the end.
pub trait Observer {
    fn observe(&mut self, step: u64, state: &SimState) -> Result<()>;
}

impl<F> Observer for F
where
    F: FnMut(u64, &SimState) -> Result<()>,
{
    fn observe(&mut self, step: u64, state: &SimState) -> Result<()> {
        self(step, state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveSummary {
    pub steps: u64,
    pub t_end: f64,
}

/// Steps `state` from its current time to exactly `t_end`.
///
/// Times are computed as `t0 + i·dt` rather than accumulated, and the last
/// step is shortened to land on `t_end`.
pub fn evolve(
    state: &mut SimState,
    stepper: &mut Stepper,
    record_every: u64,
    t_end: f64,
    observers: &mut [&mut dyn Observer],
) -> Result<EvolveSummary> {
    if record_every == 0 {
        return Err(RogonError::param("record-every", "must be >= 1"));
    }
    if !t_end.is_finite() || t_end < state.t {
        return Err(RogonError::param(
            "t-end",
            format!(
                "must be finite and >= current time {}, got {t_end}",
                state.t
            ),
        ));
    }
    let dt = stepper.dt();
    if dt.is_nan() || dt <= 0.0 {
        return Err(RogonError::param("dt", "evolve needs a positive step"));
    }
    let t0 = state.t;
    let span = (t_end - t0) / dt;
    if span > MAX_STEPS {
        return Err(RogonError::param(
            "t-end",
            format!("{span:.3e} steps exceeds the limit of {MAX_STEPS:e}"),
        ));
    }
    let rounded = span.round();
    let n_steps = if (span - rounded).abs() <= 1e-9 * span.max(1.0) {
        rounded as u64
    } else {
        span.ceil() as u64
    };

    for obs in observers.iter_mut() {
        obs.observe(0, state)?;
    }
    for i in 1..=n_steps {
        if i < n_steps {
            stepper.step(state)?;
            state.t = t0 + i as f64 * dt;
        } else {
            let h = t_end - state.t;
            stepper.step_by(state, h)?;
            state.t = t_end;
        }
        if i % record_every == 0 || i == n_steps {
            for obs in observers.iter_mut() {
                obs.observe(i, state)?;
            }
        }
    }
    Ok(EvolveSummary {
        steps: n_steps,
        t_end: state.t,
    })
}
