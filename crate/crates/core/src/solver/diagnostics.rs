use serde::Serialize;

use super::{Grid, Observer, SimState, Spectral};
use crate::error::Result;
use crate::params::{ComplexValue, Order, PointST, RogonParams};
use crate::rogon::eval_rogon;

/// Invariants of the coupled flow, by periodic rectangle-rule quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConservedReport {
    pub t: f64,
    /// `∫|σ|² dS`
    pub n_sigma: f64,
    /// `∫|ψ|² dS`
    pub n_psi: f64,
    /// `Im ∫ (σ* σ_S + ψ* ψ_S) dS`
    pub momentum: f64,
    /// `∫ [½(|σ_S|² + |ψ_S|²) - (β/2)(|σ|² + |ψ|²)²] dS`
    pub hamiltonian: f64,
}

/// Reusable buffers for computing [`ConservedReport`]s on one grid.
#[derive(Debug, Clone)]
pub struct Diagnostics {
    kappa: Vec<f64>,
    ds: f64,
    beta: f64,
    spectral: Spectral,
    d_sigma: Vec<ComplexValue>,
    d_psi: Vec<ComplexValue>,
}

impl Diagnostics {
    pub fn new(g: &Grid, beta: f64) -> Self {
        Diagnostics {
            kappa: g.kappa().to_vec(),
            ds: g.ds,
            beta,
            spectral: Spectral::new(g.n),
            d_sigma: Vec::with_capacity(g.n),
            d_psi: Vec::with_capacity(g.n),
        }
    }

    pub fn conserved(&mut self, state: &SimState) -> ConservedReport {
        self.spectral
            .derivative(&state.sigma, &self.kappa, &mut self.d_sigma);
        self.spectral
            .derivative(&state.psi, &self.kappa, &mut self.d_psi);

        let mut n_sigma = 0.0;
        let mut n_psi = 0.0;
        let mut momentum = 0.0;
        let mut hamiltonian = 0.0;
        for j in 0..state.len() {
            let (s, p) = (state.sigma[j], state.psi[j]);
            let (ds, dp) = (self.d_sigma[j], self.d_psi[j]);
            let is = s.norm_sqr();
            let ip = p.norm_sqr();
            n_sigma += is;
            n_psi += ip;
            momentum += (s.conj() * ds + p.conj() * dp).im;
            let total = is + ip;
            hamiltonian += 0.5 * (ds.norm_sqr() + dp.norm_sqr()) - 0.5 * self.beta * total * total;
        }
        ConservedReport {
            t: state.t,
            n_sigma: n_sigma * self.ds,
            n_psi: n_psi * self.ds,
            momentum: momentum * self.ds,
            hamiltonian: hamiltonian * self.ds,
        }
    }
}

pub fn conserved_quantities(state: &SimState, g: &Grid, beta: f64) -> ConservedReport {
    Diagnostics::new(g, beta).conserved(state)
}

/// Numeric-vs-closed-form error of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticError {
    /// `‖Δ(σ,ψ)‖₂ / ‖(σ,ψ)_exact‖₂` over the grid.
    pub l2_rel: f64,
    /// `max_j |Δ(σ,ψ)_j| / √(α²/(2β))`, relative to the background amplitude.
    pub linf_rel: f64,
}

pub fn compare_to_analytic(
    state: &SimState,
    p: &RogonParams,
    order: Order,
    g: &Grid,
) -> Result<AnalyticError> {
    let mut err2 = 0.0;
    let mut ref2 = 0.0;
    let mut worst = 0.0f64;
    for (j, &s) in g.s().iter().enumerate() {
        let exact = eval_rogon(p, order, PointST::new(s, state.t))?;
        let d = (state.sigma[j] - exact.sigma).norm_sqr() + (state.psi[j] - exact.psi).norm_sqr();
        err2 += d;
        ref2 += exact.combined_intensity();
        worst = worst.max(d);
    }
    Ok(AnalyticError {
        l2_rel: (err2 / ref2).sqrt(),
        linf_rel: (worst / p.background_intensity()).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRow {
    pub step: u64,
    #[serde(flatten)]
    pub conserved: ConservedReport,
    pub l2_rel_vs_analytic: Option<f64>,
}

/// Observer recording conserved quantities and, optionally, the error
/// against a closed-form reference.
#[derive(Debug, Clone)]
pub struct ConservedSeries {
    diagnostics: Diagnostics,
    grid: Grid,
    reference: Option<(RogonParams, Order)>,
    pub rows: Vec<SeriesRow>,
}

impl ConservedSeries {
    pub fn new(g: &Grid, beta: f64) -> Self {
        ConservedSeries {
            diagnostics: Diagnostics::new(g, beta),
            grid: g.clone(),
            reference: None,
            rows: Vec::new(),
        }
    }

    pub fn with_reference(mut self, p: RogonParams, order: Order) -> Self {
        self.reference = Some((p, order));
        self
    }

    /// Largest `|N(t) - N(t₀)| / N(t₀)` over both components.
    pub fn max_norm_drift(&self) -> f64 {
        let Some(first) = self.rows.first() else {
            return 0.0;
        };
        let rel = |now: f64, start: f64| {
            if start == 0.0 {
                now.abs()
            } else {
                ((now - start) / start).abs()
            }
        };
        self.rows
            .iter()
            .map(|r| {
                rel(r.conserved.n_sigma, first.conserved.n_sigma)
                    .max(rel(r.conserved.n_psi, first.conserved.n_psi))
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|H(t) - H(t₀)| / |H(t₀)|`.
    pub fn max_hamiltonian_drift(&self) -> f64 {
        let Some(first) = self.rows.first() else {
            return 0.0;
        };
        let h0 = first.conserved.hamiltonian;
        let scale = if h0 == 0.0 { 1.0 } else { h0.abs() };
        self.rows
            .iter()
            .map(|r| (r.conserved.hamiltonian - h0).abs() / scale)
            .fold(0.0, f64::max)
    }
}

impl Observer for ConservedSeries {
    fn observe(&mut self, step: u64, state: &SimState) -> Result<()> {
        let conserved = self.diagnostics.conserved(state);
        let l2 = match &self.reference {
            Some((p, order)) => Some(compare_to_analytic(state, p, *order, &self.grid)?.l2_rel),
            None => None,
        };
        self.rows.push(SeriesRow {
            step,
            conserved,
            l2_rel_vs_analytic: l2,
        });
        Ok(())
    }
}
