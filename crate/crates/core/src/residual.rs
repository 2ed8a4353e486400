//! Finite-difference residuals of the coupled system.
//!
//! For a candidate field `(σ, ψ)` this computes
//!
//! ```text
//! r_σ = i σ_t + ½ σ_SS + β (|σ|² + |ψ|²) σ
//! r_ψ = i ψ_t + ½ ψ_SS + β (|σ|² + |ψ|²) ψ
//! ```
//!
//! with both derivatives taken by central differences of the candidate
//! re-evaluated at stencil points. Nothing here differentiates the closed
//! forms symbolically, so a transcription error in the evaluators shows up as
//! an O(1) residual that does not shrink with `h`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, RogonError};
use crate::params::{ComplexValue, FieldPair, PointST, RogonParams};

/// Steps below this are dominated by cancellation in the high-order stencils.
pub const MIN_RECOMMENDED_STEP: f64 = 1e-4;

/// Residuals at or below this magnitude count as exact zeros in a study.
pub const EXACT_RESIDUAL: f64 = 1e-13;

/// Accuracy order of the central-difference stencils.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(into = "u32")]
pub enum FdOrder {
    Two,
    Four,
    Six,
    Eight,
}

impl From<FdOrder> for u32 {
    fn from(o: FdOrder) -> u32 {
        o.as_int()
    }
}

impl FdOrder {
    pub const ALL: [FdOrder; 4] = [FdOrder::Two, FdOrder::Four, FdOrder::Six, FdOrder::Eight];

    pub fn from_int(n: u32) -> Result<Self> {
        match n {
            2 => Ok(FdOrder::Two),
            4 => Ok(FdOrder::Four),
            6 => Ok(FdOrder::Six),
            8 => Ok(FdOrder::Eight),
            _ => Err(RogonError::param(
                "fd-order",
                format!("must be one of 2, 4, 6, 8, got {n}"),
            )),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            FdOrder::Two => 2,
            FdOrder::Four => 4,
            FdOrder::Six => 6,
            FdOrder::Eight => 8,
        }
    }

    /// Weights for offsets `1..=m` of the first derivative; the stencil is
    /// antisymmetric and has no centre weight.
    fn first_derivative(self) -> &'static [f64] {
        match self {
            FdOrder::Two => &[1.0 / 2.0],
            FdOrder::Four => &[2.0 / 3.0, -1.0 / 12.0],
            FdOrder::Six => &[3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
            FdOrder::Eight => &[4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0],
        }
    }

    /// Centre weight and weights for offsets `1..=m` of the second derivative.
    fn second_derivative(self) -> (f64, &'static [f64]) {
        match self {
            FdOrder::Two => (-2.0, &[1.0]),
            FdOrder::Four => (-5.0 / 2.0, &[4.0 / 3.0, -1.0 / 12.0]),
            FdOrder::Six => (-49.0 / 18.0, &[3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0]),
            FdOrder::Eight => (
                -205.0 / 72.0,
                &[8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0],
            ),
        }
    }
}

/// Residuals of both equations at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSample {
    pub point: PointST,
    pub r_sigma: ComplexValue,
    pub r_psi: ComplexValue,
}

fn check_step(h: f64) -> Result<()> {
    if !(h.is_finite() && h > 0.0) {
        return Err(RogonError::param(
            "h",
            format!("must be finite and > 0, got {h}"),
        ));
    }
    Ok(())
}

fn step_warning(h: f64) -> Option<String> {
    (h < MIN_RECOMMENDED_STEP).then(|| {
        format!(
            "step h = {h:e} is below {MIN_RECOMMENDED_STEP:e}; residuals are roundoff-dominated"
        )
    })
}

/// Residual of both equations at `x`, with step `h` in both `S` and `t`.
pub fn residual_at<F>(
    field_fn: F,
    p: &RogonParams,
    x: PointST,
    h: f64,
    fd_order: FdOrder,
) -> Result<ResidualSample>
where
    F: Fn(&RogonParams, PointST) -> Result<FieldPair>,
{
    check_step(h)?;
    let centre = field_fn(p, x)?;

    let mut dt = FieldPair::ZERO;
    for (j, &w) in fd_order.first_derivative().iter().enumerate() {
        let off = (j + 1) as f64 * h;
        let fwd = field_fn(p, PointST::new(x.s, x.t + off))?;
        let back = field_fn(p, PointST::new(x.s, x.t - off))?;
        dt.sigma += (fwd.sigma - back.sigma) * w;
        dt.psi += (fwd.psi - back.psi) * w;
    }
    dt.sigma /= h;
    dt.psi /= h;

    let (w0, weights) = fd_order.second_derivative();
    let mut dss = FieldPair {
        sigma: centre.sigma * w0,
        psi: centre.psi * w0,
    };
    for (j, &w) in weights.iter().enumerate() {
        let off = (j + 1) as f64 * h;
        let right = field_fn(p, PointST::new(x.s + off, x.t))?;
        let left = field_fn(p, PointST::new(x.s - off, x.t))?;
        dss.sigma += (right.sigma + left.sigma) * w;
        dss.psi += (right.psi + left.psi) * w;
    }
    let h2 = h * h;
    dss.sigma /= h2;
    dss.psi /= h2;

    let potential = p.beta * centre.combined_intensity();
    let i = ComplexValue::i();
    Ok(ResidualSample {
        point: x,
        r_sigma: i * dt.sigma + dss.sigma * 0.5 + centre.sigma * potential,
        r_psi: i * dt.psi + dss.psi * 0.5 + centre.psi * potential,
    })
}

/// Rectangular `(S, t)` region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Region {
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
}

impl Region {
    /// `S ∈ [-5, 5]`, `t ∈ [-3, 3]`: the peak and its flanking dips.
    pub const DEFAULT: Region = Region {
        s_range: (-5.0, 5.0),
        t_range: (-3.0, 3.0),
    };
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub region: Region,
    pub ns: usize,
    pub nt: usize,
    pub sampling: usize,
    pub fd_order: FdOrder,
    pub h: f64,
    pub max_abs_r_sigma: f64,
    pub max_abs_r_psi: f64,
    pub argmax_sigma: PointST,
    pub argmax_psi: PointST,
    pub warnings: Vec<String>,
}

impl ResidualReport {
    pub fn max_abs(&self) -> f64 {
        self.max_abs_r_sigma.max(self.max_abs_r_psi)
    }
}

/// Maximum residuals over an `ns × nt` sample grid of `region`.
pub fn residual_scan<F>(
    field_fn: F,
    p: &RogonParams,
    region: Region,
    ns: usize,
    nt: usize,
    h: f64,
    fd_order: FdOrder,
) -> Result<ResidualReport>
where
    F: Fn(&RogonParams, PointST) -> Result<FieldPair> + Sync,
{
    check_step(h)?;
    if ns < 2 || nt < 2 {
        return Err(RogonError::param(
            "ns",
            format!("residual scan needs at least 2 samples per axis, got {ns} x {nt}"),
        ));
    }
    for (lo, hi) in [region.s_range, region.t_range] {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(RogonError::param(
                "region",
                format!("must be finite with min <= max, got [{lo}, {hi}]"),
            ));
        }
    }
    let s = crate::rogon::linspace(region.s_range.0, region.s_range.1, ns);
    let t = crate::rogon::linspace(region.t_range.0, region.t_range.1, nt);

    let samples = (0..ns * nt)
        .into_par_iter()
        .map(|idx| {
            let x = PointST::new(s[idx % ns], t[idx / ns]);
            residual_at(&field_fn, p, x, h, fd_order)
        })
        .collect::<Result<Vec<_>>>()?;

    let argmax = |pick: fn(&ResidualSample) -> f64| {
        samples.iter().fold((0.0f64, samples[0].point), |acc, r| {
            let v = pick(r);
            if v > acc.0 || v.is_nan() {
                (v, r.point)
            } else {
                acc
            }
        })
    };
    let (max_sigma, at_sigma) = argmax(|r| r.r_sigma.norm());
    let (max_psi, at_psi) = argmax(|r| r.r_psi.norm());

    Ok(ResidualReport {
        region,
        ns,
        nt,
        sampling: ns * nt,
        fd_order,
        h,
        max_abs_r_sigma: max_sigma,
        max_abs_r_psi: max_psi,
        argmax_sigma: at_sigma,
        argmax_psi: at_psi,
        warnings: step_warning(h).into_iter().collect(),
    })
}

/// Fitted convergence rate of one component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Slope {
    /// Every residual was at or below [`EXACT_RESIDUAL`]; no rate to fit.
    Exact,
    Measured(f64),
}

impl Slope {
    pub fn measured(self) -> Option<f64> {
        match self {
            Slope::Exact => None,
            Slope::Measured(v) => Some(v),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub point: PointST,
    pub fd_order: FdOrder,
    pub h: Vec<f64>,
    pub r_sigma: Vec<f64>,
    pub r_psi: Vec<f64>,
    pub slope_sigma: Slope,
    pub slope_psi: Slope,
    /// Residuals stopped decreasing at the small-`h` end, or a step fell
    /// below [`MIN_RECOMMENDED_STEP`].
    pub roundoff_tail: bool,
}

impl ConvergenceStudy {
    /// Table with one row per step size.
    pub fn table(&self) -> String {
        let mut out = format!(
            "fd_order = {}  at S = {}, t = {}\n{:>12}  {:>14}  {:>14}\n",
            self.fd_order.as_int(),
            self.point.s,
            self.point.t,
            "h",
            "|r_sigma|",
            "|r_psi|"
        );
        for ((h, rs), rp) in self.h.iter().zip(&self.r_sigma).zip(&self.r_psi) {
            out.push_str(&format!("{h:>12.4e}  {rs:>14.6e}  {rp:>14.6e}\n"));
        }
        let fmt = |s: Slope| match s {
            Slope::Exact => "exact".to_string(),
            Slope::Measured(v) => format!("{v:.3}"),
        };
        out.push_str(&format!(
            "slope sigma = {}  slope psi = {}{}\n",
            fmt(self.slope_sigma),
            fmt(self.slope_psi),
            if self.roundoff_tail {
                "  (roundoff tail)"
            } else {
                ""
            }
        ));
        out
    }
}

/// Least-squares slope of `log r` against `log h`, skipping exact zeros.
fn loglog_slope(h: &[f64], r: &[f64]) -> Slope {
    let pts: Vec<(f64, f64)> = h
        .iter()
        .zip(r)
        .filter(|(_, &r)| r > EXACT_RESIDUAL)
        .map(|(&h, &r)| (h.ln(), r.ln()))
        .collect();
    if pts.len() < 2 {
        return Slope::Exact;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Slope::Measured(sxy / sxx)
}

fn rising_tail(r: &[f64]) -> bool {
    r.windows(2)
        .last()
        .is_some_and(|w| w[0] > EXACT_RESIDUAL && w[1] > w[0])
}

/// Measures how the residual at `x` shrinks as `h` goes through `h_list`.
pub fn convergence_study<F>(
    field_fn: F,
    p: &RogonParams,
    x: PointST,
    fd_order: FdOrder,
    h_list: &[f64],
) -> Result<ConvergenceStudy>
where
    F: Fn(&RogonParams, PointST) -> Result<FieldPair>,
{
    if h_list.len() < 4 {
        return Err(RogonError::param(
            "h",
            format!(
                "convergence study needs at least 4 steps, got {}",
                h_list.len()
            ),
        ));
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(RogonError::param("h", "steps must be strictly decreasing"));
    }
    let mut r_sigma = Vec::with_capacity(h_list.len());
    let mut r_psi = Vec::with_capacity(h_list.len());
    for &h in h_list {
        let r = residual_at(&field_fn, p, x, h, fd_order)?;
        r_sigma.push(r.r_sigma.norm());
        r_psi.push(r.r_psi.norm());
    }
    let too_small = h_list.iter().any(|&h| h < MIN_RECOMMENDED_STEP);
    Ok(ConvergenceStudy {
        point: x,
        fd_order,
        slope_sigma: loglog_slope(h_list, &r_sigma),
        slope_psi: loglog_slope(h_list, &r_psi),
        roundoff_tail: too_small || rising_tail(&r_sigma) || rising_tail(&r_psi),
        h: h_list.to_vec(),
        r_sigma,
        r_psi,
    })
}

/// Plane-wave background `(A_σ, A_ψ)·exp(i[kS + (α² - k²)t/2])`, an exact
/// solution of the system.
pub fn plane_wave(p: &RogonParams, x: PointST) -> Result<FieldPair> {
    let (a_sigma, a_psi) = crate::rogon::background_amplitudes(p)?;
    let c = crate::rogon::carrier_phase(p, x)?;
    Ok(FieldPair {
        sigma: c * a_sigma,
        psi: c * a_psi,
    })
}

/// Rogon with its carrier stripped off: `A·F(S - kt, t)`. Not a solution;
/// used as a negative control.
pub fn corrupted_rogon(
    order: crate::params::Order,
) -> impl Fn(&RogonParams, PointST) -> Result<FieldPair> + Sync + Copy {
    move |p, x| {
        let (a_sigma, a_psi) = crate::rogon::background_amplitudes(p)?;
        let f = crate::rogon::rogon_factor(p, order, x)?;
        Ok(FieldPair {
            sigma: f * a_sigma,
            psi: f * a_psi,
        })
    }
}
