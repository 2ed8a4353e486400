//! Closed-form one- and two-rogon solutions of the coupled volatility /
//! option-pricing system
//!
//! ```text
//! i σ_t = -½ σ_SS - β (|σ|² + |ψ|²) σ
//! i ψ_t = -½ ψ_SS - β (|σ|² + |ψ|²) ψ
//! ```
//!
//! Both families share the form
//!
//! ```text
//! (σ, ψ) = α (a, b) / √(2β(a² + b²)) · F(S - kt, t) · exp(i[kS + (α² - k²)t/2])
//! ```
//!
//! where `F` is a rational factor: `F₁ = 1 - 4(1 + iα²t)/(1 + 2α²ξ² + α⁴t²)`
//! for order one and `F₂ = 1 + (P₂ - ½iα²t Q₂)/H₂` for order two, with
//! `ξ = S - kt`. All rational terms depend on `ξ` and `t` only through
//! `α²ξ²` and `α⁴t²`, which is how they are evaluated here.

use rayon::prelude::*;

use crate::error::{Result, RogonError};
use crate::params::{ComplexValue, FieldPair, Order, PointST, RogonParams};

/// Hard cap on batched evaluation size (points).
pub const MAX_GRID_POINTS: usize = 1 << 28;

/// Scaled comoving variables `(α²ξ², α⁴t²)` with `ξ = S - kt`.
#[inline]
fn scaled_squares(p: &RogonParams, x: PointST) -> (f64, f64) {
    let xi = x.s - p.k * x.t;
    let u = p.alpha * xi;
    let v = p.alpha * p.alpha * x.t;
    (u * u, v * v)
}

/// `α / √(2β(a² + b²))`, the amplitude per unit of component weight.
#[inline]
fn unit_amplitude(p: &RogonParams) -> f64 {
    p.alpha / (2.0 * p.beta * (p.a * p.a + p.b * p.b)).sqrt()
}

/// Background amplitudes `(A_σ, A_ψ)`; they satisfy `A_σ² + A_ψ² = α²/(2β)`.
pub fn background_amplitudes(p: &RogonParams) -> Result<(f64, f64)> {
    p.validate()?;
    let unit = unit_amplitude(p);
    Ok((unit * p.a, unit * p.b))
}

/// Unit-modulus carrier `exp(i[kS + (α² - k²)t/2])`.
pub fn carrier_phase(p: &RogonParams, x: PointST) -> Result<ComplexValue> {
    p.validate()?;
    Ok(carrier_unchecked(p, x))
}

#[inline]
fn carrier_unchecked(p: &RogonParams, x: PointST) -> ComplexValue {
    let phase = p.k * x.s + 0.5 * (p.alpha * p.alpha - p.k * p.k) * x.t;
    ComplexValue::cis(phase)
}

/// First-order rational factor `1 - 4(1 + iα²t)/(1 + 2α²ξ² + α⁴t²)`.
pub fn rogon1_factor(p: &RogonParams, x: PointST) -> Result<ComplexValue> {
    p.validate()?;
    Ok(rogon1_factor_unchecked(p, x))
}

#[inline]
fn rogon1_factor_unchecked(p: &RogonParams, x: PointST) -> ComplexValue {
    let (u2, v2) = scaled_squares(p, x);
    let denom = 1.0 + 2.0 * u2 + v2;
    let numer = ComplexValue::new(4.0, 4.0 * p.alpha * p.alpha * x.t);
    ComplexValue::new(1.0, 0.0) - numer / denom
}

// P₂, Q₂, H₂ in the scaled squares u2 = α²ξ², v2 = α⁴t², Horner in u2 with
// Horner coefficients in v2.

#[inline]
fn p2_scaled(u2: f64, v2: f64) -> f64 {
    let c0 = (-0.625 * v2 - 2.25) * v2 + 0.375;
    let c1 = -1.5 * v2 - 1.5;
    let c2 = -0.5;
    (c2 * u2 + c1) * u2 + c0
}

#[inline]
fn q2_scaled(u2: f64, v2: f64) -> f64 {
    let c0 = (0.25 * v2 + 0.5) * v2 - 3.75;
    let c1 = v2 - 3.0;
    (u2 + c1) * u2 + c0
}

#[inline]
fn h2_scaled(u2: f64, v2: f64) -> f64 {
    let c0 = (((1.0 / 96.0) * v2 + 9.0 / 32.0) * v2 + 33.0 / 32.0) * v2 + 3.0 / 32.0;
    let c1 = (v2 / 16.0 - 0.375) * v2 + 9.0 / 16.0;
    let c2 = 0.125 * v2 + 0.125;
    let c3 = 1.0 / 12.0;
    ((c3 * u2 + c2) * u2 + c1) * u2 + c0
}

/// `P₂(S, t)`, the real numerator polynomial of the two-rogon factor.
pub fn poly_p2(p: &RogonParams, x: PointST) -> Result<f64> {
    p.validate()?;
    let (u2, v2) = scaled_squares(p, x);
    Ok(p2_scaled(u2, v2))
}

/// `Q₂(S, t)`, multiplied by `-½iα²t` in the imaginary numerator.
pub fn poly_q2(p: &RogonParams, x: PointST) -> Result<f64> {
    p.validate()?;
    let (u2, v2) = scaled_squares(p, x);
    Ok(q2_scaled(u2, v2))
}

/// `H₂(S, t)`, the denominator; positive for all real arguments.
pub fn poly_h2(p: &RogonParams, x: PointST) -> Result<f64> {
    p.validate()?;
    let (u2, v2) = scaled_squares(p, x);
    Ok(h2_scaled(u2, v2))
}

/// Second-order rational factor `1 + (P₂ - ½iα²t Q₂)/H₂`.
///
/// A non-positive `H₂` is reported as [`RogonError::SingularDenominator`]
/// rather than clamped.
pub fn rogon2_factor(p: &RogonParams, x: PointST) -> Result<ComplexValue> {
    p.validate()?;
    rogon2_factor_unchecked(p, x)
}

#[inline]
fn rogon2_factor_unchecked(p: &RogonParams, x: PointST) -> Result<ComplexValue> {
    let (u2, v2) = scaled_squares(p, x);
    let h2 = h2_scaled(u2, v2);
    if h2 <= 0.0 || h2.is_nan() {
        return Err(RogonError::SingularDenominator {
            s: x.s,
            t: x.t,
            value: h2,
        });
    }
    let re = p2_scaled(u2, v2);
    let im = -0.5 * p.alpha * p.alpha * x.t * q2_scaled(u2, v2);
    Ok(ComplexValue::new(1.0 + re / h2, im / h2))
}

/// Rational factor of either order.
pub fn rogon_factor(p: &RogonParams, order: Order, x: PointST) -> Result<ComplexValue> {
    p.validate()?;
    factor_unchecked(p, order, x)
}

#[inline]
fn factor_unchecked(p: &RogonParams, order: Order, x: PointST) -> Result<ComplexValue> {
    match order {
        Order::One => Ok(rogon1_factor_unchecked(p, x)),
        Order::Two => rogon2_factor_unchecked(p, x),
    }
}

#[inline]
fn assemble(p: &RogonParams, factor: ComplexValue, x: PointST) -> FieldPair {
    let common = factor * carrier_unchecked(p, x) * unit_amplitude(p);
    FieldPair {
        sigma: common * p.a,
        psi: common * p.b,
    }
}

/// One-rogon field pair `(σ₁, ψ₁)`.
pub fn eval_rogon1(p: &RogonParams, x: PointST) -> Result<FieldPair> {
    p.validate()?;
    Ok(assemble(p, rogon1_factor_unchecked(p, x), x))
}

/// Two-rogon field pair `(σ₂, ψ₂)`.
pub fn eval_rogon2(p: &RogonParams, x: PointST) -> Result<FieldPair> {
    p.validate()?;
    Ok(assemble(p, rogon2_factor_unchecked(p, x)?, x))
}

pub fn eval_rogon(p: &RogonParams, order: Order, x: PointST) -> Result<FieldPair> {
    match order {
        Order::One => eval_rogon1(p, x),
        Order::Two => eval_rogon2(p, x),
    }
}

/// Evenly spaced samples on `[min, max]`; a single sample sits at `min`.
pub fn linspace(min: f64, max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![min];
    }
    let span = max - min;
    let last = (n - 1) as f64;
    (0..n).map(|i| min + span * (i as f64) / last).collect()
}

/// Closed-form fields sampled on a rectangular `(S, t)` grid.
///
/// Storage is row-major with `t` as the slow index: the value at `(s[i], t[j])`
/// lives at `j * s.len() + i`.
#[derive(Debug, Clone)]
pub struct FieldGrid {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    pub values: Vec<FieldPair>,
}

impl FieldGrid {
    pub fn ns(&self) -> usize {
        self.s.len()
    }

    pub fn nt(&self) -> usize {
        self.t.len()
    }

    pub fn at(&self, is: usize, it: usize) -> &FieldPair {
        &self.values[it * self.s.len() + is]
    }

    pub fn intensity_sigma(&self) -> Vec<f64> {
        self.values.iter().map(FieldPair::intensity_sigma).collect()
    }

    pub fn intensity_psi(&self) -> Vec<f64> {
        self.values.iter().map(FieldPair::intensity_psi).collect()
    }

    pub fn points(&self) -> impl Iterator<Item = (PointST, &FieldPair)> + '_ {
        let ns = self.s.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(idx, v)| (PointST::new(self.s[idx % ns], self.t[idx / ns]), v))
    }
}

/// Evaluates the chosen family at every point of the `(S, t)` grid.
pub fn eval_grid(
    p: &RogonParams,
    order: Order,
    s_range: (f64, f64),
    t_range: (f64, f64),
    ns: usize,
    nt: usize,
) -> Result<FieldGrid> {
    p.validate()?;
    for (name, (lo, hi)) in [("s-range", s_range), ("t-range", t_range)] {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(RogonError::param(
                name,
                format!("must be a finite interval with min <= max, got [{lo}, {hi}]"),
            ));
        }
    }
    if ns == 0 || nt == 0 {
        return Err(RogonError::param(
            "ns",
            format!("need at least one sample per axis, got {ns} x {nt}"),
        ));
    }
    match ns.checked_mul(nt) {
        Some(n) if n <= MAX_GRID_POINTS => {}
        _ => return Err(RogonError::GridTooLarge { ns, nt }),
    }

    let s = linspace(s_range.0, s_range.1, ns);
    let t = linspace(t_range.0, t_range.1, nt);
    let values = (0..ns * nt)
        .into_par_iter()
        .map(|idx| {
            let x = PointST::new(s[idx % ns], t[idx / ns]);
            factor_unchecked(p, order, x).map(|f| assemble(p, f, x))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FieldGrid { s, t, values })
}

/// Location and height of the rogue peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakInfo {
    pub location: PointST,
    /// `|F|` at the peak, relative to the unit background.
    pub amplitude_ratio: f64,
}

impl PeakInfo {
    pub fn intensity_ratio(&self) -> f64 {
        self.amplitude_ratio * self.amplitude_ratio
    }
}

/// The peak sits at `ξ = 0, t = 0`, i.e. the origin, with `|F₁| = 3` and
/// `|F₂| = 1 + (3/8)/(3/32) = 5`.
pub fn peak_info(p: &RogonParams, order: Order) -> Result<PeakInfo> {
    p.validate()?;
    let amplitude_ratio = match order {
        Order::One => 3.0,
        Order::Two => 5.0,
    };
    Ok(PeakInfo {
        location: PointST::ORIGIN,
        amplitude_ratio,
    })
}
