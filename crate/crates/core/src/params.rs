//! Parameter and value types shared by the evaluators, the residual oracle
//! and the solver.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RogonError};

/// Complex scalar used for both wave functions.
pub type ComplexValue = Complex64;

/// The five-parameter family `(α, β, a, b, k)` shared by both rogon orders.
///
/// `alpha` sets the space/time scaling, `beta` is the constant market
/// potential (the interest rate when learning is switched off), `a` and `b`
/// weight the volatility and option-price components, and `k` is the carrier
/// wavenumber in `S` (the peak travels along `S = k t`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RogonParams {
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub k: f64,
}

impl RogonParams {
    /// Builds a validated parameter set.
    pub fn new(alpha: f64, beta: f64, a: f64, b: f64, k: f64) -> Result<Self> {
        let p = RogonParams {
            alpha,
            beta,
            a,
            b,
            k,
        };
        p.validate()?;
        Ok(p)
    }

    /// Caption parameters of the published figures: α = 1.5, β = 1, a = 2,
    /// b = 5 with the given gauge `k`.
    pub fn figure(k: f64) -> Self {
        RogonParams {
            alpha: 1.5,
            beta: 1.0,
            a: 2.0,
            b: 5.0,
            k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("a", self.a),
            ("b", self.b),
            ("k", self.k),
        ] {
            if !v.is_finite() {
                return Err(RogonError::param(name, format!("must be finite, got {v}")));
            }
        }
        if self.alpha <= 0.0 {
            return Err(RogonError::param(
                "alpha",
                format!("must be > 0, got {}", self.alpha),
            ));
        }
        if self.beta <= 0.0 {
            return Err(RogonError::param(
                "beta",
                format!("must be > 0, got {}", self.beta),
            ));
        }
        if self.a == 0.0 && self.b == 0.0 {
            return Err(RogonError::param("a", "a and b must not both be zero"));
        }
        Ok(())
    }

    /// Combined background intensity `α²/(2β)`.
    pub fn background_intensity(&self) -> f64 {
        self.alpha * self.alpha / (2.0 * self.beta)
    }

    pub fn with_k(self, k: f64) -> Self {
        RogonParams { k, ..self }
    }
}

/// A point `(S, t)` in stock price and time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointST {
    #[serde(rename = "S")]
    pub s: f64,
    pub t: f64,
}

impl PointST {
    pub const ORIGIN: PointST = PointST { s: 0.0, t: 0.0 };

    pub fn new(s: f64, t: f64) -> Self {
        PointST { s, t }
    }
}

/// Values of the volatility wave `σ` and the option-price wave `ψ` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldPair {
    pub sigma: ComplexValue,
    pub psi: ComplexValue,
}

impl FieldPair {
    pub const ZERO: FieldPair = FieldPair {
        sigma: ComplexValue::new(0.0, 0.0),
        psi: ComplexValue::new(0.0, 0.0),
    };

    pub fn intensity_sigma(&self) -> f64 {
        self.sigma.norm_sqr()
    }

    pub fn intensity_psi(&self) -> f64 {
        self.psi.norm_sqr()
    }

    /// `|σ|² + |ψ|²`, the potential both components see.
    pub fn combined_intensity(&self) -> f64 {
        self.intensity_sigma() + self.intensity_psi()
    }
}

/// Which closed-form family to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Order {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
}

impl Order {
    pub fn from_int(n: u32) -> Result<Self> {
        match n {
            1 => Ok(Order::One),
            2 => Ok(Order::Two),
            _ => Err(RogonError::param(
                "order",
                format!("must be 1 or 2, got {n}"),
            )),
        }
    }

    pub fn as_int(self) -> u32 {
        match self {
            Order::One => 1,
            Order::Two => 2,
        }
    }
}
