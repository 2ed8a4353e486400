use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Result, RogonError};

/// Periodic discretisation of `S ∈ [-L/2, L/2)`.
///
/// Wavenumbers are stored in transform order: `κ_j = 2πj/L` for
/// `j = 0, 1, …, N/2 - 1, -N/2, …, -1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    pub length: f64,
    pub n: usize,
    pub ds: f64,
    #[serde(skip)]
    s: Vec<f64>,
    #[serde(skip)]
    kappa: Vec<f64>,
}

impl Grid {
    pub const MIN_POINTS: usize = 16;

    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(RogonError::param(
                "L",
                format!("must be finite and > 0, got {length}"),
            ));
        }
        if n < Self::MIN_POINTS || !n.is_power_of_two() {
            return Err(RogonError::param(
                "N",
                format!("must be a power of two >= {}, got {n}", Self::MIN_POINTS),
            ));
        }
        let ds = length / n as f64;
        let s = (0..n).map(|j| -0.5 * length + j as f64 * ds).collect();
        let half = (n / 2) as i64;
        let kappa = (0..n as i64)
            .map(|j| {
                let m = if j < half { j } else { j - n as i64 };
                2.0 * PI * m as f64 / length
            })
            .collect();
        Ok(Grid {
            length,
            n,
            ds,
            s,
            kappa,
        })
    }

    /// Grid points `S_j = -L/2 + j·dS`.
    pub fn s(&self) -> &[f64] {
        &self.s
    }

    /// Angular wavenumbers in transform order.
    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    /// Signed mode index of transform slot `j`.
    pub fn mode_index(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Nearest carrier wavenumber `2πm/L` that is periodic on this grid.
    pub fn nearest_periodic_k(&self, k: f64) -> (f64, i64) {
        let m = (k * self.length / (2.0 * PI)).round() as i64;
        (2.0 * PI * m as f64 / self.length, m)
    }

    /// Accepts `k` if `kL/2π` is an integer (to a relative 1e-9), otherwise
    /// reports the nearest admissible value.
    pub fn check_periodic_k(&self, k: f64) -> Result<()> {
        let (nearest, m) = self.nearest_periodic_k(k);
        if (k - nearest).abs() <= 1e-9 * (1.0 + k.abs()) {
            Ok(())
        } else {
            Err(RogonError::NonPeriodicCarrier {
                k,
                length: self.length,
                nearest,
                m,
            })
        }
    }
}

/// Convenience constructor mirroring [`Grid::new`].
pub fn make_grid(length: f64, n: usize) -> Result<Grid> {
    Grid::new(length, n)
}
