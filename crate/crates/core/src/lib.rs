//! Closed-form rogue waves ("rogons") of the coupled volatility / option
//! pricing wave model with constant market potential β,
//!
//! ```text
//! i σ_t = -½ σ_SS - β (|σ|² + |ψ|²) σ
//! i ψ_t = -½ ψ_SS - β (|σ|² + |ψ|²) ψ
//! ```
//!
//! * [`rogon`] evaluates the first- and second-order rational solutions.
//! * [`residual`] checks any candidate field against the PDE by finite
//!   differences.
//! * [`solver`] integrates the system with a split-step Fourier scheme.
//! * [`cli`] holds the command-line surface and the CSV/JSON writers.

pub mod cli;
pub mod error;
pub mod params;
pub mod residual;
pub mod rogon;
pub mod solver;

pub use error::{Result, RogonError};
pub use params::{ComplexValue, FieldPair, Order, PointST, RogonParams};
