use thiserror::Error;

pub type Result<T, E = RogonError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RogonError {
    /// A model or grid parameter is outside its admissible domain.
    #[error("invalid parameter `{name}`: {message}")]
    InvalidParameter { name: &'static str, message: String },

    /// The carrier wavenumber is not commensurate with the periodic domain.
    #[error(
        "carrier wavenumber k = {k} is not periodic on L = {length}; \
         nearest admissible k = {nearest} (m = {m}); pass --snap-k to use it"
    )]
    NonPeriodicCarrier {
        k: f64,
        length: f64,
        nearest: f64,
        m: i64,
    },

    /// H₂ was found non-positive. This would mean the rational solution is
    /// singular, which contradicts its construction; it is a defect, not a
    /// user error.
    #[error("two-rogon denominator H2 = {value:e} <= 0 at S = {s}, t = {t}")]
    SingularDenominator { s: f64, t: f64, value: f64 },

    #[error("non-finite field after step {step} (t = {t})")]
    NonFinite { step: u64, t: f64 },

    #[error("grid of {ns} x {nt} points is too large")]
    GridTooLarge { ns: usize, nt: usize },
}

impl RogonError {
    pub(crate) fn param(name: &'static str, message: impl Into<String>) -> Self {
        RogonError::InvalidParameter {
            name,
            message: message.into(),
        }
    }
}
