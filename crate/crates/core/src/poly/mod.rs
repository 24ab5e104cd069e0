//! Polynomials: dense in `a` over F_q, sparse Laurent in `x` with exponents
//! in ½ℤ.

mod laurent;
mod text;
mod uni;

use thiserror::Error;

pub use laurent::LaurentPoly;
pub use uni::UniPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("division is not exact")]
    InexactDivision,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("coefficient {0} is not a field element")]
    InvalidCoefficient(u64),
    #[error("point is not on the unit circle x^(q+1) = 1")]
    NotOnMu,
    #[error("half-integer exponents need characteristic 2")]
    HalfExponentInOddCharacteristic,
    #[error("half-integer exponent where an integer exponent is required")]
    HalfExponent,
    #[error("negative power of zero")]
    ZeroPoint,
}
