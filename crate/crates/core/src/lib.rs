//! Linearization discs of power series at hyperbolic fixed points over
//! complete discretely valued fields.

pub mod cli;
pub mod error;
pub mod exact;
pub mod linearize;
pub mod oracle;
pub mod series;
pub mod ufield;

pub use error::{Error, Result};
pub use exact::ExtRational;
pub use ufield::{Element, FieldDesc, UltraScalar, Valuation};

/// Elements of `Q_p`.
pub type PAdic = ufield::Element<ufield::PAdicDomain>;
/// Elements of `F_p((T))`.
pub type LaurentFp = ufield::Element<ufield::FpDomain>;
/// Elements of `Q((T))`.
pub type LaurentQ = ufield::Element<ufield::QDomain>;
