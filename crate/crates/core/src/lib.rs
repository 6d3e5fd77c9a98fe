pub mod bessel;
pub mod bounded;
pub mod cli;
pub mod error;
pub mod exact;
pub mod precision;
pub mod quadrature;
pub mod sumrules;

pub use bounded::BoundedReal;
pub use error::{Error, Result};
pub use precision::PrecisionContext;
