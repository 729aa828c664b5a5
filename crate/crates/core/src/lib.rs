pub mod curvature;
pub mod dual;
pub mod error;
pub mod exterior;
pub mod gram;
pub mod hopf;
pub mod instances;
pub mod oneill;
pub mod report;
pub mod sweep;

pub use error::{Error, Result};
