pub mod dmc;
pub mod error;
pub mod gaussian;
pub mod instances;
pub mod numerics;
pub mod report;
pub mod structured;
pub mod sweep;
pub mod worstcase;

pub use error::{Error, Result};
