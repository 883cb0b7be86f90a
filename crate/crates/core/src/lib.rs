pub mod algebra;
pub mod catalog;
pub mod dsl;
pub mod error;
pub mod finder;
pub mod generate;
pub mod mu_ring;
pub mod numeric;
pub mod roots;
pub mod series;
pub mod system;

pub use error::{Error, Result};
