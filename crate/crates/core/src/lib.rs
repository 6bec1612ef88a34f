pub mod battery;
pub mod error;
pub mod fleet;
pub mod io;
pub mod modulization;
pub mod overalg;
pub mod poly;
pub mod report;
pub mod ringoid;
pub mod terms;
pub mod variety;
pub mod zlinalg;

pub use error::{Error, Result};
