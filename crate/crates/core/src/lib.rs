pub mod algebra;
pub mod canonical;
pub mod error;
pub mod g2;
pub mod io;
pub mod locus;
pub mod maps;
pub mod metric;
pub mod octonion;
pub mod par;
pub mod sampling;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
