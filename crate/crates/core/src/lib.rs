pub mod cli;
pub mod copula;
pub mod dist;
pub mod jacobi;
pub mod error;
pub mod hahn;
pub mod intrep;
pub mod numkit;
pub mod pds;
pub mod symkern;

pub use error::{Error, Result};
