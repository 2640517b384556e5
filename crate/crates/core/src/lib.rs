pub mod cli;
pub mod error;
pub mod experiments;
pub mod hecke;
pub mod lfun;
pub mod numkernel;
pub mod randmodel;
pub mod serial;

pub use error::{Error, Result};
