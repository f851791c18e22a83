pub mod cli;
pub mod divisor;
pub mod error;
pub mod etale;
pub mod field;
pub mod groebner;
pub mod ideal;
pub mod linalg;
pub mod local;
pub mod module;
pub mod order;
pub mod parse;
pub mod poly;
pub mod primes;
pub mod ring;
pub mod stack;
pub mod syzygy;

pub use error::{Error, Result};
