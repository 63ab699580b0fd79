//! Dataset files, CSV exports and the synthetic generator.

pub mod export;
pub mod format;
pub mod generator;

pub use export::{contacts_csv, ratings_csv};
pub use format::{load, parse, save, to_string, HEADER};
pub use generator::{generate, GeneratorConfig};
