pub mod analytics;
pub mod arith;
pub mod bounds;
pub mod cayley;
pub mod classifier;
pub mod error;
pub mod group;
pub mod oracle;
pub mod spectra;
pub mod verify;
