//! Exact computation of Siegel series of half-integral matrices over p-adic
//! integers through extended Gross-Keating data, with a brute-force local
//! density oracle for cross-checks.

pub mod egk;
pub mod error;
pub mod exact;
pub mod localfield;
pub mod oracle;
pub mod quadform;
pub mod selftest;
pub mod siegel;

pub use error::Error;
