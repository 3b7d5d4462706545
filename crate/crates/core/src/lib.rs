//! Hilbert series, minimal resolutions and Hilbert-function periodicity for
//! finitely presented connected graded algebras and their right modules.

pub mod cli;
pub mod enumerate;
pub mod error;
pub mod exactlin;
pub mod families;
pub mod freealg;
pub mod groebner;
pub mod periodicity;
pub mod resolution;
pub mod series;

pub use error::{Error, Result};
