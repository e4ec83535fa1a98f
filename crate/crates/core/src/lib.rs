//! Reversible circuits, compression with helper, and work-value / erasure-cost
//! bounds in units of `kT ln 2`.
//!
//! All bit quantities are exact integers. Joules appear only through
//! [`thermo::to_joules`].

pub mod bitstring;
pub mod circuits;
pub mod clausius;
pub mod compress;
pub mod demon;
pub mod error;
pub mod irrev;
pub mod prbox;
pub mod seed;
pub mod synth;
pub mod thermo;

pub use bitstring::BitString;
pub use error::{Error, Result};
