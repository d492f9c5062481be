//! The spin-kicked rotor.

pub mod quantum;
pub mod semiclassical;
