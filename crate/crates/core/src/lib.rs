//! Linear-optics simulation in second quantization.
//!
//! States are polynomials of creation operators over path × polarization
//! modes ([`algebra`]); optical elements are linear substitutions of those
//! operators ([`elements`]); circuits are described in a small text language
//! ([`dsl`]) and run by [`sim`], either on Fock states or on coherent
//! states. [`oracle`] recomputes the same evolution by exponentiating
//! quadratic Hamiltonians on a truncated Fock space, and [`measurement`]
//! turns final states into detector statistics.

pub mod algebra;
pub mod dsl;
pub mod elements;
pub mod measurement;
pub mod oracle;
pub mod random;
pub mod sim;
