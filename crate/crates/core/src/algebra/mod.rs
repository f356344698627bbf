//! Photonic states as polynomials of creation operators on the vacuum, and
//! the substitution calculus that evolves them through linear optics.

mod map;
mod mode;
mod monomial;
mod state;

pub use map::{ModeLinearMap, ISOMETRY_TOL};
pub use mode::{ModeId, ParseModeError, PathLabel, Polarization};
pub(crate) use monomial::factorial;
pub use monomial::Monomial;
pub use state::{FockPolyState, DEFAULT_PRUNE_EPS};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("map references undeclared path `{0}`")]
    UndeclaredMode(PathLabel),
    #[error("mode map is not an isometry (max Gram deviation {deviation:e})")]
    NonIsometricMap { deviation: f64 },
    #[error("mode {0} is occupied and is also an output of the element")]
    ModeCollision(ModeId),
}
