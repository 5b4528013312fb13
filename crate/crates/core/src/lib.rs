//! Entanglement sudden death of two-qubit states under independent
//! amplitude damping: state representations, closed-form and integrated
//! dynamics, concurrence, Lorentz normal forms and death-time formulas.

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod esd;
pub mod format;
pub mod geometry;
pub mod lindblad;
pub mod lorentz;
pub mod sampling;
pub mod sdt;
pub mod spectrum;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
pub use esd::DynamicalClass;
pub use state::{BellPoint, ConePoint, DensityMatrix, RMatrix, State, XStateParams};
