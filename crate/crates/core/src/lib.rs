//! Simulation of cloning quantum steering.
//!
//! * [`qmat`]: small dense complex matrices, partial traces, a Hermitian
//!   eigensolver and PSD square roots.
//! * [`quantum`]: states, measurements, assemblages and the zero-discord
//!   perfect-cloning test with its constructive copier.
//! * [`cloning`]: the Pauli (Cerf) cloner applied to |Φ+⟩.
//! * [`metrics`]: clone fidelities, the steering measure S and the two
//!   trade-off inequalities.
//! * [`sweep`]: parameter families, region sampling and CSV output.

pub mod cloning;
pub mod error;
pub mod metrics;
pub mod perfect;
pub mod qmat;
pub mod quantum;
pub mod sweep;

pub use cloning::VCoefficients;
pub use error::{Error, Result};
pub use metrics::{SphereQuadrature, SteeringReport};
pub use quantum::DensityMatrix;
