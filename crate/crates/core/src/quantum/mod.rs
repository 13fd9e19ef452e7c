//! Bipartite states, measurements on the first party, assemblages of the
//! second, and the zero-discord perfect-cloning machinery.

pub mod assemblage;
pub mod copier;
pub mod discord;
pub mod measurement;
pub mod random;
pub mod state;
pub mod statefile;

pub use assemblage::{assemblage, eta_operators, reconstruct_from_eta, Assemblage, AssemblageEntry};
pub use copier::{perfect_copier, run_clone, verify_clone, Channel, CloneOutput, CloneReport};
pub use discord::{zero_discord_check, ZeroDiscordCertificate};
pub use measurement::{
    proof_measurements, qubit_measurement, su_generators, BinaryMeasurement, MeasurementElement,
    MeasurementLabel,
};
pub use state::{bell_ket, bell_state, BellKind, DensityMatrix};
pub use statefile::{load_state, parse_state, state_to_json, StateFile};
