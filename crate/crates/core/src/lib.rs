//! Density-operator channel engine for checking teleportation against the
//! no-cloning theorem.
//!
//! Module map:
//!
//! * [`linalg`]: dense complex matrices and a Hermitian Jacobi eigensolver.
//! * [`composite`]: subsystem layouts, embedding and partial trace.
//! * [`states`]: state vectors, density operators, Bell states, trace distance.
//! * [`channels`]: Kraus maps of the form `U·P` / `P·U` with a projector partition.
//! * [`teleport`]: the teleportation channel on `C ⊗ B ⊗ A` and its checks.
//! * [`nocloning`]: witness search showing a map fails to clone.
//! * [`frames`]: event kinematics under boosts and the ordering audit.
//! * [`par`]: batch execution, rayon-backed behind the `parallel` feature.

pub mod channels;
pub mod composite;
pub mod error;
pub mod frames;
pub mod linalg;
pub mod nocloning;
pub mod par;
pub mod random;
pub mod states;
pub mod teleport;

pub use channels::{make_channel, ChannelDocument, FactorOrder, KrausChannel, StructuredKraus};
pub use composite::SystemLayout;
pub use error::{Error, Result};
pub use linalg::{Complex, ComplexMatrix, Pauli};
pub use par::Execution;
pub use states::{bell, pure, trace_distance, BellKind, DensityOperator, NamedQubit, StateVector};
