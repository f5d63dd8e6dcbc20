//! Generalized pancake graphs `P(m, n)` and `UP(m, n)`: Cayley graphs of the
//! generalized symmetric group `S(m, n)` generated by prefix reversals that
//! also rotate signs.
//!
//! * [`group`]: element arithmetic, ranking and one-line notation.
//! * [`graph`]: adjacency, copy structure, quotient graphs and girth.
//! * [`witness`]: cycle witnesses and their file format.
//! * [`search`]: exhaustive cycle-length search, parallel and reference.
//! * [`construct`]: explicit cycles of every admissible length in `UP(m, n)`.

pub mod construct;
pub mod error;
pub mod graph;
pub mod group;
pub mod search;
pub mod witness;

pub use error::{Error, Result};
pub use graph::{CopyId, GraphParams};
pub use group::{EdgeLabel, GenPerm, LabelKind};
pub use witness::{verify_witness, CycleWitness, WitnessViolation};
