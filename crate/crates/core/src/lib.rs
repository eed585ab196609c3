//! Two-qubit state analysis: linear entropy, Wootters concurrence, the
//! partial-transpose test and the exact maximal CHSH value from the Pauli
//! correlation matrix, together with tools for searching X-shaped states
//! that violate CHSH at high mixedness.
//!
//! With the default `parallel` feature, batch operations (grid scans,
//! sampling, restart batches in the counterexample search) run on rayon.
//! Without it they run sequentially and produce identical output.

pub mod bell;
pub mod entanglement;
pub mod explorer;
pub mod format;
pub mod paper;
pub mod parallel;
pub mod qstate;

pub use bell::{chsh_max, chsh_value, optimize_settings, BellError, ChshSettings, CorrelationAnalysis};
pub use entanglement::{concurrence, entanglement_report, EntanglementError, EntanglementReport};
pub use explorer::{analyze, santos_threshold, ExplorerError, StateRecord, XStateParams};
pub use qstate::{linear_entropy, purity, ComplexMatrix4, DensityMatrix, StateError, TracePolicy};
