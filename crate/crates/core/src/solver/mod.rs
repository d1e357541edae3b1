//! Numerical side of the pipeline: the continuity-path solver on a
//! truncation box, its integral-identity oracles, and blow-up diagnostics.

pub mod band;
pub mod diagnostics;
pub mod grid;
pub mod identities;
pub mod newton;
pub mod path;
pub mod scheme;

pub use diagnostics::{blowup_diagnostics, BlowupDiagnostics};
pub use grid::{auto_half_width, Grid, GridError, PotentialField};
pub use identities::{check as identities_check, IdentityInput, IdentityReport};
pub use path::{
    identity_tolerance, PathRun, PathRunner, PathState, SolverConfig, SolverError,
    TerminationReason, ThresholdBracket,
};
