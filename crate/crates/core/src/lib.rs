//! Greatest lower bounds on transverse Ricci curvature for compact toric
//! contact geometries given by rational moment-cone data.
//!
//! The exact half of the crate validates the cone input (facet normals plus
//! Reeb vector), reduces it to a transverse polytope, and computes the bound
//! `R` as a literal rational number from the barycenter ray. The numerical
//! half builds the reference potential on the polytope, solves the associated
//! real Monge-Ampère continuity path on a truncation box, and brackets the
//! parameter where solvability is lost, which should reproduce `R`.
//!
//! Trust boundary: the "good cone" lattice condition on the input is assumed,
//! not verified; the pipeline checks everything else it relies on.

pub mod catalog;
pub mod cone;
pub mod document;
pub mod exact;
pub mod pipeline;
pub mod polytope;
pub mod potential;
pub mod solver;

pub use cone::{GammaVector, MomentCone, TransverseBasis};
pub use document::{InputDocument, ReportDocument, SolverOverrides};
pub use exact::{Rat, RatVector};
pub use pipeline::{analyze, Geometry};
pub use polytope::{HPolytope, PolytopeSummary, RReport, VPolytope};
pub use potential::{KahlerPotential, SymplecticPotential};
pub use solver::{PathRunner, SolverConfig};
