//! End-to-end exact pipeline: validate the cone input, reduce to the
//! transverse polytope, and evaluate the curvature bound with its
//! cross-checks. Everything here is rational arithmetic.

use crate::cone::{
    basis_of_h, transverse_facets, validate, ConeError, MomentCone, TransverseBasis,
    ValidationReport,
};
use crate::exact::RatVector;
use crate::polytope::{
    compute_r, enumerate_vertices, futaki_vector, ray_ratio_crosscheck, volume_barycenter,
    HPolytope, PolytopeError, PolytopeSummary, RReport, VPolytope,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

/// Exact geometric state shared by the reports, the solver, and the tests.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub validation: ValidationReport,
    pub basis: TransverseBasis,
    pub polytope: HPolytope,
    pub vpolytope: VPolytope,
    pub summary: PolytopeSummary,
    pub rreport: RReport,
    pub futaki: RatVector,
}

pub fn analyze(cone: &MomentCone) -> Result<Geometry, PipelineError> {
    let validation = validate(cone)?;
    let basis = basis_of_h(&validation.gamma);
    let polytope = transverse_facets(&validation.normalized, &validation.gamma, &basis)?;
    polytope.check_origin_interior()?;
    let vpolytope = enumerate_vertices(&polytope)?;
    let summary = volume_barycenter(&polytope, &vpolytope)?;
    let rreport = compute_r(&polytope, &summary.barycenter)?;
    if let Some(q) = &rreport.q {
        // two readings of the same ratio must agree exactly
        let ratio = ray_ratio_crosscheck(&summary.barycenter, q)?;
        debug_assert_eq!(ratio, rreport.r);
    }
    let futaki = futaki_vector(&summary);
    Ok(Geometry {
        validation,
        basis,
        polytope,
        vpolytope,
        summary,
        rreport,
        futaki,
    })
}
