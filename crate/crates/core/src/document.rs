//! Input and report documents. Geometry fields round-trip as exact rationals
//! ("p/q" strings or integers); a float in a geometry field is a parse error,
//! so no rounding can leak into the exact pipeline. Decimal renderings in
//! reports are display-only and labeled as such.

use crate::catalog::CatalogEntry;
use crate::cone::MomentCone;
use crate::exact::{rat_from_string, rat_to_string, Rat, RatVector};
use crate::pipeline::{analyze, Geometry, PipelineError};
use crate::polytope::Facet;
use crate::potential::{KahlerPotential, SymplecticPotential};
use crate::solver::{PathRun, PathRunner, SolverConfig, SolverError};
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("invalid input document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Potential(#[from] crate::potential::PotentialError),
}

/// Exact rational scalar: serializes as `p/q`, deserializes from integers or
/// `p/q` strings, and rejects floating-point tokens outright.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactScalar(pub Rat);

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_to_string(&self.0))
    }
}

struct ExactVisitor;

impl<'de> Visitor<'de> for ExactVisitor {
    type Value = ExactScalar;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        write!(f, "an integer or a \"p/q\" string (floats are rejected)")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
        Ok(ExactScalar(Rat::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
        Ok(ExactScalar(Rat::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Self::Value, E> {
        Err(E::custom(format!(
            "float {v} not allowed in an exact geometry field; write it as \"p/q\""
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
        rat_from_string(v).map(ExactScalar).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ExactVisitor)
    }
}

fn exact_vec(v: &RatVector) -> Vec<ExactScalar> {
    v.coords().iter().cloned().map(ExactScalar).collect()
}

/// Solver knobs; these are numerical parameters, so plain numbers are fine.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct SolverOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sup_phi_cap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub newton_tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_cap: Option<f64>,
}

impl SolverOverrides {
    pub fn merged_over(&self, base: &SolverOverrides) -> SolverOverrides {
        SolverOverrides {
            l: self.l.or(base.l),
            n: self.n.or(base.n),
            t_step: self.t_step.or(base.t_step),
            bracket_tol: self.bracket_tol.or(base.bracket_tol),
            sup_phi_cap: self.sup_phi_cap.or(base.sup_phi_cap),
            newton_tol: self.newton_tol.or(base.newton_tol),
            t_cap: self.t_cap.or(base.t_cap),
        }
    }

    pub fn to_config(&self) -> SolverConfig {
        let mut cfg = SolverConfig::default();
        cfg.l = self.l;
        cfg.n = self.n;
        if let Some(v) = self.t_step {
            cfg.t_step = v;
        }
        if let Some(v) = self.bracket_tol {
            cfg.bracket_tol = v;
        }
        if let Some(v) = self.sup_phi_cap {
            cfg.sup_phi_cap = v;
        }
        if let Some(v) = self.newton_tol {
            cfg.newton_tol = v;
        }
        if let Some(v) = self.t_cap {
            cfg.t_cap = v;
        }
        cfg
    }
}

/// Geometry description consumed by every subcommand.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InputDocument {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub m: usize,
    pub lambda: Vec<Vec<ExactScalar>>,
    pub xi: Vec<ExactScalar>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverOverrides>,
}

impl InputDocument {
    pub fn to_cone(&self) -> Result<MomentCone, DocumentError> {
        let normals: Vec<RatVector> = self
            .lambda
            .iter()
            .map(|row| RatVector::new(row.iter().map(|s| s.0.clone()).collect()))
            .collect();
        for (i, n) in normals.iter().enumerate() {
            if !n.is_integral() {
                return Err(DocumentError::Invalid(format!(
                    "lambda[{i}] = {n} must be an integer vector"
                )));
            }
        }
        let xi = RatVector::new(self.xi.iter().map(|s| s.0.clone()).collect());
        Ok(MomentCone::new(self.m, normals, xi))
    }

    pub fn from_catalog(entry: &CatalogEntry) -> Self {
        InputDocument {
            name: Some(entry.name.to_string()),
            m: entry.cone.m,
            lambda: entry.cone.normals.iter().map(exact_vec).collect(),
            xi: exact_vec(&entry.cone.reeb),
            solver: None,
        }
    }
}

fn display12(x: f64) -> String {
    format!("{:.11e}", x)
}

fn rat_display(r: &Rat) -> String {
    display12(r.to_f64().unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, Serialize)]
pub struct ToolBlock {
    pub name: &'static str,
    pub version: &'static str,
    pub decimal_note: &'static str,
}

fn tool_block() -> ToolBlock {
    ToolBlock {
        name: "ricci-bound",
        version: env!("CARGO_PKG_VERSION"),
        decimal_note: "fields ending in _display are decimal renderings (12 significant digits), display only",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationBlock {
    pub gamma: Vec<String>,
    pub reeb_input: Vec<String>,
    pub reeb_normalized: Vec<String>,
    pub reeb_scaling: String,
    pub extreme_rays: Vec<Vec<String>>,
    pub min_ray_pairing: String,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FacetBlock {
    pub normal: Vec<String>,
    pub offset: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolytopeBlock {
    pub m: usize,
    pub facets: Vec<FacetBlock>,
    pub vertices: Vec<Vec<String>>,
    pub volume: String,
    pub volume_display: String,
    pub barycenter: Vec<String>,
    pub futaki_vector: Vec<String>,
    pub futaki_vanishes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RBlock {
    pub exact: String,
    pub display: String,
    /// ray parameter with `R = s/(1+s)`; "inf" in the symmetric case
    pub s_star: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
    pub binding_facets: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridBlock {
    pub m: usize,
    pub n: usize,
    pub half_width: f64,
    pub spacing: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BracketBlock {
    pub t_lo: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_hi: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PathBlock {
    pub grid: GridBlock,
    pub accepted_states: usize,
    pub bracket: BracketBlock,
    pub termination: String,
    pub r_numeric: f64,
    pub r_exact_display: String,
    pub abs_error_vs_exact: f64,
    pub max_mass_residual: f64,
    pub max_moment_residual: f64,
    pub final_sup_phi: f64,
    pub final_min_facet_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub tool: ToolBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polytope: Option<PolytopeBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<RBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBlock>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver_error: Option<String>,
}

fn validation_block(doc: &InputDocument, geo: &Geometry) -> ValidationBlock {
    let v = &geo.validation;
    ValidationBlock {
        gamma: v.gamma.0.as_strings(),
        reeb_input: doc.xi.iter().map(|s| rat_to_string(&s.0)).collect(),
        reeb_normalized: v.normalized.reeb.as_strings(),
        reeb_scaling: rat_to_string(&v.scaling),
        extreme_rays: v.rays.iter().map(|r| r.as_strings()).collect(),
        min_ray_pairing: rat_to_string(&v.min_ray_pairing),
        warnings: v.warnings.clone(),
    }
}

fn polytope_block(geo: &Geometry) -> PolytopeBlock {
    let facet = |f: &Facet| FacetBlock {
        normal: f.normal.as_strings(),
        offset: rat_to_string(&f.offset),
    };
    PolytopeBlock {
        m: geo.polytope.dim(),
        facets: geo.polytope.facets().iter().map(facet).collect(),
        vertices: geo.vpolytope.vertices.iter().map(|v| v.as_strings()).collect(),
        volume: rat_to_string(&geo.summary.volume),
        volume_display: rat_display(&geo.summary.volume),
        barycenter: geo.summary.barycenter.as_strings(),
        futaki_vector: geo.futaki.as_strings(),
        futaki_vanishes: geo.futaki.is_zero(),
    }
}

fn r_block(geo: &Geometry) -> RBlock {
    let rr = &geo.rreport;
    RBlock {
        exact: rat_to_string(&rr.r),
        display: rat_display(&rr.r),
        s_star: rr
            .s_star
            .as_ref()
            .map(rat_to_string)
            .unwrap_or_else(|| "inf".to_string()),
        q: rr.q.as_ref().map(|q| q.as_strings()),
        binding_facets: rr.binding_facets.clone(),
    }
}

/// Validation subcommand: structural checks only.
pub fn run_validate(doc: &InputDocument) -> Result<ReportDocument, DocumentError> {
    let cone = doc.to_cone()?;
    let geo = analyze(&cone)?;
    Ok(ReportDocument {
        tool: tool_block(),
        name: doc.name.clone(),
        validation: Some(validation_block(doc, &geo)),
        polytope: None,
        r: None,
        path: None,
        solver_error: None,
    })
}

/// Exact geometry report: validation, polytope, curvature bound.
pub fn run_r(doc: &InputDocument) -> Result<ReportDocument, DocumentError> {
    let cone = doc.to_cone()?;
    let geo = analyze(&cone)?;
    Ok(ReportDocument {
        tool: tool_block(),
        name: doc.name.clone(),
        validation: Some(validation_block(doc, &geo)),
        polytope: Some(polytope_block(&geo)),
        r: Some(r_block(&geo)),
        path: None,
        solver_error: None,
    })
}

pub struct PathArtifacts {
    pub report: ReportDocument,
    pub trace_csv: Option<String>,
    pub run: Option<PathRun>,
}

/// Full run: exact geometry plus the continuity-path bracket and trace.
pub fn run_solve_path(
    doc: &InputDocument,
    cli_overrides: &SolverOverrides,
) -> Result<PathArtifacts, DocumentError> {
    let cone = doc.to_cone()?;
    let geo = analyze(&cone)?;
    let mut report = ReportDocument {
        tool: tool_block(),
        name: doc.name.clone(),
        validation: Some(validation_block(doc, &geo)),
        polytope: Some(polytope_block(&geo)),
        r: Some(r_block(&geo)),
        path: None,
        solver_error: None,
    };
    if geo.polytope.dim() > 2 {
        report.solver_error = Some(format!(
            "the path solver covers m in {{1, 2}}; this geometry has m = {}",
            geo.polytope.dim()
        ));
        return Ok(PathArtifacts {
            report,
            trace_csv: None,
            run: None,
        });
    }
    let overrides = match &doc.solver {
        Some(file_overrides) => cli_overrides.merged_over(file_overrides),
        None => cli_overrides.clone(),
    };
    let cfg = overrides.to_config();
    let sp = SymplecticPotential::from_polytope(&geo.polytope, &geo.vpolytope);
    let volume = geo.summary.volume.to_f64().unwrap();
    let barycenter = geo.summary.barycenter.to_f64_vec();
    let run = (|| -> Result<PathRun, DocumentError> {
        let kp = KahlerPotential::new(sp, volume)?;
        let runner = PathRunner::new(&kp, barycenter, cfg)?;
        Ok(runner.run()?)
    })();
    match run {
        Ok(run) => {
            let r_exact = geo.rreport.r.to_f64().unwrap();
            let max_mass = run
                .states
                .iter()
                .fold(0.0f64, |m, s| m.max(s.mass_residual));
            let max_moment = run
                .states
                .iter()
                .fold(0.0f64, |m, s| m.max(s.moment_residual));
            let last = run.states.last().unwrap();
            report.path = Some(PathBlock {
                grid: GridBlock {
                    m: run.grid.m,
                    n: run.grid.n,
                    half_width: run.grid.l,
                    spacing: run.grid.h,
                },
                accepted_states: run.states.len(),
                bracket: BracketBlock {
                    t_lo: run.bracket.t_lo,
                    t_hi: run.bracket.t_hi,
                    width: run.bracket.t_hi.map(|hi| hi - run.bracket.t_lo),
                },
                termination: run.bracket.reason.as_str().to_string(),
                r_numeric: run.bracket.r_numeric,
                r_exact_display: display12(r_exact),
                abs_error_vs_exact: (run.bracket.r_numeric - r_exact).abs(),
                max_mass_residual: max_mass,
                max_moment_residual: max_moment,
                final_sup_phi: last.sup_phi,
                final_min_facet_distance: last.min_facet_distance,
            });
            let csv = trace_csv(&run);
            Ok(PathArtifacts {
                report,
                trace_csv: Some(csv),
                run: Some(run),
            })
        }
        Err(e) => {
            report.solver_error = Some(e.to_string());
            Ok(PathArtifacts {
                report,
                trace_csv: None,
                run: None,
            })
        }
    }
}

/// Gnuplot-friendly trace: one row per accepted state, fixed 12-digit
/// scientific formatting so reruns are byte-identical.
pub fn trace_csv(run: &PathRun) -> String {
    let m = run.grid.m;
    let mut out = String::new();
    let mut header = vec!["t".to_string(), "sup_phi".to_string(), "m_t".to_string()];
    for c in 0..m {
        header.push(format!("x_t_{c}"));
    }
    header.extend(
        [
            "min_facet_distance",
            "mass_residual",
            "moment_residual",
            "argmin_facet",
            "newton_iters",
        ]
        .map(str::to_string),
    );
    out.push_str(&header.join(","));
    out.push('\n');
    for s in &run.states {
        let mut row = vec![
            format!("{:.12e}", s.t),
            format!("{:.12e}", s.sup_phi),
            format!("{:.12e}", s.m_t),
        ];
        for c in 0..m {
            row.push(format!("{:.12e}", s.x_t[c]));
        }
        row.push(format!("{:.12e}", s.min_facet_distance));
        row.push(format!("{:.12e}", s.mass_residual));
        row.push(format!("{:.12e}", s.moment_residual));
        row.push(format!("{}", s.argmin_facet));
        row.push(format!("{}", s.newton_iters));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Map an error to the process exit code contract: 2 for inputs that violate
/// the geometric hypotheses, 1 for malformed documents.
pub fn exit_code_for(err: &DocumentError) -> i32 {
    match err {
        DocumentError::Invalid(_) => 1,
        DocumentError::Pipeline(_) => 2,
        DocumentError::Solver(_) | DocumentError::Potential(_) => 3,
    }
}
