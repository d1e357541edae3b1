//! The continuity path: advance the deformation parameter from zero, solving
//! the discretized equation at each step with warm starts, and bracket the
//! parameter value where solvability is lost.
//!
//! The path starts at a tiny positive parameter rather than zero: at exactly
//! zero the equation only sees derivatives of the unknown, so the discrete
//! system has a constant null mode and (with Neumann rows) an exactly-one-rank
//! consistency defect. The zeroth-order term at `t = 1e-3` pins the constant
//! without affecting anything at the reported tolerances.

use super::grid::{auto_half_width, Grid, GridError, PotentialField};
use super::identities::{check, IdentityInput};
use super::newton::{self, NewtonFailure};
use super::scheme::{Scheme1d, Scheme2d};
use crate::potential::{KahlerPotential, PotentialError};
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// grid intervals per axis; default 2048 for m = 1, 96 for m = 2
    pub n: Option<usize>,
    /// half-width override; default chosen by the tail rule
    pub l: Option<f64>,
    pub t_start: f64,
    pub t_step: f64,
    pub t_cap: f64,
    pub bracket_tol: f64,
    pub sup_phi_cap: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: None,
            l: None,
            t_start: 1e-3,
            t_step: 0.05,
            t_cap: 0.99,
            bracket_tol: 1e-2,
            sup_phi_cap: 1e3,
            newton_tol: 1e-9,
            newton_max_iter: 50,
        }
    }
}

/// Mass/moment residual gate for an accepted state, set by the grid
/// convergence study: boundary-truncation level in one dimension, the
/// coarser smoke-run level in two.
pub fn identity_tolerance(m: usize) -> f64 {
    match m {
        1 => 1e-6,
        _ => 1e-3,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TerminationReason {
    ReachedTCap,
    NewtonDiverged,
    SupPhiCap,
    GradientImageEscape,
    IdentityResidual,
}

impl TerminationReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            TerminationReason::ReachedTCap => "reached-t-cap",
            TerminationReason::NewtonDiverged => "newton-diverged",
            TerminationReason::SupPhiCap => "sup-phi-cap",
            TerminationReason::GradientImageEscape => "gradient-image-escape",
            TerminationReason::IdentityResidual => "identity-residual",
        }
    }
}

#[derive(Debug, Clone)]
pub struct PathState {
    pub t: f64,
    pub sup_phi: f64,
    pub m_t: f64,
    pub x_t: Vec<f64>,
    /// `Du0(x_t)`, the gradient-image point in the polytope
    pub gradient_image: Vec<f64>,
    pub min_facet_distance: f64,
    pub argmin_facet: usize,
    pub mass_residual: f64,
    pub moment_residual: f64,
    pub mass_residual_naive: f64,
    pub newton_iters: usize,
    /// set when the minimizer refinement was ill-conditioned (flat minimum)
    pub minimizer_suspect: bool,
    pub phi: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ThresholdBracket {
    /// last accepted parameter
    pub t_lo: f64,
    /// first failed parameter; `None` when the cap was reached
    pub t_hi: Option<f64>,
    pub reason: TerminationReason,
    pub r_numeric: f64,
}

#[derive(Debug, Clone)]
pub struct PathRun {
    pub grid: Grid,
    pub states: Vec<PathState>,
    pub bracket: ThresholdBracket,
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("the near-zero solve failed ({0}); the geometry or grid setup is inconsistent")]
    InitialSolveFailed(String),
    #[error("gradient image left the resolvable region at t = {t} with only {accepted} accepted states; enlarge the box")]
    GridTooSmall { t: f64, accepted: usize },
}

pub struct PathRunner<'a> {
    kp: &'a KahlerPotential,
    barycenter: Vec<f64>,
    pub grid: Grid,
    field: PotentialField,
    cfg: SolverConfig,
}

enum StepFailure {
    Newton(NewtonFailure),
    SupPhiCap(f64),
    Escape { x_t: Vec<f64> },
    IdentityResidual { mass: f64, moment: f64 },
}

impl StepFailure {
    fn reason(&self) -> TerminationReason {
        match self {
            StepFailure::Newton(_) => TerminationReason::NewtonDiverged,
            StepFailure::SupPhiCap(_) => TerminationReason::SupPhiCap,
            StepFailure::Escape { .. } => TerminationReason::GradientImageEscape,
            StepFailure::IdentityResidual { .. } => TerminationReason::IdentityResidual,
        }
    }

    fn describe(&self) -> String {
        match self {
            StepFailure::Newton(NewtonFailure::Diverged { iterations, residual }) => {
                format!("newton diverged after {iterations} iterations, residual {residual:.3e}")
            }
            StepFailure::Newton(NewtonFailure::NonConvex { iterations }) => {
                format!("discrete convexity lost after {iterations} iterations")
            }
            StepFailure::SupPhiCap(v) => format!("sup |phi| = {v:.3e} exceeded the cap"),
            StepFailure::Escape { x_t } => format!("minimizer {x_t:?} reached the box margin"),
            StepFailure::IdentityResidual { mass, moment } => {
                format!("identity residuals mass {mass:.3e} / moment {moment:.3e} above tolerance")
            }
        }
    }
}

impl<'a> PathRunner<'a> {
    pub fn new(
        kp: &'a KahlerPotential,
        barycenter: Vec<f64>,
        cfg: SolverConfig,
    ) -> Result<Self, SolverError> {
        let m = kp.dim();
        let n = cfg.n.unwrap_or(match m {
            1 => 2048,
            _ => 96,
        });
        let l = match cfg.l {
            Some(l) => l,
            None => auto_half_width(kp)?,
        };
        let grid = Grid::new(m, l, n)?;
        let field = PotentialField::compute(kp, &grid)?;
        Ok(PathRunner {
            kp,
            barycenter,
            grid,
            field,
            cfg,
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    fn newton(&self, t: f64, phi_init: &[f64]) -> Result<(Vec<f64>, usize), NewtonFailure> {
        let out = match self.grid.m {
            1 => {
                let scheme = Scheme1d {
                    grid: &self.grid,
                    u0: &self.field.u0,
                    k: self.kp.exponent(),
                };
                newton::solve(&scheme, phi_init, t, self.cfg.newton_tol, self.cfg.newton_max_iter)?
            }
            _ => {
                let scheme = Scheme2d {
                    grid: &self.grid,
                    u0: &self.field.u0,
                    k: self.kp.exponent(),
                };
                newton::solve(&scheme, phi_init, t, self.cfg.newton_tol, self.cfg.newton_max_iter)?
            }
        };
        Ok((out.phi, out.iterations))
    }

    /// Location, refined value, and conditioning flag of the minimizer of
    /// `w_t` over the grid.
    fn minimizer(&self, phi: &[f64], t: f64) -> (Vec<f64>, f64, bool) {
        let g = &self.grid;
        let w = |id: usize| self.field.u0[id] + t * phi[id];
        let mut best = 0usize;
        for id in 1..g.node_count() {
            if w(id) < w(best) {
                best = id;
            }
        }
        match g.m {
            1 => {
                let i = best;
                if i == 0 || i == g.n {
                    return (vec![g.coord(i)], w(i), true);
                }
                let (a, b, c) = (w(i - 1), w(i), w(i + 1));
                let curder = a - 2.0 * b + c;
                if curder <= 0.0 {
                    return (vec![g.coord(i)], b, true);
                }
                let mut off = 0.5 * (a - c) / curder;
                let suspect = off.abs() > 1.0;
                off = off.clamp(-1.0, 1.0);
                let m_t = b - 0.125 * (a - c) * (a - c) / curder;
                (vec![g.coord(i) + off * g.h], m_t, suspect)
            }
            _ => {
                let np = g.nodes_per_axis();
                let (i, j) = (best / np, best % np);
                if i == 0 || i == g.n || j == 0 || j == g.n {
                    return (vec![g.coord(i), g.coord(j)], w(best), true);
                }
                let wg = |a: usize, b: usize| w(g.id2(a, b));
                let gx = (wg(i + 1, j) - wg(i - 1, j)) / 2.0;
                let gy = (wg(i, j + 1) - wg(i, j - 1)) / 2.0;
                let hxx = wg(i + 1, j) - 2.0 * wg(i, j) + wg(i - 1, j);
                let hyy = wg(i, j + 1) - 2.0 * wg(i, j) + wg(i, j - 1);
                let hxy =
                    (wg(i + 1, j + 1) + wg(i - 1, j - 1) - wg(i + 1, j - 1) - wg(i - 1, j + 1))
                        / 4.0;
                let det = hxx * hyy - hxy * hxy;
                if det <= 0.0 || hxx <= 0.0 {
                    return (vec![g.coord(i), g.coord(j)], w(best), true);
                }
                let mut dx = -(hyy * gx - hxy * gy) / det;
                let mut dy = -(hxx * gy - hxy * gx) / det;
                let suspect = dx.abs() > 1.0 || dy.abs() > 1.0;
                dx = dx.clamp(-1.0, 1.0);
                dy = dy.clamp(-1.0, 1.0);
                let m_t = wg(i, j)
                    + gx * dx
                    + gy * dy
                    + 0.5 * (hxx * dx * dx + 2.0 * hxy * dx * dy + hyy * dy * dy);
                (
                    vec![g.coord(i) + dx * g.h, g.coord(j) + dy * g.h],
                    m_t,
                    suspect,
                )
            }
        }
    }

    /// One converged-and-accepted state, or the structured failure that ends
    /// the path at this parameter.
    fn step(&self, t: f64, phi_init: &[f64]) -> Result<PathState, StepFailure> {
        let (phi, newton_iters) = self.newton(t, phi_init).map_err(StepFailure::Newton)?;
        let sup_phi = phi.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if sup_phi > self.cfg.sup_phi_cap {
            return Err(StepFailure::SupPhiCap(sup_phi));
        }
        let (x_t, m_t, minimizer_suspect) = self.minimizer(&phi, t);
        let margin = (4.0 * self.grid.h).max(0.02 * self.grid.l);
        if x_t.iter().any(|c| c.abs() > self.grid.l - margin) {
            return Err(StepFailure::Escape { x_t });
        }
        let dual = self
            .kp
            .dual(&x_t, None)
            .map_err(|_| StepFailure::Escape { x_t: x_t.clone() })?;
        let gradient_image = dual.v.clone();
        let (argmin_facet, min_facet_distance) = dual.min_distance();
        let report = check(&IdentityInput {
            grid: &self.grid,
            u0: &self.field.u0,
            phi: &phi,
            t,
            k: self.kp.exponent(),
            volume: self.kp.volume(),
            barycenter: &self.barycenter,
        });
        let tol = identity_tolerance(self.grid.m);
        if report.mass_residual > tol || report.moment_residual > tol {
            return Err(StepFailure::IdentityResidual {
                mass: report.mass_residual,
                moment: report.moment_residual,
            });
        }
        Ok(PathState {
            t,
            sup_phi,
            m_t,
            x_t,
            gradient_image,
            min_facet_distance,
            argmin_facet,
            mass_residual: report.mass_residual,
            moment_residual: report.moment_residual,
            mass_residual_naive: report.mass_residual_naive,
            newton_iters,
            minimizer_suspect,
            phi,
        })
    }

    /// March to exactly `t_target` with warm starts, returning that state.
    /// Used by the solver oracles; failures surface as errors.
    pub fn solve_to(&self, t_target: f64) -> Result<PathState, SolverError> {
        let mut phi = vec![0.0; self.grid.node_count()];
        let mut t = self.cfg.t_start.min(t_target);
        loop {
            let state = self
                .step(t, &phi)
                .map_err(|f| SolverError::InitialSolveFailed(f.describe()))?;
            phi = state.phi.clone();
            if (t - t_target).abs() < 1e-12 {
                return Ok(state);
            }
            t = (t + self.cfg.t_step).min(t_target);
        }
    }

    /// Full run: adaptive marching plus final bisection of the threshold.
    pub fn run(&self) -> Result<PathRun, SolverError> {
        let mut states: Vec<PathState> = Vec::new();
        let zero = vec![0.0; self.grid.node_count()];
        let first = self
            .step(self.cfg.t_start, &zero)
            .map_err(|f| SolverError::InitialSolveFailed(f.describe()))?;
        states.push(first);

        let mut t = self.cfg.t_step;
        let (mut t_hi, mut last_failure) = loop {
            let warm = &states.last().unwrap().phi;
            match self.step(t, warm) {
                Ok(state) => {
                    states.push(state);
                    if t >= self.cfg.t_cap {
                        return Ok(PathRun {
                            grid: self.grid,
                            states,
                            bracket: ThresholdBracket {
                                t_lo: t,
                                t_hi: None,
                                reason: TerminationReason::ReachedTCap,
                                r_numeric: 1.0,
                            },
                        });
                    }
                    t = (t + self.cfg.t_step).min(self.cfg.t_cap);
                }
                Err(f) => break (t, f),
            }
        };
        if matches!(last_failure, StepFailure::Escape { .. }) && states.len() <= 2 {
            return Err(SolverError::GridTooSmall {
                t: t_hi,
                accepted: states.len(),
            });
        }
        let mut t_lo = states.last().unwrap().t;
        while t_hi - t_lo > self.cfg.bracket_tol {
            let mid = 0.5 * (t_lo + t_hi);
            let warm = &states.last().unwrap().phi;
            match self.step(mid, warm) {
                Ok(state) => {
                    states.push(state);
                    t_lo = mid;
                }
                Err(f) => {
                    last_failure = f;
                    t_hi = mid;
                }
            }
        }
        Ok(PathRun {
            grid: self.grid,
            states,
            bracket: ThresholdBracket {
                t_lo,
                t_hi: Some(t_hi),
                reason: last_failure.reason(),
                r_numeric: 0.5 * (t_lo + t_hi),
            },
        })
    }
}
