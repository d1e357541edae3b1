//! Post-run structure checks on a path trace: boundedness of the minimum
//! value, joint growth of the perturbation and the minimizer, the limiting
//! gradient-image point against the binding facets, and the linear-growth
//! slope certificate.

use super::grid::Grid;
use super::path::PathRun;
use crate::potential::SymplecticPotential;

/// Diagnostic caps for the co-blow-up check. Both quantities stay far below
/// these on symmetric runs and cross them in the final approach to the
/// threshold on asymmetric runs; the check is that they cross within a couple
/// of accepted steps of each other.
pub const CO_BLOWUP_PHI_CAP: f64 = 1.0;
pub const CO_BLOWUP_X_FRACTION: f64 = 1.0 / 3.0;

#[derive(Debug, Clone)]
pub struct BlowupDiagnostics {
    pub m_t_first: f64,
    pub max_abs_m_t: f64,
    pub min_abs_m_t: f64,
    /// index of the first accepted state with `sup_phi` above the cap
    pub phi_cap_step: Option<usize>,
    /// index of the first accepted state with `|x_t|` above the cap
    pub x_cap_step: Option<usize>,
    pub final_min_facet_distance: f64,
    pub final_argmin_facets: Vec<usize>,
    /// certified linear-growth slope of the final state's `w_t`
    pub kappa_fit: f64,
}

pub fn blowup_diagnostics(
    run: &PathRun,
    u0: &[f64],
    sp: &SymplecticPotential,
) -> BlowupDiagnostics {
    let states = &run.states;
    assert!(states.len() >= 3, "diagnostics need at least 3 accepted states");
    let m_t_first = states[0].m_t;
    let mut max_abs = 0.0f64;
    let mut min_abs = f64::INFINITY;
    for s in states {
        max_abs = max_abs.max(s.m_t.abs());
        min_abs = min_abs.min(s.m_t.abs());
    }
    let x_cap = CO_BLOWUP_X_FRACTION * run.grid.l;
    let phi_cap_step = states.iter().position(|s| s.sup_phi > CO_BLOWUP_PHI_CAP);
    let x_cap_step = states
        .iter()
        .position(|s| s.x_t.iter().any(|c| c.abs() > x_cap));

    let last = states.last().unwrap();
    let final_min = last.min_facet_distance;
    // every facet within 5% of the minimum counts as part of the limiting set
    let vals = sp.facet_values(&last.gradient_image);
    let final_argmin: Vec<usize> = vals
        .iter()
        .enumerate()
        .filter(|(_, &l)| l <= 1.05 * final_min)
        .map(|(i, _)| i)
        .collect();

    BlowupDiagnostics {
        m_t_first,
        max_abs_m_t: max_abs,
        min_abs_m_t: min_abs,
        phi_cap_step,
        x_cap_step,
        final_min_facet_distance: final_min,
        final_argmin_facets: final_argmin,
        kappa_fit: kappa_fit(&run.grid, u0, last),
    }
}

/// Smallest observed slope `(w_t(x) - m_t)/|x - x_t|` over nodes at least
/// half the box away from the minimizer: a certificate for linear growth.
fn kappa_fit(grid: &Grid, u0: &[f64], state: &super::path::PathState) -> f64 {
    let t = state.t;
    let mut kappa = f64::INFINITY;
    let w = |id: usize| u0[id] + t * state.phi[id];
    match grid.m {
        1 => {
            for i in 0..=grid.n {
                let d = (grid.coord(i) - state.x_t[0]).abs();
                if d >= 0.5 * grid.l {
                    kappa = kappa.min((w(i) - state.m_t) / d);
                }
            }
        }
        _ => {
            let np = grid.nodes_per_axis();
            for i in (0..np).step_by(4) {
                for j in (0..np).step_by(4) {
                    let dx = grid.coord(i) - state.x_t[0];
                    let dy = grid.coord(j) - state.x_t[1];
                    let d = (dx * dx + dy * dy).sqrt();
                    if d >= 0.5 * grid.l {
                        kappa = kappa.min((w(grid.id2(i, j)) - state.m_t) / d);
                    }
                }
            }
        }
    }
    kappa
}
