//! Damped Newton iteration for the discretized path equation. Steps are
//! backtracked until the iterate is discretely convex and the residual
//! decreases; running out of damping is a legitimate near-threshold signal,
//! reported as divergence rather than a crash.

use super::scheme::MaScheme;

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub phi: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NewtonFailure {
    /// Line search stalled or the band factorization met a zero pivot.
    Diverged { iterations: usize, residual: f64 },
    /// Damping could not restore discrete convexity.
    NonConvex { iterations: usize },
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn sq_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}

pub fn solve<S: MaScheme>(
    scheme: &S,
    phi0: &[f64],
    t: f64,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonOutcome, NewtonFailure> {
    let n = scheme.unknowns();
    let mut phi = phi0.to_vec();
    if !scheme.is_convex(&phi, t) {
        return Err(NewtonFailure::NonConvex { iterations: 0 });
    }
    let mut f = vec![0.0; n];
    scheme.residual(&phi, t, &mut f);
    let mut res = inf_norm(&f);
    for it in 0..max_iter {
        if res <= tol {
            return Ok(NewtonOutcome {
                phi,
                iterations: it,
                residual: res,
            });
        }
        let jac = scheme.jacobian(&phi, t);
        let Some(lu) = jac.factor() else {
            return Err(NewtonFailure::Diverged {
                iterations: it,
                residual: res,
            });
        };
        let rhs: Vec<f64> = f.iter().map(|x| -x).collect();
        let delta = lu.solve(&rhs);
        if delta.iter().any(|d| !d.is_finite()) {
            return Err(NewtonFailure::Diverged {
                iterations: it,
                residual: res,
            });
        }
        let f2 = sq_norm(&f);
        let mut s = 1.0f64;
        let mut stepped = false;
        let mut cand_f = vec![0.0; n];
        while s >= 1e-6 {
            let cand: Vec<f64> = phi.iter().zip(&delta).map(|(p, d)| p + s * d).collect();
            if scheme.is_convex(&cand, t) {
                scheme.residual(&cand, t, &mut cand_f);
                let c2 = sq_norm(&cand_f);
                if c2 <= (1.0 - 1e-4 * s) * f2 || c2 <= tol * tol * n as f64 {
                    phi = cand;
                    f.copy_from_slice(&cand_f);
                    res = inf_norm(&f);
                    stepped = true;
                    break;
                }
            }
            s *= 0.5;
        }
        if !stepped {
            return Err(NewtonFailure::Diverged {
                iterations: it,
                residual: res,
            });
        }
    }
    if res <= tol {
        Ok(NewtonOutcome {
            phi,
            iterations: max_iter,
            residual: res,
        })
    } else {
        Err(NewtonFailure::Diverged {
            iterations: max_iter,
            residual: res,
        })
    }
}
