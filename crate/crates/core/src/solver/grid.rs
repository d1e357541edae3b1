//! Truncation box and node layout for the continuity-path solver, plus the
//! reference-potential field sampled on the nodes.

use crate::potential::{DualPoint, KahlerPotential, PotentialError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid needs at least 64 intervals per axis, got {0}")]
    TooCoarse(usize),
    #[error("reference weight {weight} at the box boundary exceeds 1e-10; the box (half-width {l}) is too small")]
    BoxTooSmall { weight: f64, l: f64 },
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

/// Uniform box `[-L, L]^m` with `n` intervals (n+1 nodes) per axis.
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    pub m: usize,
    pub l: f64,
    pub n: usize,
    pub h: f64,
}

impl Grid {
    pub fn new(m: usize, l: f64, n: usize) -> Result<Self, GridError> {
        if n < 64 {
            return Err(GridError::TooCoarse(n));
        }
        Ok(Grid {
            m,
            l,
            n,
            h: 2.0 * l / n as f64,
        })
    }

    pub fn nodes_per_axis(&self) -> usize {
        self.n + 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes_per_axis().pow(self.m as u32)
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.h
    }

    /// Flat index of a 2-d node, row-major.
    pub fn id2(&self, i: usize, j: usize) -> usize {
        i * self.nodes_per_axis() + j
    }
}

/// Half-width rule: walk outward along the sample directions until the
/// reference weight drops below 1e-14 and the nearest facet distance of the
/// gradient image drops below 1e-8, then add ten percent. Both margins are
/// deliberately tighter than the 1e-10 construction invariant; the identity
/// quadratures inherit their boundary truncation error from this rule.
pub fn auto_half_width(kp: &KahlerPotential) -> Result<f64, PotentialError> {
    let dirs: Vec<Vec<f64>> = match kp.dim() {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..16)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 16.0;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        d => return Err(PotentialError::UnsupportedDimension(d)),
    };
    let mut l = 1.0f64;
    for dir in &dirs {
        let mut r = 1.0f64;
        let mut warm: Option<DualPoint> = None;
        for _ in 0..200 {
            let x: Vec<f64> = dir.iter().map(|d| d * r).collect();
            let (u, p) = kp.eval_with_dual(&x, warm.as_ref())?;
            let weight = (-kp.exponent() * u).exp();
            let (_, lmin) = p.min_distance();
            warm = Some(p);
            if weight <= 1e-14 && lmin <= 1e-8 {
                break;
            }
            r += 0.5;
        }
        l = l.max(r);
    }
    Ok(l * 1.1)
}

/// Reference potential sampled at every node, row-major for m = 2.
#[derive(Debug, Clone)]
pub struct PotentialField {
    pub u0: Vec<f64>,
}

impl PotentialField {
    pub fn compute(kp: &KahlerPotential, grid: &Grid) -> Result<Self, GridError> {
        let np = grid.nodes_per_axis();
        let mut u0 = vec![0.0; grid.node_count()];
        match grid.m {
            1 => {
                // march outward from the center so warm starts stay close
                let mid = np / 2;
                let mut warm: Option<DualPoint> = None;
                for i in mid..np {
                    let (u, p) = kp.eval_with_dual(&[grid.coord(i)], warm.as_ref())?;
                    u0[i] = u;
                    warm = Some(p);
                }
                warm = None;
                for i in (0..mid).rev() {
                    let (u, p) = kp.eval_with_dual(&[grid.coord(i)], warm.as_ref())?;
                    u0[i] = u;
                    warm = Some(p);
                }
            }
            2 => {
                let mut prev_row: Vec<DualPoint> = Vec::new();
                for i in 0..np {
                    let mut row: Vec<DualPoint> = Vec::with_capacity(np);
                    for j in 0..np {
                        let x = [grid.coord(i), grid.coord(j)];
                        let warm = if j > 0 {
                            Some(&row[j - 1])
                        } else if !prev_row.is_empty() {
                            Some(&prev_row[0])
                        } else {
                            None
                        };
                        let (u, p) = kp.eval_with_dual(&x, warm)?;
                        u0[grid.id2(i, j)] = u;
                        row.push(p);
                    }
                    prev_row = row;
                }
            }
            d => return Err(GridError::Potential(PotentialError::UnsupportedDimension(d))),
        }
        // construction invariant: the reference weight must be negligible on
        // the box boundary
        let mut worst: f64 = 0.0;
        match grid.m {
            1 => {
                for &i in &[0usize, grid.n] {
                    worst = worst.max((-kp.exponent() * u0[i]).exp());
                }
            }
            _ => {
                for i in 0..np {
                    for &j in &[0usize, grid.n] {
                        worst = worst.max((-kp.exponent() * u0[grid.id2(i, j)]).exp());
                        worst = worst.max((-kp.exponent() * u0[grid.id2(j, i)]).exp());
                    }
                }
            }
        }
        if worst >= 1e-10 {
            return Err(GridError::BoxTooSmall {
                weight: worst,
                l: grid.l,
            });
        }
        Ok(PotentialField { u0 })
    }
}
