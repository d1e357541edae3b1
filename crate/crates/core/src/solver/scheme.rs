//! Finite-difference discretizations of the continuity-path equation on the
//! truncation box, with zero-Neumann rows for `phi` on the boundary. One
//! dimension uses the standard second difference; two dimensions the
//! determinant of the full central-difference Hessian including the mixed
//! term.
//!
//! Residuals are kept in difference form,
//!
//!   MA_h(u0 + phi) - exp(-(2m+2)(u0 + t phi)),
//!
//! rather than log form: in the far tail the true Hessian determinant sits
//! below the f64 quantization of second differences (about `eps |u| / h^2`),
//! so a pointwise log residual is unresolvable there, while the absolute
//! difference is what the integral identities consume and converges to
//! tolerance everywhere. Discrete convexity is likewise only meaningful where
//! the weight sits above the same noise floor; below it the check is skipped.

use super::band::BandMatrix;
use super::grid::Grid;

/// Weight level below which second differences are noise and the
/// convexity check is vacuous.
pub const CONVEXITY_FLOOR: f64 = 1e-8;

pub trait MaScheme {
    fn unknowns(&self) -> usize;
    /// Residual of every row (equation rows and boundary rows) into `out`.
    fn residual(&self, phi: &[f64], t: f64, out: &mut [f64]);
    fn jacobian(&self, phi: &[f64], t: f64) -> BandMatrix;
    /// Discrete convexity of `u0 + phi` at interior nodes carrying weight.
    fn is_convex(&self, phi: &[f64], t: f64) -> bool;
}

pub struct Scheme1d<'a> {
    pub grid: &'a Grid,
    pub u0: &'a [f64],
    pub k: f64,
}

impl<'a> Scheme1d<'a> {
    #[inline]
    fn d2u(&self, phi: &[f64], i: usize) -> f64 {
        let u = |j: usize| self.u0[j] + phi[j];
        (u(i + 1) - 2.0 * u(i) + u(i - 1)) / (self.grid.h * self.grid.h)
    }

    #[inline]
    fn weight(&self, phi: &[f64], t: f64, i: usize) -> f64 {
        (-self.k * (self.u0[i] + t * phi[i])).exp()
    }
}

impl<'a> MaScheme for Scheme1d<'a> {
    fn unknowns(&self) -> usize {
        self.grid.nodes_per_axis()
    }

    fn residual(&self, phi: &[f64], t: f64, out: &mut [f64]) {
        let n = self.grid.n;
        out[0] = phi[0] - phi[1];
        out[n] = phi[n] - phi[n - 1];
        for i in 1..n {
            out[i] = self.d2u(phi, i) - self.weight(phi, t, i);
        }
    }

    fn jacobian(&self, phi: &[f64], t: f64) -> BandMatrix {
        let n = self.grid.n;
        let h2 = self.grid.h * self.grid.h;
        let mut j = BandMatrix::zeros(n + 1, 1, 1);
        j.set(0, 0, 1.0);
        j.set(0, 1, -1.0);
        j.set(n, n, 1.0);
        j.set(n, n - 1, -1.0);
        for i in 1..n {
            j.set(i, i - 1, 1.0 / h2);
            j.set(i, i + 1, 1.0 / h2);
            j.set(i, i, -2.0 / h2 + self.k * t * self.weight(phi, t, i));
        }
        j
    }

    fn is_convex(&self, phi: &[f64], t: f64) -> bool {
        (1..self.grid.n).all(|i| {
            self.weight(phi, t, i) < CONVEXITY_FLOOR || self.d2u(phi, i) > 0.0
        })
    }
}

pub struct Scheme2d<'a> {
    pub grid: &'a Grid,
    pub u0: &'a [f64],
    pub k: f64,
}

impl<'a> Scheme2d<'a> {
    /// (Dxx, Dyy, Dxy) of u0 + phi at interior node (i, j).
    #[inline]
    fn hessian(&self, phi: &[f64], i: usize, j: usize) -> (f64, f64, f64) {
        let g = self.grid;
        let u = |a: usize, b: usize| {
            let id = g.id2(a, b);
            self.u0[id] + phi[id]
        };
        let h2 = g.h * g.h;
        let dxx = (u(i + 1, j) - 2.0 * u(i, j) + u(i - 1, j)) / h2;
        let dyy = (u(i, j + 1) - 2.0 * u(i, j) + u(i, j - 1)) / h2;
        let dxy = (u(i + 1, j + 1) + u(i - 1, j - 1) - u(i + 1, j - 1) - u(i - 1, j + 1))
            / (4.0 * h2);
        (dxx, dyy, dxy)
    }

    #[inline]
    fn weight(&self, phi: &[f64], t: f64, id: usize) -> f64 {
        (-self.k * (self.u0[id] + t * phi[id])).exp()
    }

    /// Boundary rows tie each rim node to its inward neighbor.
    fn boundary_pairs(&self) -> Vec<(usize, usize)> {
        let g = self.grid;
        let n = g.n;
        let mut pairs = Vec::new();
        for j in 0..=n {
            let jn = j.clamp(1, n - 1);
            pairs.push((g.id2(0, j), g.id2(1, jn)));
            pairs.push((g.id2(n, j), g.id2(n - 1, jn)));
        }
        for i in 1..n {
            pairs.push((g.id2(i, 0), g.id2(i, 1)));
            pairs.push((g.id2(i, n), g.id2(i, n - 1)));
        }
        pairs
    }
}

impl<'a> MaScheme for Scheme2d<'a> {
    fn unknowns(&self) -> usize {
        self.grid.node_count()
    }

    fn residual(&self, phi: &[f64], t: f64, out: &mut [f64]) {
        let g = self.grid;
        let n = g.n;
        for (row, inner) in self.boundary_pairs() {
            out[row] = phi[row] - phi[inner];
        }
        for i in 1..n {
            for j in 1..n {
                let id = g.id2(i, j);
                let (dxx, dyy, dxy) = self.hessian(phi, i, j);
                out[id] = dxx * dyy - dxy * dxy - self.weight(phi, t, id);
            }
        }
    }

    fn jacobian(&self, phi: &[f64], t: f64) -> BandMatrix {
        let g = self.grid;
        let n = g.n;
        let np = g.nodes_per_axis();
        let band = np + 1;
        let mut jmat = BandMatrix::zeros(g.node_count(), band, band);
        for (row, inner) in self.boundary_pairs() {
            jmat.set(row, row, 1.0);
            jmat.add(row, inner, -1.0);
        }
        let h2 = g.h * g.h;
        for i in 1..n {
            for j in 1..n {
                let id = g.id2(i, j);
                let (dxx, dyy, dxy) = self.hessian(phi, i, j);
                let cx = dyy / h2;
                let cy = dxx / h2;
                let cm = dxy / (2.0 * h2);
                jmat.set(id, g.id2(i + 1, j), cx);
                jmat.set(id, g.id2(i - 1, j), cx);
                jmat.set(id, g.id2(i, j + 1), cy);
                jmat.set(id, g.id2(i, j - 1), cy);
                jmat.set(id, g.id2(i + 1, j + 1), -cm);
                jmat.set(id, g.id2(i - 1, j - 1), -cm);
                jmat.set(id, g.id2(i + 1, j - 1), cm);
                jmat.set(id, g.id2(i - 1, j + 1), cm);
                jmat.set(
                    id,
                    id,
                    -2.0 * (cx + cy) + self.k * t * self.weight(phi, t, id),
                );
            }
        }
        jmat
    }

    fn is_convex(&self, phi: &[f64], t: f64) -> bool {
        let n = self.grid.n;
        for i in 1..n {
            for j in 1..n {
                let id = self.grid.id2(i, j);
                if self.weight(phi, t, id) < CONVEXITY_FLOOR {
                    continue;
                }
                let (dxx, dyy, dxy) = self.hessian(phi, i, j);
                if dxx <= 0.0 || dxx * dyy - dxy * dxy <= 0.0 {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobian_matches_finite_differences_1d() {
        let grid = Grid::new(1, 4.0, 64).unwrap();
        let np = grid.nodes_per_axis();
        let u0: Vec<f64> = (0..np).map(|i| 0.5 * grid.coord(i).powi(2)).collect();
        let scheme = Scheme1d {
            grid: &grid,
            u0: &u0,
            k: 4.0,
        };
        let phi: Vec<f64> = (0..np).map(|i| 0.01 * (grid.coord(i)).cos()).collect();
        check_jacobian(&scheme, &phi, 0.3);
    }

    #[test]
    fn jacobian_matches_finite_differences_2d() {
        let grid = Grid::new(2, 3.0, 64).unwrap();
        let np = grid.nodes_per_axis();
        let mut u0 = vec![0.0; grid.node_count()];
        for i in 0..np {
            for j in 0..np {
                let (x, y) = (grid.coord(i), grid.coord(j));
                u0[grid.id2(i, j)] = 0.5 * (x * x + 0.8 * y * y) + 0.1 * x * y;
            }
        }
        let scheme = Scheme2d {
            grid: &grid,
            u0: &u0,
            k: 6.0,
        };
        let mut phi = vec![0.0; grid.node_count()];
        for i in 0..np {
            for j in 0..np {
                let (x, y) = (grid.coord(i), grid.coord(j));
                phi[grid.id2(i, j)] = 0.02 * (x + 0.3 * y).sin();
            }
        }
        check_jacobian(&scheme, &phi, 0.4);
    }

    /// Directional derivative of the residual must match the band Jacobian.
    fn check_jacobian<S: MaScheme>(scheme: &S, phi: &[f64], t: f64) {
        let n = scheme.unknowns();
        let mut f_minus = vec![0.0; n];
        let mut f_plus = vec![0.0; n];
        let dir: Vec<f64> = (0..n).map(|i| ((i * 37 % 11) as f64 - 5.0) / 11.0).collect();
        let eps = 1e-6;
        let perturb = |s: f64| -> Vec<f64> {
            phi.iter().zip(&dir).map(|(p, d)| p + s * d).collect()
        };
        scheme.residual(&perturb(-eps), t, &mut f_minus);
        scheme.residual(&perturb(eps), t, &mut f_plus);
        let jd = scheme.jacobian(phi, t).matvec(&dir);
        for i in 0..n {
            let fd = (f_plus[i] - f_minus[i]) / (2.0 * eps);
            assert!(
                (fd - jd[i]).abs() < 1e-4 * (1.0 + jd[i].abs()),
                "row {i}: fd {fd} vs J.d {}",
                jd[i]
            );
        }
    }
}
