//! Reference transverse potential: the canonical symplectic potential
//! `G0(v) = 1/2 sum_a l_a(v) log l_a(v)` on the polytope and its Legendre-dual
//! potential `u0` on all of R^m, with gradient and Hessian evaluators.
//!
//! The additive constant of `u0` is fixed once per polytope so that the
//! weight `exp(-(2m+2) u0)` carries total mass `Vol`. Downstream, that single
//! normalization makes the solver's mass identity hold along the whole
//! continuity path without per-step renormalization.
//!
//! Dual points are carried as a pair `(v, l)`: coordinates plus facet
//! distances. Recomputing `l` from `v` by the affine formula cancels
//! catastrophically once `l` is below machine epsilon times `|v|`, while the
//! incremental updates used here keep `l` relatively accurate down to the
//! underflow threshold. Everything that matters near the boundary (gradient
//! map, Hessian, log-distances) is a function of `l`.

use crate::polytope::{HPolytope, VPolytope};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PotentialError {
    #[error("evaluation on or outside the boundary: facet {facet} value {value}")]
    BoundaryEvaluation { facet: usize, value: f64 },
    #[error("gradient-map inversion did not converge: residual {residual} after {iters} iterations")]
    NoConvergence { residual: f64, iters: usize },
    #[error("dimension {0} not supported by this evaluator")]
    UnsupportedDimension(usize),
}

/// A point of the open polytope carried as coordinates plus log facet
/// distances; the logs stay meaningful far past the f64 underflow threshold.
#[derive(Debug, Clone)]
pub struct DualPoint {
    pub v: Vec<f64>,
    pub log_l: Vec<f64>,
}

impl DualPoint {
    /// Facet distances; entries whose logs are below about -745 underflow
    /// to zero, which is the correct reading at that scale.
    pub fn distances(&self) -> Vec<f64> {
        self.log_l.iter().map(|&s| s.exp()).collect()
    }

    pub fn min_distance(&self) -> (usize, f64) {
        let (mut ai, mut av) = (0usize, self.log_l[0]);
        for (i, &s) in self.log_l.iter().enumerate().skip(1) {
            if s < av {
                ai = i;
                av = s;
            }
        }
        (ai, av.exp())
    }
}

/// Facet data of the polytope in floating point, with an interior point and
/// the vertex list (used for starting points and boundary sampling).
#[derive(Debug, Clone)]
pub struct SymplecticPotential {
    m: usize,
    normals: Vec<Vec<f64>>,
    offsets: Vec<f64>,
    vertices: Vec<Vec<f64>>,
    interior: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Gaussian elimination with partial pivoting and symmetric Jacobi scaling;
/// the scaling keeps barrier Hessians (entries spanning hundreds of orders of
/// magnitude near the boundary) solvable without overflow.
fn solve_scaled(mat: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let n = rhs.len();
    let mut d = vec![1.0; n];
    for i in 0..n {
        let mii = mat[i][i].abs();
        if mii > 0.0 && mii.is_finite() {
            d[i] = 1.0 / mii.sqrt();
        }
    }
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| mat[i][j] * d[i] * d[j]).collect())
        .collect();
    let mut b: Vec<f64> = (0..n).map(|i| rhs[i] * d[i]).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[p][c] == 0.0 || !a[p][c].is_finite() {
            return None;
        }
        a.swap(c, p);
        b.swap(c, p);
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                a[i][j] -= f * a[c][j];
            }
            b[i] -= f * b[c];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for j in i + 1..n {
            s -= a[i][j] * x[j];
        }
        if a[i][i] == 0.0 {
            return None;
        }
        x[i] = s / a[i][i];
    }
    for i in 0..n {
        x[i] *= d[i];
    }
    Some(x)
}

impl SymplecticPotential {
    pub fn from_polytope(h: &HPolytope, v: &VPolytope) -> Self {
        let m = h.dim();
        let normals: Vec<Vec<f64>> = h.facets().iter().map(|f| f.normal.to_f64_vec()).collect();
        let offsets: Vec<f64> = h
            .facets()
            .iter()
            .map(|f| {
                use num_traits::ToPrimitive;
                f.offset.to_f64().unwrap()
            })
            .collect();
        let vertices: Vec<Vec<f64>> = v.vertices.iter().map(|p| p.to_f64_vec()).collect();
        let mut interior = vec![0.0; m];
        for p in &vertices {
            for i in 0..m {
                interior[i] += p[i] / vertices.len() as f64;
            }
        }
        SymplecticPotential {
            m,
            normals,
            offsets,
            vertices,
            interior,
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn facet_count(&self) -> usize {
        self.normals.len()
    }

    pub fn interior_point(&self) -> &[f64] {
        &self.interior
    }

    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn facet_normal(&self, a: usize) -> &[f64] {
        &self.normals[a]
    }

    /// All affine facet values `l_a(v)` (fine away from the boundary).
    pub fn facet_values(&self, v: &[f64]) -> Vec<f64> {
        self.normals
            .iter()
            .zip(&self.offsets)
            .map(|(n, c)| dot(n, v) + c)
            .collect()
    }

    pub fn point(&self, v: &[f64]) -> DualPoint {
        DualPoint {
            v: v.to_vec(),
            log_l: self.facet_values(v).iter().map(|&l| l.ln()).collect(),
        }
    }

    pub fn min_facet_value(&self, v: &[f64]) -> (usize, f64) {
        min_entry(&self.facet_values(v))
    }

    fn check_interior(&self, l: &[f64]) -> Result<(), PotentialError> {
        for (a, &x) in l.iter().enumerate() {
            if x <= 0.0 {
                return Err(PotentialError::BoundaryEvaluation { facet: a, value: x });
            }
        }
        Ok(())
    }

    /// `G0 = 1/2 sum l_a log l_a` from facet distances.
    pub fn eval_values(&self, l: &[f64]) -> Result<f64, PotentialError> {
        self.check_interior(l)?;
        Ok(0.5 * l.iter().map(|&x| x * x.ln()).sum::<f64>())
    }

    /// `DG0 = 1/2 sum normal_a (1 + log l_a)`.
    pub fn grad_values(&self, l: &[f64]) -> Result<Vec<f64>, PotentialError> {
        self.check_interior(l)?;
        let mut g = vec![0.0; self.m];
        for (n, &x) in self.normals.iter().zip(l) {
            let w = 0.5 * (1.0 + x.ln());
            for i in 0..self.m {
                g[i] += w * n[i];
            }
        }
        Ok(g)
    }

    /// `D2G0 = 1/2 sum normal_a normal_a^T / l_a`, symmetric positive definite.
    pub fn hess_values(&self, l: &[f64]) -> Result<Vec<Vec<f64>>, PotentialError> {
        self.check_interior(l)?;
        let mut h = vec![vec![0.0; self.m]; self.m];
        for (n, &x) in self.normals.iter().zip(l) {
            let w = 0.5 / x;
            for i in 0..self.m {
                for j in 0..self.m {
                    h[i][j] += w * n[i] * n[j];
                }
            }
        }
        Ok(h)
    }

    pub fn eval(&self, v: &[f64]) -> Result<f64, PotentialError> {
        self.eval_values(&self.facet_values(v))
    }

    pub fn grad(&self, v: &[f64]) -> Result<Vec<f64>, PotentialError> {
        self.grad_values(&self.facet_values(v))
    }

    pub fn hess(&self, v: &[f64]) -> Result<Vec<Vec<f64>>, PotentialError> {
        self.hess_values(&self.facet_values(v))
    }

    /// `G0` from log distances: `1/2 sum s exp(s)`, underflow-safe.
    pub fn eval_logs(&self, s: &[f64]) -> f64 {
        0.5 * s.iter().map(|&x| x * x.exp()).sum::<f64>()
    }

    /// The gradient map is linear in the log distances:
    /// `DG0 = 1/2 sum normal_a (1 + s_a)`.
    pub fn grad_logs(&self, s: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.m];
        for (n, &x) in self.normals.iter().zip(s) {
            let w = 0.5 * (1.0 + x);
            for i in 0..self.m {
                g[i] += w * n[i];
            }
        }
        g
    }

    /// The vector `(D2G0)^{-1} normal_a / l_a` computed from log distances
    /// through a rescaled adjugate form. Reference scale is the smallest
    /// distance among the other facets, so the expression stays finite and
    /// overflow-free for any log values; it extends continuously to the
    /// closed polytope.
    pub fn ds_vector_logs(&self, s: &[f64], a: usize) -> Result<Vec<f64>, PotentialError> {
        // exponent guard: capped exp keeps the denominator representable
        let cexp = |e: f64| e.min(690.0).exp();
        match self.m {
            1 => {
                // n_a / (n_a^2/2 + sum_{b!=a} exp(s_a - s_b) n_b^2 / 2)
                let na = self.normals[a][0];
                let mut denom = 0.5 * na * na;
                for (b, n) in self.normals.iter().enumerate() {
                    if b != a {
                        denom += cexp(s[a] - s[b]) * 0.5 * n[0] * n[0];
                    }
                }
                Ok(vec![na / denom])
            }
            2 => {
                let cross = |p: &[f64], q: &[f64]| p[0] * q[1] - p[1] * q[0];
                let s_ref = s
                    .iter()
                    .enumerate()
                    .filter(|&(b, _)| b != a)
                    .map(|(_, &x)| x)
                    .fold(f64::INFINITY, f64::min);
                let t: Vec<f64> = s.iter().map(|&x| cexp(s_ref - x)).collect();
                let mut num = [0.0f64; 2];
                for (b, n) in self.normals.iter().enumerate() {
                    if b == a {
                        continue;
                    }
                    let w = 0.5 * cross(n, &self.normals[a]) * t[b];
                    num[0] += w * (-n[1]);
                    num[1] += w * n[0];
                }
                let mut d1 = 0.0;
                for (c, n) in self.normals.iter().enumerate() {
                    if c != a {
                        let x = cross(&self.normals[a], n);
                        d1 += 0.25 * x * x * t[c];
                    }
                }
                let mut d2 = 0.0;
                for b in 0..self.normals.len() {
                    for c in b + 1..self.normals.len() {
                        if b == a || c == a {
                            continue;
                        }
                        let x = cross(&self.normals[b], &self.normals[c]);
                        d2 += 0.25 * x * x * t[b] * t[c];
                    }
                }
                let denom = d1 + cexp(s[a] - s_ref) * d2;
                Ok(vec![num[0] / denom, num[1] / denom])
            }
            d => Err(PotentialError::UnsupportedDimension(d)),
        }
    }

    /// Invert the gradient map: solve `DG0(v) = x` by damped Newton in the
    /// log facet distances, where the gradient map is linear and iterates
    /// can never cross the boundary. The relative step per facet is clipped
    /// to 0.9 and backtracked on the residual norm. The coordinate shadow
    /// `v` moves with the best-resolved facets; log distance and coordinate
    /// stay consistent because the distances are affine in `v`.
    pub fn legendre_dual(
        &self,
        x: &[f64],
        start: Option<&DualPoint>,
        tol: f64,
    ) -> Result<DualPoint, PotentialError> {
        if self.m > 2 {
            return Err(PotentialError::UnsupportedDimension(self.m));
        }
        let mut p = match start {
            Some(p) if p.log_l.iter().all(|s| s.is_finite()) => p.clone(),
            _ => self.point(&self.interior),
        };
        let scale = 1.0f64.max(norm(x));
        let max_iter = 600;
        let residual = |s: &[f64]| -> Vec<f64> {
            self.grad_logs(s)
                .iter()
                .zip(x)
                .map(|(g, xi)| g - xi)
                .collect()
        };
        let mut res_vec = residual(&p.log_l);
        let mut res = norm(&res_vec);
        for iters in 0..max_iter {
            if res <= tol * scale {
                return Ok(p);
            }
            // Newton in log space: ds_a = <(D2G)^{-1} n_a / l_a, -r>
            let d = self.normals.len();
            let mut ds = vec![0.0; d];
            for a in 0..d {
                let coeff = self.ds_vector_logs(&p.log_l, a)?;
                ds[a] = -dot(&coeff, &res_vec);
            }
            // coordinate move recovered from the largest-distance facets
            let dv = self.recover_dv(&p.log_l, &ds)?;
            // relative fraction-to-boundary rule, factor 0.9
            let mut amax = 1.0f64;
            for &d in &ds {
                if d < 0.0 {
                    amax = amax.min(0.9 / (-d));
                }
            }
            let mut alpha = amax;
            let mut improved = false;
            for _ in 0..80 {
                let cand_s: Vec<f64> = p
                    .log_l
                    .iter()
                    .zip(&ds)
                    .map(|(s, d)| s + (alpha * d).ln_1p())
                    .collect();
                let cand_res = residual(&cand_s);
                let cr = norm(&cand_res);
                if cr * cr <= (1.0 - 1e-4 * alpha) * res * res {
                    for i in 0..self.m {
                        p.v[i] += alpha * dv[i];
                    }
                    p.log_l = cand_s;
                    res_vec = cand_res;
                    res = cr;
                    improved = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !improved {
                return Err(PotentialError::NoConvergence {
                    residual: res,
                    iters,
                });
            }
        }
        if res <= tol * scale {
            Ok(p)
        } else {
            Err(PotentialError::NoConvergence {
                residual: res,
                iters: max_iter,
            })
        }
    }

    /// Underlying coordinate increment of a log-space Newton direction,
    /// solved from the facets with the largest distances (whose absolute
    /// increments `l_a ds_a` are the best resolved).
    fn recover_dv(&self, s: &[f64], ds: &[f64]) -> Result<Vec<f64>, PotentialError> {
        let mut order: Vec<usize> = (0..s.len()).collect();
        order.sort_by(|&i, &j| s[j].total_cmp(&s[i]));
        match self.m {
            1 => {
                let b = order[0];
                Ok(vec![s[b].exp() * ds[b] / self.normals[b][0]])
            }
            2 => {
                let b = order[0];
                let cross = |p: &[f64], q: &[f64]| p[0] * q[1] - p[1] * q[0];
                let c = order[1..]
                    .iter()
                    .copied()
                    .find(|&c| cross(&self.normals[b], &self.normals[c]).abs() > 1e-9)
                    .ok_or(PotentialError::NoConvergence {
                        residual: f64::NAN,
                        iters: 0,
                    })?;
                let det = cross(&self.normals[b], &self.normals[c]);
                let rb = s[b].exp() * ds[b];
                let rc = s[c].exp() * ds[c];
                Ok(vec![
                    (rb * self.normals[c][1] - rc * self.normals[b][1]) / det,
                    (rc * self.normals[b][0] - rb * self.normals[c][0]) / det,
                ])
            }
            d => Err(PotentialError::UnsupportedDimension(d)),
        }
    }

    /// Norm of `(D2G0(v))^{-1} normal_a / l_a(v)` from log facet distances.
    pub fn ds_norm_logs(&self, s: &[f64], a: usize) -> Result<f64, PotentialError> {
        let v = self.ds_vector_logs(s, a)?;
        Ok(norm(&v))
    }

    pub fn ds_norm(&self, v: &[f64], a: usize) -> Result<f64, PotentialError> {
        let l = self.facet_values(v);
        self.check_interior(&l)?;
        let s: Vec<f64> = l.iter().map(|&x| x.ln()).collect();
        self.ds_norm_logs(&s, a)
    }
}

fn min_entry(l: &[f64]) -> (usize, f64) {
    let (mut ai, mut av) = (0, l[0]);
    for (i, &x) in l.iter().enumerate().skip(1) {
        if x < av {
            ai = i;
            av = x;
        }
    }
    (ai, av)
}

/// Legendre-dual potential on R^m with the mass-normalizing constant baked in.
#[derive(Debug, Clone)]
pub struct KahlerPotential {
    sp: SymplecticPotential,
    c0: f64,
    dual_tol: f64,
    exponent: f64,
    volume: f64,
}

/// Sup estimates of `|d/dx log l_a(Du0(x))|` over nested sample radii.
#[derive(Debug, Clone)]
pub struct ClaimReport {
    pub facet: usize,
    /// cumulative sup over `|x| <= radius`, one entry per requested radius
    pub sup_by_radius: Vec<(f64, f64)>,
    /// sup over boundary-hugging samples in the polytope itself
    pub near_facet_sup: f64,
}

impl ClaimReport {
    pub fn overall_sup(&self) -> f64 {
        self.sup_by_radius
            .iter()
            .map(|&(_, s)| s)
            .fold(self.near_facet_sup, f64::max)
    }
}

impl KahlerPotential {
    /// Builds the dual potential and fixes the additive constant by
    /// quadrature of the unnormalized weight against the exact volume.
    pub fn new(sp: SymplecticPotential, volume: f64) -> Result<Self, PotentialError> {
        let exponent = (2 * sp.dim() + 2) as f64;
        let mut kp = KahlerPotential {
            sp,
            c0: 0.0,
            dual_tol: 1e-12,
            exponent,
            volume,
        };
        let mass = kp.unnormalized_mass()?;
        kp.c0 = (mass / volume).ln() / exponent;
        Ok(kp)
    }

    pub fn sp(&self) -> &SymplecticPotential {
        &self.sp
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn dim(&self) -> usize {
        self.sp.dim()
    }

    /// Dual point of `x`, the gradient of the potential.
    pub fn dual(&self, x: &[f64], warm: Option<&DualPoint>) -> Result<DualPoint, PotentialError> {
        self.sp.legendre_dual(x, warm, self.dual_tol)
    }

    /// Value and dual point together: `u0(x) = <x, v> - G0(v) + c0`.
    pub fn eval_with_dual(
        &self,
        x: &[f64],
        warm: Option<&DualPoint>,
    ) -> Result<(f64, DualPoint), PotentialError> {
        let p = self.dual(x, warm)?;
        let g = self.sp.eval_logs(&p.log_l);
        Ok((dot(x, &p.v) - g + self.c0, p))
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64, PotentialError> {
        Ok(self.eval_with_dual(x, None)?.0)
    }

    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>, PotentialError> {
        Ok(self.dual(x, None)?.v)
    }

    /// `D2u0(x)` as the inverse of the dual Hessian at `v = Du0(x)`.
    pub fn hess(&self, x: &[f64]) -> Result<Vec<Vec<f64>>, PotentialError> {
        let p = self.dual(x, None)?;
        let h = self.sp.hess_values(&p.distances())?;
        let m = self.dim();
        let mut inv = vec![vec![0.0; m]; m];
        for j in 0..m {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            let col = solve_scaled(&h, &e).ok_or(PotentialError::NoConvergence {
                residual: f64::NAN,
                iters: 0,
            })?;
            for i in 0..m {
                inv[i][j] = col[i];
            }
        }
        Ok(inv)
    }

    /// Weight of the reference measure at `x`.
    pub fn weight(&self, x: &[f64]) -> Result<f64, PotentialError> {
        Ok((-self.exponent * self.eval(x)?).exp())
    }

    fn unnormalized_value(&self, x: &[f64], warm: Option<&DualPoint>) -> Result<(f64, DualPoint), PotentialError> {
        let p = self.dual(x, warm)?;
        let g = self.sp.eval_logs(&p.log_l);
        Ok(((-self.exponent * (dot(x, &p.v) - g)).exp(), p))
    }

    /// Radius beyond which the unnormalized weight has decayed below
    /// `threshold` relative to its value at the dual of the interior point.
    fn decay_radius(&self, threshold: f64) -> Result<f64, PotentialError> {
        let dirs = sample_directions(self.dim());
        let center_val = {
            let v = self.sp.interior_point().to_vec();
            let x = self.sp.grad(&v)?;
            self.unnormalized_value(&x, None)?.0
        };
        let mut rmax = 1.0f64;
        for dir in &dirs {
            let mut r = 1.0;
            let mut warm: Option<DualPoint> = None;
            for _ in 0..200 {
                let x: Vec<f64> = dir.iter().map(|d| d * r).collect();
                let (val, p) = self.unnormalized_value(&x, warm.as_ref())?;
                warm = Some(p);
                if val <= threshold * center_val {
                    break;
                }
                r += 1.0;
            }
            rmax = rmax.max(r);
        }
        Ok(rmax)
    }

    fn unnormalized_mass(&self) -> Result<f64, PotentialError> {
        let r = self.decay_radius(1e-18)?;
        let m = self.dim();
        match m {
            1 => {
                let n = 4096usize;
                let h = 2.0 * r / n as f64;
                let mut sum = 0.0;
                let mut warm: Option<DualPoint> = None;
                for i in 0..=n {
                    let x = [-r + i as f64 * h];
                    let (val, p) = self.unnormalized_value(&x, warm.as_ref())?;
                    warm = Some(p);
                    let w = if i == 0 || i == n { 0.5 } else { 1.0 };
                    sum += w * val;
                }
                Ok(sum * h)
            }
            2 => {
                let n = 384usize;
                let h = 2.0 * r / n as f64;
                let mut sum = 0.0;
                let mut prev_row: Vec<DualPoint> = Vec::new();
                for i in 0..=n {
                    let mut row: Vec<DualPoint> = Vec::with_capacity(n + 1);
                    for j in 0..=n {
                        let x = [-r + i as f64 * h, -r + j as f64 * h];
                        let warm = if j > 0 {
                            Some(&row[j - 1])
                        } else if !prev_row.is_empty() {
                            Some(&prev_row[0])
                        } else {
                            None
                        };
                        let (val, p) = self.unnormalized_value(&x, warm)?;
                        let wi = if i == 0 || i == n { 0.5 } else { 1.0 };
                        let wj = if j == 0 || j == n { 0.5 } else { 1.0 };
                        sum += wi * wj * val;
                        row.push(p);
                    }
                    prev_row = row;
                }
                Ok(sum * h * h)
            }
            d => Err(PotentialError::UnsupportedDimension(d)),
        }
    }

    /// Sup estimate of the log-facet-distance derivative for one facet,
    /// over nested radii in x-space plus boundary-hugging samples in v-space.
    pub fn claim_bound_check(
        &self,
        facet: usize,
        radii: &[f64],
    ) -> Result<ClaimReport, PotentialError> {
        let dirs = sample_directions(self.dim());
        let mut sup = {
            let p = self.sp.point(self.sp.interior_point());
            self.sp.ds_norm_logs(&p.log_l, facet)?
        };
        let mut sup_by_radius = Vec::with_capacity(radii.len());
        let mut warm: Vec<Option<DualPoint>> = vec![None; dirs.len()];
        let mut sorted: Vec<f64> = radii.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut prev_r = 0.0;
        for &r in &sorted {
            // a few intermediate shells so the running sup does not skip
            // over structure between requested radii
            let shells = 8;
            for s in 1..=shells {
                let rr = prev_r + (r - prev_r) * s as f64 / shells as f64;
                for (di, dir) in dirs.iter().enumerate() {
                    let x: Vec<f64> = dir.iter().map(|d| d * rr).collect();
                    let p = self.dual(&x, warm[di].as_ref())?;
                    sup = sup.max(self.sp.ds_norm_logs(&p.log_l, facet)?);
                    warm[di] = Some(p);
                }
            }
            sup_by_radius.push((r, sup));
            prev_r = r;
        }
        // boundary-hugging samples on the target facet
        let mut near = 0.0f64;
        let facet_vertices: Vec<&Vec<f64>> = self
            .sp
            .vertices()
            .iter()
            .filter(|p| self.sp.facet_values(p)[facet].abs() < 1e-12)
            .collect();
        let interior = self.sp.interior_point().to_vec();
        let mut boundary_points: Vec<Vec<f64>> = Vec::new();
        match facet_vertices.len() {
            0 => {}
            1 => boundary_points.push(facet_vertices[0].clone()),
            _ => {
                let (p, q) = (facet_vertices[0], facet_vertices[1]);
                for k in 0..=8 {
                    let s = k as f64 / 8.0;
                    boundary_points
                        .push(p.iter().zip(q).map(|(a, b)| a * (1.0 - s) + b * s).collect());
                }
            }
        }
        for bp in &boundary_points {
            for eps in [1e-2, 1e-4, 1e-6] {
                let v: Vec<f64> = bp
                    .iter()
                    .zip(&interior)
                    .map(|(b, c)| b * (1.0 - eps) + c * eps)
                    .collect();
                near = near.max(self.sp.ds_norm(&v, facet)?);
            }
        }
        Ok(ClaimReport {
            facet,
            sup_by_radius,
            near_facet_sup: near,
        })
    }
}

/// Deterministic direction sets for radial sweeps.
fn sample_directions(m: usize) -> Vec<Vec<f64>> {
    match m {
        1 => vec![vec![1.0], vec![-1.0]],
        2 => (0..48)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 48.0;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        _ => panic!("direction sampling only for m <= 2"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, RatVector};
    use crate::polytope::{enumerate_vertices, volume_barycenter, HPolytope};
    use rand::{Rng, SeedableRng};

    fn build(h: HPolytope) -> (SymplecticPotential, f64) {
        let v = enumerate_vertices(&h).unwrap();
        let s = volume_barycenter(&h, &v).unwrap();
        use num_traits::ToPrimitive;
        (
            SymplecticPotential::from_polytope(&h, &v),
            s.volume.to_f64().unwrap(),
        )
    }

    fn symmetric() -> (SymplecticPotential, f64) {
        build(HPolytope::new(
            1,
            vec![
                (RatVector::new(vec![rat(1, 2)]), rat(1, 2)),
                (RatVector::new(vec![rat(-1, 2)]), rat(1, 2)),
            ],
        ))
    }

    fn weighted() -> (SymplecticPotential, f64) {
        build(HPolytope::new(
            1,
            vec![
                (RatVector::new(vec![rat(1, 4)]), rat(1, 2)),
                (RatVector::new(vec![rat(-3, 4)]), rat(1, 2)),
            ],
        ))
    }

    #[test]
    fn potential_values_at_center() {
        let (sp, _) = symmetric();
        let g0 = sp.eval(&[0.0]).unwrap();
        assert!((g0 - (-0.5 * 2.0f64.ln())).abs() < 1e-15);
        let dg = sp.grad(&[0.0]).unwrap();
        assert!(dg[0].abs() < 1e-15);
        let h = sp.hess(&[0.0]).unwrap();
        assert!((h[0][0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hessian_blows_up_at_facets() {
        let (sp, _) = symmetric();
        let h1 = sp.hess(&[0.9]).unwrap()[0][0];
        let h2 = sp.hess(&[0.99]).unwrap()[0][0];
        assert!(h2 > 5.0 * h1);
        assert!(matches!(
            sp.eval(&[1.0]),
            Err(PotentialError::BoundaryEvaluation { .. })
        ));
    }

    #[test]
    fn dual_at_origin_is_center_for_symmetric_data() {
        let (sp, _) = symmetric();
        let p = sp.legendre_dual(&[0.0], None, 1e-12).unwrap();
        assert!(p.v[0].abs() < 1e-12);
    }

    #[test]
    fn dual_is_monotone_in_1d() {
        let (sp, _) = symmetric();
        let mut prev = -1.0;
        for k in -40..=40 {
            let x = [k as f64 * 0.5];
            let p = sp.legendre_dual(&x, None, 1e-12).unwrap();
            assert!(p.v[0] > prev || p.log_l.iter().any(|&s| s < -32.0));
            assert!(p.v[0].abs() <= 1.0);
            assert!(p.log_l.iter().all(|&s| s < 0.7));
            prev = p.v[0];
        }
    }

    #[test]
    fn dual_reaches_deep_tail() {
        // facet distances must stay relatively accurate far beyond the
        // resolution of the coordinate representation
        let (sp, _) = symmetric();
        for &x in &[20.0, 50.0, 100.0] {
            let p = sp.legendre_dual(&[x], None, 1e-12).unwrap();
            let g = sp.grad_logs(&p.log_l);
            assert!((g[0] - x).abs() < 1e-10 * x);
            // DG = (1/4) log(l1/l2) and l1 + l2 = 1 force log l2 ~ -4x
            assert!(
                (p.log_l[1] + 4.0 * x).abs() < 1e-8 * (4.0 * x),
                "x={x}: log l2 = {}",
                p.log_l[1]
            );
        }
    }

    #[test]
    fn dual_round_robin() {
        let (sp, _) = symmetric();
        let (wsp, _) = weighted();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for sp in [&sp, &wsp] {
            for _ in 0..100 {
                let x = [rng.gen_range(-10.0..10.0)];
                let p = sp.legendre_dual(&x, None, 1e-12).unwrap();
                let g = sp.grad_logs(&p.log_l);
                assert!((g[0] - x[0]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn round_sphere_closed_form() {
        // Symmetric interval: u0(x) = x + log(1+exp(-4x))/2 + c0 with
        // c0 = -(3/4) log 2, an exact closed form used as an oracle.
        let (sp, vol) = symmetric();
        let kp = KahlerPotential::new(sp, vol).unwrap();
        assert!(
            (kp.c0() - (-0.75 * 2.0f64.ln())).abs() < 1e-8,
            "c0 = {}",
            kp.c0()
        );
        for &x in &[-3.0f64, -0.7, 0.0, 0.4, 2.5] {
            let expected = x + 0.5 * (-4.0 * x).exp().ln_1p() - 0.75 * 2.0f64.ln();
            assert!((kp.eval(&[x]).unwrap() - expected).abs() < 1e-8);
            let grad = kp.grad(&[x]).unwrap()[0];
            assert!((grad - (2.0 * x).tanh()).abs() < 1e-10);
            let sig = 1.0 / (1.0 + (-4.0f64 * x).exp());
            let hess = kp.hess(&[x]).unwrap()[0][0];
            assert!((hess - 8.0 * sig * (1.0 - sig)).abs() < 1e-8);
        }
    }

    #[test]
    fn convexity_and_fd_gradient() {
        let (wsp, vol) = weighted();
        let kp = KahlerPotential::new(wsp, vol).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let x1 = rng.gen_range(-8.0..8.0);
            let x2 = rng.gen_range(-8.0..8.0);
            let mid = kp.eval(&[0.5 * (x1 + x2)]).unwrap();
            let avg = 0.5 * (kp.eval(&[x1]).unwrap() + kp.eval(&[x2]).unwrap());
            assert!(mid <= avg + 1e-10);

            let h = 1e-4;
            let fd = (kp.eval(&[x1 + h]).unwrap() - kp.eval(&[x1 - h]).unwrap()) / (2.0 * h);
            let g = kp.grad(&[x1]).unwrap()[0];
            assert!((fd - g).abs() < 1e-6, "fd {fd} vs grad {g}");
        }
    }

    #[test]
    fn hess_is_inverse_of_dual_hess() {
        let (wsp, vol) = weighted();
        let kp = KahlerPotential::new(wsp, vol).unwrap();
        for &x in &[-5.0, -1.0, 0.0, 2.0, 6.0] {
            let p = kp.dual(&[x], None).unwrap();
            let hu = kp.hess(&[x]).unwrap()[0][0];
            let hg = kp.sp().hess_values(&p.distances()).unwrap()[0][0];
            assert!((hu * hg - 1.0).abs() < 1e-9, "x={x}: {}", hu * hg - 1.0);
        }
    }

    #[test]
    fn linear_growth_along_rays() {
        let (wsp, vol) = weighted();
        let kp = KahlerPotential::new(wsp, vol).unwrap();
        // slopes approach the interval endpoints -2 and 2/3
        let u50 = kp.eval(&[50.0]).unwrap();
        let u100 = kp.eval(&[100.0]).unwrap();
        assert!(((u100 - u50) / 50.0 - 2.0 / 3.0).abs() < 1e-6);
        let d50 = kp.eval(&[-50.0]).unwrap();
        let d100 = kp.eval(&[-100.0]).unwrap();
        assert!(((d100 - d50) / 50.0 - 2.0).abs() < 1e-6);
    }

    #[test]
    fn claim_bound_is_stable_under_radius_doubling() {
        let (wsp, vol) = weighted();
        let kp = KahlerPotential::new(wsp, vol).unwrap();
        for facet in 0..2 {
            let rep = kp.claim_bound_check(facet, &[50.0, 100.0]).unwrap();
            let s50 = rep.sup_by_radius[0].1;
            let s100 = rep.sup_by_radius[1].1;
            assert!(s100.is_finite() && s100 > 0.0);
            assert!((s100 - s50).abs() <= 0.01 * s50.abs().max(1e-30));
        }
    }

    #[test]
    fn ds_norm_matches_direct_inverse_in_the_interior() {
        let (wsp, _) = weighted();
        // direct: hess = [[g]], ds = n_a/(l_a g)
        for &v in &[-1.5, 0.0, 0.3] {
            let g = wsp.hess(&[v]).unwrap()[0][0];
            for a in 0..2 {
                let l = wsp.facet_values(&[v])[a];
                let direct = (wsp.facet_normal(a)[0] / (l * g)).abs();
                let stable = wsp.ds_norm(&[v], a).unwrap();
                assert!((direct - stable).abs() < 1e-12 * direct.max(1.0));
            }
        }
    }

    #[test]
    fn ds_norm_continuous_up_to_the_facet() {
        let (wsp, _) = weighted();
        // approaching the right endpoint v = 2/3 (facet 1)
        let v1 = wsp.ds_norm(&[2.0 / 3.0 - 1e-6], 1).unwrap();
        let v2 = wsp
            .ds_norm_logs(&[(2.0f64 / 3.0).ln(), -600.0], 1)
            .unwrap();
        assert!((v1 - v2).abs() < 1e-4 * v1, "{v1} vs {v2}");
        // non-binding facet stays bounded trivially
        let nb = wsp.ds_norm(&[2.0 / 3.0 - 1e-9], 0).unwrap();
        assert!(nb.is_finite());
    }

    #[test]
    fn ds_norm_2d_matches_direct_inverse() {
        // round 5-sphere triangle
        let h = HPolytope::new(
            2,
            vec![
                (RatVector::new(vec![rat(2, 3), rat(1, 3)]), rat(1, 3)),
                (RatVector::new(vec![rat(-1, 3), rat(1, 3)]), rat(1, 3)),
                (RatVector::new(vec![rat(-1, 3), rat(-2, 3)]), rat(1, 3)),
            ],
        );
        let v = enumerate_vertices(&h).unwrap();
        let sp = SymplecticPotential::from_polytope(&h, &v);
        for pt in [[0.0, 0.0], [0.3, -0.2], [-0.5, 0.4]] {
            let hess = sp.hess(&pt).unwrap();
            for a in 0..3 {
                let l = sp.facet_values(&pt)[a];
                let rhs = sp.facet_normal(a).to_vec();
                let sol = solve_scaled(&hess, &rhs).unwrap();
                let direct = (sol[0] * sol[0] + sol[1] * sol[1]).sqrt() / l;
                let stable = sp.ds_norm(&pt, a).unwrap();
                assert!(
                    (direct - stable).abs() < 1e-10 * direct.max(1.0),
                    "facet {a} at {pt:?}: {direct} vs {stable}"
                );
            }
        }
    }
}
