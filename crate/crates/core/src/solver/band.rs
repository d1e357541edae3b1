//! Banded LU with partial pivoting (LAPACK `gbtrf`-style storage).
//!
//! The Newton systems are narrow bands: tridiagonal for the 1-d scheme,
//! bandwidth `N+2` for the 2-d nine-point stencil. Partial pivoting needs
//! `kl` extra superdiagonals of fill, so entry `(i, j)` lives at band row
//! `kl + ku + i - j` of column `j` in a `(2*kl + ku + 1) x n` array.

#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    rows: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let rows = 2 * kl + ku + 1;
        BandMatrix {
            n,
            kl,
            ku,
            rows,
            data: vec![0.0; rows * n],
        }
    }

    pub fn reset(&mut self) {
        self.data.fill(0.0);
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + self.ku + self.kl >= j && j + self.kl >= i, "({i},{j}) outside band");
        j * self.rows + (self.kl + self.ku + i - j)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] += v;
    }

    /// Dense action `A x`, for tests and residual checks.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for j in 0..self.n {
            let lo = j.saturating_sub(self.ku);
            let hi = (j + self.kl).min(self.n - 1);
            for i in lo..=hi {
                y[i] += self.data[self.idx(i, j)] * x[j];
            }
        }
        y
    }

    /// Factor in place; returns the pivot permutation or `None` on a zero pivot.
    pub fn factor(mut self) -> Option<BandLu> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let kv = kl + ku;
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // pivot search in column j among rows j..=j+km
            let mut jp = 0usize;
            let mut best = 0.0f64;
            for p in 0..=km {
                let a = self.data[j * self.rows + kv + p].abs();
                if a > best {
                    best = a;
                    jp = p;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return None;
            }
            ipiv[j] = j + jp;
            if jp != 0 {
                let cmax = (j + kv).min(n - 1);
                for c in j..=cmax {
                    let r1 = self.idx(j, c);
                    let r2 = self.idx(j + jp, c);
                    self.data.swap(r1, r2);
                }
            }
            let pivot = self.data[j * self.rows + kv];
            for p in 1..=km {
                self.data[j * self.rows + kv + p] /= pivot;
            }
            let cmax = (j + kv).min(n - 1);
            for c in j + 1..=cmax {
                let ajc = self.data[self.idx(j, c)];
                if ajc != 0.0 {
                    for p in 1..=km {
                        let m = self.data[j * self.rows + kv + p];
                        let k = self.idx(j + p, c);
                        self.data[k] -= m * ajc;
                    }
                }
            }
        }
        Some(BandLu { mat: self, ipiv })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    mat: BandMatrix,
    ipiv: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.mat.n;
        let (kl, ku) = (self.mat.kl, self.mat.ku);
        let kv = kl + ku;
        let mut x = rhs.to_vec();
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                x.swap(j, p);
            }
            let km = kl.min(n - 1 - j);
            for q in 1..=km {
                x[j + q] -= self.mat.data[j * self.mat.rows + kv + q] * x[j];
            }
        }
        for i in (0..n).rev() {
            let cmax = (i + kv).min(n - 1);
            let mut s = x[i];
            for c in i + 1..=cmax {
                s -= self.mat.data[self.mat.idx(i, c)] * x[c];
            }
            x[i] = s / self.mat.data[self.mat.idx(i, i)];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Vec<f64> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.to_vec();
        let mut x = b.to_vec();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs())).unwrap();
            m.swap(c, p);
            x.swap(c, p);
            for i in c + 1..n {
                let f = m[i][c] / m[c][c];
                for j in c..n {
                    m[i][j] -= f * m[c][j];
                }
                x[i] -= f * x[c];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let t = m[i][j] * x[j];
                x[i] -= t;
            }
            x[i] /= m[i][i];
        }
        x
    }

    #[test]
    fn matches_dense_on_random_bands() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for &(n, kl, ku) in &[(7usize, 1usize, 1usize), (12, 3, 2), (25, 5, 5), (40, 1, 1)] {
            let mut band = BandMatrix::zeros(n, kl, ku);
            let mut dense = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if j + kl >= i && i + ku >= j {
                        let v: f64 = rng.gen_range(-1.0..1.0);
                        let v = if i == j { v + 4.0 } else { v };
                        band.set(i, j, v);
                        dense[i][j] = v;
                    }
                }
            }
            let rhs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lu = band.factor().unwrap();
            let x = lu.solve(&rhs);
            let y = dense_solve(&dense, &rhs);
            for (a, b) in x.iter().zip(&y) {
                assert!((a - b).abs() < 1e-10, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn pivoting_handles_weak_diagonals() {
        // first diagonal entry zero forces a row swap
        let mut band = BandMatrix::zeros(3, 1, 1);
        band.set(0, 0, 0.0);
        band.set(0, 1, 1.0);
        band.set(1, 0, 2.0);
        band.set(1, 1, 1.0);
        band.set(1, 2, 0.5);
        band.set(2, 1, 1.0);
        band.set(2, 2, 3.0);
        let lu = band.factor().unwrap();
        let x = lu.solve(&[1.0, 2.0, 3.0]);
        // verify A x = b
        let ax = [x[1], 2.0 * x[0] + x[1] + 0.5 * x[2], x[1] + 3.0 * x[2]];
        for (a, b) in ax.iter().zip(&[1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut band = BandMatrix::zeros(2, 1, 1);
        band.set(0, 0, 1.0);
        band.set(0, 1, 1.0);
        band.set(1, 0, 1.0);
        band.set(1, 1, 1.0);
        assert!(band.factor().is_none());
    }
}
