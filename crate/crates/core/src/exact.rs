//! Exact rational vectors and small dense linear algebra.
//!
//! Everything in the geometric front half of the pipeline (cone validation,
//! transverse reduction, vertex enumeration, volumes, barycenters, the ratio
//! `R`) runs on [`Rat`] values. No float enters until the potential/solver
//! layer converts a finished polytope to `f64`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;

pub type Rat = BigRational;

/// Rational from an integer pair, panicking on zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    Rat::from_integer(BigInt::from(num))
}

/// A point of the ambient rational vector space (lattice, dual lattice, or
/// transverse coordinates, depending on context).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatVector {
    coords: Vec<Rat>,
}

impl fmt::Debug for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.as_strings().join(", "))
    }
}

impl fmt::Display for RatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.as_strings().join(", "))
    }
}

impl RatVector {
    pub fn new(coords: Vec<Rat>) -> Self {
        RatVector { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RatVector::new(coords.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        RatVector::new(vec![Rat::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![Rat::zero(); dim];
        v[axis] = Rat::one();
        RatVector::new(v)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.coords[i]
    }

    pub fn dot(&self, other: &RatVector) -> Rat {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &RatVector) -> RatVector {
        assert_eq!(self.dim(), other.dim());
        RatVector::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rat) -> RatVector {
        RatVector::new(self.coords.iter().map(|a| a * c).collect())
    }

    pub fn neg(&self) -> RatVector {
        RatVector::new(self.coords.iter().map(|a| -a).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    /// True when the entries are coprime integers (no common factor to pull out).
    pub fn is_primitive_integral(&self) -> bool {
        if !self.is_integral() || self.is_zero() {
            return false;
        }
        let g = self
            .coords
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(&c.to_integer()));
        g == BigInt::one()
    }

    /// Scale to the primitive integer vector on the same ray, keeping direction.
    pub fn primitive(&self) -> RatVector {
        assert!(!self.is_zero(), "primitive() of zero vector");
        let lcm_den = self
            .coords
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coords
            .iter()
            .map(|c| c.numer() * (&lcm_den / c.denom()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        RatVector::new(ints.iter().map(|c| Rat::from_integer(c / &g)).collect())
    }

    /// Primitive representative with the first nonzero entry positive.
    pub fn primitive_sign_canonical(&self) -> RatVector {
        let p = self.primitive();
        match p.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => p.neg(),
            _ => p,
        }
    }

    pub fn to_f64_vec(&self) -> Vec<f64> {
        self.coords
            .iter()
            .map(|c| c.to_f64().expect("rational out of f64 range"))
            .collect()
    }

    pub fn as_strings(&self) -> Vec<String> {
        self.coords.iter().map(rat_to_string).collect()
    }
}

/// Canonical `p/q` rendering (plain `p` when the denominator is 1).
pub fn rat_to_string(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q` with exact integer components.
pub fn rat_from_string(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let parse_int = |t: &str| -> Result<BigInt, String> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| format!("not an integer: {t:?}"))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(Rat::new(parse_int(p)?, den))
        }
    }
}

/// Reduced row echelon form of a dense rational matrix, in place.
/// Returns the pivot column of each pivot row.
pub fn rref(rows: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = if nrows == 0 { 0 } else { rows[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[RatVector]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|v| v.coords().to_vec()).collect();
    rref(&mut m).len()
}

/// Solve the (possibly overdetermined) system `rows · x = rhs` exactly.
/// `Ok(None)` means inconsistent, `Err(())` would never occur; a non-unique
/// solution reports as `Ok(Some(..))` only when `require_unique` is false.
pub fn solve_linear(
    rows: &[RatVector],
    rhs: &[Rat],
    require_unique: bool,
) -> Option<Option<RatVector>> {
    assert_eq!(rows.len(), rhs.len());
    let ncols = rows.first().map_or(0, |r| r.dim());
    let mut aug: Vec<Vec<Rat>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut row = r.coords().to_vec();
            row.push(b.clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    // Inconsistent when a pivot lands in the rhs column.
    if pivots.contains(&ncols) {
        return Some(None);
    }
    if require_unique && pivots.len() < ncols {
        return None;
    }
    let mut x = vec![Rat::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][ncols].clone();
    }
    Some(Some(RatVector::new(x)))
}

/// Basis of the right kernel of the matrix whose rows are `rows`.
pub fn kernel_basis(rows: &[RatVector], ncols: usize) -> Vec<RatVector> {
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|v| v.coords().to_vec()).collect();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); ncols];
            v[f] = Rat::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -m[i][f].clone();
            }
            RatVector::new(v)
        })
        .collect()
}

/// Determinant of a square rational matrix given as rows.
pub fn determinant(rows: &[RatVector]) -> Rat {
    let n = rows.len();
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|v| v.coords().to_vec()).collect();
    assert!(m.iter().all(|r| r.len() == n), "determinant of non-square");
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                for j in c..n {
                    let t = &m[c][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
    }
    det
}
