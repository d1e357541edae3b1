//! Moment-cone validation and the reduction from the `(m+1)`-dimensional cone
//! picture to the `m`-dimensional transverse picture.
//!
//! The input is the combinatorial shadow of a compact toric contact geometry:
//! integer facet normals of a pointed full-dimensional cone together with a
//! rational Reeb vector that is strictly positive on the cone. The "good cone"
//! lattice condition (each face's normals extending to a lattice basis) is a
//! trust boundary: it is assumed, not checked.

use crate::exact::{kernel_basis, rank, rat_int, solve_linear, Rat, RatVector};
use crate::polytope::HPolytope;
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConeError {
    #[error("need at least m+1 = {expected} facet normals, got {got}")]
    TooFewFacets { expected: usize, got: usize },
    #[error("facet normal {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("facet normal {0} is not integral")]
    NonIntegralNormal(usize),
    #[error("facet normal {0} is zero")]
    ZeroNormal(usize),
    #[error("facet normals do not span the ambient space; the Chern covector is not unique")]
    DegenerateCone,
    #[error("no covector pairs to -1 with every facet normal (first Chern class of the contact bundle is nonzero)")]
    InconsistentChernCondition,
    #[error("cone has no extreme ray and no interior point")]
    EmptyCone,
    #[error("Reeb vector is not strictly positive on the cone: pairing {pairing} with extreme ray {ray}")]
    ReebNotPositive { ray: String, pairing: String },
    #[error("Reeb vector pairs to {0} >= 0 with the Chern covector; it cannot be normalized")]
    ReebSignError(String),
    #[error("internal normalization failure: {0}")]
    InternalNormalizationError(String),
}

/// Facet normals of the moment cone plus the Reeb vector: the complete
/// combinatorial input of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentCone {
    /// Transverse complex dimension; the cone lives in dimension `m + 1`.
    pub m: usize,
    /// Inward facet normals, integer lattice vectors of length `m + 1`.
    pub normals: Vec<RatVector>,
    /// Reeb vector, rational, length `m + 1`.
    pub reeb: RatVector,
}

/// The unique rational covector pairing to -1 with every facet normal.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaVector(pub RatVector);

/// Integral basis of the Reeb-transverse hyperplane `ker(gamma)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransverseBasis {
    pub vectors: Vec<RatVector>,
}

/// Outcome of the full input validation pass.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub gamma: GammaVector,
    pub normalized: MomentCone,
    pub scaling: Rat,
    pub rays: Vec<RatVector>,
    pub min_ray_pairing: Rat,
    pub warnings: Vec<String>,
}

impl MomentCone {
    pub fn new(m: usize, normals: Vec<RatVector>, reeb: RatVector) -> Self {
        MomentCone { m, normals, reeb }
    }

    pub fn ambient_dim(&self) -> usize {
        self.m + 1
    }

    /// Structural checks: dimensions, integrality, facet count, spanning.
    /// Returns primitivity warnings (non-primitive integer normals are legal
    /// input but suspicious, since facet normals of a good cone are primitive).
    pub fn check_structure(&self) -> Result<Vec<String>, ConeError> {
        let n = self.ambient_dim();
        if self.m < 1 {
            return Err(ConeError::TooFewFacets {
                expected: 2,
                got: self.normals.len(),
            });
        }
        if self.normals.len() < n {
            return Err(ConeError::TooFewFacets {
                expected: n,
                got: self.normals.len(),
            });
        }
        if self.reeb.dim() != n {
            return Err(ConeError::DimensionMismatch {
                index: usize::MAX,
                got: self.reeb.dim(),
                expected: n,
            });
        }
        let mut warnings = Vec::new();
        for (i, lam) in self.normals.iter().enumerate() {
            if lam.dim() != n {
                return Err(ConeError::DimensionMismatch {
                    index: i,
                    got: lam.dim(),
                    expected: n,
                });
            }
            if lam.is_zero() {
                return Err(ConeError::ZeroNormal(i));
            }
            if !lam.is_integral() {
                return Err(ConeError::NonIntegralNormal(i));
            }
            if !lam.is_primitive_integral() {
                warnings.push(format!("facet normal {i} = {lam} is not primitive"));
            }
        }
        if rank(&self.normals) != n {
            return Err(ConeError::DegenerateCone);
        }
        Ok(warnings)
    }
}

/// Solve `<gamma, lambda_a> = -1` for all facets, requiring uniqueness.
pub fn solve_gamma(cone: &MomentCone) -> Result<GammaVector, ConeError> {
    cone.check_structure()?;
    let rhs = vec![rat_int(-1); cone.normals.len()];
    match solve_linear(&cone.normals, &rhs, true) {
        None => Err(ConeError::DegenerateCone),
        Some(None) => Err(ConeError::InconsistentChernCondition),
        Some(Some(g)) => Ok(GammaVector(g)),
    }
}

/// Rescale the Reeb vector so that `<gamma, reeb> = -(m+1)` exactly.
pub fn normalize_reeb(cone: &MomentCone, gamma: &GammaVector) -> Result<(MomentCone, Rat), ConeError> {
    let pairing = gamma.0.dot(&cone.reeb);
    if !pairing.is_negative() {
        return Err(ConeError::ReebSignError(
            crate::exact::rat_to_string(&pairing),
        ));
    }
    let target = -rat_int(cone.m as i64 + 1);
    let c = &target / &pairing;
    debug_assert!(c.is_positive());
    let scaled = MomentCone {
        m: cone.m,
        normals: cone.normals.clone(),
        reeb: cone.reeb.scale(&c),
    };
    Ok((scaled, c))
}

/// Generators of the 1-dimensional faces of `{y : <y, lambda_a> >= 0}`.
///
/// Brute force over m-element subsets of the normals: each candidate ray is
/// the kernel of the subset, kept when one sign choice satisfies every
/// inequality. Rays come out primitive, deduplicated, sorted.
pub fn extreme_rays(cone: &MomentCone) -> Result<Vec<RatVector>, ConeError> {
    let n = cone.ambient_dim();
    let mut rays: Vec<RatVector> = Vec::new();
    for subset in (0..cone.normals.len()).combinations(n - 1) {
        let rows: Vec<RatVector> = subset.iter().map(|&i| cone.normals[i].clone()).collect();
        let kernel = kernel_basis(&rows, n);
        if kernel.len() != 1 {
            continue;
        }
        let dir = kernel[0].primitive();
        for cand in [dir.clone(), dir.neg()] {
            let feasible = cone.normals.iter().all(|lam| !cand.dot(lam).is_negative());
            if feasible && !rays.contains(&cand) {
                rays.push(cand);
            }
        }
    }
    if rays.is_empty() {
        return Err(ConeError::EmptyCone);
    }
    rays.sort_by(|a, b| a.coords().cmp(b.coords()));
    Ok(rays)
}

/// Assert Reeb positivity on every extreme ray; reports the minimum pairing.
pub fn check_reeb(cone: &MomentCone) -> Result<(Vec<RatVector>, Rat), ConeError> {
    let rays = extreme_rays(cone)?;
    let mut min_pairing: Option<Rat> = None;
    for ray in &rays {
        let p = ray.dot(&cone.reeb);
        if !p.is_positive() {
            return Err(ConeError::ReebNotPositive {
                ray: ray.to_string(),
                pairing: crate::exact::rat_to_string(&p),
            });
        }
        if min_pairing.as_ref().map_or(true, |m| p < *m) {
            min_pairing = Some(p);
        }
    }
    Ok((rays, min_pairing.expect("at least one ray")))
}

/// Deterministic integral basis of `ker(gamma)`.
///
/// Primary rule: the chain `gamma_{i+1} e_i - gamma_i e_{i+1}` over consecutive
/// coordinate pairs, primitivized with first nonzero entry positive. When the
/// chain degenerates (consecutive zeros in gamma) fall back to the row-reduced
/// kernel basis under the same normalization.
pub fn basis_of_h(gamma: &GammaVector) -> TransverseBasis {
    let n = gamma.0.dim();
    assert!(!gamma.0.is_zero(), "basis_of_h of zero covector");
    let mut chain: Vec<RatVector> = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let mut v = vec![Rat::zero(); n];
        v[i] = gamma.0.get(i + 1).clone();
        v[i + 1] = -gamma.0.get(i).clone();
        chain.push(RatVector::new(v));
    }
    let usable = chain.iter().all(|v| !v.is_zero()) && rank(&chain) == n - 1;
    let raw = if usable {
        chain
    } else {
        kernel_basis(&[gamma.0.clone()], n)
    };
    let vectors = raw
        .into_iter()
        .map(|v| v.primitive_sign_canonical())
        .collect();
    TransverseBasis { vectors }
}

impl TransverseBasis {
    /// Coordinates of `v` (a vector lying in `ker(gamma)`) in this basis.
    pub fn coordinates(&self, v: &RatVector) -> Result<RatVector, ConeError> {
        // Solve B c = v where B has the basis vectors as columns, i.e. the
        // row system over the m unknowns c with n = m+1 equations.
        let n = v.dim();
        let m = self.vectors.len();
        let rows: Vec<RatVector> = (0..n)
            .map(|r| RatVector::new((0..m).map(|c| self.vectors[c].get(r).clone()).collect()))
            .collect();
        match solve_linear(&rows, v.coords(), true) {
            Some(Some(c)) => Ok(c),
            _ => Err(ConeError::InternalNormalizationError(format!(
                "{v} is not in the span of the transverse basis"
            ))),
        }
    }
}

/// Decompose each facet normal against the normalized Reeb vector and express
/// the transverse parts in the chosen basis, producing the H-representation
/// of the transverse polytope (all offsets `1/(m+1)`).
pub fn transverse_facets(
    cone: &MomentCone,
    gamma: &GammaVector,
    basis: &TransverseBasis,
) -> Result<HPolytope, ConeError> {
    let m = cone.m;
    let offset = Rat::one() / rat_int(m as i64 + 1);
    let reeb_part = cone.reeb.scale(&offset);
    // Normalization sanity: the construction forces <gamma, reeb/(m+1)> = -1,
    // hence lambda - reeb/(m+1) lies in ker(gamma). Assert anyway.
    let mut facets = Vec::with_capacity(cone.normals.len());
    for lam in &cone.normals {
        let lam_prime = lam.sub(&reeb_part);
        if !gamma.0.dot(&lam_prime).is_zero() {
            return Err(ConeError::InternalNormalizationError(format!(
                "transverse part of {lam} does not annihilate gamma"
            )));
        }
        let coords = basis.coordinates(&lam_prime)?;
        facets.push((coords, offset.clone()));
    }
    Ok(HPolytope::new(m, facets))
}

/// Run the complete validation pass: structure, gamma, Reeb normalization,
/// extreme rays, Reeb positivity.
pub fn validate(cone: &MomentCone) -> Result<ValidationReport, ConeError> {
    let warnings = cone.check_structure()?;
    let gamma = solve_gamma(cone)?;
    let (normalized, scaling) = normalize_reeb(cone, &gamma)?;
    let (rays, min_ray_pairing) = check_reeb(&normalized)?;
    // Interior witness: the sum of the extreme rays must be strictly inside.
    let interior = rays
        .iter()
        .fold(RatVector::zeros(cone.ambient_dim()), |acc, r| acc.add(r));
    if cone
        .normals
        .iter()
        .any(|lam| !interior.dot(lam).is_positive())
    {
        return Err(ConeError::EmptyCone);
    }
    Ok(ValidationReport {
        gamma,
        normalized,
        scaling,
        rays,
        min_ray_pairing,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn cone_1d(normals: &[[i64; 2]], reeb: [i64; 2]) -> MomentCone {
        MomentCone::new(
            1,
            normals.iter().map(|r| RatVector::from_ints(r)).collect(),
            RatVector::from_ints(&reeb),
        )
    }

    #[test]
    fn gamma_quadrant() {
        let c = cone_1d(&[[1, 0], [0, 1]], [1, 1]);
        assert_eq!(solve_gamma(&c).unwrap().0, RatVector::from_ints(&[-1, -1]));
    }

    #[test]
    fn gamma_octant() {
        let c = MomentCone::new(
            2,
            vec![
                RatVector::from_ints(&[1, 0, 0]),
                RatVector::from_ints(&[0, 1, 0]),
                RatVector::from_ints(&[0, 0, 1]),
            ],
            RatVector::from_ints(&[1, 1, 1]),
        );
        assert_eq!(
            solve_gamma(&c).unwrap().0,
            RatVector::from_ints(&[-1, -1, -1])
        );
    }

    #[test]
    fn gamma_skew() {
        let c = cone_1d(&[[1, 0], [1, 2]], [1, 1]);
        assert_eq!(solve_gamma(&c).unwrap().0, RatVector::from_ints(&[-1, 0]));
    }

    #[test]
    fn gamma_inconsistent() {
        let c = MomentCone::new(
            1,
            vec![
                RatVector::from_ints(&[1, 0]),
                RatVector::from_ints(&[0, 1]),
                RatVector::from_ints(&[-1, -2]),
            ],
            RatVector::from_ints(&[1, 1]),
        );
        assert_eq!(
            solve_gamma(&c).unwrap_err(),
            ConeError::InconsistentChernCondition
        );
    }

    #[test]
    fn gamma_degenerate() {
        let c = MomentCone::new(
            1,
            vec![RatVector::from_ints(&[1, 0]), RatVector::from_ints(&[2, 0])],
            RatVector::from_ints(&[1, 1]),
        );
        assert_eq!(solve_gamma(&c).unwrap_err(), ConeError::DegenerateCone);
    }

    #[test]
    fn reeb_normalization() {
        let gamma = GammaVector(RatVector::from_ints(&[-1, -1]));
        let c = cone_1d(&[[1, 0], [0, 1]], [1, 1]);
        let (n, s) = normalize_reeb(&c, &gamma).unwrap();
        assert_eq!(n.reeb, RatVector::from_ints(&[1, 1]));
        assert_eq!(s, rat_int(1));

        let c2 = cone_1d(&[[1, 0], [0, 1]], [2, 2]);
        let (n2, s2) = normalize_reeb(&c2, &gamma).unwrap();
        assert_eq!(n2.reeb, RatVector::from_ints(&[1, 1]));
        assert_eq!(s2, rat(1, 2));

        let gamma3 = GammaVector(RatVector::from_ints(&[-1, -1, -1]));
        let c3 = MomentCone::new(
            2,
            vec![
                RatVector::from_ints(&[1, 0, 0]),
                RatVector::from_ints(&[0, 1, 0]),
                RatVector::from_ints(&[0, 0, 1]),
            ],
            RatVector::from_ints(&[3, 3, 3]),
        );
        let (n3, _) = normalize_reeb(&c3, &gamma3).unwrap();
        assert_eq!(n3.reeb, RatVector::from_ints(&[1, 1, 1]));
    }

    #[test]
    fn reeb_sign_error() {
        let gamma = GammaVector(RatVector::from_ints(&[-1, -1]));
        let c = cone_1d(&[[1, 0], [0, 1]], [-1, -1]);
        assert!(matches!(
            normalize_reeb(&c, &gamma),
            Err(ConeError::ReebSignError(_))
        ));
    }

    #[test]
    fn rays_quadrant_and_octant() {
        let c = cone_1d(&[[1, 0], [0, 1]], [1, 1]);
        let rays = extreme_rays(&c).unwrap();
        assert_eq!(
            rays,
            vec![RatVector::from_ints(&[0, 1]), RatVector::from_ints(&[1, 0])]
        );

        let c3 = MomentCone::new(
            2,
            vec![
                RatVector::from_ints(&[1, 0, 0]),
                RatVector::from_ints(&[0, 1, 0]),
                RatVector::from_ints(&[0, 0, 1]),
            ],
            RatVector::from_ints(&[1, 1, 1]),
        );
        let rays3 = extreme_rays(&c3).unwrap();
        assert_eq!(rays3.len(), 3);
        assert!(rays3.contains(&RatVector::from_ints(&[1, 0, 0])));
    }

    #[test]
    fn rays_skew() {
        let c = cone_1d(&[[1, 0], [-1, 3]], [1, 1]);
        let rays = extreme_rays(&c).unwrap();
        assert_eq!(
            rays,
            vec![RatVector::from_ints(&[0, 1]), RatVector::from_ints(&[3, 1])]
        );
    }

    #[test]
    fn ray_set_invariant_under_permutation() {
        let a = cone_1d(&[[1, 0], [-1, 3]], [1, 1]);
        let b = cone_1d(&[[-1, 3], [1, 0]], [1, 1]);
        assert_eq!(extreme_rays(&a).unwrap(), extreme_rays(&b).unwrap());
    }

    #[test]
    fn reeb_positivity_checks() {
        let ok = cone_1d(&[[1, 0], [0, 1]], [1, 1]);
        let (_, min) = check_reeb(&ok).unwrap();
        assert_eq!(min, rat_int(1));

        let bad = cone_1d(&[[1, 0], [0, 1]], [1, -1]);
        match check_reeb(&bad).unwrap_err() {
            ConeError::ReebNotPositive { ray, .. } => assert_eq!(ray, "(0, 1)"),
            e => panic!("unexpected {e:?}"),
        }

        let skew = cone_1d(&[[1, 0], [-1, 3]], [1, 1]);
        let (rays, min) = check_reeb(&skew).unwrap();
        assert_eq!(min, rat_int(1));
        assert_eq!(rays[1].dot(&skew.reeb), rat_int(4));
    }

    #[test]
    fn kernel_basis_choices() {
        let b = basis_of_h(&GammaVector(RatVector::from_ints(&[-1, -1])));
        assert_eq!(b.vectors, vec![RatVector::from_ints(&[1, -1])]);

        let b3 = basis_of_h(&GammaVector(RatVector::from_ints(&[-1, -1, -1])));
        assert_eq!(
            b3.vectors,
            vec![
                RatVector::from_ints(&[1, -1, 0]),
                RatVector::from_ints(&[0, 1, -1])
            ]
        );

        let bskew = basis_of_h(&GammaVector(RatVector::from_ints(&[-1, 0])));
        assert_eq!(bskew.vectors, vec![RatVector::from_ints(&[0, 1])]);

        // degenerate chain falls back to the row-reduced kernel
        let bz = basis_of_h(&GammaVector(RatVector::from_ints(&[0, 0, -1])));
        assert_eq!(bz.vectors.len(), 2);
        for v in &bz.vectors {
            assert!(v.get(2).is_zero());
        }
    }

    #[test]
    fn transverse_reduction_round_s3() {
        let c = cone_1d(&[[1, 0], [0, 1]], [1, 1]);
        let v = validate(&c).unwrap();
        let basis = basis_of_h(&v.gamma);
        let h = transverse_facets(&v.normalized, &v.gamma, &basis).unwrap();
        let f = h.facets();
        assert_eq!(f[0].normal, RatVector::new(vec![rat(1, 2)]));
        assert_eq!(f[1].normal, RatVector::new(vec![rat(-1, 2)]));
        assert_eq!(f[0].offset, rat(1, 2));
    }

    #[test]
    fn transverse_reduction_weighted_s3() {
        let c = MomentCone::new(
            1,
            vec![RatVector::from_ints(&[1, 0]), RatVector::from_ints(&[0, 1])],
            RatVector::new(vec![rat(3, 2), rat(1, 2)]),
        );
        let v = validate(&c).unwrap();
        let basis = basis_of_h(&v.gamma);
        let h = transverse_facets(&v.normalized, &v.gamma, &basis).unwrap();
        let f = h.facets();
        assert_eq!(f[0].normal, RatVector::new(vec![rat(1, 4)]));
        assert_eq!(f[1].normal, RatVector::new(vec![rat(-3, 4)]));
    }

    #[test]
    fn transverse_part_annihilates_gamma() {
        // forced by the two normalizations; kept as a regression guard
        for reeb in [[3i64, 1], [1, 3], [2, 2]] {
            let c = cone_1d(&[[1, 0], [0, 1]], reeb);
            let v = validate(&c).unwrap();
            let part = v
                .normalized
                .reeb
                .scale(&rat(1, (c.m + 1) as i64));
            for lam in &c.normals {
                assert!(v.gamma.0.dot(&lam.sub(&part)).is_zero());
            }
        }
    }

    #[test]
    fn non_primitive_normal_warns() {
        let c = cone_1d(&[[2, 0], [0, 1]], [1, 1]);
        let w = c.check_structure().unwrap();
        assert_eq!(w.len(), 1);
        assert!(w[0].contains("not primitive"));
    }
}
