//! Exact convex geometry of the transverse moment polytope: vertex
//! enumeration, volume and barycenter, the ray formula for the curvature
//! bound `R`, and the obstruction direction tied to the barycenter.
//!
//! Brute-force vertex enumeration over facet subsets is deliberate: the
//! target dimension is small (m <= 3) and exact rational arithmetic keeps
//! every downstream quantity a literal fraction.

use crate::exact::{determinant, rank, rat_int, solve_linear, Rat, RatVector};
use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PolytopeError {
    #[error("polytope is unbounded: direction {0} recedes")]
    Unbounded(String),
    #[error("polytope is empty")]
    Empty,
    #[error("degenerate triangulation: zero-volume simplex survived deduplication")]
    DegenerateTriangulation,
    #[error("point {0} is not interior")]
    InteriorityViolation(String),
    #[error("no facet separates the origin from the barycenter ray (internal error)")]
    NoBindingFacet,
    #[error("point {0} is not on the ray through the origin opposite the barycenter")]
    NotCollinear(String),
}

/// One half-space `<v, normal> + offset >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: RatVector,
    pub offset: Rat,
}

impl Facet {
    pub fn eval(&self, v: &RatVector) -> Rat {
        v.dot(&self.normal) + &self.offset
    }
}

/// H-representation. For a transverse polytope every offset is `1/(m+1)`;
/// general offsets are allowed so plumbing shapes can be tested directly.
#[derive(Debug, Clone)]
pub struct HPolytope {
    dim: usize,
    facets: Vec<Facet>,
    warnings: Vec<String>,
}

impl HPolytope {
    /// Exact duplicates (same normal and offset) are dropped with a warning:
    /// a facet listed twice must not perturb active-set logic downstream.
    pub fn new(dim: usize, facet_data: Vec<(RatVector, Rat)>) -> Self {
        let mut facets: Vec<Facet> = Vec::new();
        let mut warnings = Vec::new();
        for (i, (normal, offset)) in facet_data.into_iter().enumerate() {
            let f = Facet { normal, offset };
            if facets.contains(&f) {
                warnings.push(format!("facet {i} duplicates an earlier facet; dropped"));
            } else {
                facets.push(f);
            }
        }
        HPolytope {
            dim,
            facets,
            warnings,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn contains(&self, v: &RatVector) -> bool {
        self.facets.iter().all(|f| !f.eval(v).is_negative())
    }

    pub fn contains_strictly(&self, v: &RatVector) -> bool {
        self.facets.iter().all(|f| f.eval(v).is_positive())
    }

    /// The origin must be strictly interior for a transverse polytope.
    pub fn check_origin_interior(&self) -> Result<(), PolytopeError> {
        let origin = RatVector::zeros(self.dim);
        if self.contains_strictly(&origin) {
            Ok(())
        } else {
            Err(PolytopeError::InteriorityViolation(origin.to_string()))
        }
    }
}

/// V-representation with per-vertex active facet indices.
#[derive(Debug, Clone)]
pub struct VPolytope {
    pub vertices: Vec<RatVector>,
    pub active: Vec<BTreeSet<usize>>,
}

/// Exact volume, barycenter and the barycenter-derived obstruction vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PolytopeSummary {
    pub volume: Rat,
    pub barycenter: RatVector,
}

/// The curvature lower bound and the boundary data certifying it.
#[derive(Debug, Clone, PartialEq)]
pub struct RReport {
    /// Exact value in (0, 1].
    pub r: Rat,
    /// `r = s/(1+s)`; `None` encodes `s = +infinity` (the symmetric case).
    pub s_star: Option<Rat>,
    /// Boundary point hit by the ray from the barycenter through the origin;
    /// absent when the barycenter is the origin.
    pub q: Option<RatVector>,
    /// All facets tight at `q` among the minimizers of the ray parameter.
    pub binding_facets: Vec<usize>,
}

/// Search for a nonzero recession direction `d` with `<d, normal_a> >= 0` for
/// every facet. Any such direction certifies unboundedness.
fn recession_direction(h: &HPolytope) -> Option<RatVector> {
    let m = h.dim;
    if m == 0 {
        return None;
    }
    // Directions to test: kernels of all (m-1)-subsets of normals (the only
    // candidates for extreme rays of the recession cone) plus, when the
    // normals do not span, any kernel vector of the full normal matrix.
    let mut candidates: Vec<RatVector> = Vec::new();
    if rank(&h.facets.iter().map(|f| f.normal.clone()).collect::<Vec<_>>()) < m {
        let rows: Vec<RatVector> = h.facets.iter().map(|f| f.normal.clone()).collect();
        candidates.extend(crate::exact::kernel_basis(&rows, m));
    }
    if m >= 1 {
        for subset in (0..h.facets.len()).combinations(m - 1) {
            let rows: Vec<RatVector> = subset.iter().map(|&i| h.facets[i].normal.clone()).collect();
            let kernel = crate::exact::kernel_basis(&rows, m);
            if kernel.len() == 1 {
                candidates.push(kernel[0].clone());
            }
        }
    }
    for c in candidates {
        if c.is_zero() {
            continue;
        }
        for d in [c.clone(), c.neg()] {
            if h.facets.iter().all(|f| !d.dot(&f.normal).is_negative()) {
                return Some(d.primitive());
            }
        }
    }
    None
}

/// Brute-force vertex enumeration: solve every m-subset of facet equalities,
/// keep feasible solutions, deduplicate exactly, and record full active sets.
pub fn enumerate_vertices(h: &HPolytope) -> Result<VPolytope, PolytopeError> {
    let m = h.dim;
    if let Some(d) = recession_direction(h) {
        return Err(PolytopeError::Unbounded(d.to_string()));
    }
    let mut vertices: Vec<RatVector> = Vec::new();
    for subset in (0..h.facets.len()).combinations(m) {
        let rows: Vec<RatVector> = subset.iter().map(|&i| h.facets[i].normal.clone()).collect();
        let rhs: Vec<Rat> = subset.iter().map(|&i| -h.facets[i].offset.clone()).collect();
        let Some(Some(v)) = solve_linear(&rows, &rhs, true) else {
            continue;
        };
        if h.contains(&v) && !vertices.contains(&v) {
            vertices.push(v);
        }
    }
    if vertices.is_empty() {
        return Err(PolytopeError::Empty);
    }
    vertices.sort_by(|a, b| a.coords().cmp(b.coords()));
    // Full-dimensionality: affine rank of the vertex set must be m.
    let base = &vertices[0];
    let diffs: Vec<RatVector> = vertices[1..].iter().map(|v| v.sub(base)).collect();
    if rank(&diffs) < m {
        return Err(PolytopeError::Unbounded(
            "vertex hull is lower-dimensional".into(),
        ));
    }
    let active = vertices
        .iter()
        .map(|v| {
            h.facets
                .iter()
                .enumerate()
                .filter(|(_, f)| f.eval(v).is_zero())
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(VPolytope { vertices, active })
}

/// Cyclic order of a 2-dimensional point set around an interior reference,
/// using exact orientation predicates only.
fn sort_cyclic_2d(points: &mut Vec<RatVector>, center: &RatVector) {
    let half = |p: &RatVector| -> u8 {
        // 0: upper half (y > 0, or y = 0 and x > 0); 1: lower half
        let d = p.sub(center);
        let x = d.get(0);
        let y = d.get(1);
        if y.is_positive() || (y.is_zero() && x.is_positive()) {
            0
        } else {
            1
        }
    };
    points.sort_by(|a, b| {
        let (ha, hb) = (half(a), half(b));
        if ha != hb {
            return ha.cmp(&hb);
        }
        let da = a.sub(center);
        let db = b.sub(center);
        let cross = da.get(0) * db.get(1) - da.get(1) * db.get(0);
        if cross.is_positive() {
            Ordering::Less
        } else if cross.is_negative() {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    });
}

/// Exact volume and barycenter by star triangulation from the vertex
/// centroid. Each facet's vertex set is fanned deterministically; for m = 3
/// the facet polygon is put in cyclic order first with exact predicates.
pub fn volume_barycenter(h: &HPolytope, v: &VPolytope) -> Result<PolytopeSummary, PolytopeError> {
    let m = h.dim;
    let nv = v.vertices.len();
    let inv_nv = Rat::one() / rat_int(nv as i64);
    let base = v
        .vertices
        .iter()
        .fold(RatVector::zeros(m), |acc, p| acc.add(p))
        .scale(&inv_nv);

    let mut volume = Rat::zero();
    let mut weighted = RatVector::zeros(m);
    let m_factorial: i64 = (1..=m as i64).product();
    let simplex_scale = Rat::one() / rat_int(m_factorial);
    let centroid_scale = Rat::one() / rat_int(m as i64 + 1);

    for (fi, facet) in h.facets.iter().enumerate() {
        let mut fv: Vec<RatVector> = v
            .vertices
            .iter()
            .zip(&v.active)
            .filter(|(_, act)| act.contains(&fi))
            .map(|(p, _)| p.clone())
            .collect();
        if fv.len() < m {
            continue; // facet not touching the polytope (redundant inequality)
        }
        // Skip facets through the base point: their cones are flat.
        if facet.eval(&base).is_zero() {
            continue;
        }
        let simplices: Vec<Vec<RatVector>> = match m {
            1 => vec![fv.clone()],
            2 => {
                // edge: exactly two vertices after dedup
                vec![fv.clone()]
            }
            3 => {
                let fc = fv
                    .iter()
                    .fold(RatVector::zeros(3), |acc, p| acc.add(p))
                    .scale(&(Rat::one() / rat_int(fv.len() as i64)));
                // project out the facet normal's largest coordinate
                let n = &facet.normal;
                let drop_axis = (0..3)
                    .max_by(|&i, &j| {
                        let (a, b) = (n.get(i).abs(), n.get(j).abs());
                        a.cmp(&b)
                    })
                    .unwrap();
                let keep: Vec<usize> = (0..3).filter(|&i| i != drop_axis).collect();
                let project = |p: &RatVector| {
                    RatVector::new(keep.iter().map(|&i| p.get(i).clone()).collect())
                };
                let mut tagged: Vec<(RatVector, RatVector)> =
                    fv.drain(..).map(|p| (project(&p), p)).collect();
                let center2 = project(&fc);
                let mut projected: Vec<RatVector> =
                    tagged.iter().map(|(q, _)| q.clone()).collect();
                sort_cyclic_2d(&mut projected, &center2);
                let ordered: Vec<RatVector> = projected
                    .iter()
                    .map(|q| {
                        let k = tagged.iter().position(|(t, _)| t == q).unwrap();
                        tagged.swap_remove(k).1
                    })
                    .collect();
                (1..ordered.len() - 1)
                    .map(|i| {
                        vec![
                            ordered[0].clone(),
                            ordered[i].clone(),
                            ordered[i + 1].clone(),
                        ]
                    })
                    .collect()
            }
            _ => unreachable!("volume_barycenter supports m <= 3"),
        };
        for s in simplices {
            let rows: Vec<RatVector> = s.iter().map(|p| p.sub(&base)).collect();
            let vol = determinant(&rows).abs() * &simplex_scale;
            if vol.is_zero() {
                return Err(PolytopeError::DegenerateTriangulation);
            }
            let centroid = s
                .iter()
                .fold(base.clone(), |acc, p| acc.add(p))
                .scale(&centroid_scale);
            weighted = weighted.add(&centroid.scale(&vol));
            volume += vol;
        }
    }
    if volume.is_zero() {
        return Err(PolytopeError::DegenerateTriangulation);
    }
    let barycenter = weighted.scale(&volume.recip());
    Ok(PolytopeSummary { volume, barycenter })
}

/// The ray formula: walk from the barycenter through the origin until the
/// boundary. With `s` the hit parameter, `R = s/(1+s)`; the symmetric case
/// (barycenter at the origin) gives `R = 1` with no boundary point.
pub fn compute_r(h: &HPolytope, barycenter: &RatVector) -> Result<RReport, PolytopeError> {
    if !h.contains_strictly(barycenter) {
        return Err(PolytopeError::InteriorityViolation(barycenter.to_string()));
    }
    if barycenter.is_zero() {
        return Ok(RReport {
            r: Rat::one(),
            s_star: None,
            q: None,
            binding_facets: Vec::new(),
        });
    }
    // Q = -s * barycenter leaves the polytope through facet a when
    // offset_a - s <barycenter, normal_a> = 0, i.e. s = offset_a / pairing.
    let mut s_star: Option<Rat> = None;
    let mut binding: Vec<usize> = Vec::new();
    for (i, f) in h.facets.iter().enumerate() {
        let pairing = barycenter.dot(&f.normal);
        if !pairing.is_positive() {
            continue;
        }
        let s = &f.offset / &pairing;
        match &s_star {
            Some(cur) if s > *cur => {}
            Some(cur) if s == *cur => binding.push(i),
            _ => {
                s_star = Some(s);
                binding = vec![i];
            }
        }
    }
    let Some(s) = s_star else {
        return Err(PolytopeError::NoBindingFacet);
    };
    let q = barycenter.scale(&-s.clone());
    let r = &s / (Rat::one() + &s);
    Ok(RReport {
        r,
        s_star: Some(s),
        q: Some(q),
        binding_facets: binding,
    })
}

/// Independent second reading of the ratio: the lengths along the ray from
/// the barycenter through the origin to `q` are compared as affine
/// parameters, never as norms, so the result stays rational.
pub fn ray_ratio_crosscheck(barycenter: &RatVector, q: &RatVector) -> Result<Rat, PolytopeError> {
    if barycenter.is_zero() {
        return Err(PolytopeError::NotCollinear(q.to_string()));
    }
    // q must equal -s * barycenter for a single rational s >= 0.
    let mut s: Option<Rat> = None;
    for (qc, bc) in q.coords().iter().zip(barycenter.coords()) {
        if bc.is_zero() {
            if !qc.is_zero() {
                return Err(PolytopeError::NotCollinear(q.to_string()));
            }
            continue;
        }
        let si = -(qc / bc);
        match &s {
            None => s = Some(si),
            Some(prev) if *prev == si => {}
            Some(_) => return Err(PolytopeError::NotCollinear(q.to_string())),
        }
    }
    let s = s.expect("barycenter has a nonzero coordinate");
    if s.is_negative() {
        return Err(PolytopeError::NotCollinear(q.to_string()));
    }
    // |OQ| / |P_c Q| along the ray: parameters s and 1 + s.
    Ok(&s / (Rat::one() + &s))
}

/// Obstruction vector `-Vol * barycenter`: zero exactly when the barycenter
/// sits at the origin. The overall positive constant is a normalization
/// choice; only vanishing and sign structure are meaningful.
pub fn futaki_vector(summary: &PolytopeSummary) -> RatVector {
    summary.barycenter.scale(&-summary.volume.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn interval(facets: Vec<(RatVector, Rat)>) -> HPolytope {
        HPolytope::new(1, facets)
    }

    fn symmetric_interval() -> HPolytope {
        interval(vec![
            (RatVector::new(vec![rat(1, 2)]), rat(1, 2)),
            (RatVector::new(vec![rat(-1, 2)]), rat(1, 2)),
        ])
    }

    fn weighted_interval() -> HPolytope {
        // transverse polytope of the (3/2, 1/2) weighted geometry: [-2, 2/3]
        interval(vec![
            (RatVector::new(vec![rat(1, 4)]), rat(1, 2)),
            (RatVector::new(vec![rat(-3, 4)]), rat(1, 2)),
        ])
    }

    #[test]
    fn vertices_of_intervals() {
        let v = enumerate_vertices(&symmetric_interval()).unwrap();
        assert_eq!(
            v.vertices,
            vec![
                RatVector::from_ints(&[-1]),
                RatVector::from_ints(&[1]),
            ]
        );
        let w = enumerate_vertices(&weighted_interval()).unwrap();
        assert_eq!(
            w.vertices,
            vec![
                RatVector::from_ints(&[-2]),
                RatVector::new(vec![rat(2, 3)]),
            ]
        );
    }

    #[test]
    fn vertices_of_round_s5_triangle() {
        let h = HPolytope::new(
            2,
            vec![
                (RatVector::new(vec![rat(2, 3), rat(1, 3)]), rat(1, 3)),
                (RatVector::new(vec![rat(-1, 3), rat(1, 3)]), rat(1, 3)),
                (RatVector::new(vec![rat(-1, 3), rat(-2, 3)]), rat(1, 3)),
            ],
        );
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices.len(), 3);
        for act in &v.active {
            assert_eq!(act.len(), 2);
        }
        assert!(v.vertices.contains(&RatVector::from_ints(&[1, 0])));
        assert!(v.vertices.contains(&RatVector::from_ints(&[-1, 1])));
        assert!(v.vertices.contains(&RatVector::from_ints(&[0, -1])));
    }

    #[test]
    fn unbounded_is_detected() {
        let h = interval(vec![(RatVector::new(vec![rat(1, 2)]), rat(1, 2))]);
        assert!(matches!(
            enumerate_vertices(&h),
            Err(PolytopeError::Unbounded(_))
        ));
        let strip = HPolytope::new(
            2,
            vec![
                (RatVector::from_ints(&[1, 0]), rat_int(1)),
                (RatVector::from_ints(&[-1, 0]), rat_int(1)),
            ],
        );
        assert!(matches!(
            enumerate_vertices(&strip),
            Err(PolytopeError::Unbounded(_))
        ));
    }

    #[test]
    fn empty_is_detected() {
        let h = interval(vec![
            (RatVector::from_ints(&[1]), rat_int(-2)),
            (RatVector::from_ints(&[-1]), rat_int(1)),
        ]);
        assert_eq!(enumerate_vertices(&h).unwrap_err(), PolytopeError::Empty);
    }

    #[test]
    fn volume_and_barycenter_intervals() {
        let h = symmetric_interval();
        let s = volume_barycenter(&h, &enumerate_vertices(&h).unwrap()).unwrap();
        assert_eq!(s.volume, rat_int(2));
        assert!(s.barycenter.is_zero());

        let w = weighted_interval();
        let s = volume_barycenter(&w, &enumerate_vertices(&w).unwrap()).unwrap();
        assert_eq!(s.volume, rat(8, 3));
        assert_eq!(s.barycenter, RatVector::new(vec![rat(-2, 3)]));
    }

    #[test]
    fn volume_and_barycenter_unit_simplex() {
        // plumbing shape with general offsets, not a transverse polytope
        let h = HPolytope::new(
            2,
            vec![
                (RatVector::from_ints(&[1, 0]), Rat::zero()),
                (RatVector::from_ints(&[0, 1]), Rat::zero()),
                (RatVector::from_ints(&[-1, -1]), rat_int(1)),
            ],
        );
        let s = volume_barycenter(&h, &enumerate_vertices(&h).unwrap()).unwrap();
        assert_eq!(s.volume, rat(1, 2));
        assert_eq!(s.barycenter, RatVector::new(vec![rat(1, 3), rat(1, 3)]));
    }

    #[test]
    fn volume_and_barycenter_octahedron() {
        let mut facets = Vec::new();
        for sx in [-1i64, 1] {
            for sy in [-1i64, 1] {
                for sz in [-1i64, 1] {
                    facets.push((RatVector::from_ints(&[sx, sy, sz]), rat_int(1)));
                }
            }
        }
        let h = HPolytope::new(3, facets);
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices.len(), 6);
        let s = volume_barycenter(&h, &v).unwrap();
        assert_eq!(s.volume, rat(4, 3));
        assert!(s.barycenter.is_zero());
    }

    #[test]
    fn shifted_tetrahedron_barycenter() {
        // {x,y,z >= -1, x+y+z <= 1}: simplex with vertices (-1,-1,3) etc.
        let h = HPolytope::new(
            3,
            vec![
                (RatVector::from_ints(&[1, 0, 0]), rat_int(1)),
                (RatVector::from_ints(&[0, 1, 0]), rat_int(1)),
                (RatVector::from_ints(&[0, 0, 1]), rat_int(1)),
                (RatVector::from_ints(&[-1, -1, -1]), rat_int(1)),
            ],
        );
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices.len(), 4);
        let s = volume_barycenter(&h, &v).unwrap();
        assert_eq!(s.volume, rat(32, 3));
        assert_eq!(s.barycenter, RatVector::from_ints(&[0, 0, 0]));
    }

    #[test]
    fn r_symmetric_is_one() {
        let h = symmetric_interval();
        let s = volume_barycenter(&h, &enumerate_vertices(&h).unwrap()).unwrap();
        let r = compute_r(&h, &s.barycenter).unwrap();
        assert_eq!(r.r, rat_int(1));
        assert!(r.q.is_none());
        assert!(r.binding_facets.is_empty());
    }

    #[test]
    fn r_weighted_examples() {
        let w = weighted_interval();
        let s = volume_barycenter(&w, &enumerate_vertices(&w).unwrap()).unwrap();
        let r = compute_r(&w, &s.barycenter).unwrap();
        assert_eq!(r.r, rat(1, 2));
        assert_eq!(r.s_star, Some(rat_int(1)));
        assert_eq!(r.q, Some(RatVector::new(vec![rat(2, 3)])));
        assert_eq!(r.binding_facets, vec![1]);

        // (4/3, 2/3) weighting: interval [-3/2, 3/4], barycenter -3/8
        let w2 = interval(vec![
            (RatVector::new(vec![rat(1, 3)]), rat(1, 2)),
            (RatVector::new(vec![rat(-2, 3)]), rat(1, 2)),
        ]);
        let s2 = volume_barycenter(&w2, &enumerate_vertices(&w2).unwrap()).unwrap();
        assert_eq!(s2.barycenter, RatVector::new(vec![rat(-3, 8)]));
        let r2 = compute_r(&w2, &s2.barycenter).unwrap();
        assert_eq!(r2.s_star, Some(rat_int(2)));
        assert_eq!(r2.r, rat(2, 3));
        assert_eq!(r2.q, Some(RatVector::new(vec![rat(3, 4)])));
    }

    #[test]
    fn binding_facet_residuals() {
        let w = weighted_interval();
        let s = volume_barycenter(&w, &enumerate_vertices(&w).unwrap()).unwrap();
        let r = compute_r(&w, &s.barycenter).unwrap();
        let q = r.q.unwrap();
        for (i, f) in w.facets().iter().enumerate() {
            if r.binding_facets.contains(&i) {
                assert!(f.eval(&q).is_zero());
            } else {
                assert!(f.eval(&q).is_positive());
            }
        }
    }

    #[test]
    fn ray_ratio_matches() {
        let pc = RatVector::new(vec![rat(-2, 3)]);
        let q = RatVector::new(vec![rat(2, 3)]);
        assert_eq!(ray_ratio_crosscheck(&pc, &q).unwrap(), rat(1, 2));

        let pc2 = RatVector::new(vec![rat(-3, 8)]);
        let q2 = RatVector::new(vec![rat(3, 4)]);
        assert_eq!(ray_ratio_crosscheck(&pc2, &q2).unwrap(), rat(2, 3));
    }

    #[test]
    fn ray_ratio_rejects_off_ray_points() {
        let pc = RatVector::new(vec![rat(-2, 3), rat(1, 3)]);
        let q = RatVector::new(vec![rat(2, 3), rat(1, 3)]);
        assert!(matches!(
            ray_ratio_crosscheck(&pc, &q),
            Err(PolytopeError::NotCollinear(_))
        ));
        // wrong side of the origin
        let q2 = RatVector::new(vec![rat(-1, 3), rat(1, 6)]);
        assert!(matches!(
            ray_ratio_crosscheck(&pc, &q2),
            Err(PolytopeError::NotCollinear(_))
        ));
    }

    #[test]
    fn futaki_examples() {
        let sym = PolytopeSummary {
            volume: rat_int(2),
            barycenter: RatVector::zeros(1),
        };
        assert!(futaki_vector(&sym).is_zero());

        let w = PolytopeSummary {
            volume: rat(8, 3),
            barycenter: RatVector::new(vec![rat(-2, 3)]),
        };
        assert_eq!(futaki_vector(&w), RatVector::new(vec![rat(16, 9)]));

        let w2 = PolytopeSummary {
            volume: rat(9, 4),
            barycenter: RatVector::new(vec![rat(-3, 8)]),
        };
        assert_eq!(futaki_vector(&w2), RatVector::new(vec![rat(27, 32)]));
    }

    #[test]
    fn duplicated_facet_changes_nothing() {
        let mut facets = vec![
            (RatVector::new(vec![rat(1, 4)]), rat(1, 2)),
            (RatVector::new(vec![rat(-3, 4)]), rat(1, 2)),
            (RatVector::new(vec![rat(-3, 4)]), rat(1, 2)),
        ];
        let dup = HPolytope::new(1, facets.clone());
        assert_eq!(dup.facets().len(), 2);
        assert_eq!(dup.warnings().len(), 1);
        facets.pop();
        let clean = HPolytope::new(1, facets);
        let sd = volume_barycenter(&dup, &enumerate_vertices(&dup).unwrap()).unwrap();
        let sc = volume_barycenter(&clean, &enumerate_vertices(&clean).unwrap()).unwrap();
        assert_eq!(sd, sc);
        assert_eq!(
            compute_r(&dup, &sd.barycenter).unwrap().r,
            compute_r(&clean, &sc.barycenter).unwrap().r
        );
    }

    #[test]
    fn interiority_violation_is_reported() {
        let w = weighted_interval();
        let outside = RatVector::from_ints(&[5]);
        assert!(matches!(
            compute_r(&w, &outside),
            Err(PolytopeError::InteriorityViolation(_))
        ));
    }

    #[test]
    fn blow_up_plane_polygon() {
        // anticanonical polygon of the one-point blow-up of the projective
        // plane, offsets 1: an independent hand derivation fixes R = 6/7
        let h = HPolytope::new(
            2,
            vec![
                (RatVector::from_ints(&[1, 0]), rat_int(1)),
                (RatVector::from_ints(&[0, 1]), rat_int(1)),
                (RatVector::from_ints(&[1, 1]), rat_int(1)),
                (RatVector::from_ints(&[-1, -1]), rat_int(1)),
            ],
        );
        let v = enumerate_vertices(&h).unwrap();
        assert_eq!(v.vertices.len(), 4);
        let s = volume_barycenter(&h, &v).unwrap();
        assert_eq!(s.volume, rat_int(4));
        assert_eq!(s.barycenter, RatVector::new(vec![rat(1, 12), rat(1, 12)]));
        let r = compute_r(&h, &s.barycenter).unwrap();
        assert_eq!(r.r, rat(6, 7));
        assert_eq!(r.s_star, Some(rat_int(6)));
        assert_eq!(r.binding_facets, vec![2]);
    }
}
