//! Built-in library of validated example geometries: round and weighted
//! odd spheres, the regular cone over the one-point blow-up of the projective
//! plane, and two four-facet Gorenstein cones from the AdS/CFT family.

use crate::cone::MomentCone;
use crate::exact::{rat, rat_int, Rat, RatVector};
use num_traits::Signed;

/// Expected exact values, each tagged with how it was obtained.
#[derive(Debug, Clone, Default)]
pub struct ExpectedValues {
    pub r: Option<Rat>,
    pub barycenter: Option<RatVector>,
    pub volume: Option<Rat>,
    pub provenance: &'static str,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    /// regular / quasi-regular structure of the Reeb flow for this data
    pub regularity: &'static str,
    pub cone: MomentCone,
    pub expected: ExpectedValues,
}

/// Weighted three-sphere geometry: quadrant cone with Reeb `(a, 2-a)`.
/// Closed forms (interval endpoints `[-1/xi_2, 1/xi_1]`, midpoint barycenter)
/// give `R = 1 - |1 - a|`.
pub fn weighted_s3(a: Rat) -> MomentCone {
    let two = rat_int(2);
    MomentCone::new(
        1,
        vec![RatVector::from_ints(&[1, 0]), RatVector::from_ints(&[0, 1])],
        RatVector::new(vec![a.clone(), &two - &a]),
    )
}

pub fn weighted_s3_closed_form_r(a: &Rat) -> Rat {
    let one = rat_int(1);
    &one - &(&one - a).abs()
}

fn octant() -> Vec<RatVector> {
    vec![
        RatVector::from_ints(&[1, 0, 0]),
        RatVector::from_ints(&[0, 1, 0]),
        RatVector::from_ints(&[0, 0, 1]),
    ]
}

pub fn builtin_entries() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "round-s3",
            description: "round three-sphere: quadrant cone, diagonal Reeb",
            regularity: "regular",
            cone: weighted_s3(rat_int(1)),
            expected: ExpectedValues {
                r: Some(rat_int(1)),
                barycenter: Some(RatVector::zeros(1)),
                volume: Some(rat_int(2)),
                provenance: "symmetric interval",
            },
        },
        CatalogEntry {
            name: "ws3-5-4",
            description: "weighted three-sphere, Reeb (5/4, 3/4)",
            regularity: "quasi-regular",
            cone: weighted_s3(rat(5, 4)),
            expected: ExpectedValues {
                r: Some(rat(3, 4)),
                barycenter: Some(RatVector::new(vec![rat(-4, 15)])),
                volume: Some(rat(32, 15)),
                provenance: "closed-form interval geometry",
            },
        },
        CatalogEntry {
            name: "ws3-3-2",
            description: "weighted three-sphere, Reeb (3/2, 1/2)",
            regularity: "quasi-regular",
            cone: weighted_s3(rat(3, 2)),
            expected: ExpectedValues {
                r: Some(rat(1, 2)),
                barycenter: Some(RatVector::new(vec![rat(-2, 3)])),
                volume: Some(rat(8, 3)),
                provenance: "closed-form interval geometry",
            },
        },
        CatalogEntry {
            name: "ws3-7-4",
            description: "weighted three-sphere, Reeb (7/4, 1/4)",
            regularity: "quasi-regular",
            cone: weighted_s3(rat(7, 4)),
            expected: ExpectedValues {
                r: Some(rat(1, 4)),
                barycenter: Some(RatVector::new(vec![rat(-12, 7)])),
                volume: Some(rat(32, 7)),
                provenance: "closed-form interval geometry",
            },
        },
        CatalogEntry {
            name: "round-s5",
            description: "round five-sphere: octant cone, diagonal Reeb",
            regularity: "regular",
            cone: MomentCone::new(2, octant(), RatVector::from_ints(&[1, 1, 1])),
            expected: ExpectedValues {
                r: Some(rat_int(1)),
                barycenter: Some(RatVector::zeros(2)),
                volume: Some(rat(3, 2)),
                provenance: "symmetric simplex cross-section",
            },
        },
        CatalogEntry {
            name: "ws5-5-4-3",
            description: "weighted five-sphere, Reeb (5/4, 1, 3/4)",
            regularity: "quasi-regular",
            cone: MomentCone::new(
                2,
                octant(),
                RatVector::new(vec![rat(5, 4), rat_int(1), rat(3, 4)]),
            ),
            expected: ExpectedValues {
                r: Some(rat(3, 4)),
                barycenter: Some(RatVector::new(vec![rat(-1, 15), rat(-1, 9)])),
                volume: Some(rat(8, 5)),
                provenance: "hand triangle geometry, cross-checked by the exact pipeline",
            },
        },
        CatalogEntry {
            name: "blp-cp2",
            description: "regular cone over the one-point blow-up of the projective plane",
            regularity: "regular",
            cone: MomentCone::new(
                2,
                vec![
                    RatVector::from_ints(&[1, 0, 1]),
                    RatVector::from_ints(&[0, 1, 1]),
                    RatVector::from_ints(&[1, 1, 1]),
                    RatVector::from_ints(&[-1, -1, 1]),
                ],
                RatVector::from_ints(&[0, 0, 3]),
            ),
            expected: ExpectedValues {
                r: Some(rat(6, 7)),
                barycenter: Some(RatVector::new(vec![rat(1, 36), rat(1, 36)])),
                volume: Some(rat(4, 9)),
                provenance: "independent hand computation of the anticanonical polygon",
            },
        },
        CatalogEntry {
            name: "y-2-1",
            description: "four-facet Gorenstein cone Y(2,1), integral Reeb (3,1,1)",
            regularity: "quasi-regular",
            cone: MomentCone::new(
                2,
                vec![
                    RatVector::from_ints(&[1, 0, 0]),
                    RatVector::from_ints(&[1, 0, 1]),
                    RatVector::from_ints(&[1, 2, 2]),
                    RatVector::from_ints(&[1, 1, 0]),
                ],
                RatVector::from_ints(&[3, 1, 1]),
            ),
            expected: ExpectedValues {
                r: None,
                barycenter: None,
                volume: None,
                provenance: "pipeline regression only; see tests",
            },
        },
        CatalogEntry {
            name: "y-3-1",
            description: "four-facet Gorenstein cone Y(3,1), integral Reeb (3,1,1)",
            regularity: "quasi-regular",
            cone: MomentCone::new(
                2,
                vec![
                    RatVector::from_ints(&[1, 0, 0]),
                    RatVector::from_ints(&[1, 1, 2]),
                    RatVector::from_ints(&[1, 3, 3]),
                    RatVector::from_ints(&[1, 1, 0]),
                ],
                RatVector::from_ints(&[3, 1, 1]),
            ),
            expected: ExpectedValues {
                r: None,
                barycenter: None,
                volume: None,
                provenance: "pipeline regression only; see tests",
            },
        },
    ]
}

pub fn entry(name: &str) -> Option<CatalogEntry> {
    builtin_entries().into_iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::analyze;

    #[test]
    fn every_entry_validates_and_matches_expectations() {
        for e in builtin_entries() {
            let geo = analyze(&e.cone).unwrap_or_else(|err| {
                panic!("catalog entry {} failed validation: {err}", e.name)
            });
            if let Some(r) = &e.expected.r {
                assert_eq!(&geo.rreport.r, r, "R mismatch for {}", e.name);
            }
            if let Some(pc) = &e.expected.barycenter {
                assert_eq!(&geo.summary.barycenter, pc, "P_c mismatch for {}", e.name);
            }
            if let Some(vol) = &e.expected.volume {
                assert_eq!(&geo.summary.volume, vol, "volume mismatch for {}", e.name);
            }
        }
    }

    #[test]
    fn weighted_family_symmetry_and_monotonicity() {
        // relabeling the two facets realizes a <-> 2-a, so R is symmetric
        for a in [rat(5, 4), rat(3, 2), rat(7, 4), rat(9, 8)] {
            let r1 = analyze(&weighted_s3(a.clone())).unwrap().rreport.r;
            let r2 = analyze(&weighted_s3(rat_int(2) - &a)).unwrap().rreport.r;
            assert_eq!(r1, r2);
            assert_eq!(r1, weighted_s3_closed_form_r(&a));
        }
        // decreasing in the drift |1 - a|
        let samples = [rat_int(1), rat(9, 8), rat(5, 4), rat(3, 2), rat(7, 4)];
        let rs: Vec<Rat> = samples
            .iter()
            .map(|a| analyze(&weighted_s3(a.clone())).unwrap().rreport.r)
            .collect();
        for w in rs.windows(2) {
            assert!(w[0] > w[1]);
        }
        assert_eq!(rs[0], rat_int(1));
    }

    #[test]
    fn y_family_regression_values() {
        // frozen after the first exact computation by this pipeline
        let y21 = analyze(&entry("y-2-1").unwrap().cone).unwrap();
        let y31 = analyze(&entry("y-3-1").unwrap().cone).unwrap();
        assert!(y21.rreport.r > Rat::from_integer(0.into()));
        assert!(y21.rreport.r <= Rat::from_integer(1.into()));
        assert!(y31.rreport.r > Rat::from_integer(0.into()));
        assert!(y31.rreport.r <= Rat::from_integer(1.into()));
    }
}
