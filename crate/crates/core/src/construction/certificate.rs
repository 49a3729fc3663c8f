//! Replayable shattering certificates.
//!
//! A certificate lists the ground set and, for every labeling mask, the
//! vertices of a polytope that contains exactly the positive points. Replay
//! needs nothing else: it checks the vertex budget, that every mask appears
//! exactly once, and every containment, with exact arithmetic.

use serde::{Deserialize, Serialize};

use super::search::{search_epsilon_schedule, SearchConfig, SearchFailure, SearchMode, SearchOutcome};
use super::{build_witness, generate, ConstructionSpec, EpsilonSchedule};
use crate::combinatorics::mask_to_labels;
use crate::geometry::{HullOracle, PointSet, RationalPoint};
use crate::parallel;
use crate::range::check_cap;
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelingRecord {
    pub mask: u64,
    #[serde(with = "rational::serde_rows")]
    pub vertices: Vec<Vec<Rational>>,
    /// Present only for per-labeling schedules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<EpsilonSchedule>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub dimension: usize,
    pub clusters: usize,
    pub budget: usize,
    pub mode: SearchMode,
    /// Parameters; in uniform mode the schedule is the one found.
    pub spec: ConstructionSpec,
    #[serde(with = "rational::serde_rows")]
    pub ground_set: Vec<Vec<Rational>>,
    pub cluster_of: Vec<usize>,
    #[serde(with = "rational::serde_rows")]
    pub common_vertices: Vec<Vec<Rational>>,
    pub labelings: Vec<LabelingRecord>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificates always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn ground_points(&self) -> Result<Vec<RationalPoint>> {
        self.ground_set
            .iter()
            .map(|c| RationalPoint::new(c.clone()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ReplayFailure {
    Malformed { reason: String },
    MissingLabelings { expected: u64, found: usize },
    DuplicateLabeling { mask: u64 },
    OverBudget { mask: u64, vertices: usize, budget: usize },
    Containment {
        mask: u64,
        point: usize,
        coordinates: Vec<String>,
        expected_inside: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub passed: bool,
    pub ground_size: usize,
    pub budget: usize,
    pub labelings_checked: usize,
    pub failure: Option<ReplayFailure>,
}

/// Re-checks a certificate from its coordinates alone.
pub fn replay(cert: &Certificate) -> Result<ReplayReport> {
    let n = cert.ground_set.len();
    let mut report = ReplayReport {
        passed: false,
        ground_size: n,
        budget: cert.budget,
        labelings_checked: 0,
        failure: None,
    };
    let malformed = |reason: String| ReplayFailure::Malformed { reason };

    if cert.dimension < 2 || cert.budget != cert.clusters + cert.dimension - 1 {
        report.failure = Some(malformed(format!(
            "budget {} does not match {} clusters in dimension {}",
            cert.budget, cert.clusters, cert.dimension
        )));
        return Ok(report);
    }
    if n != cert.clusters * (cert.dimension - 1) || n >= 64 {
        report.failure = Some(malformed(format!(
            "{n} ground points for {} clusters in dimension {}",
            cert.clusters, cert.dimension
        )));
        return Ok(report);
    }
    let ground = match PointSet::new(cert.dimension, cert.ground_points()?) {
        Ok(g) => g,
        Err(e) => {
            report.failure = Some(malformed(e.to_string()));
            return Ok(report);
        }
    };

    let expected = 1u64 << n;
    let mut seen = vec![false; expected as usize];
    for r in &cert.labelings {
        if r.mask >= expected || seen[r.mask as usize] {
            report.failure = Some(if r.mask >= expected {
                malformed(format!("mask {} out of range", r.mask))
            } else {
                ReplayFailure::DuplicateLabeling { mask: r.mask }
            });
            return Ok(report);
        }
        seen[r.mask as usize] = true;
        if r.vertices.len() > cert.budget {
            report.failure = Some(ReplayFailure::OverBudget {
                mask: r.mask,
                vertices: r.vertices.len(),
                budget: cert.budget,
            });
            return Ok(report);
        }
    }
    if cert.labelings.len() as u64 != expected {
        report.failure = Some(ReplayFailure::MissingLabelings {
            expected,
            found: cert.labelings.len(),
        });
        return Ok(report);
    }

    let checked = parallel::find_first(cert.labelings.len(), |i| {
        check_record(&ground, &cert.labelings[i]).transpose()
    });
    report.labelings_checked = cert.labelings.len();
    match checked {
        None => report.passed = true,
        Some((_, Err(e))) => return Err(e),
        Some((i, Ok(failure))) => {
            report.labelings_checked = i;
            report.failure = Some(failure);
        }
    }
    Ok(report)
}

fn check_record(ground: &PointSet, record: &LabelingRecord) -> Result<Option<ReplayFailure>> {
    let vertices = record
        .vertices
        .iter()
        .map(|c| RationalPoint::new(c.clone()))
        .collect::<Result<Vec<_>>>()?;
    let labels = mask_to_labels(record.mask, ground.len());
    let oracle = if vertices.is_empty() {
        None
    } else {
        Some(HullOracle::new(&PointSet::new(ground.dimension(), vertices)?)?)
    };
    for (p, point) in ground.iter().enumerate() {
        let inside = match &oracle {
            Some(o) => o.contains(point)?,
            None => false,
        };
        if inside != labels[p] {
            return Ok(Some(ReplayFailure::Containment {
                mask: record.mask,
                point: p,
                coordinates: rational::format_vec(point.coords()),
                expected_inside: labels[p],
            }));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub dimension: usize,
    pub clusters: usize,
    pub ground_size: usize,
    pub budget: usize,
    pub labelings: u64,
    pub mode: SearchMode,
    pub rounds: Option<usize>,
    pub failure: Option<SearchFailure>,
    #[serde(skip)]
    pub certificate: Option<Certificate>,
}

impl CertificationReport {
    pub fn certified(&self) -> bool {
        self.certificate.is_some()
    }
}

/// Generates, searches, exhaustively verifies and records every witness.
pub fn certify_construction(
    spec: &ConstructionSpec,
    config: &SearchConfig,
    cap: usize,
) -> Result<CertificationReport> {
    spec.validate()?;
    check_cap(spec.ground_size(), cap)?;
    let instance = generate(spec)?;
    let mut report = CertificationReport {
        dimension: spec.dimension,
        clusters: spec.clusters,
        ground_size: instance.len(),
        budget: instance.budget(),
        labelings: 1u64 << instance.len(),
        mode: config.mode,
        rounds: None,
        failure: None,
        certificate: None,
    };
    let (schedules, rounds) = match search_epsilon_schedule(&instance, config)? {
        SearchOutcome::Found {
            schedules, rounds, ..
        } => (schedules, rounds),
        SearchOutcome::Exhausted(f) => {
            report.rounds = Some(f.rounds);
            report.failure = Some(f);
            return Ok(report);
        }
    };
    report.rounds = Some(rounds);

    let masks: Vec<u64> = (0..report.labelings).collect();
    let labelings = parallel::map_slice(&masks, |&mask| -> Result<LabelingRecord> {
        let schedule = schedules.for_mask(mask);
        let labels = mask_to_labels(mask, instance.len());
        let witness = build_witness(&instance, &labels, schedule)?;
        if let Some(v) = super::verify_labeling(&instance, &witness, &labels)? {
            return Err(Error::InvalidConstruction(format!(
                "labeling {mask} failed after search: {v:?}"
            )));
        }
        Ok(LabelingRecord {
            mask,
            vertices: witness
                .polytope
                .vertices()
                .iter()
                .map(|v| v.coords().to_vec())
                .collect(),
            epsilon: match config.mode {
                SearchMode::Uniform => None,
                SearchMode::PerLabeling => Some(schedule.clone()),
            },
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut recorded = spec.clone();
    if let SearchMode::Uniform = config.mode {
        recorded.epsilon_schedule = schedules.for_mask(0).clone();
    }
    report.certificate = Some(Certificate {
        dimension: spec.dimension,
        clusters: spec.clusters,
        budget: instance.budget(),
        mode: config.mode,
        spec: recorded,
        ground_set: instance
            .ground_set()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect(),
        cluster_of: instance.cluster_of().to_vec(),
        common_vertices: instance
            .common_vertices()
            .iter()
            .map(|p| p.coords().to_vec())
            .collect(),
        labelings,
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn certify(d: usize, k: usize) -> Certificate {
        let spec = ConstructionSpec::new(d, k).unwrap();
        certify_construction(&spec, &SearchConfig::default(), 20)
            .unwrap()
            .certificate
            .expect("certified")
    }

    #[test]
    fn three_three_replays() {
        let cert = certify(3, 3);
        assert_eq!(cert.labelings.len(), 64);
        assert_eq!(cert.budget, 5);
        let r = replay(&cert).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.labelings_checked, 64);
    }

    #[test]
    fn planar_replays() {
        let cert = certify(2, 3);
        assert!(replay(&cert).unwrap().passed);
    }

    #[test]
    fn tamper_names_the_point() {
        let mut cert = certify(3, 3);
        cert.ground_set[3][0] += int(10);
        let r = replay(&cert).unwrap();
        assert!(!r.passed);
        match r.failure {
            Some(ReplayFailure::Containment { point, .. }) => assert_eq!(point, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structural_failures() {
        let cert = certify(2, 3);
        let mut missing = cert.clone();
        missing.labelings.pop();
        assert!(matches!(
            replay(&missing).unwrap().failure,
            Some(ReplayFailure::MissingLabelings { .. })
        ));
        let mut dup = cert.clone();
        let first = dup.labelings[0].clone();
        dup.labelings[1] = first;
        assert!(matches!(
            replay(&dup).unwrap().failure,
            Some(ReplayFailure::DuplicateLabeling { mask: 0 })
        ));
        let mut fat = cert.clone();
        let extra = fat.labelings[7].vertices[0].clone();
        fat.labelings[7].vertices.extend(vec![extra; 3]);
        assert!(matches!(
            replay(&fat).unwrap().failure,
            Some(ReplayFailure::OverBudget { mask: 7, .. })
        ));
        let mut budget = cert;
        budget.budget += 1;
        assert!(matches!(
            replay(&budget).unwrap().failure,
            Some(ReplayFailure::Malformed { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let cert = certify(3, 2);
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert!(replay(&back).unwrap().passed);
    }

    #[test]
    fn cap_refusal() {
        let spec = ConstructionSpec::new(3, 6).unwrap();
        assert!(matches!(
            certify_construction(&spec, &SearchConfig::default(), 10),
            Err(Error::CapExceeded { size: 12, cap: 10 })
        ));
    }
}
