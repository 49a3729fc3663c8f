//! The clustered-circle lower-bound construction.
//!
//! `k` points `x_i` sit on the unit circle in the `e_1, e_2` plane. Around
//! each one a small cluster `S_i` of `d - 1` points spans a simplex in
//! `x_i + span(e_3, ..., e_d)`; a large simplex `S` sits in the central
//! plane `span(e_3, ..., e_d)` as a reflected, scaled copy of the cluster
//! shape. For a labeling with positive part `S'_i` in cluster `i`, the
//! witness is `conv(S ∪ {y_i})`, where `y_i` sits on the ray from the origin
//! through the centroid of `S'_i`, scaled outward by `1 + ε(|S'_i|)`.
//!
//! Witnesses use at most `k + d - 1` vertices, so when every labeling
//! checks out the `k(d - 1)` ground points are shattered at that budget.
//! No value for `ε` is known in closed form; [`search_epsilon_schedule`]
//! finds one and [`certify_construction`] records every witness in a
//! [`Certificate`] that [`replay`] re-checks from coordinates alone.
//!
//! Everything is exact. Circle points use the rational parametrization
//! `((1 - u^2) / (1 + u^2), 2u / (1 + u^2))` and the cluster shape is the
//! re-centered standard simplex, so nothing is metrically regular.

mod certificate;
mod search;

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::mask_to_labels;
use crate::geometry::{HullOracle, PointSet, RationalPoint, VPolytope};
use crate::rational::{self, Rational};
use crate::{Error, Result};

pub use certificate::{
    certify_construction, replay, CertificationReport, Certificate, LabelingRecord, ReplayFailure,
    ReplayReport,
};
pub use search::{
    search_epsilon_schedule, verify_labelings, SearchConfig, SearchFailure, SearchMode,
    SearchOutcome, ScheduleSet,
};

/// Apex offsets by face size `1..=d-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EpsilonSchedule {
    #[serde(with = "schedule_serde")]
    values: BTreeMap<usize, Rational>,
}

mod schedule_serde {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::rational::{self, Rational};

    pub fn serialize<S: Serializer>(
        values: &BTreeMap<usize, Rational>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        values
            .iter()
            .map(|(m, v)| (m.to_string(), rational::format(v)))
            .collect::<BTreeMap<_, _>>()
            .serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<usize, Rational>, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        raw.into_iter()
            .map(|(m, v)| {
                let m = m.parse().map_err(serde::de::Error::custom)?;
                let v = rational::parse(&v).map_err(serde::de::Error::custom)?;
                Ok((m, v))
            })
            .collect()
    }
}

impl EpsilonSchedule {
    /// The same value for every face size of a `d`-dimensional construction.
    pub fn constant(dimension: usize, value: Rational) -> Self {
        EpsilonSchedule {
            values: (1..dimension).map(|m| (m, value.clone())).collect(),
        }
    }

    pub fn from_map(values: BTreeMap<usize, Rational>) -> Self {
        EpsilonSchedule { values }
    }

    pub fn get(&self, face_size: usize) -> Option<&Rational> {
        self.values.get(&face_size)
    }

    pub fn set(&mut self, face_size: usize, value: Rational) {
        self.values.insert(face_size, value);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.values.iter().map(|(m, v)| (*m, v))
    }

    fn validate(&self, dimension: usize) -> Result<()> {
        for m in 1..dimension {
            match self.values.get(&m) {
                Some(v) if v.is_positive() => {}
                Some(_) => {
                    return Err(Error::InvalidConstruction(format!(
                        "epsilon for face size {m} must be positive"
                    )))
                }
                None => {
                    return Err(Error::InvalidConstruction(format!(
                        "no epsilon for face size {m}"
                    )))
                }
            }
        }
        if let Some(m) = self.values.keys().find(|&&m| m == 0 || m >= dimension) {
            return Err(Error::InvalidConstruction(format!(
                "face size {m} out of range 1..={}",
                dimension - 1
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionSpec {
    pub dimension: usize,
    pub clusters: usize,
    #[serde(with = "rational::serde_vec")]
    pub circle_params: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub cluster_radius: Rational,
    #[serde(with = "rational::serde_str")]
    pub big_radius: Rational,
    pub epsilon_schedule: EpsilonSchedule,
}

/// Rational approximations of `tan(theta / 2)` for `k` angles spread evenly
/// around the circle, symmetric about zero.
pub fn default_circle_params(k: usize) -> Vec<Rational> {
    let denominator = (4 * k).max(16) as i64;
    (0..k)
        .map(|i| {
            let theta = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * (i as f64 + 0.5) / k as f64;
            let u = (theta / 2.0).tan();
            rational::ratio((u * denominator as f64).round() as i64, denominator)
        })
        .collect()
}

/// `((1 - u^2) / (1 + u^2), 2u / (1 + u^2))`.
pub fn circle_point(u: &Rational) -> (Rational, Rational) {
    let u2 = u * u;
    let den = Rational::one() + &u2;
    ((Rational::one() - u2) / &den, (u * rational::int(2)) / den)
}

impl ConstructionSpec {
    /// Defaults: evenly spread circle parameters, cluster radius `1/100`,
    /// big radius `100`, every `ε` equal to the cluster radius.
    pub fn new(dimension: usize, clusters: usize) -> Result<Self> {
        let cluster_radius = rational::ratio(1, 100);
        let spec = ConstructionSpec {
            dimension,
            clusters,
            circle_params: default_circle_params(clusters),
            cluster_radius: cluster_radius.clone(),
            big_radius: rational::int(100),
            epsilon_schedule: EpsilonSchedule::constant(dimension, cluster_radius),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_radii(mut self, cluster_radius: Rational, big_radius: Rational) -> Result<Self> {
        self.epsilon_schedule = EpsilonSchedule::constant(self.dimension, cluster_radius.clone());
        self.cluster_radius = cluster_radius;
        self.big_radius = big_radius;
        self.validate()?;
        Ok(self)
    }

    pub fn with_circle_params(mut self, params: Vec<Rational>) -> Result<Self> {
        self.circle_params = params;
        self.validate()?;
        Ok(self)
    }

    pub fn budget(&self) -> usize {
        self.clusters + self.dimension - 1
    }

    pub fn ground_size(&self) -> usize {
        self.clusters * (self.dimension - 1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConstruction(msg));
        if self.dimension < 2 {
            return bad(format!("dimension {} is below 2", self.dimension));
        }
        if self.clusters < 2 {
            return bad(format!("{} clusters, need at least 2", self.clusters));
        }
        if self.circle_params.len() != self.clusters {
            return bad(format!(
                "{} circle parameters for {} clusters",
                self.circle_params.len(),
                self.clusters
            ));
        }
        if !self.cluster_radius.is_positive() {
            return bad("cluster radius must be positive".into());
        }
        if self.big_radius <= Rational::one() {
            return bad("big radius must exceed 1".into());
        }
        self.epsilon_schedule.validate(self.dimension)?;
        let points: Vec<_> = self.circle_params.iter().map(circle_point).collect();
        let r2 = &self.cluster_radius * &self.cluster_radius * rational::int(100);
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if self.circle_params[i] == self.circle_params[j] {
                    return bad(format!("circle parameters {i} and {j} coincide"));
                }
                let dx = &points[i].0 - &points[j].0;
                let dy = &points[i].1 - &points[j].1;
                if &dx * &dx + &dy * &dy <= r2 {
                    return bad(format!(
                        "cluster radius is not small against the distance between circle points {i} and {j}"
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Generated points of a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionInstance {
    spec: ConstructionSpec,
    circle_points: Vec<RationalPoint>,
    ground_set: PointSet,
    cluster_of: Vec<usize>,
    common_vertices: Vec<RationalPoint>,
}

/// Re-centered standard simplex in `R^m`: `m + 1` points.
fn cluster_shape(m: usize) -> Vec<Vec<Rational>> {
    let shift = rational::ratio(1, m as i64 + 1);
    (0..=m)
        .map(|v| {
            (0..m)
                .map(|c| {
                    let base = if c == v { Rational::one() } else { Rational::zero() };
                    base - &shift
                })
                .collect()
        })
        .collect()
}

/// Places `offset` (in `R^{d-2}`) in coordinates `2..d`, scaled, around `base`.
fn embed(base: &[Rational], offset: &[Rational], scale: &Rational) -> RationalPoint {
    let mut coords = base.to_vec();
    for (c, v) in offset.iter().enumerate() {
        coords[c + 2] += v * scale;
    }
    RationalPoint::new(coords).expect("dimension >= 2")
}

/// Builds the ground set and the common simplex.
pub fn generate(spec: &ConstructionSpec) -> Result<ConstructionInstance> {
    spec.validate()?;
    let d = spec.dimension;
    let shape = cluster_shape(d - 2);
    let circle_points: Vec<RationalPoint> = spec
        .circle_params
        .iter()
        .map(|u| {
            let (x, y) = circle_point(u);
            let mut coords = vec![Rational::zero(); d];
            coords[0] = x;
            coords[1] = y;
            RationalPoint::new(coords).expect("dimension >= 2")
        })
        .collect();
    let mut points = Vec::with_capacity(spec.ground_size());
    let mut cluster_of = Vec::with_capacity(spec.ground_size());
    for (i, x) in circle_points.iter().enumerate() {
        for offset in &shape {
            points.push(embed(x.coords(), offset, &spec.cluster_radius));
            cluster_of.push(i);
        }
    }
    let origin = vec![Rational::zero(); d];
    let common_vertices = shape
        .iter()
        .map(|offset| embed(&origin, offset, &-spec.big_radius.clone()))
        .collect();
    Ok(ConstructionInstance {
        spec: spec.clone(),
        circle_points,
        ground_set: PointSet::new(d, points)?,
        cluster_of,
        common_vertices,
    })
}

impl ConstructionInstance {
    pub fn spec(&self) -> &ConstructionSpec {
        &self.spec
    }

    pub fn dimension(&self) -> usize {
        self.spec.dimension
    }

    pub fn clusters(&self) -> usize {
        self.spec.clusters
    }

    pub fn budget(&self) -> usize {
        self.spec.budget()
    }

    pub fn len(&self) -> usize {
        self.ground_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground_set.is_empty()
    }

    pub fn ground_set(&self) -> &PointSet {
        &self.ground_set
    }

    pub fn circle_points(&self) -> &[RationalPoint] {
        &self.circle_points
    }

    pub fn common_vertices(&self) -> &[RationalPoint] {
        &self.common_vertices
    }

    /// Cluster of each ground point.
    pub fn cluster_of(&self) -> &[usize] {
        &self.cluster_of
    }

    /// Ground indices of cluster `i`.
    pub fn cluster(&self, i: usize) -> std::ops::Range<usize> {
        let size = self.dimension() - 1;
        i * size..(i + 1) * size
    }

    fn check_labels(&self, labels: &[bool]) -> Result<()> {
        if labels.len() != self.len() {
            return Err(Error::WrongArity {
                expected: self.len(),
                found: labels.len(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Apex {
    pub cluster: usize,
    /// Ground indices of the positive face.
    pub face: Vec<usize>,
    /// Centroid of the face; the apex lies on the ray from the origin through it.
    pub face_center: RationalPoint,
    #[serde(with = "rational::serde_str")]
    pub epsilon: Rational,
    pub point: RationalPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPolytope {
    pub polytope: VPolytope,
    pub apexes: Vec<Apex>,
}

/// `conv(S ∪ {y_i : S'_i nonempty})` for the labeling.
pub fn build_witness(
    instance: &ConstructionInstance,
    labels: &[bool],
    schedule: &EpsilonSchedule,
) -> Result<WitnessPolytope> {
    instance.check_labels(labels)?;
    schedule.validate(instance.dimension())?;
    let mut apexes = Vec::new();
    for i in 0..instance.clusters() {
        let face: Vec<usize> = instance.cluster(i).filter(|&p| labels[p]).collect();
        if face.is_empty() {
            continue;
        }
        let members: Vec<RationalPoint> = face
            .iter()
            .map(|&p| instance.ground_set.points()[p].clone())
            .collect();
        let face_center = RationalPoint::centroid(&members)?;
        if face_center.coords().iter().all(Zero::is_zero) {
            return Err(Error::InvalidConstruction(format!(
                "face center of cluster {i} is the origin"
            )));
        }
        let epsilon = schedule
            .get(face.len())
            .expect("validated schedule covers every face size")
            .clone();
        let point = face_center.scale(&(Rational::one() + &epsilon));
        apexes.push(Apex {
            cluster: i,
            face,
            face_center,
            epsilon,
            point,
        });
    }
    let vertices = instance
        .common_vertices
        .iter()
        .cloned()
        .chain(apexes.iter().map(|a| a.point.clone()))
        .collect();
    Ok(WitnessPolytope {
        polytope: VPolytope::from_points(vertices)?,
        apexes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// A positive point outside the witness.
    PositiveOutside { point: usize, cluster: usize },
    /// A negative point absorbed by the witness.
    NegativeInside { point: usize, cluster: usize },
    /// The witness uses more vertices than the budget.
    OverBudget { vertices: usize, budget: usize },
}

/// Exact check of one witness; returns the first violation in point order.
pub fn verify_labeling(
    instance: &ConstructionInstance,
    witness: &WitnessPolytope,
    labels: &[bool],
) -> Result<Option<Violation>> {
    instance.check_labels(labels)?;
    let vertices = witness.polytope.vertex_count();
    if vertices > instance.budget() {
        return Ok(Some(Violation::OverBudget {
            vertices,
            budget: instance.budget(),
        }));
    }
    let oracle = HullOracle::new(witness.polytope.generators())?;
    for (p, point) in instance.ground_set.iter().enumerate() {
        let inside = oracle.contains(point)?;
        let cluster = instance.cluster_of[p];
        if labels[p] && !inside {
            return Ok(Some(Violation::PositiveOutside { point: p, cluster }));
        }
        if !labels[p] && inside {
            return Ok(Some(Violation::NegativeInside { point: p, cluster }));
        }
    }
    Ok(None)
}

/// Builds and checks the witness for labeling `mask`.
pub fn check_mask(
    instance: &ConstructionInstance,
    mask: u64,
    schedule: &EpsilonSchedule,
) -> Result<Option<Violation>> {
    let labels = mask_to_labels(mask, instance.len());
    let witness = build_witness(instance, &labels, schedule)?;
    verify_labeling(instance, &witness, &labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hull_contains;
    use crate::rational::{int, ratio};

    #[test]
    fn default_params_are_symmetric() {
        let p = default_circle_params(3);
        assert_eq!(p[1], int(0));
        assert_eq!(p[0], -p[2].clone());
        for k in 2..40 {
            assert!(ConstructionSpec::new(3, k).is_ok(), "k = {k}");
        }
    }

    #[test]
    fn circle_points_are_on_the_circle() {
        for u in [int(0), ratio(1, 2), ratio(-7, 4), int(3)] {
            let (x, y) = circle_point(&u);
            assert_eq!(&x * &x + &y * &y, int(1));
        }
    }

    #[test]
    fn generate_three_three() {
        let inst = generate(&ConstructionSpec::new(3, 3).unwrap()).unwrap();
        assert_eq!(inst.len(), 6);
        assert_eq!(inst.common_vertices().len(), 2);
        assert_eq!(inst.budget(), 5);
        assert_eq!(inst.cluster_of(), &[0, 0, 1, 1, 2, 2]);
        for v in inst.common_vertices() {
            assert!(v.coords()[0].is_zero() && v.coords()[1].is_zero());
        }
    }

    #[test]
    fn generate_planar() {
        let inst = generate(&ConstructionSpec::new(2, 4).unwrap()).unwrap();
        assert_eq!(inst.len(), 4);
        assert_eq!(inst.common_vertices(), &[RationalPoint::origin(2)]);
        assert_eq!(inst.budget(), 5);
    }

    #[test]
    fn clusters_are_translates() {
        for d in [2, 3, 4, 5] {
            let inst = generate(&ConstructionSpec::new(d, 4).unwrap()).unwrap();
            let offsets = |i: usize| -> Vec<Vec<Rational>> {
                inst.cluster(i)
                    .map(|p| inst.ground_set().points()[p].sub(&inst.circle_points()[i]))
                    .collect()
            };
            for i in 1..4 {
                assert_eq!(offsets(i), offsets(0));
            }
            // S is the reflected copy scaled by big_radius / cluster_radius.
            let factor = -(&inst.spec().big_radius / &inst.spec().cluster_radius);
            for (v, off) in inst.common_vertices().iter().zip(offsets(0)) {
                let scaled: Vec<Rational> = off.iter().map(|c| c * &factor).collect();
                assert_eq!(v.coords(), &scaled[..]);
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(ConstructionSpec::new(1, 3).is_err());
        assert!(ConstructionSpec::new(3, 1).is_err());
        let spec = ConstructionSpec::new(3, 3).unwrap();
        assert!(spec.clone().with_radii(int(1), int(100)).is_err());
        assert!(spec.clone().with_radii(ratio(1, 100), int(1)).is_err());
        assert!(spec.clone().with_radii(int(0), int(100)).is_err());
        assert!(spec
            .clone()
            .with_circle_params(vec![int(0), int(0), int(1)])
            .is_err());
        let mut bad = spec.clone();
        bad.epsilon_schedule.set(2, int(0));
        assert!(bad.validate().is_err());
        let mut bad = spec;
        bad.epsilon_schedule.set(3, int(1));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn all_positive_uses_full_budget() {
        let spec = ConstructionSpec::new(3, 3).unwrap();
        let inst = generate(&spec).unwrap();
        let w = build_witness(&inst, &[true; 6], &spec.epsilon_schedule).unwrap();
        assert_eq!(w.polytope.vertex_count(), 5);
        let d0 = w.apexes[0].point.coords().iter().map(|c| c * c).sum::<Rational>();
        for a in &w.apexes[1..] {
            assert_eq!(a.point.coords().iter().map(|c| c * c).sum::<Rational>(), d0);
        }
    }

    #[test]
    fn all_negative_is_the_common_simplex() {
        let spec = ConstructionSpec::new(3, 4).unwrap();
        let inst = generate(&spec).unwrap();
        let labels = vec![false; inst.len()];
        let w = build_witness(&inst, &labels, &spec.epsilon_schedule).unwrap();
        assert_eq!(w.polytope.vertices(), inst.common_vertices());
        for p in inst.ground_set().iter() {
            assert!(!hull_contains(w.polytope.generators(), p).unwrap());
        }
        assert_eq!(verify_labeling(&inst, &w, &labels).unwrap(), None);
    }

    #[test]
    fn oversized_epsilon_absorbs_a_negative() {
        let spec = ConstructionSpec::new(3, 3).unwrap();
        let inst = generate(&spec).unwrap();
        let labels = [true, false, true, true, false, false];
        let w = build_witness(&inst, &labels, &EpsilonSchedule::constant(3, int(10))).unwrap();
        assert!(matches!(
            verify_labeling(&inst, &w, &labels).unwrap(),
            Some(Violation::NegativeInside { .. })
        ));
    }

    #[test]
    fn tiny_epsilon_misses_a_full_face() {
        let spec = ConstructionSpec::new(3, 3).unwrap();
        let inst = generate(&spec).unwrap();
        let schedule = EpsilonSchedule::constant(3, ratio(1, 1_000_000));
        assert_eq!(
            check_mask(&inst, 0b11, &schedule).unwrap(),
            Some(Violation::PositiveOutside {
                point: 0,
                cluster: 0
            })
        );
    }

    #[test]
    fn label_length_checked() {
        let spec = ConstructionSpec::new(3, 3).unwrap();
        let inst = generate(&spec).unwrap();
        assert!(build_witness(&inst, &[true; 5], &spec.epsilon_schedule).is_err());
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = ConstructionSpec::new(4, 5).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let back: ConstructionSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
