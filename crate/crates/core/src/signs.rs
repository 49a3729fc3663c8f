//! The orientation polynomial family and its sign patterns.
//!
//! For a ground set `A = {a_0, ..., a_{t-1}}` and `k` variable vertices
//! `x_0, ..., x_{k-1}` in `R^d`, every point `j`, strictly increasing
//! `(d+1)`-tuple of vertex indices and omitted position `s` gives two
//! determinants of degree `d`:
//!
//! * vertex-anchored: `det[x_r - x_s]` over tuple positions `r != s`;
//! * point-anchored: `det[x_r - a_j]` over tuple positions `r != s`.
//!
//! A sign pattern lists the signs of the whole family at one vertex
//! configuration, in the canonical order `(j, tuple, s, kind)` with the
//! vertex-anchored entry first. The pattern alone determines which points
//! lie in the hull of the configuration whenever the configuration is in
//! general position; [`subset_from_pattern`] reads that subset back without
//! looking at any coordinates.

use std::collections::HashSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::{Deserialize, Serialize};

use crate::bounds::{self, Enclosure, MtParams};
use crate::combinatorics::{binomial, subsets};
use crate::geometry::det::int_det_sign;
use crate::geometry::{HullOracle, PointSet, RationalPoint, Sign};
use crate::parallel;
use crate::rational;
use crate::sampling::{seeded, Sampler};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    VertexAnchored,
    PointAnchored,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FamilyIndex {
    pub point: usize,
    pub tuple: Vec<usize>,
    pub omit: usize,
    pub kind: FamilyKind,
}

/// Dimensions of a polynomial family: `t` points, `k` vertices in `R^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilyShape {
    pub dimension: usize,
    pub vertices: usize,
    pub points: usize,
}

impl FamilyShape {
    pub fn new(dimension: usize, vertices: usize, points: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        if vertices < dimension + 1 {
            return Err(Error::EmptyFamily {
                needed: dimension + 1,
                k: vertices,
            });
        }
        Ok(FamilyShape {
            dimension,
            vertices,
            points,
        })
    }

    pub fn tuple_count(&self) -> usize {
        binomial(self.vertices as u64, self.dimension as u64 + 1)
            .try_into()
            .expect("tuple count fits in usize")
    }

    /// `(2d + 2) t C(k, d+1)`.
    pub fn len(&self) -> usize {
        2 * (self.dimension + 1) * self.points * self.tuple_count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn tuples(&self) -> Vec<Vec<usize>> {
        subsets(self.vertices, self.dimension + 1).collect()
    }

    /// Position of an entry in the canonical order.
    pub fn position(&self, point: usize, tuple_rank: usize, omit: usize, kind: FamilyKind) -> usize {
        let per_tuple = 2 * (self.dimension + 1);
        (point * self.tuple_count() + tuple_rank) * per_tuple + omit * 2 + kind as usize
    }

    /// All family indices in canonical order.
    pub fn indices(&self) -> Vec<FamilyIndex> {
        let tuples = self.tuples();
        let mut out = Vec::with_capacity(self.len());
        for point in 0..self.points {
            for tuple in &tuples {
                for omit in 0..=self.dimension {
                    for kind in [FamilyKind::VertexAnchored, FamilyKind::PointAnchored] {
                        out.push(FamilyIndex {
                            point,
                            tuple: tuple.clone(),
                            omit,
                            kind,
                        });
                    }
                }
            }
        }
        out
    }
}

/// An assignment of `k` concrete points to the vertex variables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexConfiguration {
    pub points: Vec<RationalPoint>,
}

impl VertexConfiguration {
    pub fn new(points: Vec<RationalPoint>) -> Self {
        VertexConfiguration { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn as_point_set(&self, dimension: usize) -> Result<PointSet> {
        PointSet::new(dimension, self.points.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignPattern {
    shape: FamilyShape,
    entries: Vec<Sign>,
}

impl SignPattern {
    pub fn new(shape: FamilyShape, entries: Vec<Sign>) -> Result<Self> {
        if entries.len() != shape.len() {
            return Err(Error::PatternLength {
                expected: shape.len(),
                found: entries.len(),
            });
        }
        Ok(SignPattern { shape, entries })
    }

    pub fn shape(&self) -> FamilyShape {
        self.shape
    }

    pub fn entries(&self) -> &[Sign] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// No vertex-anchored entry is zero.
    pub fn is_general_position(&self) -> bool {
        self.entries.iter().step_by(2).all(|s| !s.is_zero())
    }

    /// Parses a string over `{-, 0, +}`.
    pub fn parse(shape: FamilyShape, text: &str) -> Result<Self> {
        let entries = text
            .chars()
            .map(|c| {
                Sign::from_symbol(c)
                    .ok_or_else(|| Error::InvalidInput(format!("bad sign symbol {c:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shape, entries)
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.entries
            .iter()
            .try_for_each(|s| write!(f, "{}", s.symbol()))
    }
}

/// Evaluates every polynomial of the family for ground set `a` at `config`.
pub fn evaluate_pattern(a: &PointSet, config: &VertexConfiguration) -> Result<SignPattern> {
    let d = a.dimension();
    for p in &config.points {
        Error::check_dim(d, p.dimension())?;
    }
    let shape = FamilyShape::new(d, config.len(), a.len())?;

    // One integer frame for vertices and points: differences scale uniformly.
    let scale = rational::common_denominator(
        config
            .points
            .iter()
            .chain(a.iter())
            .flat_map(|p| p.coords()),
    );
    let lift = |p: &RationalPoint| -> Vec<BigInt> {
        p.coords()
            .iter()
            .map(|c| rational::scaled_integer(c, &scale))
            .collect()
    };
    let vertices: Vec<Vec<BigInt>> = config.points.iter().map(lift).collect();
    let points: Vec<Vec<BigInt>> = a.iter().map(lift).collect();
    let anchored_det = |tuple: &[usize], omit: usize, anchor: &[BigInt]| -> Sign {
        let rows = tuple
            .iter()
            .enumerate()
            .filter(|&(r, _)| r != omit)
            .map(|(_, &v)| vertices[v].iter().zip(anchor).map(|(x, y)| x - y).collect())
            .collect();
        int_det_sign(rows)
    };

    let tuples = shape.tuples();
    let vertex_signs: Vec<Vec<Sign>> = tuples
        .iter()
        .map(|tuple| {
            (0..=d)
                .map(|s| anchored_det(tuple, s, &vertices[tuple[s]]))
                .collect()
        })
        .collect();

    let mut entries = Vec::with_capacity(shape.len());
    for point in &points {
        for (tuple, signs) in tuples.iter().zip(&vertex_signs) {
            for s in 0..=d {
                entries.push(signs[s]);
                entries.push(anchored_det(tuple, s, point));
            }
        }
    }
    SignPattern::new(shape, entries)
}

/// Reads the subset of points inside the configuration's hull from the
/// pattern alone.
///
/// Point `j` is marked inside iff some tuple has all vertex-anchored entries
/// nonzero and, for every `s`, the point-anchored entry is zero or equal to
/// the vertex-anchored one. Tuples with a zero vertex-anchored entry are
/// skipped, so an all-zero pattern yields the empty subset.
pub fn subset_from_pattern(pattern: &SignPattern, shape: FamilyShape) -> Result<Vec<bool>> {
    if pattern.shape() != shape || pattern.len() != shape.len() {
        return Err(Error::PatternLength {
            expected: shape.len(),
            found: pattern.len(),
        });
    }
    let per_tuple = 2 * (shape.dimension + 1);
    let tuples = shape.tuple_count();
    let e = pattern.entries();
    Ok((0..shape.points)
        .map(|j| {
            (0..tuples).any(|rank| {
                let block = &e[(j * tuples + rank) * per_tuple..][..per_tuple];
                let pairs = block.chunks_exact(2);
                pairs.clone().all(|p| !p[0].is_zero())
                    && pairs.into_iter().all(|p| p[1].is_zero() || p[1] == p[0])
            })
        })
        .collect())
}

/// `{j : a_j in conv(config)}` by exact hull membership.
pub fn direct_membership(a: &PointSet, config: &VertexConfiguration) -> Result<Vec<bool>> {
    let oracle = HullOracle::new(&config.as_point_set(a.dimension())?)?;
    a.iter().map(|p| oracle.contains(p)).collect()
}

/// Whether every `(d+1)`-subset of the configuration is affinely independent.
pub fn configuration_in_general_position(config: &VertexConfiguration, dimension: usize) -> Result<bool> {
    let probe = PointSet::new(dimension, vec![RationalPoint::origin(dimension)])?;
    Ok(evaluate_pattern(&probe, config)?.is_general_position())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub dimension: usize,
    pub vertices: usize,
    pub points: usize,
    pub seed: Option<u64>,
    pub census: usize,
    pub configurations: usize,
    pub general_position: usize,
    /// General-position configurations where the pattern disagrees with direct membership.
    pub mismatches: usize,
    pub first_mismatch: Option<usize>,
    pub distinct_patterns: usize,
    pub distinct_subsets: usize,
    pub mt_bound_log2: Enclosure,
    /// `distinct_subsets <= distinct_patterns <= 2^mt_bound`, certified.
    pub counting_holds: bool,
}

impl CorrespondenceReport {
    pub fn correspondence_holds(&self) -> bool {
        self.mismatches == 0
    }
}

/// Compares pattern-derived and direct membership on every configuration
/// and tallies distinct patterns and subsets.
pub fn correspondence_test(a: &PointSet, configs: &[VertexConfiguration]) -> Result<CorrespondenceReport> {
    let d = a.dimension();
    let k = configs.first().map_or(d + 1, |c| c.len());
    let shape = FamilyShape::new(d, k, a.len())?;
    let rows = parallel::map_slice(configs, |config| -> Result<_> {
        if config.len() != k {
            return Err(Error::InvalidInput("configurations differ in size".into()));
        }
        let pattern = evaluate_pattern(a, config)?;
        let read = subset_from_pattern(&pattern, shape)?;
        let direct = direct_membership(a, config)?;
        Ok((pattern, read, direct))
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut patterns = HashSet::new();
    let mut subsets_seen = HashSet::new();
    let mut general_position = 0;
    let mut mismatches = 0;
    let mut first_mismatch = None;
    for (i, (pattern, read, direct)) in rows.into_iter().enumerate() {
        if pattern.is_general_position() {
            general_position += 1;
            if read != direct {
                mismatches += 1;
                first_mismatch.get_or_insert(i);
            }
        }
        subsets_seen.insert(direct);
        patterns.insert(pattern.entries);
    }

    let mt = bounds::mt_sign_pattern_bound(
        &MtParams {
            degree: d as u64,
            polynomials: BigUint::from(shape.len().max(1)),
            variables: (k * d) as u64,
        },
        bounds::DEFAULT_PRECISION,
    )?;
    let pattern_count = patterns.len();
    let counting_holds = subsets_seen.len() <= pattern_count
        && (pattern_count == 0
            || bounds::log2(&rational::int(pattern_count as i64), bounds::DEFAULT_PRECISION)
                .certainly_le(&mt));

    Ok(CorrespondenceReport {
        dimension: d,
        vertices: k,
        points: a.len(),
        seed: None,
        census: shape.len(),
        configurations: configs.len(),
        general_position,
        mismatches,
        first_mismatch,
        distinct_patterns: pattern_count,
        distinct_subsets: subsets_seen.len(),
        mt_bound_log2: Enclosure::from(&mt),
        counting_holds,
    })
}

/// Samples `count` general-position configurations of `k` points.
pub fn sample_configurations<R: rand::Rng>(
    rng: &mut R,
    sampler: &Sampler,
    dimension: usize,
    k: usize,
    count: usize,
) -> Result<Vec<VertexConfiguration>> {
    FamilyShape::new(dimension, k, 0)?;
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count {
        attempts += 1;
        if attempts > 100 * count + 1000 {
            return Err(Error::InvalidInput(
                "sampler rarely produces general-position configurations".into(),
            ));
        }
        let config = VertexConfiguration::new((0..k).map(|_| sampler.point(rng, dimension)).collect());
        if configuration_in_general_position(&config, dimension)? {
            out.push(config);
        }
    }
    Ok(out)
}

/// Seeded end-to-end run: sample `t` ground points and `samples`
/// general-position configurations, then test the correspondence.
pub fn signpattern_experiment(
    dimension: usize,
    k: usize,
    t: usize,
    samples: usize,
    seed: u64,
    sampler: &Sampler,
) -> Result<CorrespondenceReport> {
    let mut rng = seeded(seed);
    let a = sampler.point_set(&mut rng, dimension, t);
    let configs = sample_configurations(&mut rng, sampler, dimension, k, samples)?;
    let mut report = correspondence_test(&a, &configs)?;
    report.seed = Some(seed);
    Ok(report)
}
