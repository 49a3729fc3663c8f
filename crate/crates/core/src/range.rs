//! Labelings realized by polytopes with at most `k` vertices.
//!
//! A labeling of a point set `A` is realizable when some polytope with at
//! most `k` vertices contains exactly the positive points. This module only
//! returns certified answers:
//!
//! * `No` when a negative point lies in the hull of the positives (every
//!   realizing polytope contains that hull);
//! * `Yes` when the hull of the positives itself has at most `k` vertices;
//! * `Unknown` otherwise. A nested polytope with fewer vertices may exist,
//!   but deciding that is not attempted.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{mask_to_labels, subsets};
use crate::geometry::{convex_combination, hull_vertices, HullOracle, PointSet, RationalPoint, VPolytope};
use crate::parallel;
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Default limit on the size of an enumerated point set (`2^20` labelings).
pub const DEFAULT_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledInstance {
    points: PointSet,
    labels: Vec<bool>,
    budget: usize,
}

impl LabeledInstance {
    pub fn new(points: PointSet, labels: Vec<bool>, budget: usize) -> Result<Self> {
        if labels.len() != points.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for {} points",
                labels.len(),
                points.len()
            )));
        }
        if budget == 0 {
            return Err(Error::ZeroBudget);
        }
        Ok(LabeledInstance {
            points,
            labels,
            budget,
        })
    }

    /// Labeling from a bitmask, bit `i` labelling point `i`.
    pub fn from_mask(points: PointSet, mask: u64, budget: usize) -> Result<Self> {
        let labels = mask_to_labels(mask, points.len());
        Self::new(points, labels, budget)
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn positives(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| self.labels[i]).collect()
    }

    pub fn negatives(&self) -> Vec<usize> {
        (0..self.labels.len()).filter(|&i| !self.labels[i]).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

/// A negative point written as a convex combination of positive points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectionCertificate {
    pub negative: usize,
    pub positives: Vec<usize>,
    #[serde(with = "rational::serde_vec")]
    pub weights: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizabilityResult {
    pub verdict: Verdict,
    pub witness: Option<VPolytope>,
    pub certificate: Option<RejectionCertificate>,
}

impl RealizabilityResult {
    fn yes(witness: VPolytope) -> Self {
        RealizabilityResult {
            verdict: Verdict::Yes,
            witness: Some(witness),
            certificate: None,
        }
    }
}

/// A point whose first coordinate exceeds that of every point in `points`.
fn escape_point(points: &PointSet) -> RationalPoint {
    let d = points.dimension();
    let mut coords = vec![rational::int(0); d];
    if let Some(max) = points.iter().map(|p| &p.coords()[0]).max() {
        coords[0] = max + rational::int(1);
    }
    RationalPoint::new(coords).expect("dimension >= 1")
}

pub fn is_realizable(instance: &LabeledInstance) -> Result<RealizabilityResult> {
    let points = instance.points();
    let positives = instance.positives();
    if positives.is_empty() {
        return Ok(RealizabilityResult::yes(VPolytope::point(escape_point(points))));
    }
    let positive_set = points.subset(&positives);
    let oracle = HullOracle::new(&positive_set)?;
    for n in instance.negatives() {
        let q = &points.points()[n];
        if oracle.contains(q)? {
            let weights = convex_combination(&positive_set, q)?
                .expect("hull and LP membership agree");
            return Ok(RealizabilityResult {
                verdict: Verdict::No,
                witness: None,
                certificate: Some(RejectionCertificate {
                    negative: n,
                    positives,
                    weights,
                }),
            });
        }
    }
    let vertices: Vec<usize> = hull_vertices(&positive_set)?
        .into_iter()
        .map(|i| positives[i])
        .collect();
    if vertices.len() <= instance.budget() {
        let witness = VPolytope::new(points.subset(&vertices))?;
        Ok(RealizabilityResult::yes(witness))
    } else {
        Ok(RealizabilityResult {
            verdict: Verdict::Unknown,
            witness: None,
            certificate: None,
        })
    }
}

/// Re-checks a result against its instance without trusting how it was made.
pub fn verify_result(instance: &LabeledInstance, result: &RealizabilityResult) -> Result<bool> {
    let points = instance.points();
    match result.verdict {
        Verdict::Yes => {
            let Some(w) = &result.witness else {
                return Ok(false);
            };
            if w.vertex_count() > instance.budget() {
                return Ok(false);
            }
            let oracle = HullOracle::new(w.generators())?;
            for (i, p) in points.iter().enumerate() {
                if oracle.contains(p)? != instance.labels()[i] {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Verdict::No => {
            let Some(c) = &result.certificate else {
                return Ok(false);
            };
            if instance.labels()[c.negative]
                || c.positives.iter().any(|&i| !instance.labels()[i])
                || c.weights.len() != c.positives.len()
                || c.weights.iter().any(|w| *w < rational::int(0))
                || c.weights.iter().sum::<Rational>() != rational::int(1)
            {
                return Ok(false);
            }
            let d = points.dimension();
            let combo: Vec<Rational> = (0..d)
                .map(|k| {
                    c.positives
                        .iter()
                        .zip(&c.weights)
                        .map(|(&i, w)| w * &points.points()[i].coords()[k])
                        .sum()
                })
                .collect();
            Ok(combo == points.points()[c.negative].coords())
        }
        Verdict::Unknown => Ok(true),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShatterReport {
    pub size: usize,
    pub budget: usize,
    /// Indexed by labeling bitmask.
    pub verdicts: Vec<Verdict>,
    pub yes: usize,
    pub no: usize,
    pub unknown: usize,
    pub shattered: bool,
    #[serde(skip)]
    pub outcomes: Vec<RealizabilityResult>,
}

pub(crate) fn check_cap(size: usize, cap: usize) -> Result<()> {
    if size > cap || size >= 64 {
        return Err(Error::CapExceeded { size, cap });
    }
    Ok(())
}

/// Runs [`is_realizable`] on all `2^t` labelings of `points`.
pub fn shatter_check(points: &PointSet, budget: usize, cap: usize) -> Result<ShatterReport> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    check_cap(points.len(), cap)?;
    let count = 1usize << points.len();
    let outcomes = parallel::map_indices(count, |mask| {
        let inst = LabeledInstance::from_mask(points.clone(), mask as u64, budget)?;
        is_realizable(&inst)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let verdicts: Vec<Verdict> = outcomes.iter().map(|o| o.verdict).collect();
    let tally = |v: Verdict| verdicts.iter().filter(|&&x| x == v).count();
    let yes = tally(Verdict::Yes);
    Ok(ShatterReport {
        size: points.len(),
        budget,
        yes,
        no: tally(Verdict::No),
        unknown: tally(Verdict::Unknown),
        shattered: yes == count,
        verdicts,
        outcomes,
    })
}

/// Like [`shatter_check`] but stops at the first labeling that is not `Yes`.
pub fn is_shattered(points: &PointSet, budget: usize, cap: usize) -> Result<bool> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    check_cap(points.len(), cap)?;
    let count = 1usize << points.len();
    let failure = parallel::find_first(count, |mask| {
        let verdict = LabeledInstance::from_mask(points.clone(), mask as u64, budget)
            .and_then(|inst| is_realizable(&inst))
            .map(|r| r.verdict);
        match verdict {
            Ok(Verdict::Yes) => None,
            other => Some(other),
        }
    });
    match failure {
        None => Ok(true),
        Some((_, Err(e))) => Err(e),
        Some(_) => Ok(false),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SearchStrategy {
    Exhaustive,
    RandomRestarts { restarts: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub strategy: SearchStrategy,
    pub budget: usize,
    pub set_size: usize,
    /// Pool indices of a shattered subset, if one was found.
    pub subset: Option<Vec<usize>>,
    pub examined: usize,
    /// True only for an exhaustive search that found nothing.
    pub proven_none: bool,
}

/// Looks for a `t`-subset of `pool` shattered by `k`-vertex polytopes.
///
/// Random restarts never report nonexistence.
pub fn vc_lower_bound_search(
    pool: &PointSet,
    budget: usize,
    t: usize,
    strategy: &SearchStrategy,
    cap: usize,
) -> Result<SearchOutcome> {
    if budget == 0 {
        return Err(Error::ZeroBudget);
    }
    check_cap(t, cap)?;
    let mut outcome = SearchOutcome {
        strategy: strategy.clone(),
        budget,
        set_size: t,
        subset: None,
        examined: 0,
        proven_none: false,
    };
    if t > pool.len() {
        outcome.proven_none = matches!(strategy, SearchStrategy::Exhaustive);
        return Ok(outcome);
    }
    let try_subset = |idx: Vec<usize>, outcome: &mut SearchOutcome| -> Result<bool> {
        outcome.examined += 1;
        if is_shattered(&pool.subset(&idx), budget, cap)? {
            outcome.subset = Some(idx);
            return Ok(true);
        }
        Ok(false)
    };
    match strategy {
        SearchStrategy::Exhaustive => {
            for idx in subsets(pool.len(), t) {
                if try_subset(idx, &mut outcome)? {
                    return Ok(outcome);
                }
            }
            outcome.proven_none = true;
        }
        SearchStrategy::RandomRestarts { restarts, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for _ in 0..*restarts {
                let mut idx = sample(&mut rng, pool.len(), t).into_vec();
                idx.sort_unstable();
                if try_subset(idx, &mut outcome)? {
                    return Ok(outcome);
                }
            }
        }
    }
    Ok(outcome)
}
