//! Search for apex offsets that make every witness check out.
//!
//! Face sizes are tuned independently. Each face size keeps a bracket: a
//! value known to leave some positive point outside (too small) and one
//! known to absorb some negative point (too large). Until both ends are
//! known the value doubles or halves; afterwards it bisects. Failing
//! labelings vote on which face size to move, based on the cluster of the
//! first violating point.
//!
//! Large instances are tuned on a probe set of labelings first. Once the
//! probe passes, every labeling is re-verified and failures join the probe.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::{check_mask, ConstructionInstance, EpsilonSchedule, Violation};
use crate::parallel;
use crate::rational::{self, Rational};
use crate::sampling::seeded;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// One schedule for every labeling.
    Uniform,
    /// A separate schedule per labeling. Weaker: the witness depends on more
    /// than the face sizes.
    PerLabeling,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub max_rounds: usize,
    /// Labelings tuned on before the first full pass.
    pub probe_size: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Uniform,
            max_rounds: 96,
            probe_size: 256,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "schedules", rename_all = "kebab-case")]
pub enum ScheduleSet {
    Uniform(EpsilonSchedule),
    /// Indexed by labeling mask.
    PerLabeling(Vec<EpsilonSchedule>),
}

impl ScheduleSet {
    pub fn for_mask(&self, mask: u64) -> &EpsilonSchedule {
        match self {
            ScheduleSet::Uniform(s) => s,
            ScheduleSet::PerLabeling(all) => &all[mask as usize],
        }
    }

    pub fn mode(&self) -> SearchMode {
        match self {
            ScheduleSet::Uniform(_) => SearchMode::Uniform,
            ScheduleSet::PerLabeling(_) => SearchMode::PerLabeling,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchFailure {
    pub mask: u64,
    pub violation: Violation,
    pub schedule: EpsilonSchedule,
    pub rounds: usize,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SearchOutcome {
    Found {
        schedules: ScheduleSet,
        rounds: usize,
        verified: usize,
    },
    Exhausted(SearchFailure),
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

/// Failing labelings among `masks`, in mask order.
pub fn verify_labelings(
    instance: &ConstructionInstance,
    schedules: &ScheduleSet,
    masks: &[u64],
) -> Result<Vec<(u64, Violation)>> {
    let checked = parallel::map_slice(masks, |&mask| {
        check_mask(instance, mask, schedules.for_mask(mask)).map(|v| v.map(|v| (mask, v)))
    });
    let mut failures = Vec::new();
    for c in checked {
        if let Some(f) = c? {
            failures.push(f);
        }
    }
    Ok(failures)
}

#[derive(Clone, Debug, Default)]
struct Bracket {
    too_small: Option<Rational>,
    too_large: Option<Rational>,
}

fn face_size(instance: &ConstructionInstance, mask: u64, cluster: usize) -> usize {
    instance
        .cluster(cluster)
        .filter(|&p| mask >> p & 1 == 1)
        .count()
}

/// Bisection stops once the bracket is this narrow relative to its ends.
fn collapsed(b: &Bracket) -> bool {
    match (&b.too_small, &b.too_large) {
        (Some(lo), Some(hi)) => {
            lo >= hi || (hi - lo) * Rational::from_integer(BigInt::one() << 48) < *lo
        }
        _ => false,
    }
}

fn tune(
    instance: &ConstructionInstance,
    start: EpsilonSchedule,
    all: &[u64],
    probe: Vec<u64>,
    max_rounds: usize,
) -> Result<std::result::Result<(EpsilonSchedule, usize), SearchFailure>> {
    let d = instance.dimension();
    let mut schedule = start;
    let mut brackets: BTreeMap<usize, Bracket> = (1..d).map(|m| (m, Bracket::default())).collect();
    let mut probe: BTreeSet<u64> = probe.into_iter().collect();
    let fail = |mask, violation, schedule: &EpsilonSchedule, rounds, reason: &str| {
        Ok(Err(SearchFailure {
            mask,
            violation,
            schedule: schedule.clone(),
            rounds,
            reason: reason.to_string(),
        }))
    };

    for round in 0..max_rounds {
        let current = ScheduleSet::Uniform(schedule.clone());
        let probe_masks: Vec<u64> = probe.iter().copied().collect();
        let mut failures = verify_labelings(instance, &current, &probe_masks)?;
        if failures.is_empty() {
            if probe.len() == all.len() {
                return Ok(Ok((schedule, round)));
            }
            failures = verify_labelings(instance, &current, all)?;
            if failures.is_empty() {
                return Ok(Ok((schedule, round)));
            }
            probe.extend(failures.iter().map(|f| f.0));
        }

        let mut up: BTreeMap<usize, usize> = BTreeMap::new();
        let mut down: BTreeMap<usize, usize> = BTreeMap::new();
        for (mask, violation) in &failures {
            match *violation {
                Violation::PositiveOutside { cluster, .. } => {
                    *up.entry(face_size(instance, *mask, cluster)).or_default() += 1;
                }
                Violation::NegativeInside { cluster, .. } => {
                    let m = face_size(instance, *mask, cluster);
                    if m > 0 {
                        *down.entry(m).or_default() += 1;
                    } else {
                        // Absorbed by a neighbouring apex: shrink every size in play.
                        let present: BTreeSet<usize> = (0..instance.clusters())
                            .map(|c| face_size(instance, *mask, c))
                            .filter(|&m| m > 0)
                            .collect();
                        for m in present {
                            *down.entry(m).or_default() += 1;
                        }
                    }
                }
                Violation::OverBudget { .. } => {
                    return fail(*mask, violation.clone(), &schedule, round, "witness over budget");
                }
            }
        }

        let mut moved = false;
        for m in 1..d {
            let u = up.get(&m).copied().unwrap_or(0);
            let dn = down.get(&m).copied().unwrap_or(0);
            if u == 0 && dn == 0 {
                continue;
            }
            let eps = schedule.get(m).expect("schedule covers face sizes").clone();
            let b = brackets.get_mut(&m).expect("bracket per face size");
            if u >= dn {
                b.too_small = Some(eps.clone());
            } else {
                b.too_large = Some(eps.clone());
            }
            if collapsed(b) {
                let (mask, violation) = failures[0].clone();
                return fail(
                    mask,
                    violation,
                    &schedule,
                    round,
                    &format!("no value for face size {m} satisfies every labeling tried"),
                );
            }
            let two = rational::int(2);
            let next = match (&b.too_small, &b.too_large) {
                (Some(lo), Some(hi)) => (lo + hi) / &two,
                (Some(lo), None) => lo * &two,
                (None, Some(hi)) => hi / &two,
                (None, None) => unreachable!(),
            };
            schedule.set(m, next);
            moved = true;
        }
        if !moved {
            let (mask, violation) = failures[0].clone();
            return fail(mask, violation, &schedule, round, "no face size to adjust");
        }
    }
    let current = ScheduleSet::Uniform(schedule.clone());
    let failures = verify_labelings(instance, &current, all)?;
    match failures.into_iter().next() {
        None => Ok(Ok((schedule, max_rounds))),
        Some((mask, violation)) => fail(mask, violation, &schedule, max_rounds, "round limit reached"),
    }
}

/// Structured labelings (every face of every cluster against all-empty and
/// all-full backgrounds) plus a seeded sample of the rest.
fn initial_probe(instance: &ConstructionInstance, all: &[u64], config: &SearchConfig) -> Vec<u64> {
    if all.len() <= config.probe_size {
        return all.to_vec();
    }
    let full = all.len() as u64 - 1;
    let mut probe = BTreeSet::from([0, full]);
    for i in 0..instance.clusters() {
        let bits: Vec<usize> = instance.cluster(i).collect();
        for sub in 1u64..(1 << bits.len()) {
            let face = bits
                .iter()
                .enumerate()
                .filter(|(b, _)| sub >> b & 1 == 1)
                .fold(0u64, |acc, (_, &p)| acc | 1 << p);
            let cluster_mask = bits.iter().fold(0u64, |acc, &p| acc | 1 << p);
            probe.insert(face);
            probe.insert(full & !cluster_mask | face);
        }
    }
    let mut rng = seeded(config.seed);
    let extra = config.probe_size.saturating_sub(probe.len()).min(all.len());
    for i in sample(&mut rng, all.len(), extra) {
        probe.insert(all[i]);
    }
    probe.into_iter().collect()
}

/// Finds apex offsets under which every labeling of the instance verifies.
pub fn search_epsilon_schedule(
    instance: &ConstructionInstance,
    config: &SearchConfig,
) -> Result<SearchOutcome> {
    let n = instance.len();
    if n >= 64 {
        return Err(Error::CapExceeded { size: n, cap: 63 });
    }
    let all: Vec<u64> = (0..1u64 << n).collect();
    let start = instance.spec().epsilon_schedule.clone();
    match config.mode {
        SearchMode::Uniform => {
            let probe = initial_probe(instance, &all, config);
            Ok(match tune(instance, start, &all, probe, config.max_rounds)? {
                Ok((schedule, rounds)) => SearchOutcome::Found {
                    schedules: ScheduleSet::Uniform(schedule),
                    rounds,
                    verified: all.len(),
                },
                Err(failure) => SearchOutcome::Exhausted(failure),
            })
        }
        SearchMode::PerLabeling => {
            let tuned = parallel::map_slice(&all, |&mask| {
                tune(instance, start.clone(), &[mask], vec![mask], config.max_rounds)
            });
            let mut schedules = Vec::with_capacity(all.len());
            let mut rounds = 0;
            for t in tuned {
                match t? {
                    Ok((s, r)) => {
                        rounds = rounds.max(r);
                        schedules.push(s);
                    }
                    Err(failure) => return Ok(SearchOutcome::Exhausted(failure)),
                }
            }
            Ok(SearchOutcome::Found {
                schedules: ScheduleSet::PerLabeling(schedules),
                rounds,
                verified: all.len(),
            })
        }
    }
}
