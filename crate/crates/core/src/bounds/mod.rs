//! Closed-form quantities of the upper-bound argument, evaluated with
//! certified enclosures.
//!
//! Every logarithm is an [`Interval`] with exact dyadic endpoints. An
//! inequality is reported as holding or violated only when the enclosures
//! separate; otherwise the verdict is [`InequalityVerdict::Undetermined`].

mod interval;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::rational::{self, Rational};
use crate::{Error, Result};

pub use interval::{decimal_string, log2, Interval};

pub const DEFAULT_PRECISION: u32 = 128;
pub const MIN_PRECISION: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeWarning {
    /// `k = 1`: `log2 k = 0` and the main bound degenerates to 0.
    BudgetOne,
    /// `k < 3` or `d < 3`: outside the regime where the conclusion is claimed.
    OutsideClaimedRegime,
    /// `k < d + 1`: no `(d+1)`-tuples of vertices, the polynomial family is empty.
    EmptyFamily,
    /// Precision below the 64-bit floor was raised to the floor.
    PrecisionRaised,
}

impl fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            RegimeWarning::BudgetOne => "k = 1: log2 k = 0, main bound reported as 0",
            RegimeWarning::OutsideClaimedRegime => {
                "outside d, k >= 3: the concluding violation is not claimed here"
            }
            RegimeWarning::EmptyFamily => "k < d + 1: polynomial family is empty",
            RegimeWarning::PrecisionRaised => "precision raised to the 64-bit minimum",
        };
        f.write_str(msg)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityVerdict {
    Holds,
    Violated,
    Undetermined,
}

impl InequalityVerdict {
    pub fn is_violated(self) -> bool {
        self == InequalityVerdict::Violated
    }

    pub fn holds(self) -> bool {
        self == InequalityVerdict::Holds
    }
}

/// Serializable view of an enclosure: exact endpoints plus a decimal midpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "rational::serde_str")]
    pub lower: Rational,
    #[serde(with = "rational::serde_str")]
    pub upper: Rational,
    pub decimal: String,
}

impl From<&Interval> for Enclosure {
    fn from(i: &Interval) -> Self {
        Enclosure {
            lower: i.lo().clone(),
            upper: i.hi().clone(),
            decimal: i.decimal(12),
        }
    }
}

impl Enclosure {
    pub fn interval(&self) -> Interval {
        Interval::new(self.lower.clone(), self.upper.clone())
    }
}

fn precision(prec: u32, warnings: &mut Vec<RegimeWarning>) -> u32 {
    if prec < MIN_PRECISION {
        warnings.push(RegimeWarning::PrecisionRaised);
        MIN_PRECISION
    } else {
        prec
    }
}

fn check_positive(name: &str, v: u64) -> Result<()> {
    if v == 0 {
        return Err(Error::InvalidInput(format!("{name} must be at least 1")));
    }
    Ok(())
}

/// `8 d^2 k log2 k`. For `k = 1` this is exactly 0 and a warning is returned.
pub fn main_bound(d: u64, k: u64, prec: u32) -> Result<(Interval, Vec<RegimeWarning>)> {
    check_positive("d", d)?;
    check_positive("k", k)?;
    let mut warnings = Vec::new();
    let prec = precision(prec, &mut warnings);
    if k == 1 {
        warnings.push(RegimeWarning::BudgetOne);
    }
    if d < 3 || k < 3 {
        warnings.push(RegimeWarning::OutsideClaimedRegime);
    }
    let factor = rational::int(8) * Rational::from_integer(BigInt::from(d * d * k));
    let value = log2(&Rational::from_integer(k.into()), prec)
        .scale(&factor)
        .round(prec);
    Ok((value, warnings))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MtParams {
    pub degree: u64,
    pub polynomials: BigUint,
    pub variables: u64,
}

/// `m log2(50 D l / m)`: log2 of the sign-pattern count bound for `l`
/// polynomials of degree at most `D` in `m` variables.
pub fn mt_sign_pattern_bound(p: &MtParams, prec: u32) -> Result<Interval> {
    check_positive("D", p.degree)?;
    check_positive("m", p.variables)?;
    if p.polynomials.is_zero() {
        return Err(Error::InvalidInput("l must be at least 1".into()));
    }
    let prec = prec.max(MIN_PRECISION);
    let arg = Rational::new(
        BigInt::from(50u64 * p.degree) * BigInt::from(p.polynomials.clone()),
        BigInt::from(p.variables),
    );
    Ok(log2(&arg, prec)
        .scale(&Rational::from_integer(p.variables.into()))
        .round(prec))
}

/// `(2d + 2) t C(k, d+1)`, exactly. Zero (with a warning) when `k < d + 1`.
pub fn polynomial_census(d: u64, k: u64, t: u64) -> (BigUint, Vec<RegimeWarning>) {
    let mut warnings = Vec::new();
    if k < d + 1 {
        warnings.push(RegimeWarning::EmptyFamily);
    }
    let census = BigUint::from(2 * d + 2) * BigUint::from(t) * binomial(k, d + 1);
    (census, warnings)
}

/// The three log2 values of the sign-pattern counting chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofChain {
    /// `kd log2(50 d 2(d+1) t C(k,d+1) / (kd))`; `None` when the census is 0.
    pub first: Option<Interval>,
    /// `kd log2(100 t k^d)`.
    pub middle: Interval,
    /// `kd log2(100 t) + kd * d log2 k`, the same quantity split into logs.
    pub middle_split: Interval,
    /// `(7 + log2 t + d log2 k) kd`.
    pub last: Interval,
    pub first_holds: bool,
    pub second_holds: bool,
    pub warnings: Vec<RegimeWarning>,
}

impl ProofChain {
    pub fn holds(&self) -> bool {
        self.first_holds && self.second_holds
    }
}

pub fn proof_chain_check(d: u64, k: u64, t: u64, prec: u32) -> Result<ProofChain> {
    check_positive("d", d)?;
    check_positive("k", k)?;
    check_positive("t", t)?;
    let (census_one, mut warnings) = polynomial_census(d, k, 1);
    let prec = precision(prec, &mut warnings);
    if d < 3 || k < 3 {
        warnings.push(RegimeWarning::OutsideClaimedRegime);
    }
    let kd = Rational::from_integer(BigInt::from(k * d));
    let big = |v: u64| Rational::from_integer(BigInt::from(v));

    let first = (!census_one.is_zero()).then(|| {
        // 50 d * 2(d+1) t C(k, d+1) / (kd)
        let arg = big(50 * d) * big(2 * (d + 1)) * big(t) * Rational::from_integer(binomial(k, d + 1).into())
            / &kd;
        log2(&arg, prec).scale(&kd).round(prec)
    });
    let k_pow_d = Rational::from_integer(BigInt::from(k).pow(d as u32));
    let middle = log2(&(big(100) * big(t) * &k_pow_d), prec)
        .scale(&kd)
        .round(prec);
    let log_k = log2(&big(k), prec);
    let middle_split = log2(&(big(100) * big(t)), prec)
        .add(&log_k.scale(&big(d)))
        .scale(&kd)
        .round(prec);
    let last = Interval::int(7)
        .add(&log2(&big(t), prec))
        .add(&log_k.scale(&big(d)))
        .scale(&kd)
        .round(prec);

    let first_holds = first.as_ref().is_none_or(|f| f.certainly_lt(&middle));
    let second_holds = middle.certainly_lt(&last);
    Ok(ProofChain {
        first,
        middle,
        middle_split,
        last,
        first_holds,
        second_holds,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointCheck {
    pub lhs: Interval,
    pub rhs: Interval,
    pub verdict: InequalityVerdict,
}

/// Tests `t <= (7 + log2 t + d log2 k) k d` for every `t` in the enclosure.
///
/// `Violated` means `t > rhs` for every enclosed `t` and every rounding
/// error, so it is never a rounding artifact.
pub fn fixed_point_inequality(d: u64, k: u64, t: &Interval, prec: u32) -> Result<FixedPointCheck> {
    check_positive("d", d)?;
    check_positive("k", k)?;
    if t.lo() <= &Rational::zero() {
        return Err(Error::InvalidInput("t must be positive".into()));
    }
    let prec = prec.max(MIN_PRECISION);
    let kd = Rational::from_integer(BigInt::from(k * d));
    let rhs = Interval::int(7)
        .add(&t.log2(prec))
        .add(&log2(&Rational::from_integer(k.into()), prec).scale(&rational::int(d as i64)))
        .scale(&kd)
        .round(prec);
    let verdict = if rhs.certainly_lt(t) {
        InequalityVerdict::Violated
    } else if t.certainly_le(&rhs) {
        InequalityVerdict::Holds
    } else {
        InequalityVerdict::Undetermined
    };
    Ok(FixedPointCheck {
        lhs: t.clone(),
        rhs,
        verdict,
    })
}

/// Smallest integer `t >= 1` at which the inequality is certified violated.
///
/// `t - (7 + log2 t + d log2 k) kd` is convex and negative at `t = 1`, so the
/// violated integers form a tail `[t*, inf)`; it is located by doubling and
/// then bisection.
pub fn smallest_violating_t(d: u64, k: u64, prec: u32) -> Result<u64> {
    let violated = |t: u64| -> Result<bool> {
        Ok(fixed_point_inequality(d, k, &Interval::int(t as i64), prec)?
            .verdict
            .is_violated())
    };
    let limit = 1u64 << 60;
    let mut hi = 1u64;
    while !violated(hi)? {
        if hi >= limit {
            return Err(Error::InvalidInput("no violation below 2^60".into()));
        }
        hi *= 2;
    }
    // Invariant: violated(hi), and nothing below lo + 1 is.
    let mut lo = hi / 2;
    if lo == 0 {
        return Ok(1);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if violated(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparators {
    /// `(d+1) k log2 k`: the shape of the facet-bounded bound, constant omitted.
    pub facet_polytope_asymptotic: Enclosure,
    pub facet_polytope_note: String,
    /// `d^2 k^floor(d/2)`: heuristic bound from counting faces.
    pub ubt_vertex_bound: String,
    pub ubt_note: String,
    #[serde(with = "rational::serde_str")]
    pub lower_bound_dk_over_3: Rational,
    /// Whether `k >= 2d >= 4`.
    pub lower_bound_applicable: bool,
    pub construction_points: u64,
    pub construction_budget: u64,
}

pub fn comparator_bounds(d: u64, k: u64, prec: u32) -> Result<Comparators> {
    check_positive("d", d)?;
    check_positive("k", k)?;
    let prec = prec.max(MIN_PRECISION);
    let facet = log2(&Rational::from_integer(k.into()), prec)
        .scale(&Rational::from_integer(BigInt::from((d + 1) * k)))
        .round(prec);
    let ubt = BigUint::from(d * d) * BigUint::from(k).pow((d / 2) as u32);
    Ok(Comparators {
        facet_polytope_asymptotic: Enclosure::from(&facet),
        facet_polytope_note: "asymptotic shape, constant omitted; not a certified bound".into(),
        ubt_vertex_bound: ubt.to_string(),
        ubt_note: "heuristic comparator".into(),
        lower_bound_dk_over_3: Rational::new(BigInt::from(d * k), BigInt::from(3)),
        lower_bound_applicable: k >= 2 * d && 2 * d >= 4,
        construction_points: k * (d - 1),
        construction_budget: k + d - 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub first_log2: Option<Enclosure>,
    pub middle_log2: Enclosure,
    pub last_log2: Enclosure,
    pub first_holds: bool,
    pub second_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedPointReport {
    pub t: Enclosure,
    pub rhs: Enclosure,
    pub verdict: InequalityVerdict,
}

impl From<&FixedPointCheck> for FixedPointReport {
    fn from(c: &FixedPointCheck) -> Self {
        FixedPointReport {
            t: Enclosure::from(&c.lhs),
            rhs: Enclosure::from(&c.rhs),
            verdict: c.verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub dimension: u64,
    pub budget: u64,
    pub set_size: Option<u64>,
    pub precision_bits: u32,
    pub main_bound: Enclosure,
    /// The inequality at `t = 8 d^2 k log2 k`.
    pub conclusion: FixedPointReport,
    pub smallest_violating_t: u64,
    pub census: Option<String>,
    /// `m log2(50 D l / m)` with `D = d`, `l = census`, `m = kd`.
    pub mt_bound_log2: Option<Enclosure>,
    pub chain: Option<ChainReport>,
    /// The inequality at the requested `t`.
    pub at_set_size: Option<FixedPointReport>,
    pub inequality_holds: Option<bool>,
    pub comparators: Comparators,
    pub warnings: Vec<RegimeWarning>,
}

pub fn bounds_report(d: u64, k: u64, t: Option<u64>, prec: u32) -> Result<BoundsReport> {
    let (main, mut warnings) = main_bound(d, k, prec)?;
    let prec = prec.max(MIN_PRECISION);
    let conclusion = if main.lo() > &Rational::zero() {
        fixed_point_inequality(d, k, &main, prec)?
    } else {
        // k = 1: t = 0 is outside the domain; evaluate at t = 1 instead.
        fixed_point_inequality(d, k, &Interval::int(1), prec)?
    };
    let smallest = smallest_violating_t(d, k, prec)?;

    let mut census = None;
    let mut mt = None;
    let mut chain = None;
    let mut at_t = None;
    if let Some(t) = t {
        check_positive("t", t)?;
        let (c, w) = polynomial_census(d, k, t);
        warnings.extend(w);
        if !c.is_zero() {
            let p = MtParams {
                degree: d,
                polynomials: c.clone(),
                variables: k * d,
            };
            mt = Some(Enclosure::from(&mt_sign_pattern_bound(&p, prec)?));
        }
        census = Some(c.to_string());
        let pc = proof_chain_check(d, k, t, prec)?;
        chain = Some(ChainReport {
            first_log2: pc.first.as_ref().map(Enclosure::from),
            middle_log2: Enclosure::from(&pc.middle),
            last_log2: Enclosure::from(&pc.last),
            first_holds: pc.first_holds,
            second_holds: pc.second_holds,
        });
        at_t = Some(fixed_point_inequality(d, k, &Interval::int(t.to_i64().unwrap_or(i64::MAX)), prec)?);
    }
    warnings.sort_by_key(|w| *w as u8);
    warnings.dedup();
    Ok(BoundsReport {
        dimension: d,
        budget: k,
        set_size: t,
        precision_bits: prec,
        main_bound: Enclosure::from(&main),
        conclusion: FixedPointReport::from(&conclusion),
        smallest_violating_t: smallest,
        census,
        mt_bound_log2: mt,
        chain,
        inequality_holds: at_t.as_ref().map(|c| !c.verdict.is_violated()),
        at_set_size: at_t.as_ref().map(FixedPointReport::from),
        comparators: comparator_bounds(d, k, prec)?,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, parse, ratio};

    const P: u32 = DEFAULT_PRECISION;

    /// `value` agrees with the truncated decimal `digits`: the enclosure meets
    /// `[r, r + 10^-n]` where `r` has `n` fractional digits.
    fn agrees(value: &Interval, digits: &str) -> bool {
        let (int_part, frac) = digits.split_once('.').unwrap();
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let r = parse(&format!("{int_part}{frac}/{scale}")).unwrap();
        let eps = Rational::new(BigInt::from(1), scale);
        value.overlaps(&Interval::new(r.clone(), r + eps))
    }

    #[test]
    fn main_bound_values() {
        // 216 log2 3 = 342.351900155769735194007611892728...
        let (v, w) = main_bound(3, 3, P).unwrap();
        assert!(agrees(&v, "342.351900155769735194007611892728"), "{v}");
        assert!(!agrees(&v, "342.351900155769735194007611892727"));
        assert!(w.is_empty());
        assert_eq!(main_bound(1, 2, P).unwrap().0, Interval::int(16));
        assert_eq!(main_bound(2, 4, P).unwrap().0, Interval::int(256));
    }

    #[test]
    fn main_bound_k_one_warns() {
        let (v, w) = main_bound(3, 1, P).unwrap();
        assert_eq!(v, Interval::int(0));
        assert!(w.contains(&RegimeWarning::BudgetOne));
        assert!(main_bound(3, 0, P).is_err());
    }

    #[test]
    fn mt_values() {
        let p = |degree, l: u32, variables| MtParams {
            degree,
            polynomials: BigUint::from(l),
            variables,
        };
        let v = mt_sign_pattern_bound(&p(1, 1, 1), P).unwrap();
        assert_eq!(v.decimal(3), "5.644");
        // 5 log2 200 = 38.21928094887362347870319429489...
        let v = mt_sign_pattern_bound(&p(2, 10, 5), P).unwrap();
        assert!(agrees(&v, "38.21928094887362347870319429489"));
        let a = mt_sign_pattern_bound(&p(2, 10, 5), P).unwrap();
        let b = mt_sign_pattern_bound(&p(2, 11, 5), P).unwrap();
        assert!(a.certainly_lt(&b));
    }

    #[test]
    fn census_values() {
        assert_eq!(polynomial_census(2, 3, 1).0, BigUint::from(6u32));
        assert_eq!(polynomial_census(2, 4, 2).0, BigUint::from(48u32));
        assert_eq!(polynomial_census(3, 4, 1).0, BigUint::from(8u32));
        let (c, w) = polynomial_census(3, 3, 5);
        assert!(c.is_zero());
        assert_eq!(w, vec![RegimeWarning::EmptyFamily]);
        for t in 1..6u64 {
            assert_eq!(polynomial_census(3, 7, t).0, BigUint::from(t) * polynomial_census(3, 7, 1).0);
        }
    }

    #[test]
    fn chain_examples() {
        let c = proof_chain_check(3, 4, 10, P).unwrap();
        assert!(c.holds());
        assert!(c.middle.overlaps(&c.middle_split));
        let c = proof_chain_check(3, 3, 342, P).unwrap();
        assert!(c.holds());
        assert!(c.warnings.contains(&RegimeWarning::EmptyFamily));
    }

    #[test]
    fn fixed_point_examples() {
        let (t, _) = main_bound(3, 3, P).unwrap();
        let c = fixed_point_inequality(3, 3, &t, P).unwrap();
        assert_eq!(c.verdict, InequalityVerdict::Violated);
        // rhs = 181.568013406027438248634166473783...
        assert!(agrees(&c.rhs, "181.568013406027438248634166473783"));
        let c = fixed_point_inequality(3, 3, &Interval::int(100), P).unwrap();
        assert_eq!(c.verdict, InequalityVerdict::Holds);
        assert_eq!(c.rhs.decimal(2), "165.59");
    }

    #[test]
    fn smallest_violation_for_three_three() {
        assert_eq!(smallest_violating_t(3, 3, P).unwrap(), 173);
        assert!(fixed_point_inequality(3, 3, &Interval::int(172), P).unwrap().verdict.holds());
    }

    #[test]
    fn smallest_violation_is_a_threshold() {
        for (d, k) in [(1, 1), (1, 2), (2, 5), (4, 3), (7, 11)] {
            let t = smallest_violating_t(d, k, 64).unwrap();
            let at = |t: u64| fixed_point_inequality(d, k, &Interval::int(t as i64), 64).unwrap().verdict;
            assert!(at(t).is_violated());
            if t > 1 {
                assert!(!at(t - 1).is_violated());
            }
            for probe in [t + 1, t + 17, 2 * t, 10 * t] {
                assert!(at(probe).is_violated());
            }
        }
    }

    #[test]
    fn undetermined_on_wide_enclosure() {
        let wide = Interval::new(int(100), int(400));
        let c = fixed_point_inequality(3, 3, &wide, P).unwrap();
        assert_eq!(c.verdict, InequalityVerdict::Undetermined);
    }

    #[test]
    fn comparators() {
        let c = comparator_bounds(4, 8, P).unwrap();
        assert_eq!(c.lower_bound_dk_over_3, ratio(32, 3));
        assert!(c.lower_bound_applicable);
        let c = comparator_bounds(3, 3, P).unwrap();
        assert_eq!((c.construction_points, c.construction_budget), (6, 5));
        assert!(!c.lower_bound_applicable);
        assert_eq!(comparator_bounds(2, 4, P).unwrap().ubt_vertex_bound, "16");
    }

    #[test]
    fn report_round_trips() {
        let r = bounds_report(3, 4, Some(10), P).unwrap();
        assert_eq!(r.census.as_deref(), Some("80"));
        assert_eq!(r.conclusion.verdict, InequalityVerdict::Violated);
        let json = serde_json::to_string(&r).unwrap();
        let back: BoundsReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let low = bounds_report(3, 1, None, 32).unwrap();
        assert!(low.warnings.contains(&RegimeWarning::BudgetOne));
        assert!(low.warnings.contains(&RegimeWarning::PrecisionRaised));
        assert_eq!(low.precision_bits, MIN_PRECISION);
    }

    #[test]
    fn rational_route_agrees_on_chain() {
        // The chain compares logs of rationals; the arguments compare the same way.
        for d in 3..6u64 {
            for k in d + 1..9 {
                let lhs = Rational::from_integer(BigInt::from(100 * (d + 1)) * BigInt::from(binomial(k, d + 1)))
                    / int(k as i64);
                let rhs = int(100) * Rational::from_integer(BigInt::from(k).pow(d as u32));
                assert!(lhs < rhs);
                assert!(proof_chain_check(d, k, 1, P).unwrap().first_holds);
            }
        }
    }
}
