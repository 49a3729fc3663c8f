//! Closed intervals with exact rational endpoints.
//!
//! Endpoints are rounded outward onto a dyadic grid after each transcendental
//! step, so an interval always encloses the true value and its size stays
//! bounded. Comparisons between intervals are only reported when they hold
//! for every enclosed value.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{self, Rational};

/// Extra bits carried through series evaluation.
const GUARD_BITS: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

fn floor_div(n: &BigInt, d: &BigInt) -> BigInt {
    n.div_floor(d)
}

fn ceil_div(n: &BigInt, d: &BigInt) -> BigInt {
    -(-n).div_floor(d)
}

/// Rounds `v` to a multiple of `2^q` where `q` leaves about `prec`
/// significant bits; `up` selects the direction.
fn round_dyadic(v: &Rational, prec: u32, up: bool) -> Rational {
    if v.is_zero() {
        return v.clone();
    }
    let magnitude = v.numer().bits() as i64 - v.denom().bits() as i64;
    let q = magnitude - prec as i64 - 1;
    let (n, d) = if q <= 0 {
        (v.numer() << (-q) as usize, v.denom().clone())
    } else {
        (v.numer().clone(), v.denom() << q as usize)
    };
    let m = if up { ceil_div(&n, &d) } else { floor_div(&n, &d) };
    if q <= 0 {
        Rational::new(m, BigInt::one() << (-q) as usize)
    } else {
        Rational::from_integer(m << q as usize)
    }
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(v: Rational) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn int(n: i64) -> Self {
        Self::point(rational::int(n))
    }

    pub fn big(n: impl Into<BigInt>) -> Self {
        Self::point(Rational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Every value here is strictly below every value in `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    /// Every value here is at most every value in `other`.
    pub fn certainly_le(&self, other: &Interval) -> bool {
        self.hi <= other.lo
    }

    pub fn round(&self, prec: u32) -> Interval {
        Interval {
            lo: round_dyadic(&self.lo, prec, false),
            hi: round_dyadic(&self.hi, prec, true),
        }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn scale(&self, factor: &Rational) -> Interval {
        self.mul(&Interval::point(factor.clone()))
    }

    /// Division by an interval that lies strictly above zero.
    pub fn div_positive(&self, other: &Interval) -> Interval {
        assert!(other.lo.is_positive(), "divisor must be positive");
        let c = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        Interval {
            lo: c.iter().min().unwrap().clone(),
            hi: c.iter().max().unwrap().clone(),
        }
    }

    /// Enclosure of `log2` over this interval; requires `lo > 0`.
    pub fn log2(&self, prec: u32) -> Interval {
        let lo = log2(&self.lo, prec);
        if self.is_point() {
            return lo;
        }
        let hi = log2(&self.hi, prec);
        Interval {
            lo: lo.lo,
            hi: hi.hi,
        }
    }

    /// Rough value, for display.
    pub fn approx(&self) -> f64 {
        (rational::to_f64(&self.lo) + rational::to_f64(&self.hi)) / 2.0
    }

    /// The smallest integer not below any enclosed value.
    pub fn ceil(&self) -> BigInt {
        self.hi.ceil().to_integer()
    }

    /// Decimal rendering of the midpoint with `digits` fractional digits.
    pub fn decimal(&self, digits: usize) -> String {
        let mid = (&self.lo + &self.hi) / rational::int(2);
        decimal_string(&mid, digits)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", decimal_string(&self.lo, 12), decimal_string(&self.hi, 12))
    }
}

/// Rounds `v` to `digits` fractional decimal digits (half away from zero).
pub fn decimal_string(v: &Rational, digits: usize) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (v * Rational::from_integer(scale.clone())).round().to_integer();
    let negative = scaled.is_negative();
    let abs = scaled.abs();
    let int_part = &abs / &scale;
    let frac = &abs % &scale;
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    s.push_str(&int_part.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        s.push_str(&"0".repeat(digits - f.len()));
        s.push_str(&f);
    }
    s
}

/// `[lo, hi] / 2^bits`.
#[derive(Clone, Debug)]
struct Fixed {
    lo: BigInt,
    hi: BigInt,
    bits: u64,
}

/// Enclosure of `atanh(z) = sum z^(2n+1)/(2n+1)` for `0 < z <= 1/3`.
///
/// Summed in fixed point with `wp` bits below the leading bit of `z`, lower
/// and upper partial sums rounded apart, plus a geometric tail bound.
fn atanh(z: &Rational, wp: u32) -> Fixed {
    let (p, q) = (z.numer(), z.denom());
    let bits = wp as u64 + q.bits().saturating_sub(p.bits()) + 1;
    let one = BigInt::one() << bits as usize;
    let (p2, q2) = (p * p, q * q);
    let mut lo_power = floor_div(&(&one * p), q);
    let mut hi_power = ceil_div(&(&one * p), q);
    let mut lo = BigInt::zero();
    let mut hi = BigInt::zero();
    let mut n: u64 = 0;
    loop {
        let odd = BigInt::from(2 * n + 1);
        lo += floor_div(&lo_power, &odd);
        hi += ceil_div(&hi_power, &odd);
        lo_power = floor_div(&(lo_power * &p2), &q2);
        hi_power = ceil_div(&(hi_power * &p2), &q2);
        n += 1;
        if hi_power <= BigInt::from(2) {
            // Remaining terms sum to at most z^(2n+1) / ((2n+1)(1 - z^2)).
            hi += ceil_div(&(&hi_power * &q2), &((&q2 - &p2) * BigInt::from(2 * n + 1)));
            return Fixed { lo, hi, bits };
        }
    }
}

/// `atanh(1/3) = ln(2) / 2`, cached per working precision.
fn atanh_third(wp: u32) -> Fixed {
    static CACHE: OnceLock<Mutex<HashMap<u32, Fixed>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().expect("cache lock").get(&wp) {
        return v.clone();
    }
    let v = atanh(&rational::ratio(1, 3), wp);
    cache.lock().expect("cache lock").insert(wp, v.clone());
    v
}

/// Enclosure of `log2(x)` for rational `x > 0`, about `prec` bits wide.
pub fn log2(x: &Rational, prec: u32) -> Interval {
    assert!(x.is_positive(), "log2 of a non-positive value");
    let wp = prec + GUARD_BITS;
    // x = m 2^e with 1 <= m < 2.
    let (n, d) = (x.numer(), x.denom());
    let mut e = n.bits() as i64 - d.bits() as i64;
    let (mut n, mut d) = if e >= 0 {
        (n.clone(), d << e as usize)
    } else {
        (n << (-e) as usize, d.clone())
    };
    if n < d {
        e -= 1;
        n <<= 1;
    }
    if n >= &d << 1 {
        e += 1;
        d <<= 1;
    }
    if n == d {
        return Interval::int(e);
    }
    // log2 m = atanh(z) / atanh(1/3), z = (m-1)/(m+1).
    let z = Rational::new(&n - &d, n + d);
    let num = atanh(&z, wp);
    let den = atanh_third(wp);
    let lo = floor_div(&(num.lo << den.bits as usize), &den.hi);
    let hi = ceil_div(&(num.hi << den.bits as usize), &den.lo);
    let offset = BigInt::from(e) << num.bits as usize;
    let unit = BigInt::one() << num.bits as usize;
    Interval {
        lo: Rational::new(&offset + lo, unit.clone()),
        hi: Rational::new(offset + hi, unit),
    }
    .round(prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn exact_powers_of_two() {
        assert_eq!(log2(&int(1), 64), Interval::int(0));
        assert_eq!(log2(&int(1024), 64), Interval::int(10));
        assert_eq!(log2(&ratio(1, 8), 64), Interval::int(-3));
    }

    #[test]
    fn encloses_reference_values() {
        // log2(3) = 1.584962500721156181453738943947816508759814407692481060455...
        let r = log2(&int(3), 64);
        let reference = crate::rational::parse(
            "1584962500721156181453738943947816508759814407692481060455/1000000000000000000000000000000000000000000000000000000000",
        )
        .unwrap();
        assert!(r.contains(&reference), "{r}");
        assert!(r.width() < ratio(1, 1 << 60));
        // log2(50) = 5.643856189774724695740638858978780351729662786049161224109...
        let r = log2(&int(50), 96);
        let reference = crate::rational::parse(
            "5643856189774724695740638858978780351729662786049161224109/1000000000000000000000000000000000000000000000000000000000",
        )
        .unwrap();
        assert!(r.contains(&reference));
    }

    #[test]
    fn small_arguments_stay_relative() {
        // log2(1 + 2^-40) ~ 2^-40 / ln 2.
        let x = Rational::one() + Rational::new(BigInt::one(), BigInt::one() << 40usize);
        let r = log2(&x, 64);
        assert!(r.lo().is_positive());
        assert!(r.width() < r.lo() / Rational::from_integer(BigInt::one() << 50usize));
    }

    #[test]
    fn doubling_precision_nests() {
        for v in [int(7), ratio(22, 7), int(1_000_003)] {
            let a = log2(&v, 64);
            let b = log2(&v, 128);
            assert!(a.overlaps(&b));
            assert!(b.width() <= a.width());
        }
    }

    #[test]
    fn rounding_is_outward() {
        let v = ratio(1, 3);
        let r = Interval::point(v.clone()).round(10);
        assert!(r.lo() < &v && &v < r.hi());
        assert_eq!(decimal_string(&ratio(-1, 8), 2), "-0.13");
        assert_eq!(decimal_string(&ratio(5, 1), 3), "5.000");
    }

    #[test]
    fn interval_arithmetic() {
        let a = Interval::new(int(-1), int(2));
        let b = Interval::new(int(3), int(4));
        assert_eq!(a.mul(&b), Interval::new(int(-4), int(8)));
        assert_eq!(a.sub(&b), Interval::new(int(-5), int(-1)));
        assert_eq!(b.div_positive(&Interval::int(2)), Interval::new(ratio(3, 2), int(2)));
        assert!(a.certainly_lt(&Interval::int(3)));
        assert!(!a.certainly_lt(&Interval::int(2)));
        assert!(a.certainly_le(&Interval::int(2)));
    }
}
