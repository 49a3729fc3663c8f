//! Exact geometric predicates over rational points.
//!
//! Orientation convention: for points `p_0, ..., p_d` in `R^d`,
//! `orientation` is the sign of `det[p_0 - p_d, ..., p_{d-1} - p_d]`, rows in
//! index order. The unit simplex `(0,0), (1,0), (0,1)` is positive.

pub(crate) mod det;
mod hull;
mod lp;
mod predicates;

use std::fmt;
use std::ops::{Mul, Neg};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{self, Rational};
use crate::{Error, Result};

pub use det::{determinant, determinant_sign};
pub use hull::{hull_contains, hull_contains_exhaustive, hull_vertices, HullOracle};
pub use lp::{convex_combination, lp_membership};
pub use predicates::{eval_p_s0, eval_p_ss, orientation, simplex_contains};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn of<T: Signed + Zero>(value: &T) -> Sign {
        if value.is_zero() {
            Sign::Zero
        } else if value.is_positive() {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Sign> {
        match v {
            -1 => Some(Sign::Negative),
            0 => Some(Sign::Zero),
            1 => Some(Sign::Positive),
            _ => None,
        }
    }

    /// `-`, `0` or `+`.
    pub fn symbol(self) -> char {
        match self {
            Sign::Negative => '-',
            Sign::Zero => '0',
            Sign::Positive => '+',
        }
    }

    pub fn from_symbol(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Negative),
            '0' => Some(Sign::Zero),
            '+' => Some(Sign::Positive),
            _ => None,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_i8(self.as_i8() * rhs.as_i8()).unwrap()
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A point of `R^d` with exact rational coordinates, `d >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct RationalPoint {
    coords: Vec<Rational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::ZeroDimension);
        }
        Ok(RationalPoint { coords })
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| rational::int(c)).collect())
            .expect("at least one coordinate")
    }

    pub fn parse<S: AsRef<str>>(coords: &[S]) -> Result<Self> {
        Self::new(
            coords
                .iter()
                .map(|s| rational::parse(s.as_ref()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn origin(dimension: usize) -> Self {
        Self::new(vec![Rational::zero(); dimension]).expect("dimension >= 1")
    }

    pub fn dimension(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    pub fn sub(&self, other: &RationalPoint) -> Vec<Rational> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    pub fn translate(&self, v: &[Rational]) -> RationalPoint {
        RationalPoint {
            coords: self.coords.iter().zip(v).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, factor: &Rational) -> RationalPoint {
        RationalPoint {
            coords: self.coords.iter().map(|a| a * factor).collect(),
        }
    }

    /// Centroid of a non-empty slice of points of equal dimension.
    pub fn centroid(points: &[RationalPoint]) -> Result<RationalPoint> {
        let first = points.first().ok_or(Error::EmptyGenerators)?;
        let d = first.dimension();
        let mut acc = vec![Rational::zero(); d];
        for p in points {
            Error::check_dim(d, p.dimension())?;
            for (a, c) in acc.iter_mut().zip(&p.coords) {
                *a += c;
            }
        }
        let n = rational::int(points.len() as i64);
        RationalPoint::new(acc.into_iter().map(|a| a / &n).collect())
    }
}

impl TryFrom<Vec<String>> for RationalPoint {
    type Error = Error;
    fn try_from(v: Vec<String>) -> Result<Self> {
        RationalPoint::new(rational::parse_vec(&v)?)
    }
}

impl From<RationalPoint> for Vec<String> {
    fn from(p: RationalPoint) -> Vec<String> {
        rational::format_vec(&p.coords)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", rational::format_vec(&self.coords).join(", "))
    }
}

/// A finite sequence of points sharing one dimension. Duplicates are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet")]
pub struct PointSet {
    dimension: usize,
    points: Vec<RationalPoint>,
}

#[derive(Deserialize)]
struct RawPointSet {
    dimension: usize,
    points: Vec<RationalPoint>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = Error;
    fn try_from(raw: RawPointSet) -> Result<Self> {
        PointSet::new(raw.dimension, raw.points)
    }
}

impl PointSet {
    pub fn new(dimension: usize, points: Vec<RationalPoint>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        for p in &points {
            Error::check_dim(dimension, p.dimension())?;
        }
        Ok(PointSet { dimension, points })
    }

    pub fn empty(dimension: usize) -> Result<Self> {
        Self::new(dimension, Vec::new())
    }

    /// Builds a set from non-empty points, taking the dimension from the first.
    pub fn from_points(points: Vec<RationalPoint>) -> Result<Self> {
        let d = points.first().ok_or(Error::EmptyGenerators)?.dimension();
        Self::new(d, points)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_points(rows.iter().map(|r| RationalPoint::from_ints(r)).collect())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Option<&RationalPoint> {
        self.points.get(i)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RationalPoint> {
        self.points.iter()
    }

    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            dimension: self.dimension,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    /// Index pairs `(i, j)`, `i < j`, of coincident points.
    pub fn duplicates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if self.points[i] == self.points[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn has_duplicates(&self) -> bool {
        !self.duplicates().is_empty()
    }

    pub fn into_points(self) -> Vec<RationalPoint> {
        self.points
    }
}

/// `conv(vertices)`. The generators need not be in convex position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet", into = "PointSet")]
pub struct VPolytope {
    generators: PointSet,
}

impl TryFrom<RawPointSet> for VPolytope {
    type Error = Error;
    fn try_from(raw: RawPointSet) -> Result<Self> {
        VPolytope::new(PointSet::new(raw.dimension, raw.points)?)
    }
}

impl From<VPolytope> for PointSet {
    fn from(p: VPolytope) -> PointSet {
        p.generators
    }
}

impl VPolytope {
    pub fn new(generators: PointSet) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        Ok(VPolytope { generators })
    }

    pub fn from_points(points: Vec<RationalPoint>) -> Result<Self> {
        Self::new(PointSet::from_points(points)?)
    }

    pub fn point(p: RationalPoint) -> Self {
        let d = p.dimension();
        VPolytope {
            generators: PointSet::new(d, vec![p]).expect("consistent dimension"),
        }
    }

    pub fn dimension(&self) -> usize {
        self.generators.dimension()
    }

    pub fn vertex_count(&self) -> usize {
        self.generators.len()
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        self.generators.points()
    }

    pub fn generators(&self) -> &PointSet {
        &self.generators
    }

    pub fn contains(&self, p: &RationalPoint) -> Result<bool> {
        hull_contains(&self.generators, p)
    }
}
