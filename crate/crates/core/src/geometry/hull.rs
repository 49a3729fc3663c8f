//! Convex-hull membership by Carathéodory reduction.
//!
//! `a` lies in `conv(G)` iff it lies in `conv(Y)` for some `(d+1)`-subset
//! `Y` of `G`. [`HullOracle`] precomputes, for each such subset, the signs
//! of the vertex-side determinants in an integer frame (all generators
//! multiplied by the lcm of their denominators), so a query only evaluates
//! the point-side determinants.
//!
//! When at least one `(d+1)`-subset is non-degenerate, `conv(G)` is
//! full-dimensional and is covered by its non-degenerate simplices, so the
//! flat subsets contribute nothing. When every subset is flat, the whole
//! question goes to the exact LP.

use num_bigint::BigInt;
use num_traits::One;

use super::det::int_det_sign;
use super::{lp_membership, simplex_contains, PointSet, RationalPoint, Sign};
use crate::combinatorics::caratheodory_tuples;
use crate::rational::{self, Rational};
use crate::{Error, Result};

#[derive(Clone, Debug)]
struct Simplex {
    vertices: Vec<usize>,
    vertex_signs: Vec<Sign>,
}

/// Reusable membership test for a fixed generator set.
#[derive(Clone, Debug)]
pub struct HullOracle {
    generators: PointSet,
    scale: BigInt,
    scaled: Vec<Vec<BigInt>>,
    simplices: Vec<Simplex>,
    lower: Vec<Rational>,
    upper: Vec<Rational>,
}

impl HullOracle {
    pub fn new(generators: &PointSet) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::EmptyGenerators);
        }
        let d = generators.dimension();
        let scale = rational::common_denominator(generators.iter().flat_map(|p| p.coords()));
        let scaled: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|p| {
                p.coords()
                    .iter()
                    .map(|c| rational::scaled_integer(c, &scale))
                    .collect()
            })
            .collect();

        let mut simplices = Vec::new();
        for tuple in caratheodory_tuples(generators.len(), d + 1) {
            let signs: Vec<Sign> = (0..=d)
                .map(|s| {
                    let anchor = &scaled[tuple[s]];
                    let rows = tuple
                        .iter()
                        .enumerate()
                        .filter(|&(r, _)| r != s)
                        .map(|(_, &g)| scaled[g].iter().zip(anchor).map(|(x, y)| x - y).collect())
                        .collect();
                    int_det_sign(rows)
                })
                .collect();
            if signs.iter().all(|s| !s.is_zero()) {
                simplices.push(Simplex {
                    vertices: tuple,
                    vertex_signs: signs,
                });
            }
        }

        let mut lower = generators.points()[0].coords().to_vec();
        let mut upper = lower.clone();
        for p in generators.iter().skip(1) {
            for (c, v) in p.coords().iter().enumerate() {
                if *v < lower[c] {
                    lower[c] = v.clone();
                }
                if *v > upper[c] {
                    upper[c] = v.clone();
                }
            }
        }

        Ok(HullOracle {
            generators: generators.clone(),
            scale,
            scaled,
            simplices,
            lower,
            upper,
        })
    }

    pub fn generators(&self) -> &PointSet {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.generators.dimension()
    }

    /// Whether some `(d+1)`-subset of the generators spans a proper simplex.
    pub fn is_full_dimensional(&self) -> bool {
        !self.simplices.is_empty()
    }

    pub fn contains(&self, a: &RationalPoint) -> Result<bool> {
        let d = self.dimension();
        Error::check_dim(d, a.dimension())?;
        let inside_box = a
            .coords()
            .iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| lo <= v && v <= hi);
        if !inside_box {
            return Ok(false);
        }
        if !self.is_full_dimensional() {
            return lp_membership(&self.generators, a);
        }

        // a * scale = query / q with q > 0; compare q * X_r - query.
        let shifted: Vec<Rational> = a
            .coords()
            .iter()
            .map(|c| c * Rational::from_integer(self.scale.clone()))
            .collect();
        let q = rational::common_denominator(&shifted);
        let query: Vec<BigInt> = shifted
            .iter()
            .map(|c| rational::scaled_integer(c, &q))
            .collect();
        let lifted: Option<Vec<Vec<BigInt>>> = (!q.is_one())
            .then(|| {
                self.scaled
                    .iter()
                    .map(|row| row.iter().map(|v| v * &q).collect())
                    .collect()
            });
        let frame = lifted.as_ref().unwrap_or(&self.scaled);

        Ok(self.simplices.iter().any(|simplex| {
            (0..=d).all(|s| {
                let rows = simplex
                    .vertices
                    .iter()
                    .enumerate()
                    .filter(|&(r, _)| r != s)
                    .map(|(_, &g)| frame[g].iter().zip(&query).map(|(x, y)| x - y).collect())
                    .collect();
                let point_sign = int_det_sign(rows);
                point_sign.is_zero() || point_sign == simplex.vertex_signs[s]
            })
        }))
    }
}

/// Whether `a` lies in `conv(generators)` (closed).
pub fn hull_contains(generators: &PointSet, a: &RationalPoint) -> Result<bool> {
    HullOracle::new(generators)?.contains(a)
}

/// Carathéodory reduction without shortcuts: [`simplex_contains`] on every
/// `(d+1)`-subset, flat ones included.
pub fn hull_contains_exhaustive(generators: &PointSet, a: &RationalPoint) -> Result<bool> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    Error::check_dim(generators.dimension(), a.dimension())?;
    for tuple in caratheodory_tuples(generators.len(), generators.dimension() + 1) {
        let config: Vec<RationalPoint> = tuple.iter().map(|&i| generators.points()[i].clone()).collect();
        if simplex_contains(&config, a)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Indices `i` with `generators[i]` outside the hull of the other points.
///
/// Coincident points are collapsed to their first occurrence first, so a
/// repeated vertex is reported once.
pub fn hull_vertices(generators: &PointSet) -> Result<Vec<usize>> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let pts = generators.points();
    let distinct: Vec<usize> = (0..pts.len())
        .filter(|&i| !pts[..i].contains(&pts[i]))
        .collect();
    if distinct.len() == 1 {
        return Ok(distinct);
    }
    let mut out = Vec::new();
    for (pos, &i) in distinct.iter().enumerate() {
        let others: Vec<usize> = distinct
            .iter()
            .enumerate()
            .filter(|&(p, _)| p != pos)
            .map(|(_, &j)| j)
            .collect();
        if !hull_contains(&generators.subset(&others), &pts[i])? {
            out.push(i);
        }
    }
    Ok(out)
}
