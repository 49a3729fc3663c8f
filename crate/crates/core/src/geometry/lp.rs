//! Exact convex-combination feasibility.
//!
//! Decides whether `sum_i w_i g_i = a, sum_i w_i = 1, w >= 0` has a solution
//! with a phase-one simplex over rationals. Bland's rule keeps it finite on
//! degenerate inputs. No determinants are involved, so this is independent
//! of the orientation predicates it is used to cross-check.

use num_traits::{Signed, Zero};

use super::{PointSet, RationalPoint};
use crate::rational::Rational;
use crate::{Error, Result};

pub fn lp_membership(generators: &PointSet, a: &RationalPoint) -> Result<bool> {
    Ok(convex_combination(generators, a)?.is_some())
}

/// Convex weights expressing `a` in terms of `generators`, if any exist.
pub fn convex_combination(generators: &PointSet, a: &RationalPoint) -> Result<Option<Vec<Rational>>> {
    if generators.is_empty() {
        return Err(Error::EmptyGenerators);
    }
    let d = generators.dimension();
    Error::check_dim(d, a.dimension())?;
    let n = generators.len();

    // Rows 0..d: coordinate equations. Row d: weights sum to one.
    let mut rows: Vec<Vec<Rational>> = (0..d)
        .map(|c| generators.iter().map(|g| g.coords()[c].clone()).collect())
        .collect();
    rows.push(vec![Rational::from_integer(1.into()); n]);
    let mut rhs: Vec<Rational> = a.coords().to_vec();
    rhs.push(Rational::from_integer(1.into()));

    Ok(phase_one(rows, rhs))
}

/// Finds `x >= 0` with `A x = b`, or `None` if infeasible.
fn phase_one(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Option<Vec<Rational>> {
    let m = a.len();
    let n = a[0].len();
    let width = n + m + 1;
    let rhs_col = n + m;

    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m);
    for (r, (row, b_r)) in a.into_iter().zip(b).enumerate() {
        let flip = b_r.is_negative();
        let mut line = Vec::with_capacity(width);
        line.extend(row.into_iter().map(|v| if flip { -v } else { v }));
        line.extend((0..m).map(|j| Rational::from_integer(((j == r) as i32).into())));
        line.push(if flip { -b_r } else { b_r });
        t.push(line);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of "minimise the sum of artificials".
    let mut z = vec![Rational::zero(); width];
    for line in &t {
        for j in 0..n {
            z[j] -= &line[j];
        }
        z[rhs_col] -= &line[rhs_col];
    }

    loop {
        let Some(enter) = (0..n + m).find(|&j| z[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..m {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][rhs_col] / &t[r][enter];
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        // The phase-one objective is bounded below by zero.
        let (pivot_row, _) = leave.expect("phase one is never unbounded");
        pivot(&mut t, &mut z, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    if !z[rhs_col].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &var) in basis.iter().enumerate() {
        if var < n {
            x[var] = t[r][rhs_col].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], z: &mut [Rational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for v in t[row].iter_mut() {
        *v /= &p;
    }
    let pivot_line = t[row].clone();
    for (r, line) in t.iter_mut().enumerate() {
        if r == row || line[col].is_zero() {
            continue;
        }
        let f = line[col].clone();
        for (v, pv) in line.iter_mut().zip(&pivot_line) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
    if !z[col].is_zero() {
        let f = z[col].clone();
        for (v, pv) in z.iter_mut().zip(&pivot_line) {
            if !pv.is_zero() {
                *v -= &f * pv;
            }
        }
    }
}
