use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Sign;
use crate::rational::{self, Rational};
use crate::{Error, Result};

/// Sign of the determinant of a square integer matrix. Consumes the rows.
pub(crate) fn int_det_sign(mut m: Vec<Vec<BigInt>>) -> Sign {
    match m.len() {
        0 => Sign::Positive,
        1 => Sign::of(&m[0][0]),
        2 => {
            let lhs = &m[0][0] * &m[1][1];
            let rhs = &m[0][1] * &m[1][0];
            match lhs.cmp(&rhs) {
                std::cmp::Ordering::Greater => Sign::Positive,
                std::cmp::Ordering::Equal => Sign::Zero,
                std::cmp::Ordering::Less => Sign::Negative,
            }
        }
        3 => {
            let minor0 = &m[1][1] * &m[2][2] - &m[1][2] * &m[2][1];
            let minor1 = &m[1][0] * &m[2][2] - &m[1][2] * &m[2][0];
            let minor2 = &m[1][0] * &m[2][1] - &m[1][1] * &m[2][0];
            Sign::of(&(&m[0][0] * minor0 - &m[0][1] * minor1 + &m[0][2] * minor2))
        }
        _ => bareiss(&mut m),
    }
}

/// Fraction-free Gaussian elimination; every division is exact.
fn bareiss(m: &mut [Vec<BigInt>]) -> Sign {
    let n = m.len();
    let mut sign = Sign::Positive;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return Sign::Zero,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * Sign::of(&m[n - 1][n - 1])
}

fn check_square(rows: &[Vec<Rational>]) -> Result<()> {
    let n = rows.len();
    for r in rows {
        Error::check_dim(n, r.len())?;
    }
    Ok(())
}

/// Sign of `det(rows)`. Each row is cleared of denominators separately,
/// which scales the determinant by a positive factor.
pub fn determinant_sign(rows: &[Vec<Rational>]) -> Result<Sign> {
    check_square(rows)?;
    Ok(rational_det_sign(rows))
}

pub(crate) fn rational_det_sign(rows: &[Vec<Rational>]) -> Sign {
    let m = rows
        .iter()
        .map(|row| {
            let scale = rational::common_denominator(row);
            row.iter()
                .map(|v| rational::scaled_integer(v, &scale))
                .collect()
        })
        .collect();
    int_det_sign(m)
}

/// Exact determinant value.
pub fn determinant(rows: &[Vec<Rational>]) -> Result<Rational> {
    check_square(rows)?;
    let n = rows.len();
    if n == 0 {
        return Ok(Rational::one());
    }
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut det = Rational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            let f = &m[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &m[k][j] * &f;
                m[i][j] -= v;
            }
        }
    }
    Ok(det)
}
