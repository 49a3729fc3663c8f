use super::det::rational_det_sign;
use super::{lp_membership, PointSet, RationalPoint, Sign};
use crate::rational::Rational;
use crate::{Error, Result};

/// Checks that `config` holds exactly `d + 1` points of one dimension `d`.
fn check_config(config: &[RationalPoint]) -> Result<usize> {
    let d = config.first().ok_or(Error::WrongArity {
        expected: 2,
        found: 0,
    })?;
    let d = d.dimension();
    if config.len() != d + 1 {
        return Err(Error::WrongArity {
            expected: d + 1,
            found: config.len(),
        });
    }
    for p in config {
        Error::check_dim(d, p.dimension())?;
    }
    Ok(d)
}

fn check_index(s: usize, d: usize) -> Result<()> {
    if s > d {
        return Err(Error::IndexOutOfRange {
            index: s,
            bound: d + 1,
        });
    }
    Ok(())
}

/// Sign of `det[v_r - anchor]` over `r != omit`, rows in index order.
fn difference_sign(config: &[RationalPoint], omit: usize, anchor: &RationalPoint) -> Sign {
    let rows: Vec<Vec<Rational>> = config
        .iter()
        .enumerate()
        .filter(|&(r, _)| r != omit)
        .map(|(_, p)| p.sub(anchor))
        .collect();
    rational_det_sign(&rows)
}

/// Orientation of `d + 1` points in `R^d`:
/// `sign det[p_0 - p_d, ..., p_{d-1} - p_d]`. Zero iff affinely dependent.
pub fn orientation(simplex: &[RationalPoint]) -> Result<Sign> {
    let d = check_config(simplex)?;
    Ok(difference_sign(simplex, d, &simplex[d]))
}

/// Sign of `det[x_r - x_s]` over `r != s`, in index order. `s` is 0-based.
pub fn eval_p_ss(config: &[RationalPoint], s: usize) -> Result<Sign> {
    let d = check_config(config)?;
    check_index(s, d)?;
    Ok(difference_sign(config, s, &config[s]))
}

/// Sign of `det[x_r - a]` over `r != s`, in index order. `s` is 0-based.
pub fn eval_p_s0(config: &[RationalPoint], s: usize, a: &RationalPoint) -> Result<Sign> {
    let d = check_config(config)?;
    check_index(s, d)?;
    Error::check_dim(d, a.dimension())?;
    Ok(difference_sign(config, s, a))
}

/// Closed containment of `a` in the simplex spanned by `config`.
///
/// Non-degenerate simplices use the sign test: for every `s`, the facet
/// opposite `x_s` must not separate `a` from `x_s`, i.e. the `s0` sign is
/// zero or equals the `ss` sign. If any `ss` sign is zero the simplex is
/// flat and the answer comes from [`lp_membership`].
pub fn simplex_contains(config: &[RationalPoint], a: &RationalPoint) -> Result<bool> {
    let d = check_config(config)?;
    Error::check_dim(d, a.dimension())?;
    let ss: Vec<Sign> = (0..=d)
        .map(|s| difference_sign(config, s, &config[s]))
        .collect();
    if ss.iter().any(|s| s.is_zero()) {
        let generators = PointSet::new(d, config.to_vec())?;
        return lp_membership(&generators, a);
    }
    Ok((0..=d).all(|s| {
        let s0 = difference_sign(config, s, a);
        s0 == Sign::Zero || s0 == ss[s]
    }))
}
