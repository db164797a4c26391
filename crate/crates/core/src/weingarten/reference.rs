//! Published Gram and Weingarten matrices for `k ≤ 4` and the two-projection
//! moment formulas, transcribed as functions of `n`.
//!
//! Their row order is not the canonical one used elsewhere in the crate; see
//! [`match_paper_matrix`](super::match_paper_matrix).

use num_bigint::BigInt;
use num_traits::Pow;

use crate::error::{Error, Result};
use crate::exactla::{BigRational, RationalMatrix};

fn power(n: u64, e: u32) -> BigRational {
    BigRational::from_integer(Pow::pow(BigInt::from(n), e))
}

/// Builds `n · (n^{e_ij})` from an exponent table.
fn from_exponents(n: u64, exps: &[&[u32]]) -> RationalMatrix {
    let d = exps.len();
    RationalMatrix::from_fn(d, d, |r, c| power(n, exps[r][c] + 1))
}

/// `G_2n = n [[1, 1], [1, n]]`.
pub fn gram_2(n: u64) -> RationalMatrix {
    from_exponents(n, &[&[0, 0], &[0, 1]])
}

/// `G_2n⁻¹ = 1/(n(n−1)) [[n, −1], [−1, 1]]`.
pub fn weingarten_2(n: u64) -> Result<RationalMatrix> {
    let n = n as i64;
    let scale = nonzero_scale(n * (n - 1))?;
    Ok(RationalMatrix::from_i64_rows(&[vec![n, -1], vec![-1, 1]])?.scale(&scale))
}

pub fn gram_3(n: u64) -> RationalMatrix {
    from_exponents(
        n,
        &[
            &[1, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0],
            &[0, 0, 1, 0, 1],
            &[0, 0, 0, 1, 1],
            &[1, 0, 1, 1, 2],
        ],
    )
}

/// `G_3n⁻¹` with the common factor `1/(n(n−1)(n−2))`.
pub fn weingarten_3(n: u64) -> Result<RationalMatrix> {
    let n = n as i64;
    let scale = nonzero_scale(n * (n - 1) * (n - 2))?;
    let a = n - 1;
    let rows = vec![
        vec![a, -n, 1, 1, -1],
        vec![-n, n * n, -n, -n, 2],
        vec![1, -n, a, 1, -1],
        vec![1, -n, 1, a, -1],
        vec![-1, 2, -1, -1, 1],
    ];
    Ok(RationalMatrix::from_i64_rows(&rows)?.scale(&scale))
}

pub fn gram_4(n: u64) -> RationalMatrix {
    from_exponents(
        n,
        &[
            &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1],
            &[1, 2, 1, 1, 0, 1, 0, 0, 1, 1, 0, 1, 1, 2],
            &[0, 1, 1, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 1],
            &[0, 1, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0, 1],
            &[0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
            &[0, 1, 1, 0, 0, 2, 1, 0, 1, 1, 0, 1, 1, 2],
            &[0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 0, 0, 1, 1],
            &[0, 0, 0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1],
            &[0, 1, 0, 1, 0, 1, 1, 1, 2, 1, 0, 1, 1, 2],
            &[0, 1, 0, 1, 0, 1, 0, 0, 1, 2, 1, 1, 1, 2],
            &[0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1],
            &[0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 1, 2, 1, 2],
            &[1, 1, 0, 0, 0, 1, 1, 0, 1, 1, 1, 1, 2, 2],
            &[1, 2, 1, 1, 0, 2, 1, 1, 2, 2, 1, 2, 2, 3],
        ],
    )
}

/// The published Gram matrix of order `k ∈ {2, 3, 4}`.
pub fn gram(k: usize, n: u64) -> Result<RationalMatrix> {
    match k {
        2 => Ok(gram_2(n)),
        3 => Ok(gram_3(n)),
        4 => Ok(gram_4(n)),
        _ => Err(Error::InvalidArgument(format!(
            "no reference Gram matrix for k = {k}"
        ))),
    }
}

/// The published Weingarten matrix of order `k ∈ {2, 3}`.
pub fn weingarten(k: usize, n: u64) -> Result<RationalMatrix> {
    match k {
        2 => weingarten_2(n),
        3 => weingarten_3(n),
        _ => Err(Error::InvalidArgument(format!(
            "no reference Weingarten matrix for k = {k}"
        ))),
    }
}

fn nonzero_scale(den: i64) -> Result<BigRational> {
    if den == 0 {
        return Err(Error::Domain("reference matrix undefined at this n".into()));
    }
    Ok(BigRational::new(1.into(), den.into()))
}

/// Moments of `u_11 + u_22` for `k ≤ 4`:
/// `2/n`, `2/(n−1)`, `2/(n−1)·(n+2)/n`, `2/(n−1)·(n²+2n−12)/(n²−3n+1)`.
pub fn two_projection_moment(n: u64, k: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::Domain(format!("two projections need n >= 2, got {n}")));
    }
    let n = n as i64;
    let r = |p: i64, q: i64| BigRational::new(p.into(), q.into());
    let base = r(2, n - 1);
    match k {
        1 => Ok(r(2, n)),
        2 => Ok(base),
        3 => Ok(base * r(n + 2, n)),
        4 => Ok(base * r(n * n + 2 * n - 12, n * n - 3 * n + 1)),
        _ => Err(Error::InvalidArgument(format!(
            "two-projection formulas exist for k in 1..=4, got {k}"
        ))),
    }
}
