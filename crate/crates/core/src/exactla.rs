//! Exact rational scalars and dense matrices.
//!
//! Scalars are [`num_rational::BigRational`], which keeps values reduced with
//! a positive denominator. Linear solves use fraction-free (Bareiss)
//! elimination over the integers: each row of the augmented system is first
//! cleared of denominators, so every intermediate value is an integer minor
//! of the system and the only division performed at the end is by the final
//! pivot, which is `±det`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use num_rational::BigRational;

/// Formats a rational as `p/q`, or `p` when `q = 1`.
pub fn format_rational(x: &BigRational) -> String {
    x.to_string()
}

/// Parses `p/q` or `p`; the result is reduced.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(Error::Domain(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigRational::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (0..r).all(|c| self[(r, c)] == self[(c, r)]))
    }

    /// Reorders rows and columns simultaneously: entry `(i, j)` of the result
    /// is entry `(perm[i], perm[j])` of `self`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.rows);
        Self::from_fn(self.rows, self.cols, |r, c| self[(perm[r], perm[c])].clone())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(Vec::new());
        for r in 0..self.rows {
            w.write_record(self.row(r).iter().map(format_rational))
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rd = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            rows.push(rec.iter().map(parse_rational).collect::<Result<Vec<_>>>()?);
        }
        Self::from_rows(rows)
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;
    fn index(&self, (r, c): (usize, usize)) -> &BigRational {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigRational {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(format_rational).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect();
        let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(d)?;
        let parsed = rows
            .iter()
            .map(|row| row.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        RationalMatrix::from_rows(parsed).map_err(D::Error::custom)
    }
}

pub fn matmul(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix> {
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let mut out = RationalMatrix::zeros(a.rows, b.cols);
    for r in 0..a.rows {
        for k in 0..a.cols {
            let x = &a[(r, k)];
            if x.is_zero() {
                continue;
            }
            for c in 0..b.cols {
                out[(r, c)] += x * &b[(k, c)];
            }
        }
    }
    Ok(out)
}

pub fn trace(a: &RationalMatrix) -> Result<BigRational> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "trace of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    Ok((0..a.rows).fold(BigRational::zero(), |acc, i| acc + &a[(i, i)]))
}

/// Integer solution of `A·X = B` in the form `X = numerators / denominator`,
/// where `denominator` is the last Bareiss pivot (`±det` of the row-scaled
/// system) and `numerators` is an integer matrix.
#[derive(Clone, Debug)]
pub struct FractionFreeSolution {
    pub numerators: Vec<Vec<BigInt>>,
    pub denominator: BigInt,
}

impl FractionFreeSolution {
    pub fn to_matrix(&self) -> RationalMatrix {
        let rows = self.numerators.len();
        let cols = self.numerators.first().map_or(0, Vec::len);
        RationalMatrix::from_fn(rows, cols, |r, c| {
            BigRational::new(self.numerators[r][c].clone(), self.denominator.clone())
        })
    }

    /// Trace of `X` without building the full rational matrix.
    pub fn trace(&self) -> BigRational {
        let sum = self
            .numerators
            .iter()
            .enumerate()
            .fold(BigInt::zero(), |acc, (i, row)| acc + &row[i]);
        BigRational::new(sum, self.denominator.clone())
    }
}

/// Clears denominators row by row; the solution of the scaled system is
/// unchanged.
fn integer_augmented(a: &RationalMatrix, b: &RationalMatrix) -> Vec<Vec<BigInt>> {
    (0..a.rows)
        .map(|r| {
            let cells = a.row(r).iter().chain(b.row(r));
            let lcm = cells
                .clone()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            cells
                .map(|x| {
                    if lcm.is_one() {
                        x.numer().clone()
                    } else {
                        x.numer() * (&lcm / x.denom())
                    }
                })
                .collect()
        })
        .collect()
}

/// Forward Bareiss elimination on the first `n` columns of `m`. Returns the
/// sign of the row permutation used. Pivot choice: first nonzero entry of the
/// column, scanning rows in order.
fn bareiss_forward(m: &mut [Vec<BigInt>], n: usize) -> Result<i32> {
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = 1;
    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .ok_or(Error::SingularMatrix { column: col })?;
        if pivot_row != col {
            m.swap(pivot_row, col);
            sign = -sign;
        }
        let (done, rest) = m.split_at_mut(col + 1);
        let pivot = &done[col];
        let p = &pivot[col];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            for c in col + 1..width {
                let mut t = p * &row[c];
                if !factor.is_zero() && !pivot[c].is_zero() {
                    t -= &factor * &pivot[c];
                }
                row[c] = if prev.is_one() { t } else { t / &prev };
            }
        }
        prev = m[col][col].clone();
    }
    Ok(sign)
}

/// Solves `A·X = B` exactly by fraction-free elimination.
pub fn solve_fraction_free(a: &RationalMatrix, b: &RationalMatrix) -> Result<FractionFreeSolution> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "solve needs a square matrix, got {}x{}",
            a.rows, a.cols
        )));
    }
    if b.rows != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has {} rows, system has {}",
            b.rows, a.rows
        )));
    }
    let n = a.rows;
    let rhs = b.cols;
    let mut m = integer_augmented(a, b);
    bareiss_forward(&mut m, n)?;
    let d = m[n - 1][n - 1].clone();
    let mut x = vec![vec![BigInt::zero(); rhs]; n];
    for i in (0..n).rev() {
        let row = &m[i];
        for j in 0..rhs {
            let mut acc = &d * &row[n + j];
            for c in i + 1..n {
                if !row[c].is_zero() {
                    acc -= &row[c] * &x[c][j];
                }
            }
            // Exact: d·x is the adjugate-times-rhs and therefore integral.
            x[i][j] = acc / &row[i];
        }
    }
    Ok(FractionFreeSolution {
        numerators: x,
        denominator: d,
    })
}

/// Returns `X` with `A·X = B` exactly.
pub fn solve(a: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix> {
    Ok(solve_fraction_free(a, b)?.to_matrix())
}

pub fn inverse(a: &RationalMatrix) -> Result<RationalMatrix> {
    solve(a, &RationalMatrix::identity(a.rows))
}

/// Exact determinant via fraction-free elimination.
pub fn determinant(a: &RationalMatrix) -> Result<BigRational> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            a.rows, a.cols
        )));
    }
    let n = a.rows;
    let empty = RationalMatrix {
        rows: n,
        cols: 0,
        data: Vec::new(),
    };
    let mut m = integer_augmented(a, &empty);
    let scale = (0..n).fold(BigInt::one(), |acc, r| {
        acc * a.row(r).iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
    });
    let sign = match bareiss_forward(&mut m, n) {
        Ok(s) => s,
        Err(Error::SingularMatrix { .. }) => return Ok(BigRational::zero()),
        Err(e) => return Err(e),
    };
    let d = if sign < 0 {
        -m[n - 1][n - 1].clone()
    } else {
        m[n - 1][n - 1].clone()
    };
    Ok(BigRational::new(d, scale))
}

/// True iff every leading principal minor is strictly positive.
pub fn is_positive_definite(a: &RationalMatrix) -> Result<bool> {
    if !a.is_symmetric() {
        return Ok(false);
    }
    for k in 1..=a.rows {
        let minor = RationalMatrix::from_fn(k, k, |r, c| a[(r, c)].clone());
        if !determinant(&minor)?.is_positive() {
            return Ok(false);
        }
    }
    Ok(true)
}
