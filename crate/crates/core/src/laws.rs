//! Limit laws of truncated characters: the free Poisson law `μ_t` on the
//! quantum side and the Poisson law `ν_t` on the classical side.
//!
//! Both are described through their cumulants, which all equal `t`: free
//! cumulants over `NC(k)` for `μ_t`, classical cumulants over all partitions
//! for `ν_t`. Everything here is exact except [`mp_density_moment`].

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::classical;
use crate::error::{Error, Result};
use crate::exactla::{format_rational, BigRational, RationalMatrix};
use crate::partitions::{enumerate, PartitionKind};
use crate::weingarten::{self, GramStructure, MomentQuery};

/// Moments `m_1, …, m_kmax`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentSequence {
    values: Vec<BigRational>,
}

impl MomentSequence {
    pub fn new(values: Vec<BigRational>) -> Self {
        MomentSequence { values }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// `m_k` for `1 ≤ k ≤ order`; `m_0 = 1`.
    pub fn get(&self, k: usize) -> Option<BigRational> {
        match k {
            0 => Some(BigRational::one()),
            k => self.values.get(k - 1).cloned(),
        }
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    /// Hankel matrix `(m_{i+j})_{0 ≤ i,j ≤ size−1}`, needing `2·size − 2 ≤ order`.
    pub fn hankel(&self, size: usize) -> Result<RationalMatrix> {
        if size == 0 || 2 * size - 2 > self.order() {
            return Err(Error::InvalidArgument(format!(
                "Hankel matrix of size {size} needs moments through order {}",
                2 * size.max(1) - 2
            )));
        }
        Ok(RationalMatrix::from_fn(size, size, |i, j| {
            self.get(i + j).expect("order checked")
        }))
    }
}

/// A positive law parameter `t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct LawParameter(BigRational);

impl LawParameter {
    pub fn new(t: BigRational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "law parameter must be positive, got {}",
                format_rational(&t)
            )));
        }
        Ok(LawParameter(t))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    /// Weight of the atom at 0 in `μ_t`: `max(0, 1 − t)`.
    pub fn atom_at_zero(&self) -> BigRational {
        let k = BigRational::one() - &self.0;
        if k.is_positive() {
            k
        } else {
            BigRational::zero()
        }
    }
}

/// `h[j]` = number of partitions of `{1..k}` of the given kind with `j` blocks.
pub fn block_count_histogram(k: usize, kind: PartitionKind) -> Result<Vec<u64>> {
    let family = enumerate(k, kind)?;
    let mut hist = vec![0u64; k + 1];
    for p in &family {
        hist[p.block_count()] += 1;
    }
    Ok(hist)
}

fn weighted_block_sum(k: usize, kind: PartitionKind, t: &BigRational) -> Result<BigRational> {
    let hist = block_count_histogram(k, kind)?;
    Ok(hist
        .iter()
        .enumerate()
        .fold(BigRational::zero(), |acc, (j, &c)| {
            acc + BigRational::from_integer(c.into()) * Pow::pow(t, j as u32)
        }))
}

/// `Σ_{p ∈ NC(k)} t^{|p|}`.
pub fn free_poisson_moment(k: usize, t: &LawParameter) -> Result<BigRational> {
    weighted_block_sum(k, PartitionKind::NonCrossing, t.value())
}

/// `Σ_{p ∈ P(k)} t^{|p|}`, the Touchard polynomial at `t`.
pub fn poisson_moment(k: usize, t: &LawParameter) -> Result<BigRational> {
    weighted_block_sum(k, PartitionKind::All, t.value())
}

pub fn free_poisson_moments(k_max: usize, t: &LawParameter) -> Result<MomentSequence> {
    Ok(MomentSequence::new(
        (1..=k_max)
            .map(|k| free_poisson_moment(k, t))
            .collect::<Result<_>>()?,
    ))
}

pub fn poisson_moments(k_max: usize, t: &LawParameter) -> Result<MomentSequence> {
    Ok(MomentSequence::new(
        (1..=k_max)
            .map(|k| poisson_moment(k, t))
            .collect::<Result<_>>()?,
    ))
}

fn block_product(sizes: &[usize], cumulants: &[BigRational]) -> BigRational {
    sizes
        .iter()
        .fold(BigRational::one(), |acc, &b| acc * &cumulants[b - 1])
}

/// `m_k = Σ_p Π_{blocks b} κ_{|b|}` over `NC(k)` or `P(k)`.
pub fn moments_from_cumulants(cumulants: &[BigRational], kind: PartitionKind) -> Result<MomentSequence> {
    let mut values = Vec::with_capacity(cumulants.len());
    for k in 1..=cumulants.len() {
        let family = enumerate(k, kind)?;
        let m = family.iter().fold(BigRational::zero(), |acc, p| {
            acc + block_product(&p.block_sizes(), cumulants)
        });
        values.push(m);
    }
    Ok(MomentSequence::new(values))
}

/// Inverts [`moments_from_cumulants`] by `κ_k = m_k − Σ_{p ≠ 1_k} Π κ_{|b|}`.
pub fn cumulants_from_moments(m: &MomentSequence, kind: PartitionKind) -> Result<Vec<BigRational>> {
    let mut kappa: Vec<BigRational> = Vec::with_capacity(m.order());
    for k in 1..=m.order() {
        let family = enumerate(k, kind)?;
        // Every partition other than the one-block one only uses κ_j, j < k.
        let rest = family
            .iter()
            .filter(|p| p.block_count() > 1)
            .fold(BigRational::zero(), |acc, p| {
                acc + block_product(&p.block_sizes(), &kappa)
            });
        kappa.push(m.values()[k - 1].clone() - rest);
    }
    Ok(kappa)
}

/// One row of a [`SemigroupReport`]: cumulants of order `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupRow {
    pub order: usize,
    pub first: BigRational,
    pub second: BigRational,
    pub combined: BigRational,
}

impl SemigroupRow {
    pub fn additive(&self) -> bool {
        &self.first + &self.second == self.combined
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemigroupReport {
    pub kind: PartitionKind,
    pub rows: Vec<SemigroupRow>,
}

impl SemigroupReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(SemigroupRow::additive)
    }
}

fn law_moments(k_max: usize, t: &LawParameter, kind: PartitionKind) -> Result<MomentSequence> {
    match kind {
        PartitionKind::NonCrossing => free_poisson_moments(k_max, t),
        PartitionKind::All => poisson_moments(k_max, t),
    }
}

/// Checks that the cumulants (free for `NonCrossing`, classical for `All`) of
/// the `(t1 + t2)`-law are the sums of those of the `t1`- and `t2`-laws.
pub fn semigroup_check(
    t1: &LawParameter,
    t2: &LawParameter,
    k_max: usize,
    kind: PartitionKind,
) -> Result<SemigroupReport> {
    let t12 = LawParameter::new(t1.value() + t2.value())?;
    let c1 = cumulants_from_moments(&law_moments(k_max, t1, kind)?, kind)?;
    let c2 = cumulants_from_moments(&law_moments(k_max, t2, kind)?, kind)?;
    let c12 = cumulants_from_moments(&law_moments(k_max, &t12, kind)?, kind)?;
    let rows = (0..k_max)
        .map(|j| SemigroupRow {
            order: j + 1,
            first: c1[j].clone(),
            second: c2[j].clone(),
            combined: c12[j].clone(),
        })
        .collect();
    Ok(SemigroupReport { kind, rows })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on the
/// Legendre recurrence.
fn gauss_legendre(m: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(m);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

const GL_POINTS: usize = 20;
const MAX_DEPTH: u32 = 30;

fn adaptive_gl(
    f: &dyn Fn(f64) -> f64,
    rule: &[(f64, f64)],
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64, bool) {
    let panel = |lo: f64, hi: f64| {
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        rule.iter().map(|&(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    };
    let whole = panel(a, b);
    let m = (a + b) / 2.0;
    let halves = panel(a, m) + panel(m, b);
    let err = (whole - halves).abs();
    if err <= tol {
        return (halves, err, true);
    }
    if depth >= MAX_DEPTH {
        return (halves, err, false);
    }
    let (l, el, okl) = adaptive_gl(f, rule, a, m, tol / 2.0, depth + 1);
    let (r, er, okr) = adaptive_gl(f, rule, m, b, tol / 2.0, depth + 1);
    (l + r, el + er, okl && okr)
}

/// `∫ x^k dμ_t` by quadrature of the density
/// `(1/(2πx)) √(4t − (x − 1 − t)²)` on `[(1−√t)², (1+√t)²]`, plus the atom
/// `max(0, 1−t) δ_0`.
///
/// The substitution `x = 1 + t + 2√t sin θ` turns the integrand into the
/// smooth `(2t/π) cos²θ x^{k−1}` on `[−π/2, π/2]`.
pub fn mp_density_moment(k: u32, t: f64, tolerance: f64) -> Result<f64> {
    if t.is_nan() || t <= 0.0 || t.is_infinite() || tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "need t > 0 and tolerance > 0, got t = {t}, tolerance = {tolerance}"
        )));
    }
    let root = t.sqrt();
    let f = move |theta: f64| {
        let (sin, cos) = theta.sin_cos();
        let x = 1.0 + t + 2.0 * root * sin;
        let c2 = cos * cos;
        let shape = if k == 0 {
            if x <= 0.0 {
                0.0
            } else {
                c2 / x
            }
        } else {
            c2 * x.powi(k as i32 - 1)
        };
        2.0 * t / PI * shape
    };
    let rule = gauss_legendre(GL_POINTS);
    let (value, achieved, converged) = adaptive_gl(&f, &rule, -PI / 2.0, PI / 2.0, tolerance / 10.0, 0);
    if !converged {
        return Err(Error::Numeric { achieved });
    }
    let atom = if k == 0 { (1.0 - t).max(0.0) } else { 0.0 };
    Ok(value + atom)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `S_n^+`, target `μ_t`.
    Free,
    /// `S_n`, target `ν_t`.
    Classical,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceRow {
    pub n: u64,
    pub s: u64,
    pub k: usize,
    pub moment: BigRational,
    pub target: BigRational,
    /// `|moment − target|`.
    pub error: BigRational,
    pub error_times_n: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub side: Side,
    pub t: BigRational,
    pub rows: Vec<ConvergenceRow>,
}

#[derive(Serialize)]
struct WireRow {
    n: u64,
    s: u64,
    k: usize,
    moment: String,
    target: String,
    error: String,
    error_times_n: String,
}

impl From<&ConvergenceRow> for WireRow {
    fn from(r: &ConvergenceRow) -> Self {
        WireRow {
            n: r.n,
            s: r.s,
            k: r.k,
            moment: format_rational(&r.moment),
            target: format_rational(&r.target),
            error: format_rational(&r.error),
            error_times_n: format_rational(&r.error_times_n),
        }
    }
}

impl ConvergenceReport {
    /// Rows for one moment order, in `n_list` order.
    pub fn order(&self, k: usize) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(move |r| r.k == k)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(WireRow::from(r))
                .map_err(|e| Error::Parse(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "side": self.side,
            "t": format_rational(&self.t),
            "rows": self.rows.iter().map(WireRow::from).collect::<Vec<_>>(),
        })
    }
}

/// `round(t·n)`, halves rounded up.
pub fn truncation_for(t: &BigRational, n: u64) -> u64 {
    let tn = t * BigRational::from_integer(n.into());
    let half = BigRational::new(1.into(), 2.into());
    let r: BigInt = (tn + half).floor().to_integer();
    r.try_into().unwrap_or(0)
}

/// Exact moments at finite `n` against the limit law, for `k = 1..=k_max`
/// and each `n` in `n_list`, with `s = round(t·n)`.
pub fn convergence_report(
    k_max: usize,
    t: &LawParameter,
    n_list: &[u64],
    side: Side,
) -> Result<ConvergenceReport> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    if t.value() > &BigRational::one() {
        return Err(Error::Domain(format!(
            "truncation needs t <= 1, got {}",
            format_rational(t.value())
        )));
    }
    let targets: Vec<BigRational> = match side {
        Side::Free => free_poisson_moments(k_max, t)?,
        Side::Classical => poisson_moments(k_max, t)?,
    }
    .values
    .clone();
    let structures = match side {
        Side::Free => (1..=k_max)
            .map(GramStructure::new)
            .collect::<Result<Vec<_>>>()?,
        Side::Classical => Vec::new(),
    };
    let mut rows = Vec::new();
    for &n in n_list {
        let s = truncation_for(t.value(), n);
        if s == 0 {
            return Err(Error::Domain(format!(
                "round(t n) = 0 at n = {n}; choose a larger n"
            )));
        }
        for k in 1..=k_max {
            let moment = match side {
                Side::Free => weingarten::truncated_moment_with(
                    &structures[k - 1],
                    &MomentQuery::new(n, s, k)?,
                )?,
                Side::Classical => classical::sn_moment(n, s, k as u32)?,
            };
            let target = targets[k - 1].clone();
            let error = (&moment - &target).abs();
            let error_times_n = &error * BigRational::from_integer(n.into());
            rows.push(ConvergenceRow {
                n,
                s,
                k,
                moment,
                target,
                error,
                error_times_n,
            });
        }
    }
    Ok(ConvergenceReport {
        side,
        t: t.value().clone(),
        rows,
    })
}

/// Narayana number `N(k, j) = C(k, j−1) C(k, j) / k`.
pub fn narayana(k: u64, j: u64) -> BigInt {
    if j == 0 || j > k {
        return BigInt::zero();
    }
    let binom = |n: u64, r: u64| -> BigInt {
        (0..r).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
    };
    let num = binom(k, j - 1) * binom(k, j);
    let (q, r) = num.div_rem(&BigInt::from(k));
    debug_assert!(r.is_zero());
    q
}
