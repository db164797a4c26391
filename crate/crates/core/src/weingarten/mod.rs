//! Gram and Weingarten matrices over non-crossing partitions, and the Haar
//! integrals they compute.
//!
//! For `p, q ∈ NC(k)` the Gram matrix is `G_kn(p, q) = n^{|p ∨ q|}` with the
//! join taken in the lattice of all partitions, and the Weingarten matrix is
//! its inverse. Monomials `u_{i1 j1} … u_{ik jk}` integrate to
//! `Σ_{p,q} δ(p, i) δ(q, j) W_kn(p, q)`, and the diagonal sum
//! `u_11 + … + u_ss` has `k`-th moment `Tr(G_kn⁻¹ G_ks)`.
//!
//! Rows and columns follow the canonical order of
//! [`enumerate`](crate::partitions::enumerate).

pub mod reference;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactla::{self, BigRational, RationalMatrix};
use crate::partitions::{enumerate, Partition, PartitionFamily, PartitionKind};

/// Smallest dimension for which integrals are evaluated.
pub const MIN_DIMENSION: u64 = 4;

/// Upper bound on `n^k` for [`gram_bruteforce`].
pub const BRUTEFORCE_LIMIT: u64 = 10_000_000;

/// `NC(k)` together with the block counts of all pairwise joins. The counts do
/// not depend on `n`, so one structure serves every Gram matrix of order `k`.
#[derive(Clone, Debug)]
pub struct GramStructure {
    family: PartitionFamily,
    join_blocks: Vec<Vec<u32>>,
}

impl GramStructure {
    pub fn new(k: usize) -> Result<Self> {
        let family = enumerate(k, PartitionKind::NonCrossing)?;
        let members = family.members();
        let mut join_blocks = vec![vec![0u32; members.len()]; members.len()];
        for (a, p) in members.iter().enumerate() {
            join_blocks[a][a] = p.block_count() as u32;
            for (b, q) in members.iter().enumerate().take(a) {
                let j = p.join(q)?.block_count() as u32;
                join_blocks[a][b] = j;
                join_blocks[b][a] = j;
            }
        }
        Ok(GramStructure {
            family,
            join_blocks,
        })
    }

    pub fn k(&self) -> usize {
        self.family.k()
    }

    pub fn family(&self) -> &PartitionFamily {
        &self.family
    }

    pub fn dimension(&self) -> usize {
        self.family.len()
    }

    /// `|p ∨ q|` for the members at positions `a` and `b`.
    pub fn join_blocks(&self, a: usize, b: usize) -> u32 {
        self.join_blocks[a][b]
    }

    /// `G_kn` for any `n ≥ 1`.
    pub fn gram(&self, n: u64) -> RationalMatrix {
        let base = BigInt::from(n);
        let max = self.k() as u32;
        let powers: Vec<BigRational> = (0..=max)
            .map(|e| BigRational::from_integer(Pow::pow(&base, e)))
            .collect();
        let d = self.dimension();
        RationalMatrix::from_fn(d, d, |a, b| powers[self.join_blocks[a][b] as usize].clone())
    }
}

/// `G_kn(p, q) = n^{|p ∨ q|}` indexed by `NC(k)`.
pub fn gram_matrix(k: usize, n: u64) -> Result<RationalMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension n must be positive".into()));
    }
    Ok(GramStructure::new(k)?.gram(n))
}

/// `W_kn = G_kn⁻¹`. Fails with a singular-matrix error where `G_kn` is not
/// invertible, which happens for some `n < 4`.
pub fn weingarten_matrix(k: usize, n: u64) -> Result<RationalMatrix> {
    exactla::inverse(&gram_matrix(k, n)?)
}

fn check_dimension(n: u64) -> Result<()> {
    if n < MIN_DIMENSION {
        return Err(Error::Domain(format!(
            "integrals need n >= {MIN_DIMENSION}, got {n}"
        )));
    }
    Ok(())
}

/// The integrand `u_{i1 j1} … u_{ik jk}` on `S_n^+`, with 1-based indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialSpec {
    n: u64,
    rows: Vec<usize>,
    cols: Vec<usize>,
}

impl MonomialSpec {
    pub fn new(n: u64, rows: Vec<usize>, cols: Vec<usize>) -> Result<Self> {
        check_dimension(n)?;
        if rows.is_empty() || rows.len() != cols.len() {
            return Err(Error::InvalidArgument(format!(
                "row and column multi-indices must have the same positive length, got {} and {}",
                rows.len(),
                cols.len()
            )));
        }
        if let Some(bad) = rows
            .iter()
            .chain(&cols)
            .find(|&&x| x == 0 || x as u64 > n)
        {
            return Err(Error::InvalidArgument(format!(
                "index {bad} outside 1..={n}"
            )));
        }
        Ok(MonomialSpec { n, rows, cols })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn cols(&self) -> &[usize] {
        &self.cols
    }
}

/// Haar integral of a monomial, evaluated with a precomputed Weingarten
/// matrix of the right order and dimension.
pub fn monomial_integral_with(
    family: &PartitionFamily,
    weingarten: &RationalMatrix,
    m: &MonomialSpec,
) -> Result<BigRational> {
    if family.k() != m.k() || weingarten.rows() != family.len() {
        return Err(Error::DimensionMismatch(format!(
            "order-{} monomial against an order-{} Weingarten matrix",
            m.k(),
            family.k()
        )));
    }
    let on_rows = supporting(family, m.rows())?;
    let on_cols = supporting(family, m.cols())?;
    let mut total = BigRational::zero();
    for &a in &on_rows {
        for &b in &on_cols {
            total += &weingarten[(a, b)];
        }
    }
    Ok(total)
}

fn supporting(family: &PartitionFamily, index: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (a, p) in family.iter().enumerate() {
        if p.delta(index)? {
            out.push(a);
        }
    }
    Ok(out)
}

/// `∫ u_{i1 j1} … u_{ik jk} = Σ_{p,q ∈ NC(k)} δ(p, i) δ(q, j) W_kn(p, q)`.
pub fn monomial_integral(m: &MonomialSpec) -> Result<BigRational> {
    let structure = GramStructure::new(m.k())?;
    let w = exactla::inverse(&structure.gram(m.n()))?;
    monomial_integral_with(structure.family(), &w, m)
}

/// Moment `∫ (u_11 + … + u_ss)^k` on `S_n^+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentQuery {
    pub n: u64,
    pub s: u64,
    pub k: usize,
}

impl MomentQuery {
    pub fn new(n: u64, s: u64, k: usize) -> Result<Self> {
        check_dimension(n)?;
        if s == 0 || s > n {
            return Err(Error::Domain(format!("truncation s must lie in 1..={n}, got {s}")));
        }
        if k == 0 {
            return Err(Error::InvalidArgument("moment order k must be positive".into()));
        }
        Ok(MomentQuery { n, s, k })
    }
}

/// `Tr(G_kn⁻¹ G_ks)` through a single fraction-free solve with `Catalan(k)`
/// right-hand sides.
pub fn truncated_moment(q: &MomentQuery) -> Result<BigRational> {
    truncated_moment_with(&GramStructure::new(q.k)?, q)
}

pub fn truncated_moment_with(structure: &GramStructure, q: &MomentQuery) -> Result<BigRational> {
    if structure.k() != q.k {
        return Err(Error::DimensionMismatch(format!(
            "order-{} query against order-{} structure",
            q.k,
            structure.k()
        )));
    }
    let gn = structure.gram(q.n);
    let gs = structure.gram(q.s);
    Ok(exactla::solve_fraction_free(&gn, &gs)?.trace())
}

/// Closed forms for `k ≤ 4`, as rational functions of `n` and `s`.
pub fn closed_form_moment(q: &MomentQuery) -> Result<BigRational> {
    closed_form_moment_at(
        &BigRational::from_integer(q.n.into()),
        &BigRational::from_integer(q.s.into()),
        q.k,
    )
}

/// Evaluates the `k ≤ 4` closed forms at arbitrary rational `n` and `s`.
pub fn closed_form_moment_at(n: &BigRational, s: &BigRational, k: usize) -> Result<BigRational> {
    let c = |v: i64| BigRational::from_integer(v.into());
    let (num, den) = match k {
        1 => (BigRational::one(), BigRational::one()),
        2 => (n + s - c(2), n - c(1)),
        3 => (
            n * n + c(3) * (s - c(2)) * n + (s * s - c(9) * s + c(10)),
            (n - c(1)) * (n - c(2)),
        ),
        4 => (
            quartic_numerator(n, s),
            (n - c(1)) * (n - c(2)) * (n * n - c(3) * n + c(1)),
        ),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "closed forms exist for k in 1..=4, got {k}"
            )))
        }
    };
    if n.is_zero() || den.is_zero() {
        return Err(Error::Domain(format!(
            "closed form for k = {k} has a vanishing denominator at n = {n}"
        )));
    }
    Ok(s / n * num / den)
}

/// The degree-4 polynomial in the numerator of the fourth moment.
pub fn quartic_numerator(n: &BigRational, s: &BigRational) -> BigRational {
    let c = |v: i64| BigRational::from_integer(v.into());
    let s2 = s * s;
    let s3 = &s2 * s;
    let n2 = n * n;
    let n3 = &n2 * n;
    let n4 = &n3 * n;
    n4 + (c(6) * s - c(12)) * n3
        + (c(6) * &s2 - c(46) * s + c(52)) * n2
        + (s3 - c(26) * &s2 + c(104) * s - c(88)) * n
        + (c(12) * s2 - c(38) * s + c(28))
}

/// `Σ_{i ∈ {1..n}^k} δ(p, i) δ(q, i)` by exhaustive enumeration.
pub fn gram_bruteforce(p: &Partition, q: &Partition, n: u64) -> Result<u64> {
    if p.k() != q.k() {
        return Err(Error::InvalidArgument("partitions of different sizes".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("dimension n must be positive".into()));
    }
    let k = p.k();
    let points = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(n));
    match points {
        Some(total) if total <= BRUTEFORCE_LIMIT => {}
        _ => {
            return Err(Error::Resource(format!(
                "{n}^{k} multi-indices exceed the limit {BRUTEFORCE_LIMIT}"
            )))
        }
    }
    let mut index = vec![1usize; k];
    let mut count = 0u64;
    loop {
        if p.delta(&index)? && q.delta(&index)? {
            count += 1;
        }
        // Odometer increment.
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(count);
            }
            if (index[pos] as u64) < n {
                index[pos] += 1;
                break;
            }
            index[pos] = 1;
            pos += 1;
        }
    }
}

/// Finds `perm` with `reference(i, j) = computed(perm[i], perm[j])` for all
/// `i, j`.
///
/// Candidates are restricted to indices whose diagonal entry and sorted row
/// agree, then a backtracking search checks every entry against the
/// assignments made so far.
pub fn match_paper_matrix(
    computed: &RationalMatrix,
    reference: &RationalMatrix,
) -> Result<Vec<usize>> {
    if !computed.is_square() || computed.rows() != reference.rows() || !reference.is_square() {
        return Err(Error::Mismatch(format!(
            "shapes {}x{} and {}x{} cannot match",
            computed.rows(),
            computed.cols(),
            reference.rows(),
            reference.cols()
        )));
    }
    let d = computed.rows();
    let signature = |m: &RationalMatrix, i: usize| {
        let mut row = m.row(i).to_vec();
        row.sort();
        (m[(i, i)].clone(), row)
    };
    let comp_sig: Vec<_> = (0..d).map(|i| signature(computed, i)).collect();
    let candidates: Vec<Vec<usize>> = (0..d)
        .map(|i| {
            let sig = signature(reference, i);
            (0..d).filter(|&c| comp_sig[c] == sig).collect()
        })
        .collect();
    if let Some(i) = candidates.iter().position(Vec::is_empty) {
        return Err(Error::Mismatch(format!(
            "reference row {} has no computed row with the same entries",
            i + 1
        )));
    }

    fn search(
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut [bool],
        candidates: &[Vec<usize>],
        computed: &RationalMatrix,
        reference: &RationalMatrix,
    ) -> bool {
        if i == candidates.len() {
            return true;
        }
        for &c in &candidates[i] {
            if used[c] {
                continue;
            }
            let consistent = (0..i).all(|j| {
                computed[(c, perm[j])] == reference[(i, j)]
                    && computed[(perm[j], c)] == reference[(j, i)]
            });
            if !consistent {
                continue;
            }
            used[c] = true;
            perm.push(c);
            if search(i + 1, perm, used, candidates, computed, reference) {
                return true;
            }
            perm.pop();
            used[c] = false;
        }
        false
    }

    let mut perm = Vec::with_capacity(d);
    let mut used = vec![false; d];
    if search(0, &mut perm, &mut used, &candidates, computed, reference) {
        Ok(perm)
    } else {
        Err(Error::Mismatch(
            "no simultaneous row/column permutation carries one matrix onto the other".into(),
        ))
    }
}
