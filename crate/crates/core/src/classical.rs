//! Law of `u_11 + … + u_ss` on the classical symmetric group `S_n`.
//!
//! There `u_ij` is the indicator of `σ(j) = i`, so the diagonal sum counts the
//! fixed points of a uniform random permutation that lie in `{1, …, s}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactla::{format_rational, parse_rational, BigRational};

/// Largest `n` accepted by the exact law formulas.
pub const MAX_LAW_N: u64 = 512;

/// Largest `n` accepted by [`brute_force_law`] (`9! = 362880` permutations).
pub const MAX_BRUTE_FORCE_N: u64 = 9;

/// A finitely supported measure on the integers with exact weights.
///
/// Zero weights are never stored. `signed` records which contract applies:
/// unsigned measures have nonnegative weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscreteMeasure {
    atoms: BTreeMap<i64, BigRational>,
    signed: bool,
}

impl DiscreteMeasure {
    pub fn zero() -> Self {
        DiscreteMeasure {
            atoms: BTreeMap::new(),
            signed: false,
        }
    }

    pub fn dirac(at: i64) -> Self {
        Self::dirac_weighted(at, BigRational::one())
    }

    fn dirac_weighted(at: i64, w: BigRational) -> Self {
        let mut m = Self::zero();
        m.add_atom(at, w);
        m
    }

    /// Builds a measure from `(point, weight)` pairs, merging repeated points.
    pub fn from_atoms(atoms: impl IntoIterator<Item = (i64, BigRational)>) -> Self {
        let mut m = Self::zero();
        for (x, w) in atoms {
            m.add_atom(x, w);
        }
        m
    }

    /// As [`from_atoms`](Self::from_atoms) but requires a probability measure.
    pub fn probability(atoms: impl IntoIterator<Item = (i64, BigRational)>) -> Result<Self> {
        let m = Self::from_atoms(atoms);
        if m.signed {
            return Err(Error::InvalidArgument("negative weight in a probability measure".into()));
        }
        if m.total_mass() != BigRational::one() {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {}, not 1",
                format_rational(&m.total_mass())
            )));
        }
        Ok(m)
    }

    fn add_atom(&mut self, at: i64, w: BigRational) {
        if w.is_zero() {
            return;
        }
        let slot = self.atoms.entry(at).or_insert_with(BigRational::zero);
        *slot += w;
        if slot.is_zero() {
            self.atoms.remove(&at);
        }
        self.signed = self.atoms.values().any(Signed::is_negative);
    }

    pub fn atoms(&self) -> &BTreeMap<i64, BigRational> {
        &self.atoms
    }

    pub fn is_signed(&self) -> bool {
        self.signed
    }

    pub fn weight(&self, at: i64) -> BigRational {
        self.atoms.get(&at).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn total_mass(&self) -> BigRational {
        self.atoms.values().fold(BigRational::zero(), |a, w| a + w)
    }

    pub fn is_probability(&self) -> bool {
        !self.signed && self.total_mass().is_one()
    }

    /// `Σ_x w_x x^k`, with `0^0 = 1`.
    pub fn moment(&self, k: u32) -> BigRational {
        self.atoms.iter().fold(BigRational::zero(), |acc, (&x, w)| {
            acc + w * BigRational::from_integer(Pow::pow(BigInt::from(x), k))
        })
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        Self::from_atoms(self.atoms.iter().map(|(&x, w)| (x, w * factor)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_atoms(
            self.atoms
                .iter()
                .chain(other.atoms.iter())
                .map(|(&x, w)| (x, w.clone())),
        )
    }

    /// Total variation distance `½ Σ_x |a_x − b_x|`.
    pub fn total_variation(&self, other: &Self) -> BigRational {
        let diff = self.add(&other.scale(&-BigRational::one()));
        diff.atoms.values().fold(BigRational::zero(), |a, w| a + w.abs()) / BigRational::from_integer(2.into())
    }
}

impl Serialize for DiscreteMeasure {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            atoms: BTreeMap<i64, String>,
            signed: bool,
        }
        Wire {
            atoms: self.atoms.iter().map(|(&x, w)| (x, format_rational(w))).collect(),
            signed: self.signed,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiscreteMeasure {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Wire {
            atoms: BTreeMap<i64, String>,
            signed: bool,
        }
        let wire = Wire::deserialize(d)?;
        let mut atoms = Vec::with_capacity(wire.atoms.len());
        for (x, w) in wire.atoms {
            atoms.push((x, parse_rational(&w).map_err(D::Error::custom)?));
        }
        let m = DiscreteMeasure::from_atoms(atoms);
        if m.signed && !wire.signed {
            return Err(D::Error::custom("negative weight in an unsigned measure"));
        }
        Ok(m)
    }
}

/// Convolution on integer support.
pub fn signed_convolve(a: &DiscreteMeasure, b: &DiscreteMeasure) -> DiscreteMeasure {
    let mut out = DiscreteMeasure::zero();
    for (&x, wa) in &a.atoms {
        for (&y, wb) in &b.atoms {
            out.add_atom(x + y, wa * wb);
        }
    }
    out
}

/// `a^{*p}` by repeated convolution; `a^{*0} = δ_0`.
pub fn convolve_power(a: &DiscreteMeasure, p: u32) -> DiscreteMeasure {
    (0..p).fold(DiscreteMeasure::dirac(0), |acc, _| signed_convolve(&acc, a))
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn check_ns(n: u64, s: u64) -> Result<()> {
    if n == 0 || n > MAX_LAW_N {
        return Err(Error::InvalidArgument(format!(
            "n must lie in 1..={MAX_LAW_N}, got {n}"
        )));
    }
    if s == 0 || s > n {
        return Err(Error::InvalidArgument(format!(
            "s must lie in 1..={n}, got {s}"
        )));
    }
    Ok(())
}

/// `m_f` for `f = 0..=s`: the number of permutations of `{1..n}` with exactly
/// `f` fixed points in `{1..s}`, by inclusion–exclusion
/// `m_f = C(s,f) Σ_{k=0}^{s−f} (−1)^k C(s−f,k) (n−f−k)!`.
pub fn fixed_point_counts(n: u64, s: u64) -> Result<Vec<BigInt>> {
    check_ns(n, s)?;
    let facts: Vec<BigInt> = std::iter::once(BigInt::one())
        .chain((1..=n).scan(BigInt::one(), |acc, i| {
            *acc *= i;
            Some(acc.clone())
        }))
        .collect();
    Ok((0..=s)
        .map(|f| {
            let inner = (0..=s - f).fold(BigInt::zero(), |acc, k| {
                let term = binomial(s - f, k) * &facts[(n - f - k) as usize];
                if k % 2 == 0 {
                    acc + term
                } else {
                    acc - term
                }
            });
            binomial(s, f) * inner
        })
        .collect())
}

/// `(s!/n!) Σ_{p=0}^{s} ((n−p)!/(s−p)!) · (δ_1 − δ_0)^{*p} / p!`.
pub fn sn_law_convolution_form(n: u64, s: u64) -> Result<DiscreteMeasure> {
    check_ns(n, s)?;
    let step = DiscreteMeasure::from_atoms([(1, BigRational::one()), (0, -BigRational::one())]);
    let lead = BigRational::new(factorial(s), factorial(n));
    let mut power = DiscreteMeasure::dirac(0);
    let mut total = DiscreteMeasure::zero();
    for p in 0..=s {
        if p > 0 {
            power = signed_convolve(&power, &step);
        }
        let c = &lead
            * BigRational::new(factorial(n - p), factorial(s - p) * factorial(p));
        total = total.add(&power.scale(&c));
    }
    Ok(total)
}

/// The law `Σ_f (m_f / n!) δ_f`, checked atom for atom against
/// [`sn_law_convolution_form`].
pub fn sn_law(n: u64, s: u64) -> Result<DiscreteMeasure> {
    let counts = fixed_point_counts(n, s)?;
    let nf = factorial(n);
    let law = DiscreteMeasure::from_atoms(
        counts
            .into_iter()
            .enumerate()
            .map(|(f, m)| (f as i64, BigRational::new(m, nf.clone()))),
    );
    if law != sn_law_convolution_form(n, s)? {
        return Err(Error::Inconsistent(format!(
            "fixed-point counts and convolution form differ at n = {n}, s = {s}"
        )));
    }
    Ok(law)
}

/// `(1/n!) Σ_f m_f f^k`.
pub fn sn_moment(n: u64, s: u64, k: u32) -> Result<BigRational> {
    let counts = fixed_point_counts(n, s)?;
    let total = counts.iter().enumerate().fold(BigInt::zero(), |acc, (f, m)| {
        acc + m * Pow::pow(BigInt::from(f), k)
    });
    Ok(BigRational::new(total, factorial(n)))
}

/// Histogram of fixed points in `{1..s}` over all `n!` permutations.
pub fn brute_force_law(n: u64, s: u64) -> Result<DiscreteMeasure> {
    if n > MAX_BRUTE_FORCE_N {
        return Err(Error::Resource(format!(
            "{n}! permutations exceed the enumeration limit n <= {MAX_BRUTE_FORCE_N}"
        )));
    }
    check_ns(n, s)?;
    let n = n as usize;
    let s = s as usize;
    let mut hist = vec![0u64; s + 1];
    let mut perm: Vec<usize> = (0..n).collect();
    let fixed = |perm: &[usize]| perm[..s].iter().enumerate().filter(|(i, &v)| *i == v).count();
    hist[fixed(&perm)] += 1;
    // Heap's algorithm, iterative form.
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            hist[fixed(&perm)] += 1;
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    let total: u64 = hist.iter().sum();
    Ok(DiscreteMeasure::from_atoms(
        hist.into_iter()
            .enumerate()
            .map(|(f, h)| (f as i64, BigRational::new(h.into(), total.into()))),
    ))
}

/// `δ_0 + (s/n)(δ_1 − δ_0)`: the law of a projection of trace `s/n`.
pub fn projection_law(n: u64, s: u64) -> Result<DiscreteMeasure> {
    check_ns(n, s)?;
    let t = BigRational::new(s.into(), n.into());
    DiscreteMeasure::probability([(0, BigRational::one() - &t), (1, t)])
}
