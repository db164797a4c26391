//! Set partitions of `{1, …, k}` and the non-crossing ones among them.
//!
//! A [`Partition`] is stored as its restricted-growth string: position `s`
//! (0-based) holds the label of the block containing `s + 1`, the first label
//! is 0, and every label is at most one more than the largest label before
//! it. This form is unique per partition, hashes cheaply and gives a total
//! order; every family in this crate is listed in increasing lexicographic
//! order of these strings, which fixes matrix row and column order downstream.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `k` accepted by [`enumerate`]. `Bell(12)` is about four million.
pub const MAX_ENUMERATION_K: usize = 12;

/// A set partition of `{1, …, k}` in restricted-growth form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Partition {
    labels: Vec<u8>,
}

impl Partition {
    /// Builds a partition from an already canonical growth string.
    pub fn from_growth(labels: Vec<u8>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("partition of an empty set".into()));
        }
        let mut next = 0u8;
        for (s, &l) in labels.iter().enumerate() {
            if l > next {
                return Err(Error::InvalidArgument(format!(
                    "label {l} at position {} breaks restricted growth",
                    s + 1
                )));
            }
            if l == next {
                next = next.checked_add(1).ok_or_else(|| {
                    Error::InvalidArgument("too many blocks for a u8 label".into())
                })?;
            }
        }
        Ok(Partition { labels })
    }

    /// Canonicalizes an arbitrary block labelling: positions with equal labels
    /// share a block.
    pub fn from_labels<T: Eq + std::hash::Hash + Copy>(labels: &[T]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidArgument("partition of an empty set".into()));
        }
        if labels.len() > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!(
                "partition size {} exceeds {}",
                labels.len(),
                u8::MAX
            )));
        }
        let mut seen: HashMap<T, u8> = HashMap::new();
        let out = labels
            .iter()
            .map(|l| {
                let fresh = seen.len() as u8;
                *seen.entry(*l).or_insert(fresh)
            })
            .collect();
        Ok(Partition { labels: out })
    }

    /// Builds a partition from blocks of 1-based elements.
    pub fn from_blocks(blocks: &[Vec<usize>]) -> Result<Self> {
        let k: usize = blocks.iter().map(Vec::len).sum();
        let mut labels = vec![usize::MAX; k];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidArgument("empty block".into()));
            }
            for &e in block {
                if e == 0 || e > k {
                    return Err(Error::InvalidArgument(format!(
                        "element {e} outside 1..={k}"
                    )));
                }
                if labels[e - 1] != usize::MAX {
                    return Err(Error::InvalidArgument(format!("element {e} repeated")));
                }
                labels[e - 1] = b;
            }
        }
        Partition::from_labels(&labels)
    }

    /// The partition with a single block.
    pub fn one_block(k: usize) -> Self {
        assert!(k >= 1);
        Partition { labels: vec![0; k] }
    }

    /// The partition into `k` singletons.
    pub fn discrete(k: usize) -> Self {
        assert!((1..=u8::MAX as usize).contains(&k));
        Partition {
            labels: (0..k as u8).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        // Restricted growth: the largest label is block_count - 1.
        self.labels.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Blocks as sorted lists of 1-based elements, ordered by their minima.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.block_count()];
        for (s, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(s + 1);
        }
        blocks
    }

    /// Block sizes in block order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.block_count()];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// True iff no `a < b < c < d` has `a, c` in one block and `b, d` in another.
    pub fn is_noncrossing(&self) -> bool {
        let mut last: Vec<usize> = Vec::with_capacity(self.k());
        let mut first: Vec<usize> = Vec::with_capacity(self.k());
        for (s, &l) in self.labels.iter().enumerate() {
            let l = l as usize;
            if l == last.len() {
                last.push(s);
                first.push(s);
                continue;
            }
            if !closes_without_crossing(&self.labels, &first, last[l], s) {
                return false;
            }
            last[l] = s;
        }
        true
    }

    /// Join in the lattice of all partitions: the finest partition coarser
    /// than both arguments. The result may be crossing.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        if self.k() != other.k() {
            return Err(Error::InvalidArgument(format!(
                "join of partitions of different sizes {} and {}",
                self.k(),
                other.k()
            )));
        }
        let k = self.k();
        let mut parent: Vec<usize> = (0..k).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in [self, other] {
            let mut head = vec![usize::MAX; p.block_count()];
            for (s, &l) in p.labels.iter().enumerate() {
                let h = &mut head[l as usize];
                if *h == usize::MAX {
                    *h = s;
                } else {
                    let (a, b) = (find(&mut parent, *h), find(&mut parent, s));
                    if a != b {
                        // Smaller root wins so roots are block minima.
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let roots: Vec<usize> = (0..k).map(|s| find(&mut parent, s)).collect();
        Partition::from_labels(&roots)
    }

    /// 1 iff every block of the partition is constant on the multi-index.
    pub fn delta(&self, index: &[usize]) -> Result<bool> {
        if index.len() != self.k() {
            return Err(Error::InvalidArgument(format!(
                "multi-index of length {} for a partition of {}",
                index.len(),
                self.k()
            )));
        }
        let mut value = vec![None; self.block_count()];
        for (&l, &i) in self.labels.iter().zip(index) {
            match value[l as usize] {
                None => value[l as usize] = Some(i),
                Some(v) if v != i => return Ok(false),
                Some(_) => {}
            }
        }
        Ok(true)
    }

    /// `|p ∨ q| − (|p| + |q|) / 2` for non-crossing `p`, `q`.
    pub fn join_exponent(&self, other: &Partition) -> Result<Rational64> {
        if !self.is_noncrossing() || !other.is_noncrossing() {
            return Err(Error::InvalidArgument(
                "join exponent is only defined on non-crossing partitions".into(),
            ));
        }
        let j = self.join(other)?.block_count() as i64;
        Ok(Rational64::new(
            2 * j - self.block_count() as i64 - other.block_count() as i64,
            2,
        ))
    }
}

/// Whether position `s` may join the block whose latest element is `last`:
/// every position strictly between them must belong to a block opened after
/// `last`.
fn closes_without_crossing(labels: &[u8], first: &[usize], last: usize, s: usize) -> bool {
    labels[last + 1..s]
        .iter()
        .all(|&m| first[m as usize] > last)
}

impl TryFrom<Vec<u8>> for Partition {
    type Error = Error;
    fn try_from(labels: Vec<u8>) -> Result<Self> {
        Partition::from_growth(labels)
    }
}

impl From<Partition> for Vec<u8> {
    fn from(p: Partition) -> Vec<u8> {
        p.labels
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            f.write_str("{")?;
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({self})")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses block notation such as `{1,3}{2}`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed block notation {s:?}"));
        let mut blocks = Vec::new();
        let mut rest = s.trim();
        while !rest.is_empty() {
            let body = rest.strip_prefix('{').ok_or_else(bad)?;
            let end = body.find('}').ok_or_else(bad)?;
            let block = body[..end]
                .split(',')
                .map(|e| e.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = body[end + 1..].trim_start();
        }
        if blocks.is_empty() {
            return Err(bad());
        }
        Partition::from_blocks(&blocks)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionKind {
    NonCrossing,
    All,
}

/// The ordered list `NC(k)` or `P(k)` with a position index.
#[derive(Clone, Debug)]
pub struct PartitionFamily {
    k: usize,
    kind: PartitionKind,
    members: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl PartitionFamily {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn members(&self) -> &[Partition] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Partition> {
        self.members.iter()
    }
}

impl<'a> IntoIterator for &'a PartitionFamily {
    type Item = &'a Partition;
    type IntoIter = std::slice::Iter<'a, Partition>;
    fn into_iter(self) -> Self::IntoIter {
        self.members.iter()
    }
}

/// Lists every partition of `{1, …, k}` of the requested kind in increasing
/// lexicographic order of growth strings.
pub fn enumerate(k: usize, kind: PartitionKind) -> Result<PartitionFamily> {
    if k == 0 || k > MAX_ENUMERATION_K {
        return Err(Error::InvalidArgument(format!(
            "k must lie in 1..={MAX_ENUMERATION_K}, got {k}"
        )));
    }
    let mut members = Vec::new();
    let mut state = GrowthState {
        labels: Vec::with_capacity(k),
        first: Vec::with_capacity(k),
        last: Vec::with_capacity(k),
    };
    extend(k, kind, &mut state, &mut members);
    let index = members
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    Ok(PartitionFamily {
        k,
        kind,
        members,
        index,
    })
}

struct GrowthState {
    labels: Vec<u8>,
    first: Vec<usize>,
    last: Vec<usize>,
}

fn extend(k: usize, kind: PartitionKind, st: &mut GrowthState, out: &mut Vec<Partition>) {
    let s = st.labels.len();
    if s == k {
        out.push(Partition {
            labels: st.labels.clone(),
        });
        return;
    }
    let open = st.first.len();
    for l in 0..=open {
        if l == open {
            st.labels.push(l as u8);
            st.first.push(s);
            st.last.push(s);
            extend(k, kind, st, out);
            st.last.pop();
            st.first.pop();
            st.labels.pop();
        } else {
            let prev = st.last[l];
            if kind == PartitionKind::NonCrossing
                && !closes_without_crossing(&st.labels, &st.first, prev, s)
            {
                continue;
            }
            st.labels.push(l as u8);
            st.last[l] = s;
            extend(k, kind, st, out);
            st.last[l] = prev;
            st.labels.pop();
        }
    }
}
