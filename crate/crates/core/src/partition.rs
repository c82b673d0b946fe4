//! Partitions, dominance orders, compositions, and block averaging.
//!
//! A [`Partition`] is kept canonical: non-increasing parts, no trailing
//! zeros. Operations that depend on the ambient rank pad with zeros on
//! demand. Dominance comparisons are exact: the extended (unequal-weight)
//! order is decided by cross-multiplied prefix sums in 128-bit integer
//! arithmetic, never by floating point.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};

/// A finite non-increasing sequence of nonnegative integers. The empty
/// sequence is the zero partition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Builds a partition from explicit parts. Trailing zeros are stripped;
    /// input that increases anywhere is rejected rather than sorted.
    pub fn new(parts: impl Into<Vec<u64>>) -> Result<Self> {
        let parts = parts.into();
        if let Some(i) = (1..parts.len()).find(|&i| parts[i] > parts[i - 1]) {
            return Err(Error::NonMonotone(i));
        }
        Ok(Self::new_unchecked(parts))
    }

    /// Canonicalizes parts already known to be non-increasing.
    pub(crate) fn new_unchecked(mut parts: Vec<u64>) -> Self {
        debug_assert!((1..parts.len()).all(|i| parts[i] <= parts[i - 1]));
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Partition { parts }
    }

    pub fn zero() -> Self {
        Partition::default()
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of non-zero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// Synonym for [`Partition::is_zero`].
    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sum of the parts.
    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// The i-th part (0-indexed); zero beyond the stored length.
    pub fn part(&self, i: usize) -> u64 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The parts padded with zeros to at least `len` entries.
    pub fn padded(&self, len: usize) -> Vec<u64> {
        let mut out = self.parts.clone();
        if out.len() < len {
            out.resize(len, 0);
        }
        out
    }

    /// Componentwise containment: does `inner` fit inside `self`?
    pub fn contains(&self, inner: &Partition) -> bool {
        inner
            .parts
            .iter()
            .enumerate()
            .all(|(i, &p)| p <= self.part(i))
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Partition) -> Partition {
        let len = self.len().max(other.len());
        Partition::new_unchecked((0..len).map(|i| self.part(i) + other.part(i)).collect())
    }

    /// Componentwise multiple k·a.
    pub fn scale(&self, k: u64) -> Partition {
        Partition::new_unchecked(
            self.parts
                .iter()
                .map(|&p| p.checked_mul(k).expect("partition scale overflows u64"))
                .collect(),
        )
    }

    /// Componentwise difference as a raw length-`len` sequence; `None` when
    /// any entry would go negative. The result need not be monotone.
    pub fn sub_sequence(&self, other: &Partition, len: usize) -> Option<Vec<u64>> {
        if self.len() > len || other.len() > len {
            return None;
        }
        (0..len)
            .map(|i| self.part(i).checked_sub(other.part(i)))
            .collect()
    }

    /// Componentwise difference when the result is itself a partition.
    pub fn sub_partition(&self, other: &Partition, len: usize) -> Option<Partition> {
        Partition::new(self.sub_sequence(other, len)?).ok()
    }
}

impl fmt::Display for Partition {
    /// Literal format: comma-separated parts, `0` for the zero partition.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
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

    fn from_str(text: &str) -> Result<Self> {
        if text == "0" {
            return Ok(Partition::zero());
        }
        if text.is_empty() {
            return Err(Error::Parse {
                pos: 0,
                msg: "empty partition literal".into(),
            });
        }
        let mut parts = Vec::new();
        let mut pos = 0usize;
        for token in text.split(',') {
            if token.is_empty() {
                return Err(Error::Parse {
                    pos,
                    msg: "empty part".into(),
                });
            }
            if !token.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::Parse {
                    pos,
                    msg: format!("invalid part {token:?}"),
                });
            }
            if token.len() > 1 && token.starts_with('0') {
                return Err(Error::Parse {
                    pos,
                    msg: "leading zero in part".into(),
                });
            }
            let value: u64 = token.parse().map_err(|_| Error::Parse {
                pos,
                msg: "part out of range".into(),
            })?;
            parts.push(value);
            pos += token.len() + 1;
        }
        if parts[0] == 0 {
            return Err(Error::Parse {
                pos: 0,
                msg: "leading part must be positive (use `0` for the zero partition)".into(),
            });
        }
        Partition::new(parts)
    }
}

/// Ambient rank `d` together with `mu = lcm(1..=d)`, the scaling that makes
/// every block average of a scaled partition integral.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct RankContext {
    rank: usize,
    mu: u64,
}

impl RankContext {
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::ZeroRank);
        }
        let mut mu: u64 = 1;
        for k in 2..=(rank as u64) {
            let g = mu.gcd(&k);
            mu = (mu / g).checked_mul(k).ok_or(Error::RankTooLarge(rank))?;
        }
        Ok(RankContext { rank, mu })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mu(&self) -> u64 {
        self.mu
    }

    pub(crate) fn check_len(&self, p: &Partition) -> Result<()> {
        if p.len() > self.rank {
            return Err(Error::LengthExceedsRank {
                partition: p.clone(),
                len: p.len(),
                rank: self.rank,
            });
        }
        Ok(())
    }
}

/// An ordered sequence of positive block lengths.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Composition {
    blocks: Vec<usize>,
}

impl Composition {
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn total(&self) -> usize {
        self.blocks.iter().sum()
    }
}

impl fmt::Display for Composition {
    /// Literal format: `[2,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        let mut first = true;
        for b in &self.blocks {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{b}")?;
            first = false;
        }
        f.write_str("]")
    }
}

/// All 2^(total-1) compositions of `total`, ordered lexicographically by
/// blocks so every report indexed by compositions is deterministic.
pub fn compositions(total: usize) -> Vec<Composition> {
    fn rec(remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Composition>) {
        if remaining == 0 {
            out.push(Composition {
                blocks: prefix.clone(),
            });
            return;
        }
        for first in 1..=remaining {
            prefix.push(first);
            rec(remaining - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 {
        rec(total, &mut Vec::new(), &mut out);
    }
    out
}

/// Exact nonnegative rationals produced by block averaging.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalSequence {
    entries: Vec<Ratio<u64>>,
}

impl RationalSequence {
    pub fn entries(&self) -> &[Ratio<u64>] {
        &self.entries
    }

    pub fn weight(&self) -> Ratio<u64> {
        self.entries
            .iter()
            .fold(Ratio::from_integer(0), |acc, r| acc + r)
    }

    /// The sequence as an integral partition, when it is one.
    pub fn as_partition(&self) -> Option<Partition> {
        let parts: Option<Vec<u64>> = self
            .entries
            .iter()
            .map(|r| r.is_integer().then(|| r.to_integer()))
            .collect();
        Partition::new(parts?).ok()
    }
}

/// Plain sequence concatenation; the result need not be monotone.
pub fn concat(left: &[u64], right: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(left.len() + right.len());
    out.extend_from_slice(left);
    out.extend_from_slice(right);
    out
}

/// Splits `a` (padded to `rank`) into consecutive blocks of the given
/// shape and replaces every block by its exact average.
pub fn block_average(shape: &Composition, a: &Partition, rank: usize) -> Result<RationalSequence> {
    if shape.total() != rank {
        return Err(Error::LengthMismatch {
            got: shape.total(),
            want: rank,
        });
    }
    if a.len() > rank {
        return Err(Error::LengthExceedsRank {
            partition: a.clone(),
            len: a.len(),
            rank,
        });
    }
    let padded = a.padded(rank);
    let mut entries = Vec::with_capacity(rank);
    let mut offset = 0;
    for &block in shape.blocks() {
        let sum: u64 = padded[offset..offset + block].iter().sum();
        let avg = Ratio::new(sum, block as u64);
        entries.extend(std::iter::repeat_n(avg, block));
        offset += block;
    }
    Ok(RationalSequence { entries })
}

/// Dominance between equal-weight partitions padded to `rank`: every
/// proper prefix sum of `b` is at most the matching prefix sum of `a`.
pub fn dominated_eq(b: &Partition, a: &Partition, rank: usize) -> Result<bool> {
    for p in [b, a] {
        if p.len() > rank {
            return Err(Error::LengthExceedsRank {
                partition: p.clone(),
                len: p.len(),
                rank,
            });
        }
    }
    let (wb, wa) = (b.weight(), a.weight());
    if wb != wa {
        return Err(Error::WeightMismatch {
            left: wb,
            right: wa,
        });
    }
    let mut sb = 0u128;
    let mut sa = 0u128;
    for k in 0..rank.saturating_sub(1) {
        sb += b.part(k) as u128;
        sa += a.part(k) as u128;
        if sb > sa {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cross-scaled prefix test of a raw nonnegative sequence against a
/// non-zero partition: |a|·seq ⪯ |seq|·a. The sequence need not be
/// monotone; the all-zero sequence passes (it plays the zero partition).
pub(crate) fn sequence_dominated(seq: &[u64], a: &Partition, rank: usize) -> bool {
    let wa = a.weight() as u128;
    let ws: u128 = seq.iter().map(|&x| x as u128).sum();
    if ws == 0 {
        return true;
    }
    let mut ss = 0u128;
    let mut sa = 0u128;
    for k in 0..rank.saturating_sub(1) {
        ss += seq.get(k).copied().unwrap_or(0) as u128;
        sa += a.part(k) as u128;
        let lhs = wa.checked_mul(ss).expect("dominance comparison overflows");
        let rhs = ws.checked_mul(sa).expect("dominance comparison overflows");
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Extended dominance on non-zero partitions of not necessarily equal
/// weight: b ⪯ a iff the scaled partitions satisfy |a|·b ⪯ |b|·a.
pub fn dominated_ext(b: &Partition, a: &Partition, rank: usize) -> Result<bool> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPartition);
    }
    for p in [b, a] {
        if p.len() > rank {
            return Err(Error::LengthExceedsRank {
                partition: p.clone(),
                len: p.len(),
                rank,
            });
        }
    }
    Ok(sequence_dominated(b.parts(), a, rank))
}

/// Membership of `b` in the set of non-zero partitions extended-dominated
/// by `a`. The zero partition is never a member.
pub fn in_dominance_cone(b: &Partition, a: &Partition, rank: usize) -> Result<bool> {
    if a.is_zero() {
        return Err(Error::ZeroPartition);
    }
    if b.is_zero() {
        return Ok(false);
    }
    dominated_ext(b, a, rank)
}

/// The family { v(L, mu·a) : L a composition of the rank } as integral
/// partitions, de-duplicated and sorted. Every element has weight mu·|a|
/// and is extended-dominated by `a`.
pub fn generators(a: &Partition, ctx: &RankContext) -> Result<Vec<Partition>> {
    if a.is_zero() {
        return Err(Error::ZeroPartition);
    }
    ctx.check_len(a)?;
    let scaled = a.scale(ctx.mu());
    let mut out = BTreeSet::new();
    for shape in compositions(ctx.rank()) {
        let v = block_average(&shape, &scaled, ctx.rank())?
            .as_partition()
            .expect("block averages of a mu-scaled partition are integral partitions");
        out.insert(v);
    }
    Ok(out.into_iter().collect())
}

/// Strict-descent signature of `a` padded to `rank`: the positions
/// 0 = s_0 < s_1 < ... < s_m = rank at which the padded parts strictly
/// drop, together with the part value on each block.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FlagSignature {
    positions: Vec<usize>,
    exponents: Vec<u64>,
}

impl FlagSignature {
    /// s_0 = 0 up to s_m = rank.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// The part value on each block (s_{i-1}, s_i]; strictly decreasing.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    /// Rebuilds the partition: constant on each block.
    pub fn reconstruct(&self) -> Partition {
        let rank = *self.positions.last().unwrap_or(&0);
        let mut parts = vec![0u64; rank];
        for i in 1..self.positions.len() {
            for slot in parts
                .iter_mut()
                .take(self.positions[i])
                .skip(self.positions[i - 1])
            {
                *slot = self.exponents[i - 1];
            }
        }
        Partition::new_unchecked(parts)
    }
}

pub fn flag_signature(a: &Partition, rank: usize) -> Result<FlagSignature> {
    if a.len() > rank {
        return Err(Error::LengthExceedsRank {
            partition: a.clone(),
            len: a.len(),
            rank,
        });
    }
    let padded = a.padded(rank);
    let mut positions = vec![0];
    for j in 1..rank {
        if padded[j - 1] > padded[j] {
            positions.push(j);
        }
    }
    positions.push(rank);
    let exponents = positions[1..].iter().map(|&s| padded[s - 1]).collect();
    Ok(FlagSignature {
        positions,
        exponents,
    })
}

/// All partitions of `weight` with at most `max_len` parts, in descending
/// lexicographic order.
pub fn partitions_of_weight(weight: u64, max_len: usize) -> Vec<Partition> {
    fn rec(weight: u64, max_len: usize, cap: u64, prefix: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if weight == 0 {
            out.push(Partition::new_unchecked(prefix.clone()));
            return;
        }
        if max_len == 0 {
            return;
        }
        let hi = cap.min(weight);
        let lo = weight.div_ceil(max_len as u64);
        if lo > hi {
            return;
        }
        for p in (lo..=hi).rev() {
            prefix.push(p);
            rec(weight - p, max_len - 1, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(weight, max_len, weight, &mut Vec::new(), &mut out);
    out
}
