//! Exact Littlewood-Richardson coefficients and rank-truncated tensor
//! arithmetic of Schur terms.
//!
//! A coefficient c^b_{a,c} counts the column-strict fillings of the skew
//! shape b/a with content c whose reverse reading word (rows top to bottom,
//! each row right to left) is a lattice word. The search places entries in
//! reverse reading order and prunes on column strictness and on lattice
//! prefix feasibility, so every leaf reached is a valid tableau. All
//! multiplicities are arbitrary-precision from the start.

use std::collections::BTreeMap;
use std::sync::RwLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::{dominated_ext, partitions_of_weight, Partition, RankContext};

/// Memo key for a coefficient. The two product factors are stored in a
/// fixed order since the coefficient is symmetric in them.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LrKey {
    inner: Partition,
    content: Partition,
    outer: Partition,
}

impl LrKey {
    pub fn new(a: &Partition, c: &Partition, b: &Partition) -> Self {
        let (inner, content) = if a <= c {
            (a.clone(), c.clone())
        } else {
            (c.clone(), a.clone())
        };
        LrKey {
            inner,
            content,
            outer: b.clone(),
        }
    }

    pub fn inner(&self) -> &Partition {
        &self.inner
    }

    pub fn content(&self) -> &Partition {
        &self.content
    }

    pub fn outer(&self) -> &Partition {
        &self.outer
    }
}

/// Shared coefficient cache. Concurrent reads are fine; inserts are
/// idempotent (a key always maps to the same value), so last-writer-wins
/// insertion is safe and results never depend on scheduling.
#[derive(Debug, Default)]
pub struct LrCache {
    map: RwLock<BTreeMap<LrKey, BigUint>>,
}

impl LrCache {
    pub fn new() -> Self {
        LrCache::default()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, key: &LrKey) -> Option<BigUint> {
        self.map.read().expect("lock poisoned").get(key).cloned()
    }

    pub fn insert(&self, key: LrKey, value: BigUint) {
        self.map.write().expect("lock poisoned").insert(key, value);
    }

    /// Snapshot of all records, sorted by key.
    pub fn entries(&self) -> Vec<(LrKey, BigUint)> {
        self.map
            .read()
            .expect("lock poisoned")
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect()
    }
}

struct FillSearch<'x> {
    inner: &'x Partition,
    content: &'x [u64],
    outer: &'x [u64],
    cells: &'x [(usize, usize)],
    grid: Vec<Vec<u32>>,
    counts: Vec<u64>,
    total: BigUint,
}

impl FillSearch<'_> {
    fn run(&mut self, idx: usize) {
        if idx == self.cells.len() {
            self.total += 1u32;
            return;
        }
        let (row, col) = self.cells[idx];
        // Upper bound from the right neighbour (already placed: rows fill
        // right to left), lower bound from the cell above. Skew columns are
        // contiguous, so the adjacent cell is the only column constraint.
        let hi = if ((col + 1) as u64) < self.outer[row] {
            self.grid[row][col + 1] as u64
        } else {
            self.content.len() as u64
        };
        let lo = if row > 0 && (col as u64) >= self.inner.part(row - 1) {
            self.grid[row - 1][col] as u64 + 1
        } else {
            1
        };
        for value in lo..=hi {
            let v = value as usize;
            if self.counts[v - 1] >= self.content[v - 1] {
                continue; // content exhausted
            }
            if v > 1 && self.counts[v - 1] >= self.counts[v - 2] {
                continue; // lattice prefix would fail
            }
            self.counts[v - 1] += 1;
            self.grid[row][col] = value as u32;
            self.run(idx + 1);
            self.counts[v - 1] -= 1;
        }
    }
}

/// The coefficient of `b` in the product of the Schur terms `a` and `c`.
/// Degenerate inputs (weight mismatch, `a` not contained in `b`) give zero.
pub fn lr_coefficient(a: &Partition, c: &Partition, b: &Partition) -> BigUint {
    if a.weight() + c.weight() != b.weight() || !b.contains(a) {
        return BigUint::zero();
    }
    // Skew cells in reverse reading order.
    let mut cells = Vec::with_capacity(c.weight() as usize);
    for row in 0..b.len() {
        let lo = a.part(row);
        let hi = b.parts()[row];
        for col in (lo..hi).rev() {
            cells.push((row, col as usize));
        }
    }
    if cells.is_empty() {
        return BigUint::one(); // b == a and c is zero: the empty filling
    }
    let mut search = FillSearch {
        inner: a,
        content: c.parts(),
        outer: b.parts(),
        cells: &cells,
        grid: b.parts().iter().map(|&w| vec![0; w as usize]).collect(),
        counts: vec![0; c.len()],
        total: BigUint::zero(),
    };
    search.run(0);
    search.total
}

/// Cache-backed coefficient lookup.
pub fn lr_coefficient_cached(
    cache: &LrCache,
    a: &Partition,
    c: &Partition,
    b: &Partition,
) -> BigUint {
    let key = LrKey::new(a, c, b);
    if let Some(v) = cache.get(&key) {
        return v;
    }
    let v = lr_coefficient(a, c, b);
    cache.insert(key, v.clone());
    v
}

/// A finite multiset of Schur terms with exact multiplicities at a fixed
/// rank; every key has at most `rank` parts and positive multiplicity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    rank: usize,
    terms: BTreeMap<Partition, BigUint>,
}

impl Decomposition {
    /// The unit of the tensor product: the zero partition once.
    pub fn unit(rank: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Partition::zero(), BigUint::one());
        Decomposition { rank, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending key order.
    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigUint)> {
        self.terms.iter()
    }

    /// Multiplicity of `b`; zero when absent.
    pub fn multiplicity(&self, b: &Partition) -> BigUint {
        self.terms.get(b).cloned().unwrap_or_default()
    }
}

/// Expands a ⊗ c at the context rank. Terms needing more than `rank` rows
/// are discarded: they vanish for a rank-d bundle.
pub fn tensor_product(
    cache: &LrCache,
    a: &Partition,
    c: &Partition,
    ctx: &RankContext,
) -> Result<Decomposition> {
    ctx.check_len(a)?;
    ctx.check_len(c)?;
    let mut terms = BTreeMap::new();
    for b in partitions_of_weight(a.weight() + c.weight(), ctx.rank()) {
        if !b.contains(a) {
            continue;
        }
        let coeff = lr_coefficient_cached(cache, a, c, &b);
        if !coeff.is_zero() {
            terms.insert(b, coeff);
        }
    }
    Ok(Decomposition {
        rank: ctx.rank(),
        terms,
    })
}

/// Termwise product dec ⊗ S_f.
pub fn tensor_with(
    cache: &LrCache,
    dec: &Decomposition,
    f: &Partition,
    ctx: &RankContext,
) -> Result<Decomposition> {
    assert_eq!(dec.rank(), ctx.rank(), "decomposition rank mismatch");
    let mut terms: BTreeMap<Partition, BigUint> = BTreeMap::new();
    for (b, mult) in dec.terms() {
        for (key, coeff) in tensor_product(cache, b, f, ctx)?.terms() {
            let amount = mult * coeff;
            terms
                .entry(key.clone())
                .and_modify(|m| *m += &amount)
                .or_insert(amount);
        }
    }
    Ok(Decomposition {
        rank: ctx.rank(),
        terms,
    })
}

/// n-fold tensor power by iterated products. Rank truncation is applied at
/// every intermediate step; discarded terms can never re-enter a term of
/// length at most the rank.
pub fn tensor_power(
    cache: &LrCache,
    a: &Partition,
    n: u64,
    ctx: &RankContext,
) -> Result<Decomposition> {
    assert!(n >= 1, "tensor power needs at least one factor");
    ctx.check_len(a)?;
    let mut terms = BTreeMap::new();
    terms.insert(a.clone(), BigUint::one());
    let mut acc = Decomposition {
        rank: ctx.rank(),
        terms,
    };
    for _ in 1..n {
        acc = tensor_with(cache, &acc, a, ctx)?;
    }
    Ok(acc)
}

/// Number of column-strict tableaux of shape `a` with entries at most
/// `rank`, by the exact hook content product.
pub fn dim_schur(a: &Partition, rank: usize) -> Result<BigUint> {
    if a.len() > rank {
        return Err(Error::LengthExceedsRank {
            partition: a.clone(),
            len: a.len(),
            rank,
        });
    }
    let width = a.part(0) as usize;
    let mut column_heights = vec![0u64; width];
    for &row in a.parts() {
        for h in column_heights.iter_mut().take(row as usize) {
            *h += 1;
        }
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, &row) in a.parts().iter().enumerate() {
        for (j, &height) in column_heights.iter().enumerate().take(row as usize) {
            num *= (rank - i) as u64 + j as u64;
            let hook = (row - j as u64) + (height - i as u64) - 1;
            den *= hook;
        }
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero(), "hook content product must divide exactly");
    Ok(q)
}

/// Occurrence is preserved by componentwise addition: given c in a ⊗ b and
/// f in d ⊗ e, (c+f) must occur in (a+d) ⊗ (b+e). A `false` return is a
/// bug detector, not a valid outcome.
#[allow(clippy::too_many_arguments)]
pub fn check_semigroup(
    cache: &LrCache,
    a: &Partition,
    b: &Partition,
    c: &Partition,
    d: &Partition,
    e: &Partition,
    f: &Partition,
    ctx: &RankContext,
) -> Result<bool> {
    for part in [a, b, c, d, e, f] {
        ctx.check_len(part)?;
    }
    if lr_coefficient_cached(cache, a, b, c).is_zero() {
        return Err(Error::HypothesisFailed("c does not occur in a ⊗ b"));
    }
    if lr_coefficient_cached(cache, d, e, f).is_zero() {
        return Err(Error::HypothesisFailed("f does not occur in d ⊗ e"));
    }
    Ok(!lr_coefficient_cached(cache, &a.add(d), &b.add(e), &c.add(f)).is_zero())
}

/// Result of sweeping one tensor power for terms that escape the extended
/// dominance bound. `violations` must come back empty.
#[derive(Clone, Debug)]
pub struct DominanceReport {
    pub base: Partition,
    pub power: u64,
    pub rank: usize,
    pub term_count: usize,
    pub violations: Vec<Partition>,
}

impl DominanceReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Every term of the n-th tensor power must be extended-dominated by the
/// base partition.
pub fn check_dominance_bound(
    cache: &LrCache,
    a: &Partition,
    n: u64,
    ctx: &RankContext,
) -> Result<DominanceReport> {
    if a.is_zero() {
        return Err(Error::ZeroPartition);
    }
    let dec = tensor_power(cache, a, n, ctx)?;
    let mut violations = Vec::new();
    for (b, _) in dec.terms() {
        if !dominated_ext(b, a, ctx.rank())? {
            violations.push(b.clone());
        }
    }
    Ok(DominanceReport {
        base: a.clone(),
        power: n,
        rank: ctx.rank(),
        term_count: dec.term_count(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn coeff(a: &[u64], c: &[u64], b: &[u64]) -> u64 {
        use num_traits::ToPrimitive;
        lr_coefficient(&p(a), &p(c), &p(b)).to_u64().unwrap()
    }

    #[test]
    fn coefficient_fixed_values() {
        assert_eq!(coeff(&[1], &[1], &[2]), 1);
        assert_eq!(coeff(&[2, 1], &[], &[2, 1]), 1);
        assert_eq!(coeff(&[2, 1], &[2, 1], &[3, 2, 1]), 2);
        assert_eq!(coeff(&[2, 1], &[2, 1], &[4, 2]), 1);
    }

    #[test]
    fn coefficient_degenerate_inputs() {
        // weight mismatch
        assert_eq!(coeff(&[2], &[1], &[2]), 0);
        // inner not contained in outer
        assert_eq!(coeff(&[3], &[2, 1], &[2, 2, 2]), 0);
        // content longer than the shape allows
        assert_eq!(coeff(&[], &[1, 1, 1], &[3]), 0);
    }

    #[test]
    fn coefficient_is_symmetric_in_the_factors() {
        let pairs = [
            (p(&[2, 1]), p(&[2, 2])),
            (p(&[3]), p(&[2, 1, 1])),
            (p(&[2, 2]), p(&[1, 1])),
        ];
        for (a, c) in pairs {
            for b in partitions_of_weight(a.weight() + c.weight(), 4) {
                assert_eq!(lr_coefficient(&a, &c, &b), lr_coefficient(&c, &a, &b));
            }
        }
    }

    #[test]
    fn product_examples() {
        let cache = LrCache::new();
        let ctx = RankContext::new(2).unwrap();
        let dec = tensor_product(&cache, &p(&[1]), &p(&[1]), &ctx).unwrap();
        let expected: Vec<(Partition, u64)> = vec![(p(&[1, 1]), 1), (p(&[2]), 1)];
        assert_eq!(
            dec.terms()
                .map(|(b, m)| (b.clone(), m.clone()))
                .collect::<Vec<_>>(),
            expected
                .into_iter()
                .map(|(b, m)| (b, BigUint::from(m)))
                .collect::<Vec<_>>()
        );

        let dec = tensor_product(&cache, &p(&[2, 1]), &p(&[2, 1]), &ctx).unwrap();
        assert_eq!(dec.multiplicity(&p(&[4, 2])), BigUint::one());
        assert_eq!(dec.multiplicity(&p(&[3, 3])), BigUint::one());
        assert_eq!(dec.term_count(), 2);

        // the zero partition is the unit
        let dec = tensor_product(&cache, &Partition::zero(), &p(&[2, 1]), &ctx).unwrap();
        assert_eq!(dec.term_count(), 1);
        assert_eq!(dec.multiplicity(&p(&[2, 1])), BigUint::one());
    }

    #[test]
    fn power_examples() {
        let cache = LrCache::new();
        let ctx = RankContext::new(2).unwrap();
        let sq = tensor_power(&cache, &p(&[2, 1]), 2, &ctx).unwrap();
        assert_eq!(sq.multiplicity(&p(&[4, 2])), BigUint::one());
        assert_eq!(sq.multiplicity(&p(&[3, 3])), BigUint::one());
        assert_eq!(sq.term_count(), 2);

        let cube = tensor_power(&cache, &p(&[2, 1]), 3, &ctx).unwrap();
        assert_eq!(cube.multiplicity(&p(&[6, 3])), BigUint::one());
        assert_eq!(cube.multiplicity(&p(&[5, 4])), BigUint::from(2u32));
        assert_eq!(cube.term_count(), 2);

        let single = tensor_power(&cache, &p(&[3, 1]), 1, &ctx).unwrap();
        assert_eq!(single.term_count(), 1);
        assert_eq!(single.multiplicity(&p(&[3, 1])), BigUint::one());

        // multiplicity of an absent key is zero
        assert_eq!(cube.multiplicity(&Partition::zero()), BigUint::zero());
    }

    #[test]
    fn power_keys_are_weight_homogeneous() {
        let cache = LrCache::new();
        let ctx = RankContext::new(3).unwrap();
        let dec = tensor_power(&cache, &p(&[2, 1]), 3, &ctx).unwrap();
        for (b, _) in dec.terms() {
            assert_eq!(b.weight(), 9);
            assert!(b.len() <= 3);
        }
    }

    #[test]
    fn dim_examples() {
        assert_eq!(dim_schur(&p(&[1]), 7).unwrap(), BigUint::from(7u32));
        assert_eq!(dim_schur(&p(&[1, 1]), 2).unwrap(), BigUint::one());
        assert_eq!(dim_schur(&p(&[2, 1]), 2).unwrap(), BigUint::from(2u32));
        assert_eq!(dim_schur(&p(&[2, 1]), 3).unwrap(), BigUint::from(8u32));
        assert_eq!(dim_schur(&Partition::zero(), 4).unwrap(), BigUint::one());
    }

    #[test]
    fn semigroup_examples() {
        let cache = LrCache::new();
        let ctx = RankContext::new(3).unwrap();
        assert!(check_semigroup(
            &cache,
            &p(&[1]),
            &p(&[1]),
            &p(&[2]),
            &p(&[1]),
            &p(&[1]),
            &p(&[1, 1]),
            &ctx
        )
        .unwrap());
        // trivial right-hand factor: reduces to the hypothesis
        assert!(check_semigroup(
            &cache,
            &p(&[2, 1]),
            &p(&[2, 1]),
            &p(&[3, 2, 1]),
            &Partition::zero(),
            &Partition::zero(),
            &Partition::zero(),
            &ctx
        )
        .unwrap());
        assert!(check_semigroup(
            &cache,
            &p(&[2, 1]),
            &p(&[2, 1]),
            &p(&[3, 2, 1]),
            &p(&[2, 1]),
            &p(&[2, 1]),
            &p(&[3, 2, 1]),
            &ctx
        )
        .unwrap());
        assert!(matches!(
            check_semigroup(
                &cache,
                &p(&[1]),
                &p(&[1]),
                &p(&[3]),
                &p(&[1]),
                &p(&[1]),
                &p(&[1, 1]),
                &ctx
            ),
            Err(Error::HypothesisFailed(_))
        ));
    }

    #[test]
    fn dominance_bound_examples() {
        let cache = LrCache::new();
        let ctx = RankContext::new(2).unwrap();
        let report = check_dominance_bound(&cache, &p(&[2, 1]), 3, &ctx).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.term_count, 2);

        let ctx3 = RankContext::new(3).unwrap();
        let report = check_dominance_bound(&cache, &p(&[1]), 5, &ctx3).unwrap();
        assert!(report.is_clean());

        let report = check_dominance_bound(&cache, &p(&[3, 1]), 1, &ctx).unwrap();
        assert!(report.is_clean());
        assert_eq!(report.term_count, 1);
    }

    #[test]
    fn cache_is_shareable_across_threads() {
        let cache = std::sync::Arc::new(LrCache::new());
        let ctx = RankContext::new(3).unwrap();
        let expected = tensor_power(&LrCache::new(), &p(&[2, 1]), 4, &ctx).unwrap();
        let handles: Vec<_> = (0..4)
            .map(|_| {
                let cache = std::sync::Arc::clone(&cache);
                std::thread::spawn(move || tensor_power(&cache, &p(&[2, 1]), 4, &ctx).unwrap())
            })
            .collect();
        for handle in handles {
            assert_eq!(handle.join().unwrap(), expected);
        }
    }

    #[test]
    fn cache_is_transparent() {
        let cache = LrCache::new();
        let a = p(&[2, 1]);
        let fresh = lr_coefficient(&a, &a, &p(&[3, 2, 1]));
        let cached = lr_coefficient_cached(&cache, &a, &a, &p(&[3, 2, 1]));
        assert_eq!(fresh, cached);
        assert_eq!(cache.len(), 1);
        // second lookup hits the cache and agrees
        assert_eq!(lr_coefficient_cached(&cache, &a, &a, &p(&[3, 2, 1])), fresh);
        // the memo key identifies the swapped factors
        let key = LrKey::new(&a, &p(&[3]), &p(&[3, 2, 1]));
        let swapped = LrKey::new(&p(&[3]), &a, &p(&[3, 2, 1]));
        assert_eq!(key, swapped);
    }
}
