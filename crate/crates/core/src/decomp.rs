//! Decomposition of dominated partitions over the block-average generator
//! family, the finite remainder basis, and embedding certificates.
//!
//! Every non-zero partition b extended-dominated by a base `a` splits as
//! b = c + Σ_L m_L · v(L, mu·a) with the remainder c drawn from a finite
//! basis computed once per base. A [`Certificate`] packages that split for
//! one term of the n-th tensor power together with the exact containment
//! check in (S_{l·a})^{⊗mu} ⊗ S_f and the weight identity
//! n·|a| = mu·l·|a| + |f|.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lr::{tensor_power, tensor_with, LrCache};
use crate::partition::{
    block_average, compositions, generators, in_dominance_cone, partitions_of_weight, Composition,
    Partition, RankContext,
};

/// Finite remainder basis for a base partition at a fixed rank: the zero
/// partition plus every dominated partition up to the weight cap from
/// which no single generator can be subtracted with a partition left over.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RemainderSet {
    base: Partition,
    rank: usize,
    weight_cap: u64,
    members: BTreeSet<Partition>,
}

impl RemainderSet {
    pub fn base(&self) -> &Partition {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn weight_cap(&self) -> u64 {
        self.weight_cap
    }

    pub fn members(&self) -> &BTreeSet<Partition> {
        &self.members
    }

    pub fn contains(&self, p: &Partition) -> bool {
        self.members.contains(p)
    }
}

/// Default enumeration cap: 3·mu·|a|.
pub fn default_weight_cap(a: &Partition, ctx: &RankContext) -> u64 {
    ctx.mu()
        .checked_mul(a.weight())
        .and_then(|x| x.checked_mul(3))
        .expect("weight cap overflows u64")
}

/// Computes the remainder basis by bounded enumeration. A partition is kept
/// when subtracting any single generator fails to leave a partition; the
/// difference is not required to stay inside the dominated set, only to be
/// a valid partition. (Subtractions that land on partitions outside the
/// set are exactly what keeps reducible elements out of the basis.)
pub fn remainder_set(a: &Partition, ctx: &RankContext, weight_cap: u64) -> Result<RemainderSet> {
    if a.is_zero() {
        return Err(Error::ZeroPartition);
    }
    ctx.check_len(a)?;
    let min = ctx
        .mu()
        .checked_mul(a.weight())
        .expect("mu * |a| overflows u64");
    if weight_cap < min {
        return Err(Error::CapTooSmall {
            cap: weight_cap,
            min,
        });
    }
    let gens = generators(a, ctx)?;
    let mut members = BTreeSet::new();
    members.insert(Partition::zero());
    for w in 1..=weight_cap {
        for b in partitions_of_weight(w, ctx.rank()) {
            if !in_dominance_cone(&b, a, ctx.rank())? {
                continue;
            }
            let reducible = gens
                .iter()
                .any(|v| b.sub_partition(v, ctx.rank()).is_some());
            if !reducible {
                members.insert(b);
            }
        }
    }
    Ok(RemainderSet {
        base: a.clone(),
        rank: ctx.rank(),
        weight_cap,
        members,
    })
}

/// Witness that b = remainder + Σ_L multipliers[L] · v(L, mu·a).
/// Multipliers are kept per composition (not per de-duplicated generator)
/// in the fixed lexicographic composition order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecompositionWitness {
    remainder: Partition,
    multipliers: Vec<(Composition, u64)>,
    total: u64,
}

impl DecompositionWitness {
    /// The remainder c.
    pub fn remainder(&self) -> &Partition {
        &self.remainder
    }

    /// All multipliers in composition order, zero counts included.
    pub fn multipliers(&self) -> &[(Composition, u64)] {
        &self.multipliers
    }

    /// M = Σ m_L.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Σ m_L · v(L, mu·a), recomputed from scratch.
    pub fn combination(&self, a: &Partition, ctx: &RankContext) -> Result<Partition> {
        let scaled = a.scale(ctx.mu());
        let mut acc = Partition::zero();
        for (shape, count) in &self.multipliers {
            if *count == 0 {
                continue;
            }
            let v = block_average(shape, &scaled, ctx.rank())?
                .as_partition()
                .expect("block averages of a mu-scaled partition are integral partitions");
            acc = acc.add(&v.scale(*count));
        }
        Ok(acc)
    }

    /// remainder + Σ m_L · v(L, mu·a).
    pub fn reconstruct(&self, a: &Partition, ctx: &RankContext) -> Result<Partition> {
        Ok(self.remainder.add(&self.combination(a, ctx)?))
    }
}

fn composition_generators(a: &Partition, ctx: &RankContext) -> Result<Vec<Partition>> {
    let scaled = a.scale(ctx.mu());
    compositions(ctx.rank())
        .iter()
        .map(|shape| {
            Ok(block_average(shape, &scaled, ctx.rank())?
                .as_partition()
                .expect("block averages of a mu-scaled partition are integral partitions"))
        })
        .collect()
}

struct SplitSearch<'x> {
    gens: &'x [Partition],
    basis: &'x RemainderSet,
    base: &'x Partition,
    rank: usize,
    counts: Vec<u64>,
    feasible: Vec<(Vec<u64>, Partition)>,
}

impl SplitSearch<'_> {
    fn run(&mut self, idx: usize, current: Partition) {
        if idx == self.gens.len() {
            if self.basis.contains(&current) {
                self.feasible.push((self.counts.clone(), current));
            }
            return;
        }
        self.run(idx + 1, current.clone());
        let mut cur = current;
        let mut taken = 0u64;
        loop {
            // Each unit subtraction must stay a partition in the dominated
            // set (or hit zero). Sums of dominated partitions are dominated,
            // so this pruning never hides a split that exists.
            let next = match cur.sub_partition(&self.gens[idx], self.rank) {
                Some(next)
                    if next.is_zero()
                        || in_dominance_cone(&next, self.base, self.rank)
                            .expect("cone test inputs are validated") =>
                {
                    next
                }
                _ => break,
            };
            taken += 1;
            self.counts[idx] += 1;
            cur = next;
            self.run(idx + 1, cur.clone());
        }
        self.counts[idx] -= taken;
    }
}

/// Splits `b` over the generator family with the remainder in the basis.
/// Among all feasible splits the one with maximal M is returned, ties
/// broken by the lexicographically greatest multiplier vector, so the
/// result is reproducible and the remainder has minimal weight.
pub fn decompose(
    b: &Partition,
    a: &Partition,
    ctx: &RankContext,
    basis: &RemainderSet,
) -> Result<DecompositionWitness> {
    assert_eq!(
        basis.base(),
        a,
        "remainder basis was computed for a different base"
    );
    assert_eq!(
        basis.rank(),
        ctx.rank(),
        "remainder basis was computed for a different rank"
    );
    ctx.check_len(b)?;
    if !in_dominance_cone(b, a, ctx.rank())? {
        return Err(Error::NotDominated {
            b: b.clone(),
            a: a.clone(),
        });
    }
    let comps = compositions(ctx.rank());
    let gens = composition_generators(a, ctx)?;
    let mut search = SplitSearch {
        gens: &gens,
        basis,
        base: a,
        rank: ctx.rank(),
        counts: vec![0u64; comps.len()],
        feasible: Vec::new(),
    };
    search.run(0, b.clone());
    let best = search.feasible.into_iter().max_by(|(m1, _), (m2, _)| {
        let t1: u64 = m1.iter().sum();
        let t2: u64 = m2.iter().sum();
        t1.cmp(&t2).then_with(|| m1.cmp(m2))
    });
    match best {
        None => Err(Error::NoDecomposition {
            b: b.clone(),
            cap: basis.weight_cap(),
        }),
        Some((m, c)) => Ok(DecompositionWitness {
            remainder: c,
            total: m.iter().sum(),
            multipliers: comps.into_iter().zip(m).collect(),
        }),
    }
}

/// Multiplicity of every generator in the mu-th tensor power of the base;
/// all must be at least one.
#[derive(Clone, Debug)]
pub struct GeneratorReport {
    pub base: Partition,
    pub mu: u64,
    pub multiplicities: Vec<(Partition, BigUint)>,
}

impl GeneratorReport {
    pub fn all_embedded(&self) -> bool {
        self.multiplicities.iter().all(|(_, m)| !m.is_zero())
    }
}

/// Checks that every generator v(L, mu·a) occurs in (S_a)^{⊗mu}.
pub fn verify_generators(
    cache: &LrCache,
    a: &Partition,
    ctx: &RankContext,
) -> Result<GeneratorReport> {
    let gens = generators(a, ctx)?;
    let power = tensor_power(cache, a, ctx.mu(), ctx)?;
    let multiplicities = gens
        .into_iter()
        .map(|v| {
            let m = power.multiplicity(&v);
            (v, m)
        })
        .collect();
    Ok(GeneratorReport {
        base: a.clone(),
        mu: ctx.mu(),
        multiplicities,
    })
}

/// For g = Σ m_L · v(L, mu·a) with M = Σ m_L ≥ 1: S_g must occur in
/// (S_{M·a})^{⊗mu}.
pub fn verify_combination(
    cache: &LrCache,
    witness: &DecompositionWitness,
    a: &Partition,
    ctx: &RankContext,
) -> Result<bool> {
    if witness.total() == 0 {
        return Err(Error::ZeroMultipliers);
    }
    let g = witness.combination(a, ctx)?;
    let target = tensor_power(cache, &a.scale(witness.total()), ctx.mu(), ctx)?;
    Ok(!target.multiplicity(&g).is_zero())
}

/// Certificate that S_b, a term of (S_a)^{⊗n}, embeds in
/// (S_{l·a})^{⊗mu} ⊗ S_f with n·|a| = mu·l·|a| + |f|. The fields are
/// plain data; [`verify_certificate`] re-checks them from scratch.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Certificate {
    /// Base partition a.
    pub base: Partition,
    /// Tensor power n.
    pub power: u64,
    /// The term S_b being embedded.
    pub subfactor: Partition,
    /// l = M of the witness.
    pub scale: u64,
    /// f = remainder of the witness.
    pub remainder: Partition,
    pub witness: DecompositionWitness,
    pub weight_identity: bool,
    pub verified: bool,
}

fn weight_identity_holds(
    a: &Partition,
    n: u64,
    scale: u64,
    remainder: &Partition,
    mu: u64,
) -> bool {
    let lhs = (n as u128) * (a.weight() as u128);
    let rhs = (mu as u128) * (scale as u128) * (a.weight() as u128) + remainder.weight() as u128;
    lhs == rhs
}

/// Builds one certificate per term of (S_a)^{⊗n}, in ascending term order.
/// When l = 0 the tensor-power factor is the empty product and the
/// containment check degenerates to b = f.
pub fn certify(
    cache: &LrCache,
    a: &Partition,
    n: u64,
    ctx: &RankContext,
    basis: &RemainderSet,
) -> Result<Vec<Certificate>> {
    assert!(n >= 1, "tensor power needs at least one factor");
    if a.is_zero() {
        return Err(Error::ZeroPartition);
    }
    let dec = tensor_power(cache, a, n, ctx)?;
    let mut out = Vec::with_capacity(dec.term_count());
    for (b, _) in dec.terms() {
        let witness = decompose(b, a, ctx, basis)?;
        let scale = witness.total();
        let remainder = witness.remainder().clone();
        let weight_identity = weight_identity_holds(a, n, scale, &remainder, ctx.mu());
        let target = tensor_with(
            cache,
            &tensor_power(cache, &a.scale(scale), ctx.mu(), ctx)?,
            &remainder,
            ctx,
        )?;
        let verified = weight_identity && !target.multiplicity(b).is_zero();
        out.push(Certificate {
            base: a.clone(),
            power: n,
            subfactor: b.clone(),
            scale,
            remainder,
            witness,
            weight_identity,
            verified,
        });
    }
    Ok(out)
}

/// Independent re-check of a certificate, bypassing any shared cache: the
/// weight identity, the witness reconstruction, and the containment
/// multiplicity are all recomputed from scratch.
pub fn verify_certificate(cert: &Certificate, ctx: &RankContext) -> bool {
    let a = &cert.base;
    if !weight_identity_holds(a, cert.power, cert.scale, &cert.remainder, ctx.mu()) {
        return false;
    }
    if cert.scale != cert.witness.total() || cert.remainder != *cert.witness.remainder() {
        return false;
    }
    match cert.witness.reconstruct(a, ctx) {
        Ok(b) if b == cert.subfactor => {}
        _ => return false,
    }
    let fresh = LrCache::new();
    let target = match tensor_power(&fresh, &a.scale(cert.scale), ctx.mu(), ctx)
        .and_then(|power| tensor_with(&fresh, &power, &cert.remainder, ctx))
    {
        Ok(t) => t,
        Err(_) => return false,
    };
    !target.multiplicity(&cert.subfactor).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn basis_for(a: &Partition, rank: usize, cap: u64) -> (RankContext, RemainderSet) {
        let ctx = RankContext::new(rank).unwrap();
        let basis = remainder_set(a, &ctx, cap).unwrap();
        (ctx, basis)
    }

    #[test]
    fn remainder_set_examples() {
        let (_, basis) = basis_for(&p(&[2, 1]), 2, 12);
        let expected: BTreeSet<Partition> = [
            Partition::zero(),
            p(&[1, 1]),
            p(&[2, 1]),
            p(&[2, 2]),
            p(&[3, 2]),
        ]
        .into_iter()
        .collect();
        assert_eq!(basis.members(), &expected);

        let (_, basis) = basis_for(&p(&[1]), 1, 3);
        assert_eq!(basis.members().len(), 1);
        assert!(basis.contains(&Partition::zero()));

        let (_, basis) = basis_for(&p(&[1, 1]), 2, 8);
        let expected: BTreeSet<Partition> = [Partition::zero(), p(&[1, 1])].into_iter().collect();
        assert_eq!(basis.members(), &expected);
    }

    #[test]
    fn remainder_set_rejects_small_caps() {
        let ctx = RankContext::new(2).unwrap();
        assert!(matches!(
            remainder_set(&p(&[2, 1]), &ctx, 5),
            Err(Error::CapTooSmall { cap: 5, min: 6 })
        ));
    }

    #[test]
    fn decompose_examples() {
        let a = p(&[2, 1]);
        let (ctx, basis) = basis_for(&a, 2, 12);

        let w = decompose(&p(&[6, 3]), &a, &ctx, &basis).unwrap();
        assert_eq!(w.remainder(), &p(&[2, 1]));
        assert_eq!(w.total(), 1);
        let counts: Vec<u64> = w.multipliers().iter().map(|(_, m)| *m).collect();
        assert_eq!(counts, vec![1, 0]); // one copy of v([1,1]) = (4,2)

        let w = decompose(&p(&[3, 3]), &a, &ctx, &basis).unwrap();
        assert_eq!(w.remainder(), &Partition::zero());
        assert_eq!(w.total(), 1);
        let counts: Vec<u64> = w.multipliers().iter().map(|(_, m)| *m).collect();
        assert_eq!(counts, vec![0, 1]);

        let w = decompose(&p(&[1, 1]), &a, &ctx, &basis).unwrap();
        assert_eq!(w.remainder(), &p(&[1, 1]));
        assert_eq!(w.total(), 0);

        assert!(matches!(
            decompose(&p(&[3]), &a, &ctx, &basis),
            Err(Error::NotDominated { .. })
        ));
    }

    #[test]
    fn decompose_reconstructs_and_is_deterministic() {
        let a = p(&[2, 1]);
        let (ctx, basis) = basis_for(&a, 2, 12);
        for w in 1..=6u64 {
            for b in partitions_of_weight(w, 2) {
                if !in_dominance_cone(&b, &a, 2).unwrap() {
                    continue;
                }
                let first = decompose(&b, &a, &ctx, &basis).unwrap();
                let second = decompose(&b, &a, &ctx, &basis).unwrap();
                assert_eq!(first, second);
                assert_eq!(first.reconstruct(&a, &ctx).unwrap(), b);
                assert!(basis.contains(first.remainder()));
            }
        }
    }

    #[test]
    fn ties_prefer_the_lexicographically_greatest_multipliers() {
        // both compositions of 2 give the same generator (2,2) for (1,1)
        let a = p(&[1, 1]);
        let (ctx, basis) = basis_for(&a, 2, 8);
        let w = decompose(&p(&[2, 2]), &a, &ctx, &basis).unwrap();
        let counts: Vec<u64> = w.multipliers().iter().map(|(_, m)| *m).collect();
        assert_eq!(counts, vec![1, 0]);
        assert_eq!(w.total(), 1);
    }

    #[test]
    fn generator_embedding_examples() {
        let cache = LrCache::new();
        let ctx = RankContext::new(2).unwrap();
        let report = verify_generators(&cache, &p(&[2, 1]), &ctx).unwrap();
        assert!(report.all_embedded());
        assert_eq!(report.multiplicities.len(), 2);
        for (_, m) in &report.multiplicities {
            assert_eq!(*m, BigUint::one());
        }

        let ctx1 = RankContext::new(1).unwrap();
        let report = verify_generators(&cache, &p(&[1]), &ctx1).unwrap();
        assert!(report.all_embedded());

        let report = verify_generators(&cache, &p(&[1, 1]), &ctx).unwrap();
        assert!(report.all_embedded());
        assert_eq!(report.multiplicities[0].0, p(&[2, 2]));
    }

    #[test]
    fn combination_embedding_examples() {
        let cache = LrCache::new();
        let a = p(&[2, 1]);
        let (ctx, basis) = basis_for(&a, 2, 12);

        let w = decompose(&p(&[3, 3]), &a, &ctx, &basis).unwrap();
        assert!(verify_combination(&cache, &w, &a, &ctx).unwrap());

        let w = decompose(&p(&[4, 2]), &a, &ctx, &basis).unwrap();
        assert!(verify_combination(&cache, &w, &a, &ctx).unwrap());

        // g = (4,2) + (3,3) = (7,5), checked inside ((4,2))^{⊗2}
        let w = decompose(&p(&[7, 5]), &a, &ctx, &basis).unwrap();
        assert_eq!(w.total(), 2);
        assert!(verify_combination(&cache, &w, &a, &ctx).unwrap());

        let w = decompose(&p(&[1, 1]), &a, &ctx, &basis).unwrap();
        assert!(matches!(
            verify_combination(&cache, &w, &a, &ctx),
            Err(Error::ZeroMultipliers)
        ));
    }

    #[test]
    fn certify_examples() {
        let cache = LrCache::new();
        let a = p(&[2, 1]);
        let (ctx, basis) = basis_for(&a, 2, 12);

        let certs = certify(&cache, &a, 3, &ctx, &basis).unwrap();
        assert_eq!(certs.len(), 2);
        for cert in &certs {
            assert!(cert.weight_identity);
            assert!(cert.verified);
            assert_eq!(cert.scale, 1);
            assert_eq!(cert.remainder, p(&[2, 1]));
            assert_eq!(3 * a.weight(), 2 * cert.scale * 3 + cert.remainder.weight());
        }
        assert_eq!(certs[0].subfactor, p(&[5, 4]));
        assert_eq!(certs[1].subfactor, p(&[6, 3]));

        let certs = certify(&cache, &a, 2, &ctx, &basis).unwrap();
        assert_eq!(certs.len(), 2);
        for cert in &certs {
            assert!(cert.verified);
            assert_eq!(cert.scale, 1);
            assert!(cert.remainder.is_zero());
        }

        let certs = certify(&cache, &a, 1, &ctx, &basis).unwrap();
        assert_eq!(certs.len(), 1);
        assert!(certs[0].verified);
        assert_eq!(certs[0].scale, 0);
        assert_eq!(certs[0].remainder, a);
    }

    #[test]
    fn verify_certificate_catches_tampering() {
        let cache = LrCache::new();
        let a = p(&[2, 1]);
        let (ctx, basis) = basis_for(&a, 2, 12);
        let certs = certify(&cache, &a, 3, &ctx, &basis).unwrap();
        let good = certs
            .iter()
            .find(|c| c.subfactor == p(&[6, 3]))
            .unwrap()
            .clone();
        assert!(verify_certificate(&good, &ctx));

        let mut bad_scale = good.clone();
        bad_scale.scale = 0;
        assert!(!verify_certificate(&bad_scale, &ctx));

        let mut bad_remainder = good.clone();
        bad_remainder.remainder = p(&[3]);
        assert!(!verify_certificate(&bad_remainder, &ctx));
    }
}
