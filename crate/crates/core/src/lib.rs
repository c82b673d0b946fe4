//! Exact arithmetic for decompositions of tensor powers of Schur terms:
//! Littlewood-Richardson coefficients by pruned tableau search, dominance
//! orders on partitions, block-average generator systems with their finite
//! remainder bases, and machine-checkable embedding certificates, plus a
//! plain-text persistent coefficient cache.
//!
//! Multiplicities are arbitrary-precision integers and every comparison is
//! exact; nothing here rounds.

pub mod cache;
pub mod decomp;
pub mod error;
pub mod lr;
pub mod partition;

pub use cache::{load_cache, store_cache};
pub use decomp::{
    certify, decompose, default_weight_cap, remainder_set, verify_certificate, verify_combination,
    verify_generators, Certificate, DecompositionWitness, GeneratorReport, RemainderSet,
};
pub use error::{Error, Result};
pub use lr::{
    check_dominance_bound, check_semigroup, dim_schur, lr_coefficient, lr_coefficient_cached,
    tensor_power, tensor_product, tensor_with, Decomposition, DominanceReport, LrCache, LrKey,
};
pub use num_bigint::BigUint;
pub use num_rational::Ratio;
pub use partition::{
    block_average, compositions, concat, dominated_eq, dominated_ext, flag_signature, generators,
    in_dominance_cone, partitions_of_weight, Composition, FlagSignature, Partition, RankContext,
    RationalSequence,
};
