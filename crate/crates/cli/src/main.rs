//! Command-line front end: exact coefficient queries, decompositions,
//! certificates, and batch property checks, with an optional persistent
//! coefficient cache and deterministic text or JSON output.
//!
//! Exit codes: 0 success, 1 property violation (an invariant the library
//! asserts failed, or the cache disagrees with recomputation), 2 usage
//! error, 3 no decomposition within the configured weight cap.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use schurkit::{
    certify, check_dominance_bound, check_semigroup, decompose, default_weight_cap, dim_schur,
    dominated_ext, flag_signature, generators, load_cache, lr_coefficient_cached,
    partitions_of_weight, remainder_set, store_cache, tensor_power, tensor_product, Decomposition,
    DecompositionWitness, Error, LrCache, Partition, RankContext, Result,
};

#[derive(Parser)]
#[command(
    name = "schurkit",
    version,
    about = "Exact Littlewood-Richardson decompositions, dominance checks, and embedding certificates"
)]
struct Cli {
    /// Coefficient cache file (created on first use)
    #[arg(long, global = true, value_name = "PATH", env = "SCHURKIT_CACHE")]
    cache: Option<PathBuf>,

    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Recompute and verify every cache record on load
    #[arg(long, global = true)]
    paranoid: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficients, products, and powers of Schur terms
    #[command(subcommand)]
    Lr(LrCommand),
    /// Extended dominance: is B dominated by A?
    Dom {
        b: String,
        a: String,
        #[arg(long)]
        rank: usize,
    },
    /// Block-average generator family of A
    Gens {
        a: String,
        #[arg(long)]
        rank: usize,
    },
    /// Finite remainder basis of A
    Sigma {
        a: String,
        #[arg(long)]
        rank: usize,
        /// Enumeration weight cap (default 3·mu·|a|)
        #[arg(long)]
        wcap: Option<u64>,
    },
    /// Decompose B over the generators of A
    Decompose {
        b: String,
        a: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        wcap: Option<u64>,
    },
    /// Embedding certificates for every term of the n-th power of A
    Certify {
        a: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        wcap: Option<u64>,
    },
    /// Dimension of a Schur term at the given rank
    Dim {
        a: String,
        #[arg(long)]
        rank: usize,
    },
    /// Strict-descent flag signature of A
    Flagsig {
        a: String,
        #[arg(long)]
        rank: usize,
    },
    /// Batch property checks
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Subcommand)]
enum LrCommand {
    /// Coefficient of B in A ⊗ C
    Coef { a: String, c: String, b: String },
    /// Expand A ⊗ C
    Prod {
        a: String,
        c: String,
        #[arg(long)]
        rank: usize,
    },
    /// Expand the n-th tensor power of A
    Power {
        a: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        rank: usize,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Sampled additivity checks on coefficient occurrence
    Semigroup {
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        rank: usize,
    },
    /// Dominance bound over one tensor power
    Dominance {
        a: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        rank: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::NoDecomposition { .. } => ExitCode::from(3),
        Error::Stale { .. } => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let cache = match &cli.cache {
        Some(path) => load_cache(path, cli.paranoid)?,
        None => LrCache::new(),
    };
    let code = dispatch(cli, &cache)?;
    if let Some(path) = &cli.cache {
        store_cache(path, &cache)?;
    }
    Ok(code)
}

fn parse_partition_arg(text: &str) -> Result<Partition> {
    text.parse()
}

fn dispatch(cli: &Cli, cache: &LrCache) -> Result<ExitCode> {
    let format = cli.format;
    match &cli.command {
        Command::Lr(LrCommand::Coef { a, c, b }) => {
            let (a, c, b) = (
                parse_partition_arg(a)?,
                parse_partition_arg(c)?,
                parse_partition_arg(b)?,
            );
            let value = lr_coefficient_cached(cache, &a, &c, &b);
            match format {
                Format::Text => println!("{value}"),
                Format::Json => println!(
                    "{}",
                    json!({
                        "a": a.parts(),
                        "b": b.parts(),
                        "c": c.parts(),
                        "coefficient": value.to_string(),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Lr(LrCommand::Prod { a, c, rank }) => {
            let ctx = RankContext::new(*rank)?;
            let (a, c) = (parse_partition_arg(a)?, parse_partition_arg(c)?);
            let dec = tensor_product(cache, &a, &c, &ctx)?;
            print_decomposition(&dec, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Lr(LrCommand::Power { a, n, rank }) => {
            let ctx = RankContext::new(*rank)?;
            let a = parse_partition_arg(a)?;
            let dec = tensor_power(cache, &a, *n, &ctx)?;
            print_decomposition(&dec, format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Dom { b, a, rank } => {
            let ctx = RankContext::new(*rank)?;
            let (b, a) = (parse_partition_arg(b)?, parse_partition_arg(a)?);
            let value = dominated_ext(&b, &a, ctx.rank())?;
            match format {
                Format::Text => println!("{value}"),
                Format::Json => println!(
                    "{}",
                    json!({"a": a.parts(), "b": b.parts(), "dominated": value})
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Gens { a, rank } => {
            let ctx = RankContext::new(*rank)?;
            let a = parse_partition_arg(a)?;
            let gens = generators(&a, &ctx)?;
            match format {
                Format::Text => {
                    for v in &gens {
                        println!("{v}");
                    }
                }
                Format::Json => {
                    let items: Vec<_> = gens.iter().map(|v| v.parts()).collect();
                    println!("{}", json!({"generators": items, "rank": ctx.rank()}));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sigma { a, rank, wcap } => {
            let ctx = RankContext::new(*rank)?;
            let a = parse_partition_arg(a)?;
            let cap = wcap.unwrap_or_else(|| default_weight_cap(&a, &ctx));
            let basis = remainder_set(&a, &ctx, cap)?;
            match format {
                Format::Text => {
                    for member in basis.members() {
                        println!("{member}");
                    }
                }
                Format::Json => {
                    let members: Vec<_> = basis.members().iter().map(|m| m.parts()).collect();
                    println!(
                        "{}",
                        json!({
                            "members": members,
                            "rank": ctx.rank(),
                            "weight_cap": cap,
                        })
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose { b, a, rank, wcap } => {
            let ctx = RankContext::new(*rank)?;
            let (b, a) = (parse_partition_arg(b)?, parse_partition_arg(a)?);
            let cap = wcap.unwrap_or_else(|| default_weight_cap(&a, &ctx));
            let basis = remainder_set(&a, &ctx, cap)?;
            let witness = decompose(&b, &a, &ctx, &basis)?;
            match format {
                Format::Text => println!(
                    "b={b} c={} M={} m={}",
                    witness.remainder(),
                    witness.total(),
                    multipliers_text(&witness)
                ),
                Format::Json => println!(
                    "{}",
                    json!({
                        "M": witness.total(),
                        "b": b.parts(),
                        "c": witness.remainder().parts(),
                        "m": multipliers_json(&witness),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Certify { a, n, rank, wcap } => {
            let ctx = RankContext::new(*rank)?;
            let a = parse_partition_arg(a)?;
            let cap = wcap.unwrap_or_else(|| default_weight_cap(&a, &ctx));
            let basis = remainder_set(&a, &ctx, cap)?;
            let certs = certify(cache, &a, *n, &ctx, &basis)?;
            let mut all_good = true;
            for cert in &certs {
                all_good &= cert.verified && cert.weight_identity;
                match format {
                    Format::Text => println!(
                        "b={} l={} f={} m={} weight_identity={} verified={}",
                        cert.subfactor,
                        cert.scale,
                        cert.remainder,
                        multipliers_text(&cert.witness),
                        cert.weight_identity,
                        cert.verified
                    ),
                    Format::Json => println!(
                        "{}",
                        json!({
                            "a": cert.base.parts(),
                            "b": cert.subfactor.parts(),
                            "f": cert.remainder.parts(),
                            "l": cert.scale,
                            "m": multipliers_json(&cert.witness),
                            "n": cert.power,
                            "verified": cert.verified,
                            "weight_identity": cert.weight_identity,
                        })
                    ),
                }
            }
            Ok(if all_good {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Dim { a, rank } => {
            let ctx = RankContext::new(*rank)?;
            let a = parse_partition_arg(a)?;
            let value = dim_schur(&a, ctx.rank())?;
            match format {
                Format::Text => println!("{value}"),
                Format::Json => println!(
                    "{}",
                    json!({
                        "a": a.parts(),
                        "dim": value.to_string(),
                        "rank": ctx.rank(),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Flagsig { a, rank } => {
            let ctx = RankContext::new(*rank)?;
            let a = parse_partition_arg(a)?;
            let sig = flag_signature(&a, ctx.rank())?;
            match format {
                Format::Text => println!(
                    "s={} exponents={}",
                    join(sig.positions()),
                    join(sig.exponents())
                ),
                Format::Json => println!(
                    "{}",
                    json!({"exponents": sig.exponents(), "s": sig.positions()})
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(CheckCommand::Semigroup {
            samples,
            seed,
            rank,
        }) => check_semigroup_samples(cache, *samples, *seed, *rank, format),
        Command::Check(CheckCommand::Dominance { a, n, rank }) => {
            let ctx = RankContext::new(*rank)?;
            let a = parse_partition_arg(a)?;
            let report = check_dominance_bound(cache, &a, *n, &ctx)?;
            match format {
                Format::Text => {
                    for b in &report.violations {
                        println!("violation: b={b}");
                    }
                    println!(
                        "terms={} violations={}",
                        report.term_count,
                        report.violations.len()
                    );
                }
                Format::Json => {
                    let violations: Vec<_> = report.violations.iter().map(|b| b.parts()).collect();
                    println!(
                        "{}",
                        json!({
                            "a": a.parts(),
                            "n": n,
                            "rank": ctx.rank(),
                            "terms": report.term_count,
                            "violations": violations,
                        })
                    );
                }
            }
            Ok(if report.is_clean() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// Weight bound for partitions drawn by the semigroup sampler.
const SAMPLE_MAX_WEIGHT: u64 = 5;

fn check_semigroup_samples(
    cache: &LrCache,
    samples: u64,
    seed: u64,
    rank: usize,
    format: Format,
) -> Result<ExitCode> {
    let ctx = RankContext::new(rank)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pool: Vec<Partition> = (0..=SAMPLE_MAX_WEIGHT)
        .flat_map(|w| partitions_of_weight(w, ctx.rank()))
        .collect();
    let pick = |rng: &mut ChaCha8Rng| pool[rng.gen_range(0..pool.len())].clone();
    let mut failures: Vec<[Partition; 6]> = Vec::new();
    for _ in 0..samples {
        let (a, b) = (pick(&mut rng), pick(&mut rng));
        let (d, e) = (pick(&mut rng), pick(&mut rng));
        let c = pick_term(&mut rng, &tensor_product(cache, &a, &b, &ctx)?);
        let f = pick_term(&mut rng, &tensor_product(cache, &d, &e, &ctx)?);
        if !check_semigroup(cache, &a, &b, &c, &d, &e, &f, &ctx)? {
            failures.push([a, b, c, d, e, f]);
        }
    }
    match format {
        Format::Text => {
            for [a, b, c, d, e, f] in &failures {
                println!("violation: a={a} b={b} c={c} d={d} e={e} f={f}");
            }
            println!("samples={samples} violations={}", failures.len());
        }
        Format::Json => {
            let failed: Vec<_> = failures
                .iter()
                .map(|[a, b, c, d, e, f]| {
                    json!({
                        "a": a.parts(), "b": b.parts(), "c": c.parts(),
                        "d": d.parts(), "e": e.parts(), "f": f.parts(),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "failures": failed,
                    "rank": rank,
                    "samples": samples,
                    "seed": seed,
                    "violations": failures.len(),
                })
            );
        }
    }
    Ok(if failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn pick_term(rng: &mut ChaCha8Rng, dec: &Decomposition) -> Partition {
    let keys: Vec<&Partition> = dec.terms().map(|(b, _)| b).collect();
    (*keys.choose(rng).expect("products are never empty")).clone()
}

fn print_decomposition(dec: &Decomposition, format: Format) {
    match format {
        Format::Text => {
            for (b, mult) in dec.terms() {
                println!("{b}\t{mult}");
            }
        }
        Format::Json => {
            let terms: Vec<_> = dec
                .terms()
                .map(|(b, mult)| json!({"b": b.parts(), "mult": mult.to_string()}))
                .collect();
            println!("{}", json!({"rank": dec.rank(), "terms": terms}));
        }
    }
}

fn multipliers_text(witness: &DecompositionWitness) -> String {
    witness
        .multipliers()
        .iter()
        .map(|(shape, count)| format!("{shape}:{count}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn multipliers_json(witness: &DecompositionWitness) -> serde_json::Value {
    witness
        .multipliers()
        .iter()
        .map(|(shape, count)| json!({"L": shape.blocks(), "count": count}))
        .collect()
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
