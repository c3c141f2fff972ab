//! Deterministic parameter sweeps: seeded admissible parameter draws and an
//! order-preserving parallel map (rayon under the `parallel` feature, plain
//! iteration otherwise).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::repmod::{
    dd_simple_n1, dd_simple_n2, dd_verma_quotient, rea_n1, rea_n2, rea_n3, rea_verma_quotient,
    verify_relations, DDN1Params, DDN2Params, DDVermaParams, Family, REAN1Params, REAN2Params,
    REAN3Params, REAVermaParams, Representation,
};
use crate::scalar::{FieldContext, Scalar};
use crate::structure::{verify_power_identity, PowerIdentity};

/// Order-preserving map over the inputs; parallel when the `parallel`
/// feature is enabled.
#[cfg(feature = "parallel")]
pub fn map<I: Sync, T: Send, F: Fn(&I) -> T + Sync + Send>(inputs: &[I], f: F) -> Vec<T> {
    use rayon::prelude::*;
    inputs.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<I: Sync, T: Send, F: Fn(&I) -> T + Sync + Send>(inputs: &[I], f: F) -> Vec<T> {
    inputs.iter().map(f).collect()
}

/// Like [`map`], with an explicit worker count; `None` keeps the global
/// default. Ignored by the sequential fallback.
#[cfg(feature = "parallel")]
pub fn map_with_jobs<I: Sync, T: Send, F: Fn(&I) -> T + Sync + Send>(
    inputs: &[I],
    jobs: Option<usize>,
    f: F,
) -> Vec<T> {
    match jobs {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(|| map(inputs, f)),
        _ => map(inputs, f),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn map_with_jobs<I: Sync, T: Send, F: Fn(&I) -> T + Sync + Send>(
    inputs: &[I],
    _jobs: Option<usize>,
    f: F,
) -> Vec<T> {
    map(inputs, f)
}

/// Nonzero draw of the shape k q^e, k in 1..=5: admissible for every
/// "nonzero" parameter slot on both backends (small k avoids accidental
/// zeros mod p for the primes in use).
pub fn random_nonzero(ctx: &FieldContext, rng: &mut ChaCha8Rng) -> Scalar {
    let k: i64 = rng.gen_range(1..=5);
    let e: i64 = rng.gen_range(0..ctx.m() as i64);
    ctx.mul(&ctx.from_int(k), &ctx.q_pow(e))
}

/// Unrestricted draw: zero one time in four, else a nonzero draw.
pub fn random_scalar(ctx: &FieldContext, rng: &mut ChaCha8Rng) -> Scalar {
    if rng.gen_range(0..4) == 0 {
        ctx.zero()
    } else {
        random_nonzero(ctx, rng)
    }
}

/// One admissible pseudo-random module of the given family; `p` is used by
/// the Verma families only.
pub fn random_module(
    family: Family,
    ctx: &FieldContext,
    p: u64,
    rng: &mut ChaCha8Rng,
) -> Result<Representation> {
    match family {
        Family::DdN1 => dd_simple_n1(
            ctx.clone(),
            &DDN1Params {
                alpha: random_nonzero(ctx, rng),
                beta: random_nonzero(ctx, rng),
                lambda1: random_nonzero(ctx, rng),
                lambda2: random_nonzero(ctx, rng),
            },
        ),
        Family::DdN2 => dd_simple_n2(
            ctx.clone(),
            &DDN2Params {
                beta: random_nonzero(ctx, rng),
                gamma: random_scalar(ctx, rng),
                lambda2: random_nonzero(ctx, rng),
            },
        ),
        Family::DdVerma => dd_verma_quotient(
            ctx.clone(),
            &DDVermaParams {
                lambda1: random_nonzero(ctx, rng),
                lambda2: random_nonzero(ctx, rng),
                p,
            },
        ),
        Family::ReaN1 => rea_n1(
            ctx.clone(),
            &REAN1Params {
                beta: random_nonzero(ctx, rng),
                lambda1: random_scalar(ctx, rng),
                lambda2: random_nonzero(ctx, rng),
                lambda3: random_scalar(ctx, rng),
            },
        ),
        Family::ReaN2 => rea_n2(
            ctx.clone(),
            &REAN2Params {
                alpha: random_nonzero(ctx, rng),
                lambda1: random_scalar(ctx, rng),
                lambda2: random_nonzero(ctx, rng),
                lambda3: random_scalar(ctx, rng),
            },
        ),
        Family::ReaN3 => rea_n3(
            ctx.clone(),
            &REAN3Params {
                lambda1: random_scalar(ctx, rng),
                lambda2: random_nonzero(ctx, rng),
            },
        ),
        Family::ReaVerma => rea_verma_quotient(
            ctx.clone(),
            &REAVermaParams {
                lambda1: random_nonzero(ctx, rng),
                lambda2: random_nonzero(ctx, rng),
                p,
            },
        ),
    }
}

pub const ALL_FAMILIES: [Family; 7] = [
    Family::DdN1,
    Family::DdN2,
    Family::DdVerma,
    Family::ReaN1,
    Family::ReaN2,
    Family::ReaN3,
    Family::ReaVerma,
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepRecord {
    pub family: Family,
    pub m: u64,
    pub draw: u64,
    pub violations: Vec<String>,
}

/// Relation soundness sweep: for each family and each m, `draws` seeded
/// parameter draws, each checked with verify_relations. The per-case seed
/// mixes the arguments so results do not depend on evaluation order.
pub fn relation_sweep(ms: &[u64], draws: u64, seed: u64) -> Vec<SweepRecord> {
    let mut cases = Vec::new();
    for &m in ms {
        for family in ALL_FAMILIES {
            for draw in 0..draws {
                cases.push((family, m, draw));
            }
        }
    }
    map(&cases, |&(family, m, draw)| {
        let ctx = FieldContext::cyclotomic(m).expect("m >= 2");
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (m << 32) ^ ((family as u64) << 16) ^ draw,
        );
        let p = 2 + draw % 2; // p in {2, 3} for the Verma families
        let r = random_module(family, &ctx, p, &mut rng).expect("admissible draw");
        SweepRecord {
            family,
            m,
            draw,
            violations: verify_relations(&r),
        }
    })
}

/// Power-identity grid over every identity clause, order, and exponent.
pub fn identity_grid(ms: &[u64], max_r: u64) -> Vec<(PowerIdentity, u64, u64, bool)> {
    let mut cases = Vec::new();
    for &m in ms {
        for id in [
            PowerIdentity::DdI,
            PowerIdentity::DdII,
            PowerIdentity::ReaI,
            PowerIdentity::ReaII,
            PowerIdentity::ReaIII,
            PowerIdentity::ReaIV,
        ] {
            for r in 1..=max_r {
                cases.push((id, m, r));
            }
        }
    }
    map(&cases, |&(id, m, r)| {
        let ctx = FieldContext::cyclotomic(m).expect("m >= 2");
        let pres = match id {
            PowerIdentity::DdI | PowerIdentity::DdII => crate::ncalg::dd2(ctx),
            _ => crate::ncalg::rea2(ctx),
        }
        .expect("builtin presentation");
        let ok = verify_power_identity(id, r, &pres).expect("normalization terminates");
        (id, m, r, ok)
    })
}
