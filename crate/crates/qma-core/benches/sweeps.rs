//! Sweep throughput: the same workloads through the rayon map and through a
//! plain sequential loop, so the `parallel` feature's win is measurable.
//!
//! Run `cargo bench -p qma-core` for the parallel numbers; the sequential
//! reference is always benched in-process below, independent of features.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use qma_core::repmod::verify_relations;
use qma_core::scalar::FieldContext;
use qma_core::structure::verify_power_identity;
use qma_core::sweep::{self, random_module, ALL_FAMILIES};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn bench_relation_sweep(c: &mut Criterion) {
    let ms = [2u64, 3, 4];
    let mut g = c.benchmark_group("relation_sweep");
    g.sample_size(10);
    g.bench_function("mapped", |b| {
        b.iter(|| sweep::relation_sweep(&ms, 4, 7))
    });
    g.bench_function("sequential_loop", |b| {
        b.iter(|| {
            let mut out = Vec::new();
            for &m in &ms {
                let ctx = FieldContext::cyclotomic(m).unwrap();
                for family in ALL_FAMILIES {
                    for draw in 0..4u64 {
                        let mut rng =
                            ChaCha8Rng::seed_from_u64(7 ^ (m << 32) ^ ((family as u64) << 16) ^ draw);
                        let r = random_module(family, &ctx, 2 + draw % 2, &mut rng).unwrap();
                        out.push(verify_relations(&r));
                    }
                }
            }
            out
        })
    });
    g.finish();
}

fn bench_identity_grid(c: &mut Criterion) {
    let ms = [3u64, 5];
    let mut g = c.benchmark_group("identity_grid");
    g.sample_size(10);
    g.bench_function("mapped", |b| {
        b.iter(|| sweep::identity_grid(&ms, 4))
    });
    g.bench_function("sequential_loop", |b| {
        b.iter_batched(
            || (),
            |_| {
                let mut out = Vec::new();
                for &m in &ms {
                    for id in [
                        qma_core::structure::PowerIdentity::DdI,
                        qma_core::structure::PowerIdentity::DdII,
                        qma_core::structure::PowerIdentity::ReaI,
                        qma_core::structure::PowerIdentity::ReaII,
                        qma_core::structure::PowerIdentity::ReaIII,
                        qma_core::structure::PowerIdentity::ReaIV,
                    ] {
                        let ctx = FieldContext::cyclotomic(m).unwrap();
                        let pres = match id {
                            qma_core::structure::PowerIdentity::DdI
                            | qma_core::structure::PowerIdentity::DdII => {
                                qma_core::ncalg::dd2(ctx)
                            }
                            _ => qma_core::ncalg::rea2(ctx),
                        }
                        .unwrap();
                        for r in 1..=4u64 {
                            out.push(verify_power_identity(id, r, &pres).unwrap());
                        }
                    }
                }
                out
            },
            BatchSize::SmallInput,
        )
    });
    g.finish();
}

criterion_group!(benches, bench_relation_sweep, bench_identity_grid);
criterion_main!(benches);
