use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use slopecalc::random::{filtered_module, invertible, slope_multiset, ModuleSpec};
use slopecalc::{battery, hn_filtration, PhiModule, SearchOptions, SyntheticCohomology};

fn newton(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let modules: Vec<PhiModule> = (0..32)
        .map(|_| PhiModule::from_slopes(&slope_multiset(&mut rng, 4, 8, 2), 3).unwrap())
        .collect();
    c.bench_function("newton_slopes rank<=8", |b| {
        b.iter(|| modules.iter().map(|m| m.newton_slopes().len()).sum::<usize>())
    });
}

fn charpoly(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let m = invertible(&mut rng, 8, 5);
    c.bench_function("charpoly hessenberg 8x8", |b| b.iter(|| black_box(&m).charpoly().unwrap()));
    c.bench_function("charpoly faddeev 8x8", |b| b.iter(|| black_box(&m).charpoly_faddeev().unwrap()));
}

fn spec(max_valuation: i64) -> ModuleSpec {
    ModuleSpec {
        max_valuation,
        half_slope: 0.25,
        monodromy: 0.25,
        ..ModuleSpec::default()
    }
}

fn hn(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let ms: Vec<_> = (0..32).map(|_| filtered_module(&mut rng, &spec(3), 3)).collect();
    c.bench_function("hn_filtration rank<=3", |b| {
        b.iter(|| {
            ms.iter()
                .map(|m| hn_filtration(m, SearchOptions::default()).unwrap().filtration.steps.len())
                .sum::<usize>()
        })
    });
}

fn battery_run(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let inputs: Vec<SyntheticCohomology> = (0..16)
        .map(|_| {
            let top = filtered_module(&mut rng, &spec(2), 2);
            let prev = filtered_module(&mut rng, &spec(1), 1);
            SyntheticCohomology::new(2, top, Some(prev)).unwrap()
        })
        .collect();
    c.bench_function("battery r=2", |b| {
        b.iter(|| {
            inputs
                .iter()
                .filter(|s| battery(s, SearchOptions::default()).unwrap().consistent)
                .count()
        })
    });
}

criterion_group!(benches, newton, charpoly, hn, battery_run);
criterion_main!(benches);
