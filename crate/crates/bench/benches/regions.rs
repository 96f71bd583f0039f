use criterion::{criterion_group, criterion_main, Criterion};
use hdmac_bench::{budget, symmetric};
use hdmac_core::sampling::{random_df_point, random_pdf_point, random_pdf_distribution, random_slot_channels};
use hdmac_core::{df_region, dmc_pdf_joint_region, pdf_joint_region, TimeSlots};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

fn gaussian(c: &mut Criterion) {
    let g = symmetric(2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (ps, pa) = random_pdf_point(&mut rng, &budget());
    let (ds, da) = random_df_point(&mut rng, &budget());
    c.bench_function("pdf_joint_region", |b| {
        b.iter(|| pdf_joint_region(black_box(&g), &ps, &pa).polygon())
    });
    c.bench_function("df_region", |b| {
        b.iter(|| df_region(black_box(&g), &ds, &da).polygon())
    });
}

fn discrete(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let slots = TimeSlots::new(0.3, 0.3, 0.4).unwrap();
    for n in [2, 3] {
        let ch = random_slot_channels(&mut rng, n);
        let dist = random_pdf_distribution(&mut rng, n);
        c.bench_function(&format!("dmc_pdf_joint_region_n{n}"), |b| {
            b.iter(|| dmc_pdf_joint_region(black_box(&ch), &dist, &slots).unwrap())
        });
    }
}

criterion_group!(benches, gaussian, discrete);
criterion_main!(benches);
