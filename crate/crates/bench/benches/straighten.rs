use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dgbkr::hecke_core::{random_word, DiffQ};
use dgbkr::scalars_params::{build_quiver_degenerate, sc};
use dgbkr::{HeckeAlg, KlrAlg};

fn hecke_straighten(c: &mut Criterion) {
    for (name, alg) in [("degenerate", HeckeAlg::degenerate(3)), ("q2", HeckeAlg::q_deformed(3, sc(2)).unwrap())] {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let words: Vec<_> = (0..16).map(|_| random_word(&mut rng, &alg, 6)).collect();
        c.bench_function(&format!("hecke_straighten_{name}_d3_len6"), |b| {
            b.iter(|| {
                for w in &words {
                    black_box(alg.straighten(w).unwrap());
                }
            })
        });
    }
}

fn hecke_differential(c: &mut Criterion) {
    let alg = HeckeAlg::degenerate(3);
    let dq = DiffQ::new(&alg, &[sc(0), sc(1)]);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let elems: Vec<_> = (0..8).map(|_| alg.straighten(&random_word(&mut rng, &alg, 5)).unwrap()).collect();
    c.bench_function("hecke_dq_degenerate_d3", |b| {
        b.iter(|| {
            for h in &elems {
                black_box(dq.apply(h).unwrap());
            }
        })
    });
}

fn klr_expansion(c: &mut Criterion) {
    let q = build_quiver_degenerate(&[sc(0), sc(1)]);
    let alg = KlrAlg::new(q, vec![sc(0), sc(0), sc(1)]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let pairs: Vec<_> = (0..8)
        .map(|_| {
            let a = alg.basis_element(&alg.random_key(&mut rng, 1)).unwrap();
            let b = alg.basis_element(&alg.random_key(&mut rng, 1)).unwrap();
            a.mul(&b)
        })
        .collect();
    c.bench_function("klr_to_basis_nu001", |b| {
        b.iter_batched(
            || pairs.clone(),
            |ps| {
                for e in &ps {
                    black_box(alg.to_basis(e, None).unwrap());
                }
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, hecke_straighten, hecke_differential, klr_expansion);
criterion_main!(benches);
