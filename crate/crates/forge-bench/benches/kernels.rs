//! Criterion benchmarks for the hot computational kernels: extension-field
//! arithmetic, irreducibility testing, the bulk reducible-alpha bitmap, the
//! palindromic-irreducible search, group closure, and classification.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use forge_core::field::{batch_invert, FiniteField, PrimePower};
use forge_core::gsp::{classify_subgroup, group_closure, symplectic_companion, Matrix, SympSpace};
use forge_core::poly::{
    find_symplectic_irreducible, is_irreducible, valid_alpha_count, MonicPoly,
    ReducibleAlphaTable,
};

fn field_arithmetic(c: &mut Criterion) {
    let field = FiniteField::new(3, 8).expect("GF(3^8)");
    let xs: Vec<_> = (1..512u128).map(|k| field.element_from_index(k)).collect();

    c.bench_function("field-mul GF(3^8) 511 elements", |b| {
        b.iter(|| {
            let mut acc = field.one();
            for x in &xs {
                acc = &acc * black_box(x);
            }
            acc
        })
    });

    c.bench_function("batch-invert GF(3^8) 511 elements", |b| {
        b.iter(|| batch_invert(black_box(&xs)).expect("all nonzero"))
    });
}

fn irreducibility(c: &mut Criterion) {
    let field = FiniteField::prime(13).expect("GF(13)");
    let polys: Vec<MonicPoly> = (0..64u128)
        .map(|k| MonicPoly::from_encoding(&field, 8, 13u128.pow(7) + k * 9973))
        .collect();

    c.bench_function("is-irreducible deg-8 GF(13) x64", |b| {
        b.iter(|| polys.iter().filter(|f| is_irreducible(black_box(f))).count())
    });
}

fn counting(c: &mut Criterion) {
    let field = FiniteField::new(3, 8).expect("GF(3^8)");
    c.bench_function("reducible-alpha bitmap GF(3^8)", |b| {
        b.iter(|| ReducibleAlphaTable::build(black_box(&field), 6561).expect("in cap"))
    });

    let q = PrimePower::new(9).expect("9 = 3^2");
    let mut group = c.benchmark_group("valid-alpha-count");
    group.sample_size(20);
    group.bench_function("GF(9^4) exhaustive", |b| {
        b.iter(|| valid_alpha_count(black_box(&q), 4, 6561).expect("in cap"))
    });
    group.finish();
}

fn search(c: &mut Criterion) {
    let q = PrimePower::new(13).expect("13 prime");
    c.bench_function("symplectic-irreducible search GF(13) deg 8", |b| {
        b.iter(|| find_symplectic_irreducible(black_box(&q), 8, 59_049).expect("search succeeds"))
    });
}

fn closure(c: &mut Criterion) {
    let q = PrimePower::new(7).expect("7 prime");
    let hit = find_symplectic_irreducible(&q, 2, 59_049).expect("search succeeds");
    let space = SympSpace::new(7, 1).expect("Sp_2(F_7)");
    let companion = symplectic_companion(&hit.poly).expect("companion");
    let transvection = space.make_transvection(&[1, 0], 1).expect("transvection");
    let gens = [companion, transvection];

    c.bench_function("group-closure Sp_2(F_7) 336 elements", |b| {
        b.iter(|| group_closure(&space, black_box(&gens), 1000).expect("under cap"))
    });
}

fn classification(c: &mut Criterion) {
    // Transvections confined to the first hyperbolic plane of F_3^4: a
    // reducible subgroup of order 24.
    let rows: [[u64; 16]; 3] = [
        [1, 0, 2, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
        [1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1],
        [2, 0, 2, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1],
    ];
    let gens: Vec<Matrix> = rows
        .iter()
        .map(|flat| {
            let rows: Vec<Vec<u64>> = flat.chunks(4).map(|r| r.to_vec()).collect();
            Matrix::from_rows(3, &rows).expect("4x4 fixture")
        })
        .collect();
    let space = SympSpace::new(3, 2).expect("Sp_4(F_3)");

    c.bench_function("classify reducible order-24 subgroup", |b| {
        b.iter(|| classify_subgroup(&space, black_box(&gens), 100_000).expect("classifies"))
    });
}

criterion_group!(
    benches,
    field_arithmetic,
    irreducibility,
    counting,
    search,
    closure,
    classification
);
criterion_main!(benches);
