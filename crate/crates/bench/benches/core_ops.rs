use criterion::{black_box, criterion_group, criterion_main, Criterion};
use geofix::acyc::{faithfulness_shadow, AcycData, CyclicRep};
use geofix::geosym::{hom_count_identity, irreducible_catalog};
use geofix::group::{enumerate_subgroups, named};
use geofix::gset::biset_iso_classes;
use geofix::schreier::StabChain;
use geofix::tomdieck::gset_iso_classes;
use geofix::twisted::{brute_force_fixed_dim, twisted_fixed_dim};
use geofix::wreath::{enumerate_wreath_homs, Wreath};
use geofix::{Caps, Perm};

fn caps() -> Caps {
    Caps { group_order: 64, ..Caps::default() }
}

fn twisted(c: &mut Criterion) {
    let caps = caps();
    let (lam, q) = (named("D4").unwrap(), named("C2").unwrap());
    let homs = enumerate_wreath_homs(&lam, &Wreath::new(3, &q), &caps).unwrap();
    let xs = biset_iso_classes(&lam, &q, 4, &caps).unwrap();
    let (sigma, x) = (&homs[homs.len() / 2], xs.last().unwrap());
    c.bench_function("twisted_fixed_dim D4 C2 q3", |b| b.iter(|| twisted_fixed_dim(black_box(x), black_box(sigma)).unwrap()));
    c.bench_function("brute_force_fixed_dim D4 C2 q3", |b| {
        b.iter(|| brute_force_fixed_dim(black_box(x), black_box(sigma), &caps).unwrap())
    });
}

fn groups(c: &mut Criterion) {
    let caps = caps();
    let s4 = named("S4").unwrap();
    c.bench_function("subgroups S4", |b| b.iter(|| enumerate_subgroups(black_box(&s4), &caps).unwrap()));
    let d4 = named("D4").unwrap();
    c.bench_function("gset classes D4 q4", |b| b.iter(|| gset_iso_classes(black_box(&d4), 4, &caps).unwrap()));
    let gens = [Perm::from_cycles(10, &[&[0, 1]]).unwrap(), Perm::from_cycles(10, &[&[0, 1, 2, 3, 4, 5, 6, 7, 8, 9]]).unwrap()];
    c.bench_function("stabilizer chain S10", |b| b.iter(|| StabChain::new(10, black_box(&gens), &[]).order()));
}

fn geosym(c: &mut Criterion) {
    let caps = caps();
    let (lam, q) = (named("S3").unwrap(), named("C2").unwrap());
    c.bench_function("irreducible catalog S3 C2", |b| b.iter(|| irreducible_catalog(black_box(&lam), &q, &caps).unwrap()));
    let cat = irreducible_catalog(&lam, &q, &caps).unwrap();
    c.bench_function("hom count identity S3 C2 q3", |b| b.iter(|| hom_count_identity(black_box(&cat), 3, &caps).unwrap()));
}

fn acyc(c: &mut Criterion) {
    let caps = caps();
    let d = AcycData {
        n: 6,
        q: vec![0, 2, 3],
        m: vec![6, 3],
        l: vec![2, 1],
        v: vec![CyclicRep::regular(3), CyclicRep::regular(3)],
        q_generators: vec![Perm::from_cycles(5, &[&[0, 1], &[2, 3, 4]]).unwrap()],
    };
    c.bench_function("faithfulness shadow k<=4", |b| b.iter(|| faithfulness_shadow(black_box(&d), 4, &caps).unwrap()));
}

criterion_group!(benches, twisted, groups, geosym, acyc);
criterion_main!(benches);
