use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mtrdl::constructions::{basis_poly, handle_split, is_matroidal, SingletonData};
use mtrdl::fixtures::{glued_triangles, u36_a};
use mtrdl::fsing::{fpure_check, strong_freg_certificate};
use mtrdl::jets::{count_points, jet_system, JetRing, DEFAULT_BUDGET};
use mtrdl::{graphic, uniform, Field};

fn matroid_kernels(c: &mut Criterion) {
    let m = u36_a();
    c.bench_function("matroid/dual+circuits U36", |b| b.iter(|| black_box(m.dual()).circuits().len()));
    c.bench_function("matroid/rank sweep U36", |b| b.iter(|| (0..=m.ground()).map(|s| m.rank_of(s)).sum::<usize>()));
}

fn polynomial_kernels(c: &mut Criterion) {
    let m = graphic(&glued_triangles()).unwrap();
    let z = basis_poly(&m);
    let sigma = SingletonData::standard(m.labels());
    c.bench_function("poly/matroidal check glued triangles", |b| b.iter(|| is_matroidal(black_box(&z), &m, &sigma).unwrap()));
    c.bench_function("poly/handle split glued triangles", |b| b.iter(|| handle_split(black_box(&z), &m, &sigma, 0b11000).unwrap()));
}

fn jet_kernels(c: &mut Criterion) {
    let f = basis_poly(&uniform(2, 3).unwrap());
    let vars = JetRing::of(&f, 1).unwrap().vars();
    let sys = jet_system(&f, 1, Field::fp(5).unwrap()).unwrap();
    c.bench_function("jets/count Ψ_U23 m=1 p=5", |b| b.iter(|| count_points(black_box(&sys), &vars, 5, DEFAULT_BUDGET).unwrap()));
}

fn fsing_kernels(c: &mut Criterion) {
    let m = uniform(3, 6).unwrap();
    let chi = basis_poly(&m).to_field(Field::fp(5).unwrap()).unwrap();
    c.bench_function("fsing/F-pure U36 p=5", |b| b.iter(|| fpure_check(black_box(&chi)).unwrap()));
    c.bench_function("fsing/certificate U24 p=3", |b| b.iter(|| strong_freg_certificate(&uniform(2, 4).unwrap(), None, 3).unwrap()));
}

criterion_group! {
    name = kernels;
    config = Criterion::default().sample_size(10);
    targets = matroid_kernels, polynomial_kernels, jet_kernels, fsing_kernels
}
criterion_main!(kernels);
