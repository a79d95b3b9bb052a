use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hessbasis::basis::{classical_t, enumerate_candidate_sets, Certifier};
use hessbasis::decompose::{decompose, random_decomposition};
use hessbasis::groups::DEFAULT_ELEMENT_BOUND;
use hessbasis::invariants::InvariantSystem;
use hessbasis::molien::{census_ratio, cycle_index_molien, default_truncation};
use hessbasis::{
    CycloScalar, Exceptional, Family, Fixtures, GroupSpec, GroupType, Matrix, RatioPolynomial,
};

fn arithmetic(c: &mut Criterion) {
    let a = CycloScalar::parse_expr("1/2 + 3*z - 2*z^3", 12).unwrap();
    let b = CycloScalar::parse_expr("-1 + z^2 + 5/7*z^3", 12).unwrap();
    c.bench_function("cyclo mul, conductor 12", |bench| {
        bench.iter(|| black_box(&a) * black_box(&b))
    });
    let m = Matrix::from_fn(10, 10, |i, j| {
        CycloScalar::from_i64(((i * 7 + j * 3) % 11) as i64 - 5)
    });
    c.bench_function("det 10x10 rational", |bench| {
        bench.iter(|| black_box(&m).det().unwrap())
    });
}

fn molien(c: &mut Criterion) {
    let mut g = c.benchmark_group("molien");
    g.sample_size(10);
    for s in ["H3", "F4", "H4"] {
        let spec = GroupSpec::parse(s).unwrap();
        g.bench_function(format!("census ratio {s}"), |bench| {
            bench.iter(|| census_ratio(&spec, DEFAULT_ELEMENT_BOUND).unwrap())
        });
    }
    let spec = GroupSpec::new(GroupType::A(8)).unwrap();
    let order = default_truncation(&spec.degrees);
    g.bench_function("cycle index A8", |bench| {
        bench.iter(|| cycle_index_molien(Family::A, 8, hessbasis::Character::Sym2, order).unwrap())
    });
    g.finish();
}

fn certification(c: &mut Criterion) {
    let mut g = c.benchmark_group("certification");
    g.sample_size(10);
    for x in [Exceptional::F4, Exceptional::E6, Exceptional::E8] {
        let fixture = Fixtures::builtin().get(x).unwrap();
        let sys =
            InvariantSystem::new(&GroupSpec::new(GroupType::Exceptional(x)).unwrap()).unwrap();
        let v = sys.regular_vector(fixture.regular_point()).unwrap();
        let sets = enumerate_candidate_sets(
            &sys.degrees(),
            &RatioPolynomial::new(fixture.ratio_coeffs()),
            true,
        );
        let certifier = Certifier::new(&sys.invariants, &v, x.name()).unwrap();
        g.bench_function(format!("one {} set", x.name()), |bench| {
            bench.iter(|| certifier.certify(&sets[0]).unwrap())
        });
    }
    let spec = GroupSpec::new(GroupType::B(8)).unwrap();
    let sys = InvariantSystem::new(&spec).unwrap();
    let v = sys.default_regular_vector().unwrap();
    let t = classical_t(Family::B, 8, None).unwrap();
    g.bench_function("classical T for B8", |bench| {
        bench.iter(|| {
            Certifier::new(&sys.invariants, &v, "B:8")
                .unwrap()
                .certify(&t)
                .unwrap()
        })
    });
    g.finish();
}

fn decomposition(c: &mut Criterion) {
    let spec = GroupSpec::new(GroupType::B(3)).unwrap();
    let sys = InvariantSystem::new(&spec).unwrap();
    let set = classical_t(Family::B, 3, None).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut g = c.benchmark_group("decompose");
    g.sample_size(10);
    g.bench_function("B3 random round trip", |bench| {
        bench.iter_batched(
            || {
                random_decomposition(&set, &sys.degrees(), 8, &mut rng)
                    .reconstruct(&sys.invariants)
                    .unwrap()
            },
            |sigma| decompose(&sigma, &set, &sys.invariants, &sys.group).unwrap(),
            BatchSize::SmallInput,
        )
    });
    g.finish();
}

criterion_group!(benches, arithmetic, molien, certification, decomposition);
criterion_main!(benches);
