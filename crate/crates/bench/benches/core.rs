use criterion::{black_box, criterion_group, criterion_main, Criterion};
use drinfeld_bench::{carlitz, lattice, point};
use drinfeld_core::{
    coset_reps, ArithSubgroup, DegreePolicy, Fq, FqElem, LatticeExp, Matrix, PolyA, RatF, RatField,
    Ring, TLaurent,
};

fn field_mul(c: &mut Criterion) {
    let fq = Fq::new(64).unwrap();
    let els: Vec<FqElem> = fq.elements().collect();
    c.bench_function("fq64_mul_all_pairs", |b| {
        b.iter(|| {
            let mut acc = fq.zero();
            for &x in &els {
                for &y in &els {
                    acc = fq.add(acc, fq.mul(x, y));
                }
            }
            black_box(acc)
        })
    });
}

fn exponential(c: &mut Criterion) {
    let m = carlitz(3);
    c.bench_function("carlitz_exp_series_q3_depth6", |b| {
        b.iter(|| black_box(m.exp_series(6).unwrap()))
    });
    c.bench_function("carlitz_act_deg8", |b| {
        let fq = Fq::new(3).unwrap();
        let a = PolyA::monomial(fq.one(), 8);
        b.iter(|| black_box(m.act(&a)))
    });
}

fn lattice_exponential(c: &mut Criterion) {
    let (ring, omega) = point(2, 120);
    let l = lattice(2);
    let z = TLaurent::from_coeffs(2, -1, &[FqElem(1), FqElem(1)], 120);
    let policy = DegreePolicy {
        start: 2,
        ceiling: 24,
    };
    c.bench_function("lattice_exp_q2_prec120", |b| {
        b.iter(|| {
            let mut ex = LatticeExp::new(&ring, &l, &omega).unwrap();
            black_box(ex.eval_to(&z, 60, policy).unwrap())
        })
    });
}

fn cosets(c: &mut Criterion) {
    let fq = Fq::new(3).unwrap();
    let k = RatField::new(fq.clone());
    let p = RatF::from_poly(PolyA::from_indices(&fq, &[1, 0, 1]).unwrap());
    let delta = Matrix::from_rows(vec![vec![p, k.zero()], vec![k.zero(), k.one()]]);
    let g = ArithSubgroup::full(2);
    c.bench_function("hecke_cosets_q3_deg2", |b| {
        b.iter(|| black_box(coset_reps(&fq, &g, &delta, &g, 1 << 16).unwrap()))
    });
}

criterion_group!(benches, field_mul, exponential, lattice_exponential, cosets);
criterion_main!(benches);
