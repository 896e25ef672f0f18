use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use maxmetric::algebra::InnerProduct;
use maxmetric::curvature::{ricci_soliton_check, ricci_tensor};
use maxmetric::families::almost_abelian_algebra;
use maxmetric::flow::{integrate, FloatMat, FlowProblem, Normalization};
use maxmetric::graph::{attach_algebra, cycle_graph, petersen_graph, DirectedGraph};
use maxmetric::linalg::rat_int;
use maxmetric::pipeline::{certify, Limits};

fn bench_derivations(c: &mut Criterion) {
    let w: Vec<_> = (1..=7).map(rat_int).collect();
    let s = almost_abelian_algebra(&w).unwrap();
    c.bench_function("derivation_algebra/diagonal_extension_8", |b| {
        b.iter(|| s.derivation_algebra().dim())
    });

    let petersen = attach_algebra(&DirectedGraph::canonical(petersen_graph())).unwrap();
    c.bench_function("derivation_algebra/petersen_25", |b| {
        b.iter(|| petersen.derivation_algebra().dim())
    });
}

fn bench_ricci(c: &mut Criterion) {
    let petersen = attach_algebra(&DirectedGraph::canonical(petersen_graph())).unwrap();
    let ip = InnerProduct::identity(25);
    c.bench_function("ricci/petersen_25", |b| {
        b.iter(|| ricci_tensor(&petersen, &ip).unwrap().scal)
    });
    c.bench_function("soliton/petersen_25", |b| {
        b.iter(|| ricci_soliton_check(&petersen, &ip).unwrap().is_some())
    });
}

fn bench_certificates(c: &mut Criterion) {
    let limits = Limits::default();

    let w: Vec<_> = (1..=6).map(rat_int).collect();
    let s = almost_abelian_algebra(&w).unwrap();
    c.bench_function("certify/diagonal_extension_7", |b| {
        b.iter(|| certify(&s, None, None, &limits).unwrap().status)
    });

    let dg = DirectedGraph::canonical(cycle_graph(6));
    let alg = attach_algebra(&dg).unwrap();
    c.bench_function("certify/cycle_6", |b| {
        b.iter_batched(
            || (alg.clone(), dg.clone()),
            |(alg, dg)| certify(&alg, Some(&dg), None, &limits).unwrap().status,
            BatchSize::SmallInput,
        )
    });
}

fn bench_flow(c: &mut Criterion) {
    let alg = almost_abelian_algebra(&[rat_int(1), rat_int(2)]).unwrap();
    c.bench_function("flow/ricci_1000_steps_dim3", |b| {
        b.iter(|| {
            let problem = FlowProblem::new(
                &alg,
                FloatMat::identity(3),
                2.0,
                0.0,
                1.0,
                1e-3,
                Normalization::None,
            )
            .unwrap();
            integrate(&problem).unwrap().samples.len()
        })
    });
}

criterion_group!(
    benches,
    bench_derivations,
    bench_ricci,
    bench_certificates,
    bench_flow
);
criterion_main!(benches);
