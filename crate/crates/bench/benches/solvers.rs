use criterion::{black_box, criterion_group, criterion_main, Criterion};
use hessbound::geometry::body_from_json;
use hessbound::web::ProfileFamily;
use hessbound::{
    fd_laplace_eigen, optimize_profile, shoot, solve_ball_eigenvalue, solve_deps, sweep,
    ConvexBody, GridDomain,
};
use hessbound_bench::{octagon, unit_square};

fn radial(c: &mut Criterion) {
    let mut g = c.benchmark_group("radial");
    g.bench_function("shoot n=3 k=2", |b| {
        b.iter(|| shoot(3, 2, 1.0, black_box(20.0)).unwrap())
    });
    g.sample_size(10);
    g.bench_function("ball eigenvalue n=3 k=2", |b| {
        b.iter(|| solve_ball_eigenvalue(3, 2, black_box(1.0)).unwrap())
    });
    g.finish();
}

fn geometry(c: &mut Criterion) {
    let oct = ConvexBody::Polygon(octagon());
    let cube = body_from_json(
        r#"{"type":"polytope","vertices":[[0,0,0],[1,0,0],[0,1,0],[1,1,0],[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#,
    )
    .unwrap();
    let mut g = c.benchmark_group("sweep");
    g.bench_function("octagon m=64", |b| {
        b.iter(|| sweep(black_box(&oct), 64).unwrap())
    });
    g.bench_function("cube m=64", |b| {
        b.iter(|| sweep(black_box(&cube), 64).unwrap())
    });
    g.finish();
}

fn web(c: &mut Criterion) {
    let sw = sweep(&unit_square(), 64).unwrap();
    let mut g = c.benchmark_group("web");
    g.sample_size(10);
    g.bench_function("optimize power family k=1", |b| {
        b.iter(|| optimize_profile(ProfileFamily::default(), black_box(&sw), 1).unwrap())
    });
    g.finish();
}

fn grid(c: &mut Criterion) {
    let domain = GridDomain::new(&octagon(), 1.0 / 32.0).unwrap();
    let mut g = c.benchmark_group("grid");
    g.sample_size(10);
    g.bench_function("fd eigen h=1/32", |b| {
        b.iter(|| fd_laplace_eigen(black_box(&domain)).unwrap())
    });
    g.bench_function("deps eps=1/8 h=1/32", |b| {
        b.iter(|| solve_deps(black_box(&domain), 0.125).unwrap())
    });
    g.finish();
}

criterion_group!(benches, radial, geometry, web, grid);
criterion_main!(benches);
