use hessbound::*;

#[test]
fn seeded_polygon_is_stable() {
    let fixture = include_str!("fixtures/random_polygon_seed1_n8.csv");
    let expected: Vec<(f64, f64)> = fixture
        .lines()
        .skip(1)
        .map(|l| {
            let (x, y) = l.split_once(',').unwrap();
            (x.parse().unwrap(), y.parse().unwrap())
        })
        .collect();
    let p = random_polygon(1, 8, Default::default()).unwrap();
    assert_eq!(p.len(), expected.len());
    for (v, (x, y)) in p.vertices().iter().zip(&expected) {
        assert!((v.x - x).abs() < 1e-11 && (v.y - y).abs() < 1e-11);
    }
    assert!((p.area() - 1.0).abs() < 1e-12);
}

#[test]
fn square_sweep_csv_is_stable() {
    let sq = ConvexBody::Polygon(Polygon::rectangle(1.0, 1.0).unwrap());
    assert_eq!(
        sweep(&sq, 16).unwrap().to_csv(),
        include_str!("fixtures/square_sweep_m16.csv")
    );
}
