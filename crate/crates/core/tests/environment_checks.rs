use brownian_polymer::environment::{BrownianLattice, EstimateRecord};
use brownian_polymer::stats;
use brownian_polymer::Error;
use proptest::prelude::*;

#[test]
fn disjoint_increments_uncorrelated() {
    let lat = BrownianLattice::sample(1, 0.0, 200.0, 0.01, 3, 0.0).unwrap();
    let p = lat.path(0);
    let (a, b): (Vec<f64>, Vec<f64>) = (0..10_000)
        .map(|k| (p[2 * k + 1] - p[2 * k], p[2 * k + 2] - p[2 * k + 1]))
        .unzip();
    assert!(stats::correlation(&a, &b).abs() < 0.05);
}

#[test]
fn unit_time_variance() {
    let xs: Vec<f64> = (0..10_000)
        .map(|r| {
            let lat = BrownianLattice::sample_replica(1, 0.0, 1.0, 0.05, 17, r, 0.0).unwrap();
            lat.increment(0, 0.0, 1.0).unwrap()
        })
        .collect();
    assert!((stats::sample_variance(&xs) - 1.0).abs() < 0.05);
}

#[test]
fn backward_side_has_linear_variance() {
    let xs: Vec<f64> = (0..10_000)
        .map(|r| {
            let lat = BrownianLattice::sample_replica(1, -2.0, 1.0, 0.05, 18, r, 0.0).unwrap();
            lat.increment(0, -2.0, 0.0).unwrap()
        })
        .collect();
    assert!((stats::sample_variance(&xs) / 2.0 - 1.0).abs() < 0.05);
}

#[test]
fn same_seed_same_lattice() {
    let a = BrownianLattice::sample(4, -1.0, 3.0, 0.01, 5, 0.0).unwrap();
    let b = BrownianLattice::sample(4, -1.0, 3.0, 0.01, 5, 0.0).unwrap();
    assert_eq!(a, b);
    let mut da = Vec::new();
    let mut db = Vec::new();
    a.write_dump(&mut da).unwrap();
    b.write_dump(&mut db).unwrap();
    assert_eq!(da, db);
}

#[test]
fn grid_errors() {
    assert!(matches!(
        BrownianLattice::sample(1, 0.0, 1.0, 0.3, 1, 0.0),
        Err(Error::InvalidGrid(_))
    ));
    let lat = BrownianLattice::sample(1, 0.0, 1.0, 0.1, 1, 0.0).unwrap();
    assert!(matches!(
        lat.increment(0, 0.05, 0.5),
        Err(Error::OutOfRange(_))
    ));
    assert!(matches!(
        lat.increment(1, 0.0, 0.5),
        Err(Error::OutOfRange(_))
    ));
}

#[test]
fn estimate_record_stderr() {
    let xs = [1.0, 2.0, 4.0, 7.0];
    let r = EstimateRecord::from_samples("q", &xs, 3, 0.1, 9).unwrap();
    assert_eq!(r.replicas, 4);
    assert!((r.stderr - stats::sample_variance(&xs).sqrt() / 2.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn increments_antisymmetric_and_telescoping(seed in 0u64..10_000, s in 0usize..=40, t in 0usize..=40, u in 0usize..=40) {
        let lat = BrownianLattice::sample(2, -1.0, 1.0, 0.05, seed, 0.0).unwrap();
        let time = |k: usize| lat.grid().time(k);
        let (s, t, u) = (time(s), time(t), time(u));
        for i in 0..2 {
            prop_assert_eq!(lat.increment(i, t, t).unwrap(), 0.0);
            prop_assert_eq!(lat.increment(i, s, t).unwrap(), -lat.increment(i, t, s).unwrap());
            let whole = lat.increment(i, s, u).unwrap();
            let parts = lat.increment(i, s, t).unwrap() + lat.increment(i, t, u).unwrap();
            prop_assert!((whole - parts).abs() < 1e-12);
        }
    }

    #[test]
    fn anchor_is_zero(seed in 0u64..10_000, back in 1usize..20, fwd in 1usize..20) {
        let lat = BrownianLattice::sample(3, -(back as f64) * 0.1, fwd as f64 * 0.1, 0.1, seed, 0.0).unwrap();
        for i in 0..3 {
            prop_assert_eq!(lat.value(i, lat.anchor_index()), 0.0);
        }
        prop_assert!((lat.grid_size() as f64 * lat.dt() - (lat.t_max() - lat.t_min())).abs() < 1e-12);
    }
}
