use brownian_polymer::environment::BrownianLattice;
use brownian_polymer::polymer::*;
use brownian_polymer::stats::logsumexp;
use proptest::prelude::*;

fn lattice(n: usize, t_max: f64, dt: f64, seed: u64) -> BrownianLattice {
    BrownianLattice::sample(n, 0.0, t_max, dt, seed, 0.0).unwrap()
}

/// Cell weights of the snapped quadrature on indices `j0..=j1`.
fn weights(j0: usize, j1: usize, dt: f64) -> Vec<f64> {
    (j0..=j1)
        .map(|j| if j == j0 || j == j1 { 0.5 * dt } else { dt })
        .collect()
}

fn brute_two(lat: &BrownianLattice, beta: f64, j0: usize, j1: usize) -> f64 {
    let (b0, b1) = (lat.path(0), lat.path(1));
    let w = weights(j0, j1, lat.dt());
    let terms: Vec<f64> = (j0..=j1)
        .map(|s| w[s - j0].ln() + beta * (b0[s] - b0[j0] + b1[j1] - b1[s]))
        .collect();
    logsumexp(&terms)
}

fn brute_three(lat: &BrownianLattice, beta: f64, j1: usize) -> f64 {
    let (b0, b1, b2) = (lat.path(0), lat.path(1), lat.path(2));
    let w = weights(0, j1, lat.dt());
    let mut terms = Vec::new();
    for s in 0..=j1 {
        for u in s..=j1 {
            let weight = if s == u {
                0.5 * w[s] * w[s]
            } else {
                w[s] * w[u]
            };
            let e = b0[s] - b0[0] + b1[u] - b1[s] + b2[j1] - b2[u];
            terms.push(weight.ln() + beta * e);
        }
    }
    logsumexp(&terms)
}

#[test]
fn two_paths_match_single_sum() {
    for seed in [1, 2, 3] {
        let lat = lattice(2, 2.0, 0.01, seed);
        for beta in [0.0, 0.5, 1.0, 3.0] {
            let dp = log_partition_dp(&lat, beta, 2).unwrap();
            let bf = brute_two(&lat, beta, 0, 200);
            assert!(
                (dp - bf).abs() < 1e-12,
                "seed {seed} beta {beta}: {dp} vs {bf}"
            );
        }
    }
}

#[test]
fn three_paths_match_double_sum() {
    for seed in [4, 5, 6] {
        let lat = lattice(3, 3.0, 0.02, seed);
        for beta in [0.0, 0.5, 1.0, 2.5] {
            let dp = log_partition_dp(&lat, beta, 3).unwrap();
            let bf = brute_three(&lat, beta, 150);
            assert!(
                (dp - bf).abs() < 1e-10,
                "seed {seed} beta {beta}: {dp} vs {bf}"
            );
        }
    }
}

#[test]
fn gamma_n_matches_single_sum() {
    let lat = BrownianLattice::sample(2, -6.0, 0.0, 0.01, 8, 0.0).unwrap();
    for x in [-0.5, -1.25, -3.0] {
        let g = gamma_n_dp(&lat, x, 2).unwrap();
        let j0 = lat.grid().index_of(2.0 * x).unwrap();
        let bf = brute_two(&lat, 1.0, j0, lat.grid_size()) / 2.0;
        assert!((g - bf).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn gamma_n_embedding_inequality() {
    let n = 5;
    let lat = BrownianLattice::sample(n, -20.0, 0.0, 0.02, 11, 0.0).unwrap();
    let nf = n as f64;
    for (y, x) in [(-4.0, -1.0), (-2.0, -1.6), (-3.0, -0.4)] {
        let zy = log_partition_interval(&lat, 1.0, n, y * nf, 0.0).unwrap();
        let zx = log_partition_interval(&lat, 1.0, n, x * nf, 0.0).unwrap();
        let shift = lat.increment(0, y * nf, x * nf).unwrap();
        assert!(zy >= shift + zx, "y = {y}, x = {x}");
    }
}

#[test]
fn max_plus_matches_exhaustive_scan() {
    for seed in [1, 2, 3] {
        let lat = lattice(3, 3.0, 0.01, seed);
        let (b0, b1, b2) = (lat.path(0), lat.path(1), lat.path(2));
        for t in [1.0, 2.37, 3.0] {
            let jt = lat.grid().index_of(t).unwrap();
            let mut two = f64::NEG_INFINITY;
            for s in 0..=jt {
                two = two.max((b0[s] - b0[0]) - b1[s]);
            }
            assert_eq!(lpp_dp(&lat, 2, t).unwrap(), b1[jt] + two);

            let mut three = f64::NEG_INFINITY;
            for s in 0..=jt {
                for u in s..=jt {
                    three = three.max(((b0[s] - b0[0]) - b1[s] + b1[u]) - b2[u]);
                }
            }
            assert_eq!(lpp_dp(&lat, 3, t).unwrap(), b2[jt] + three);
        }
    }
}

#[test]
fn min_plus_is_negated_max_plus() {
    let lat = lattice(4, 4.0, 0.01, 12);
    let g = lat.grid();
    let negated: Vec<f64> = (0..4)
        .flat_map(|i| lat.path(i).iter().map(|v| -v))
        .collect();
    let neg =
        BrownianLattice::from_values(4, g.t_min, g.t_max, g.dt, 0, lat.anchor_index(), negated)
            .unwrap();
    for n in 1..=4 {
        assert_eq!(
            lpp_min_dp(&lat, n, 4.0).unwrap(),
            -lpp_dp(&neg, n, 4.0).unwrap()
        );
        assert!(lpp_min_dp(&lat, n, 4.0).unwrap() <= lpp_dp(&lat, n, 4.0).unwrap());
    }
}

#[test]
fn single_path_cases() {
    let lat = lattice(1, 1.0, 0.01, 2);
    let b = lat.increment(0, 0.0, 1.0).unwrap();
    assert_eq!(log_partition_dp(&lat, 1.3, 1).unwrap(), 1.3 * b);
    assert_eq!(lpp_dp(&lat, 1, 1.0).unwrap(), b);
}

#[test]
fn zero_beta_estimate_is_simplex_volume() {
    let r = estimate_free_energy(0.0, 64, 0.025, 3, 1).unwrap();
    assert_eq!(r.stderr, 0.0);
    assert!((r.mean - log_simplex_volume(64) / 64.0).abs() < 1e-10 / 64.0);
}

#[test]
fn large_beta_approaches_last_passage() {
    for seed in [3, 4] {
        let lat = lattice(3, 3.0, 0.01, seed);
        let l = lpp_dp(&lat, 3, 3.0).unwrap();
        let gaps: Vec<f64> = [10.0, 100.0, 1000.0]
            .iter()
            .map(|&beta| (log_partition_dp(&lat, beta, 3).unwrap() / beta - l).abs())
            .collect();
        assert!(gaps[1] < gaps[0] && gaps[2] < gaps[1], "{gaps:?}");
        let bound = 5.0 * (lat.grid_size() as f64).ln() / 1000.0;
        assert!(gaps[2] <= bound, "{} > {bound}", gaps[2]);
    }
}

#[test]
fn moment_identity_small_case() {
    let lat = lattice(4, 4.0, 0.02, 21);
    let r = moment_identity_check(&lat, 0.7, 4, 200_000, 5).unwrap();
    assert!(r.z_score() <= 4.0, "{r:?}");
}

#[test]
fn chernoff_bound_holds() {
    let lat = lattice(3, 3.0, 0.01, 17);
    for x in [0.25, 0.5, 1.0] {
        let pts = chernoff_check(&lat, 3, x, &[0.25, 0.5, 1.0, 2.0, 4.0], 100_000, 3).unwrap();
        for p in pts {
            assert!(p.tail <= p.bound, "x = {x}: {p:?}");
        }
    }
}

#[test]
fn last_passage_estimate_single_path() {
    let r = lpp_limit_estimate(1, 0.01, 400, 9).unwrap();
    assert!(r.mean.abs() <= 3.0 * r.stderr, "{r:?}");
}

#[test]
fn last_passage_estimate_grows_toward_two() {
    let means: Vec<f64> = [8usize, 16, 32, 64]
        .iter()
        .map(|&n| lpp_limit_estimate(n, 0.025, 100, 13).unwrap().mean)
        .collect();
    assert!(means.windows(2).all(|w| w[1] > w[0]), "{means:?}");
    assert!((1.6..=2.0).contains(&means[3]), "{means:?}");
}

#[test]
fn estimates_are_deterministic() {
    let a = estimate_free_energy(1.0, 8, 0.05, 6, 77).unwrap();
    let b = estimate_free_energy(1.0, 8, 0.05, 6, 77).unwrap();
    assert_eq!(a, b);
    let c = estimate_free_energy(1.0, 8, 0.05, 6, 78).unwrap();
    assert_ne!(a.mean, c.mean);
}

#[test]
fn too_few_paths_or_bad_span() {
    let lat = lattice(2, 2.0, 0.01, 1);
    assert!(log_partition_dp(&lat, 1.0, 3).is_err());
    assert!(lpp_dp(&lat, 2, 2.5).is_err());
    assert!(lpp_dp(&lat, 2, 1.005).is_err());
}

fn shifted(lat: &BrownianLattice, shifts: &[f64]) -> BrownianLattice {
    let g = lat.grid();
    let values: Vec<f64> = (0..lat.n_paths())
        .flat_map(|i| {
            lat.path(i)
                .iter()
                .map(move |v| v + shifts[i])
                .collect::<Vec<_>>()
        })
        .collect();
    BrownianLattice::from_values(
        lat.n_paths(),
        g.t_min,
        g.t_max,
        g.dt,
        0,
        lat.anchor_index(),
        values,
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn shifting_whole_paths_changes_nothing(
        seed in 0u64..1000,
        c in proptest::collection::vec(-50.0f64..50.0, 4),
        beta in 0.1f64..3.0,
    ) {
        let lat = lattice(4, 4.0, 0.05, seed);
        let moved = shifted(&lat, &c);
        let a = log_partition_dp(&lat, beta, 4).unwrap();
        let b = log_partition_dp(&moved, beta, 4).unwrap();
        prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        let la = lpp_dp(&lat, 4, 4.0).unwrap();
        let lb = lpp_dp(&moved, 4, 4.0).unwrap();
        prop_assert!((la - lb).abs() < 1e-9);
    }

    #[test]
    fn gamma_n_shift_invariant(seed in 0u64..1000, c in -20.0f64..20.0) {
        let lat = BrownianLattice::sample(3, -6.0, 0.0, 0.05, seed, 0.0).unwrap();
        let moved = shifted(&lat, &[0.0, c, 0.0]);
        let a = gamma_n_dp(&lat, -1.5, 3).unwrap();
        let b = gamma_n_dp(&moved, -1.5, 3).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn partition_between_max_and_volume_bounds(seed in 0u64..1000, beta in 0.1f64..5.0) {
        let n = 3;
        let lat = lattice(n, 3.0, 0.05, seed);
        let z = log_partition_dp(&lat, beta, n).unwrap();
        let l = lpp_dp(&lat, n, 3.0).unwrap();
        let m = lpp_min_dp(&lat, n, 3.0).unwrap();
        let vol = log_simplex_volume(n);
        prop_assert!(z <= beta * l + vol + 1e-9);
        prop_assert!(z >= beta * m + vol - 1e-9);
    }
}
