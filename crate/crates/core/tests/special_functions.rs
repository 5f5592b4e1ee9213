#![allow(clippy::excessive_precision)]

use brownian_polymer::specialfn::*;
use brownian_polymer::Error;
use proptest::prelude::*;

// Reference values from 40-digit arithmetic.
const REFERENCE: [(f64, f64, f64); 6] = [
    (0.001, -1000.5755719318103005, 1000001.642533195869),
    (0.5, -1.9635100260214234794, 4.9348022005446793094),
    (3.7, 1.1671535393615113859, 0.3100378576700383191),
    (12.5, 2.4851956512749120482, 0.083285224601578370444),
    (1000.0, 6.9072551956488120521, 0.0010005001666666333334),
    (1e6, 13.815510057964190771, 1.0000005000001666667e-6),
];

fn log_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..k)
        .map(|i| (a + (b - a) * i as f64 / (k - 1) as f64).exp())
        .collect()
}

#[test]
fn polygamma_against_reference() {
    for (x, psi, psi1) in REFERENCE {
        let d = digamma(x).unwrap();
        let t = trigamma(x).unwrap();
        assert!(
            (d - psi).abs() <= 1e-12 * psi.abs().max(1.0),
            "digamma({x}) = {d}"
        );
        assert!(
            (t - psi1).abs() <= 1e-12 * psi1.abs().max(1.0),
            "trigamma({x}) = {t}"
        );
    }
}

#[test]
fn digamma_at_one() {
    assert!((digamma(1.0).unwrap() + 0.5772156649015329).abs() < 1e-15);
    let s = digamma_series(0.0, 50).unwrap();
    assert!((s.value + 0.5772156649015329).abs() < 1e-15);
}

#[test]
fn trigamma_at_one_matches_partial_sums() {
    // Σ 1/k² with the Euler–Maclaurin tail 1/N − 1/(2N²) + 1/(6N³).
    let n = 10_000;
    let head: f64 = (1..n).rev().map(|k| 1.0 / (k as f64 * k as f64)).sum();
    let nf = n as f64;
    let sum = head + 1.0 / nf + 0.5 / (nf * nf) + 1.0 / (6.0 * nf * nf * nf);
    assert!((trigamma(1.0).unwrap() - sum).abs() < 1e-14);
}

#[test]
fn large_argument_leading_terms() {
    assert!((digamma(1e6).unwrap() - (1e6f64.ln() - 5e-7)).abs() < 1e-12);
    assert!((trigamma(1e6).unwrap() - (1e-6 + 5e-13)).abs() < 1e-15);
}

#[test]
fn monotone_on_log_grid() {
    let xs = log_grid(1e-3, 1e6, 1000);
    for w in xs.windows(2) {
        assert!(
            digamma(w[1]).unwrap() > digamma(w[0]).unwrap(),
            "digamma at {}",
            w[1]
        );
        assert!(
            trigamma(w[1]).unwrap() < trigamma(w[0]).unwrap(),
            "trigamma at {}",
            w[1]
        );
    }
    for x in [0.01, 1.0, 10.0, 1e4] {
        assert!(trigamma(x).unwrap() > 0.0);
    }
}

#[test]
fn functional_equations_on_log_grid() {
    for x in log_grid(1e-3, 1e6, 1000) {
        let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x;
        let t = trigamma(x + 1.0).unwrap() - trigamma(x).unwrap() + 1.0 / (x * x);
        let scale_d = digamma(x).unwrap().abs().max(1.0);
        let scale_t = trigamma(x).unwrap().abs().max(1.0);
        assert!(d.abs() <= 1e-10 * scale_d, "digamma at {x}: {d}");
        assert!(t.abs() <= 1e-10 * scale_t, "trigamma at {x}: {t}");
    }
    for x in [0.5, 1.0, 3.7] {
        assert!((digamma(x + 1.0).unwrap() - digamma(x).unwrap() - 1.0 / x).abs() < 1e-13);
    }
}

#[test]
fn series_agrees_with_recurrence_path() {
    for i in 0..=150 {
        let x = 0.25 + 1.5 * i as f64 / 150.0;
        let direct = digamma_detail(x).unwrap();
        let series = digamma_series(x - 1.0, 400).unwrap();
        assert_eq!(direct.method, Method::RecurrencePlusAsymptotic);
        assert_eq!(series.method, Method::PowerSeries);
        assert!((direct.value - series.value).abs() < 1e-10, "x = {x}");
        let t = trigamma_series(x - 1.0, 400).unwrap().value;
        assert!((trigamma(x).unwrap() - t).abs() < 1e-10, "x = {x}");
    }
}

#[test]
fn loggamma_series_values() {
    for k in [1, 5, 50] {
        assert_eq!(loggamma_series(0.0, k).unwrap(), 0.0);
    }
    assert!(loggamma_series(1.0, 200).unwrap().abs() < 1e-12);
    assert!((loggamma_series(0.5, 200).unwrap() + 0.12078223763524522235).abs() < 1e-14);
    assert!(matches!(
        loggamma_series(2.0, 10),
        Err(Error::Domain { .. })
    ));
    assert!(matches!(
        loggamma_series(-2.5, 10),
        Err(Error::Domain { .. })
    ));
}

#[test]
fn inverse_round_trip_on_log_grid() {
    for y in log_grid(1e-8, 1e8, 1000) {
        let x = inv_trigamma(y).unwrap();
        assert!(x > 0.0);
        let back = trigamma(x).unwrap();
        assert!((back - y).abs() <= 1e-10 * y.max(1.0), "y = {y}: {back}");
    }
    for y in [1e-4, 0.5, 3.0, 1e4] {
        let back = trigamma(inv_trigamma(y).unwrap()).unwrap();
        assert!(((back - y) / y).abs() < 1e-10);
    }
    assert!((inv_trigamma(std::f64::consts::PI.powi(2) / 6.0).unwrap() - 1.0).abs() < 1e-13);
}

#[test]
fn inverse_at_large_argument_matches_bisection() {
    let y = 1e8;
    let (mut lo, mut hi) = (1e-12_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if trigamma(mid).unwrap() > y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = inv_trigamma(y).unwrap();
    assert!((x - lo).abs() <= 1e-12 * x);
    assert!((x - 1.0000000082234685411e-4).abs() < 1e-12 * x);
}

#[test]
fn domain_errors() {
    for x in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(digamma(x).is_err());
        assert!(trigamma(x).is_err());
    }
    assert!(inv_trigamma(0.0).is_err());
    assert!(inv_trigamma(-3.0).is_err());
}

proptest! {
    #[test]
    fn trigamma_positive_and_decreasing(x in 1e-3f64..1e5, h in 1e-3f64..1.0) {
        let a = trigamma(x).unwrap();
        let b = trigamma(x + h).unwrap();
        prop_assert!(a > 0.0 && b > 0.0 && b < a);
    }

    #[test]
    fn digamma_recurrence(x in 1e-3f64..1e5) {
        let d = digamma(x + 1.0).unwrap() - digamma(x).unwrap();
        prop_assert!((d - 1.0 / x).abs() <= 1e-10 * (1.0 / x).max(1.0));
    }

    #[test]
    fn inverse_round_trip(e in -8.0f64..8.0) {
        let y = 10f64.powf(e);
        let back = trigamma(inv_trigamma(y).unwrap()).unwrap();
        prop_assert!((back - y).abs() <= 1e-10 * y.max(1.0));
    }
}
