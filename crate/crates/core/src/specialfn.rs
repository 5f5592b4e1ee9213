//! Digamma, trigamma and tetragamma on the positive half-line, the inverse of
//! trigamma, and the Taylor series of `ln Γ(1 + z)` about the origin.
//!
//! The production path shifts the argument upward with the recurrence
//! `Ψ(x + 1) = Ψ(x) + 1/x` until `x >= 10`, then sums the Bernoulli asymptotic
//! expansion through `B₁₄`. The power series is kept separate so it can act as
//! an independent check of the recurrence path near `x = 1`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Arguments below this threshold are shifted upward before the asymptotic
/// series is applied.
pub const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// Bernoulli numbers B₂, B₄, …, B₁₄.
const BERNOULLI: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    RecurrencePlusAsymptotic,
    PowerSeries,
}

/// A polygamma value with a record of how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolygammaResult {
    pub value: f64,
    pub method: Method,
    /// Number of recurrence steps applied before the asymptotic series.
    pub shift_count: u32,
}

fn check_positive(func: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(
            func,
            format!("argument must be finite and > 0, got {x}"),
        ));
    }
    Ok(())
}

/// Σ_k c_k t^k for k = 0..7 evaluated by Horner's rule.
#[inline]
fn horner(coeffs: &[f64; 7], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

fn digamma_coeffs() -> &'static [f64; 7] {
    static C: OnceLock<[f64; 7]> = OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; 7];
        for (k, b) in BERNOULLI.iter().enumerate() {
            c[k] = b / (2.0 * (k as f64 + 1.0));
        }
        c
    })
}

fn tetragamma_coeffs() -> &'static [f64; 7] {
    static C: OnceLock<[f64; 7]> = OnceLock::new();
    C.get_or_init(|| {
        let mut c = [0.0; 7];
        for (k, b) in BERNOULLI.iter().enumerate() {
            c[k] = (2.0 * (k as f64 + 1.0) + 1.0) * b;
        }
        c
    })
}

pub fn digamma_detail(x: f64) -> Result<PolygammaResult> {
    check_positive("digamma", x)?;
    let mut x = x;
    let mut acc = 0.0;
    let mut shifts = 0;
    while x < ASYMPTOTIC_THRESHOLD {
        acc -= 1.0 / x;
        x += 1.0;
        shifts += 1;
    }
    let inv = 1.0 / x;
    let t = inv * inv;
    let tail = t * horner(digamma_coeffs(), t);
    let value = x.ln() - 0.5 * inv - tail + acc;
    Ok(PolygammaResult {
        value,
        method: Method::RecurrencePlusAsymptotic,
        shift_count: shifts,
    })
}

/// Ψ(x) = Γ′(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    digamma_detail(x).map(|r| r.value)
}

pub fn trigamma_detail(x: f64) -> Result<PolygammaResult> {
    check_positive("trigamma", x)?;
    let mut x = x;
    let mut acc = 0.0;
    let mut shifts = 0;
    while x < ASYMPTOTIC_THRESHOLD {
        acc += 1.0 / (x * x);
        x += 1.0;
        shifts += 1;
    }
    let inv = 1.0 / x;
    let t = inv * inv;
    // 1/x + 1/(2x²) + Σ B₂ₖ / x^{2k+1}
    let tail = inv * t * horner(&BERNOULLI, t);
    let value = inv + 0.5 * t + tail + acc;
    Ok(PolygammaResult {
        value,
        method: Method::RecurrencePlusAsymptotic,
        shift_count: shifts,
    })
}

/// Ψ₁(x) = Ψ′(x) for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    trigamma_detail(x).map(|r| r.value)
}

/// `Ψ₁(x) − 1/x`, evaluated without cancellation for large `x`.
pub fn trigamma_excess(x: f64) -> Result<f64> {
    check_positive("trigamma_excess", x)?;
    if x < ASYMPTOTIC_THRESHOLD {
        return Ok(trigamma(x)? - 1.0 / x);
    }
    let inv = 1.0 / x;
    let t = inv * inv;
    Ok(0.5 * t + inv * t * horner(&BERNOULLI, t))
}

/// Ψ₂(x) = Ψ″(x) for x > 0; strictly negative.
pub fn tetragamma(x: f64) -> Result<f64> {
    check_positive("tetragamma", x)?;
    let mut x = x;
    let mut acc = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        acc -= 2.0 / (x * x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let t = inv * inv;
    let tail = t * t * horner(tetragamma_coeffs(), t);
    Ok(-t - t * inv - tail + acc)
}

const INV_TRIGAMMA_MAX_ITER: usize = 100;

/// Inverse of the trigamma function: the unique `x > 0` with `Ψ₁(x) = y`.
///
/// Safeguarded Newton iteration on `1/Ψ₁(x) − 1/y`, which is close to linear
/// for large `x` and close to quadratic near the origin. Steps leaving the
/// current bracket are replaced by bisection.
pub fn inv_trigamma(y: f64) -> Result<f64> {
    if !y.is_finite() || y <= 0.0 {
        return Err(Error::domain(
            "inv_trigamma",
            format!("argument must be finite and > 0, got {y}"),
        ));
    }
    // Relative residual target near machine precision; the absolute contract
    // 1e-12·max(1, y) is checked when the step falls below resolution.
    let tol = 4.0 * f64::EPSILON * y;

    // Ψ₁ is strictly decreasing: lo has Ψ₁(lo) > y, hi has Ψ₁(hi) < y.
    let mut x = 1.0 / y + 0.5;
    let mut lo = 0.0_f64;
    let mut hi = f64::INFINITY;

    let mut residual = f64::NAN;
    for _ in 0..INV_TRIGAMMA_MAX_ITER {
        let p1 = trigamma(x)?;
        residual = p1 - y;
        if residual.abs() <= tol {
            return Ok(x);
        }
        if residual > 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let p2 = tetragamma(x)?;
        let mut next = x + p1 * (1.0 - p1 / y) / p2;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = if hi.is_infinite() {
                2.0 * x
            } else if lo == 0.0 {
                0.5 * hi
            } else if hi / lo > 4.0 {
                (lo * hi).sqrt()
            } else {
                0.5 * (lo + hi)
            };
        }
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            // Step below resolution: accept if the absolute contract holds.
            if residual.abs() <= 1e-12 * y.max(1.0) {
                return Ok(next);
            }
        }
        x = next;
    }
    Err(Error::NoConvergence {
        func: "inv_trigamma",
        iterations: INV_TRIGAMMA_MAX_ITER,
        residual,
    })
}

/// ζ(s) − 1 for integer `s >= 2`, by Euler–Maclaurin summation.
pub fn zeta_minus_one(s: usize) -> f64 {
    assert!(s >= 2, "zeta_minus_one requires s >= 2");
    const N: usize = 20;
    let sf = s as f64;
    let nf = N as f64;
    let mut sum = 0.0;
    for k in (2..N).rev() {
        sum += (k as f64).powf(-sf);
    }
    sum += nf.powf(1.0 - sf) / (sf - 1.0) + 0.5 * nf.powf(-sf);
    // Σ_j B₂ⱼ/(2j)! · s(s+1)…(s+2j−2) · N^{−s−2j+1}
    let mut rising = sf; // s(s+1)…(s+2j−2) for j = 1
    let mut fact = 2.0; // (2j)!
    let mut npow = nf.powf(-sf - 1.0);
    for (j, b) in BERNOULLI.iter().enumerate() {
        sum += b / fact * rising * npow;
        let j2 = 2.0 * (j as f64 + 1.0);
        rising *= (sf + j2 - 1.0) * (sf + j2);
        fact *= (j2 + 1.0) * (j2 + 2.0);
        npow /= nf * nf;
    }
    sum
}

fn zeta_table(len: usize) -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    const CAP: usize = 1024;
    assert!(len <= CAP, "series length {len} exceeds {CAP}");
    TABLE.get_or_init(|| {
        let mut t = vec![0.0; CAP + 2];
        for (s, v) in t.iter_mut().enumerate().skip(2) {
            *v = zeta_minus_one(s);
        }
        t
    })
}

fn check_series_arg(func: &'static str, z: f64, terms: usize) -> Result<()> {
    if !z.is_finite() || z.abs() >= 2.0 {
        return Err(Error::domain(
            func,
            format!("series requires |z| < 2, got {z}"),
        ));
    }
    if z <= -1.0 {
        return Err(Error::domain(
            func,
            format!("log(1 + z) requires z > -1, got {z}"),
        ));
    }
    if terms == 0 {
        return Err(Error::domain(func, "terms must be positive"));
    }
    Ok(())
}

/// Partial sum of `ln Γ(1 + z) = −ln(1 + z) + z(1 − γ) + Σ_{n≥2} (−1)ⁿ [ζ(n) − 1] zⁿ / n`,
/// keeping `terms` summands of the tail (n = 2 ..= terms + 1).
pub fn loggamma_series(z: f64, terms: usize) -> Result<f64> {
    check_series_arg("loggamma_series", z, terms)?;
    let zeta = zeta_table(terms + 1);
    let mut tail = 0.0;
    let mut p = -z; // (−z)ⁿ
    for (n, zm1) in zeta.iter().enumerate().take(terms + 2).skip(2) {
        p *= -z;
        tail += zm1 * p / n as f64;
    }
    Ok(-z.ln_1p() + z * (1.0 - EULER_GAMMA) + tail)
}

/// Ψ(1 + z) from the term-by-term derivative of [`loggamma_series`].
pub fn digamma_series(z: f64, terms: usize) -> Result<PolygammaResult> {
    check_series_arg("digamma_series", z, terms)?;
    let zeta = zeta_table(terms + 1);
    let mut tail = 0.0;
    let mut zpow = 1.0; // (−1)ⁿ z^{n−1} for n = 2 is z
    for (n, zm1) in zeta.iter().enumerate().take(terms + 2).skip(2) {
        zpow = if n == 2 { z } else { -zpow * z };
        tail += zm1 * zpow;
    }
    Ok(PolygammaResult {
        value: -1.0 / (1.0 + z) + (1.0 - EULER_GAMMA) + tail,
        method: Method::PowerSeries,
        shift_count: 0,
    })
}

/// Ψ₁(1 + z) from the second derivative of [`loggamma_series`].
pub fn trigamma_series(z: f64, terms: usize) -> Result<PolygammaResult> {
    check_series_arg("trigamma_series", z, terms)?;
    let zeta = zeta_table(terms + 1);
    let mut tail = 0.0;
    let mut zpow = 1.0; // (−1)ⁿ z^{n−2}
    for (n, zm1) in zeta.iter().enumerate().take(terms + 2).skip(2) {
        if n > 2 {
            zpow *= -z;
        }
        tail += zm1 * (n as f64 - 1.0) * zpow;
    }
    let w = 1.0 + z;
    Ok(PolygammaResult {
        value: 1.0 / (w * w) + tail,
        method: Method::PowerSeries,
        shift_count: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn digamma_at_one_is_minus_euler() {
        assert!((digamma(1.0).unwrap() + EULER_GAMMA).abs() < 1e-15);
    }

    #[test]
    fn trigamma_at_one_is_zeta_two() {
        assert!((trigamma(1.0).unwrap() - PI * PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(digamma(bad).is_err());
            assert!(trigamma(bad).is_err());
            assert!(inv_trigamma(bad).is_err());
        }
        assert!(loggamma_series(2.0, 10).is_err());
        assert!(loggamma_series(-1.5, 10).is_err());
        assert!(loggamma_series(0.5, 0).is_err());
    }

    #[test]
    fn large_argument_leading_terms() {
        let d = digamma(1e6).unwrap();
        assert!((d - (1e6f64.ln() - 5e-7)).abs() < 1e-12);
        let t = trigamma(1e6).unwrap();
        assert!((t - (1e-6 + 5e-13)).abs() < 1e-15);
    }

    #[test]
    fn trigamma_excess_consistent() {
        for x in [0.5, 3.0, 10.0, 50.0] {
            let d = trigamma_excess(x).unwrap() - (trigamma(x).unwrap() - 1.0 / x);
            assert!(d.abs() < 1e-15, "x={x} d={d}");
        }
        // 1/(2x²) dominates at large x
        let x = 1e6;
        assert!((trigamma_excess(x).unwrap() * 2.0 * x * x - 1.0).abs() < 1e-5);
    }

    #[test]
    fn shift_count_recorded() {
        let r = digamma_detail(0.5).unwrap();
        assert_eq!(r.shift_count, 10);
        assert_eq!(r.method, Method::RecurrencePlusAsymptotic);
        assert_eq!(digamma_detail(12.0).unwrap().shift_count, 0);
    }

    #[test]
    fn tetragamma_matches_finite_difference() {
        for x in [0.3, 1.0, 4.5, 25.0] {
            let h = 1e-5 * x;
            let fd = (trigamma(x + h).unwrap() - trigamma(x - h).unwrap()) / (2.0 * h);
            let v = tetragamma(x).unwrap();
            assert!(v < 0.0);
            assert!(((fd - v) / v).abs() < 1e-7, "x={x} fd={fd} v={v}");
        }
    }

    #[test]
    fn zeta_known_values() {
        assert!((zeta_minus_one(2) - (PI * PI / 6.0 - 1.0)).abs() < 5e-16);
        assert!((zeta_minus_one(4) - (PI.powi(4) / 90.0 - 1.0)).abs() < 5e-16);
        // ζ(40) − 1 ≈ 2⁻⁴⁰ + 3⁻⁴⁰
        let z40 = 2f64.powi(-40) + 3f64.powi(-40) + 4f64.powi(-40);
        assert!(((zeta_minus_one(40) - z40) / z40).abs() < 1e-14);
    }

    #[test]
    fn inv_trigamma_round_trip_small_set() {
        assert!((inv_trigamma(PI * PI / 6.0).unwrap() - 1.0).abs() < 1e-12);
        for y in [1e-4, 0.5, 3.0, 1e4] {
            let x = inv_trigamma(y).unwrap();
            let back = trigamma(x).unwrap();
            assert!(((back - y) / y).abs() < 1e-10, "y={y} back={back}");
        }
    }
}
