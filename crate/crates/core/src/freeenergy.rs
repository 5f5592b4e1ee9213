//! Closed-form free energy density of the Brownian directed polymer and the
//! associated convex conjugates.
//!
//! With `a = Ψ₁⁻¹(β²)`, the free energy is
//!
//! ```text
//! f(β) = γ(−β²) − 2 ln|β| = a·Ψ₁(a) − Ψ(a) − ln Ψ₁(a),      f(0) = 1,
//! ```
//!
//! where `γ(x) = −sup_{θ>0}[xθ + Ψ(θ)]` is the limit shape on `x < 0`.
//! The evaluation uses the variational form `β²a − Ψ(a) − 2 ln|β|`, which is
//! stationary in `a` and therefore insensitive to the root-find residual.

use crate::error::{Error, Result};
use crate::optimize::{golden_section_max, solve_increasing, MAX_BRACKET};
use crate::specialfn::{digamma, inv_trigamma, tetragamma, trigamma, trigamma_excess};

/// Below this `|β|` the free energy is evaluated from its Taylor expansion.
pub const SMALL_BETA: f64 = 1e-4;

/// Below this `|β|` the derivatives of `f` use their Taylor expansions.
const SMALL_BETA_DERIV: f64 = 1e-3;

/// Below this `|θ|` the function Λ is summed as a power series, avoiding
/// cancellation between `−2 ln|θ|` and `−Ψ(1/θ²)`.
const SMALL_THETA: f64 = 0.3;

/// B₂ₖ/(2k), k = 1..7.
const BERNOULLI_OVER_2K: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Exact,
    SmallBetaSeries,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyPoint {
    pub beta: f64,
    pub value: f64,
    /// `a = Ψ₁⁻¹(β²)`; absent on the series branch and at β = 0.
    pub maximizer_a: Option<f64>,
    pub branch: Branch,
}

/// A point of a convex conjugate together with the optimizing dual variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub arg: f64,
    pub value: f64,
    pub optimizer_theta: f64,
}

/// Returns `(γ(x), a)` with `a = Ψ₁⁻¹(−x)`.
pub fn gamma_shape_point(x: f64) -> Result<(f64, f64)> {
    if !(x < 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "gamma_shape",
            format!("requires finite x < 0, got {x}"),
        ));
    }
    let a = inv_trigamma(-x)?;
    Ok((-(x * a + digamma(a)?), a))
}

/// `γ(x) = −(−Ψ)*(x)` for `x < 0`.
pub fn gamma_shape(x: f64) -> Result<f64> {
    gamma_shape_point(x).map(|(v, _)| v)
}

/// Free energy density `f(β)`.
pub fn free_energy(beta: f64) -> Result<FreeEnergyPoint> {
    if !beta.is_finite() {
        return Err(Error::domain(
            "free_energy",
            format!("beta must be finite, got {beta}"),
        ));
    }
    let b = beta.abs();
    if b == 0.0 {
        return Ok(FreeEnergyPoint {
            beta,
            value: 1.0,
            maximizer_a: None,
            branch: Branch::SmallBetaSeries,
        });
    }
    if b < SMALL_BETA {
        let y = b * b;
        return Ok(FreeEnergyPoint {
            beta,
            value: 1.0 + 0.5 * y - y * y / 24.0,
            maximizer_a: None,
            branch: Branch::SmallBetaSeries,
        });
    }
    let y = b * b;
    let a = inv_trigamma(y)?;
    let value = y * a - digamma(a)? - 2.0 * b.ln();
    Ok(FreeEnergyPoint {
        beta,
        value,
        maximizer_a: Some(a),
        branch: Branch::Exact,
    })
}

/// `f(β)` on the exact branch regardless of `|β|`; used to check branch continuity.
pub fn free_energy_exact(beta: f64) -> Result<f64> {
    let b = beta.abs();
    if b == 0.0 {
        return Ok(1.0);
    }
    let y = b * b;
    let a = inv_trigamma(y)?;
    Ok(y * a - digamma(a)? - 2.0 * b.ln())
}

/// `f′(β) = 2βa − 2/β` with `a = Ψ₁⁻¹(β²)`, evaluated as
/// `2a(Ψ₁(a) − 1/a)/β` so that the leading terms cancel analytically.
pub fn free_energy_derivative(beta: f64) -> Result<f64> {
    let b = beta.abs();
    let s = beta.signum();
    if b < SMALL_BETA_DERIV {
        let b2 = b * b;
        return Ok(s * b * (1.0 - b2 / 6.0 + 11.0 * b2 * b2 * b2 / 360.0));
    }
    let a = inv_trigamma(b * b)?;
    Ok(s * 2.0 * a * trigamma_excess(a)? / b)
}

/// `f″(β) = 2a + 4β²/Ψ₂(a) + 2/β²`.
pub fn free_energy_second_derivative(beta: f64) -> Result<f64> {
    let b = beta.abs();
    if b < SMALL_BETA_DERIV {
        let b2 = b * b;
        return Ok(1.0 - b2 / 2.0 + 77.0 * b2 * b2 * b2 / 360.0);
    }
    let a = inv_trigamma(b * b)?;
    Ok(2.0 * a + 4.0 * b * b / tetragamma(a)? + 2.0 / (b * b))
}

/// `Λ(θ) = −2 ln|θ| − Ψ(1/θ²)`, `Λ(0) = 0`.
pub fn rate_lambda(theta: f64) -> f64 {
    let t = theta.abs();
    if t < SMALL_THETA {
        let t2 = t * t;
        let t4 = t2 * t2;
        let series = BERNOULLI_OVER_2K
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * t4 + c);
        return 0.5 * t2 + t4 * series;
    }
    -2.0 * t.ln() - digamma(1.0 / (t * t)).expect("positive argument")
}

/// `Λ′(θ) = −2/θ + 2Ψ₁(1/θ²)/θ³`.
pub fn rate_lambda_derivative(theta: f64) -> f64 {
    let t = theta.abs();
    let s = theta.signum();
    if t < SMALL_THETA {
        let t2 = t * t;
        let t4 = t2 * t2;
        // θ + Σ 4k·(B₂ₖ/2k)·θ^{4k−1}
        let mut sum = 0.0;
        let mut pow = t * t2; // θ³
        for (k, c) in BERNOULLI_OVER_2K.iter().enumerate() {
            sum += 4.0 * (k as f64 + 1.0) * c * pow;
            pow *= t4;
        }
        return s * (t + sum);
    }
    let m = 1.0 / (t * t);
    s * (-2.0 / t + 2.0 * trigamma(m).expect("positive argument") / (t * t * t))
}

/// `Λ″(θ) = 2/θ² − 6Ψ₁(m)/θ⁴ − 4Ψ₂(m)/θ⁶` with `m = 1/θ²`.
pub fn rate_lambda_second_derivative(theta: f64) -> f64 {
    let t = theta.abs();
    if t < SMALL_THETA {
        let t2 = t * t;
        let t4 = t2 * t2;
        let mut sum = 0.0;
        let mut pow = t2;
        for (k, c) in BERNOULLI_OVER_2K.iter().enumerate() {
            let p = 4.0 * (k as f64 + 1.0);
            sum += p * (p - 1.0) * c * pow;
            pow *= t4;
        }
        return 1.0 + sum;
    }
    let m = 1.0 / (t * t);
    let t2 = t * t;
    2.0 / t2
        - 6.0 * trigamma(m).expect("positive") / (t2 * t2)
        - 4.0 * tetragamma(m).expect("positive") / (t2 * t2 * t2)
}

/// Shared driver for conjugates of even convex functions vanishing at 0 with
/// zero slope there: returns `sup_θ [xθ − g(θ)]` and the optimizer.
fn even_conjugate<G, D, S>(
    func: &'static str,
    x: f64,
    g: G,
    deriv: D,
    second: S,
) -> Result<RatePoint>
where
    G: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
    S: Fn(f64) -> Result<f64>,
{
    if x == 0.0 {
        return Ok(RatePoint {
            arg: x,
            value: 0.0,
            optimizer_theta: 0.0,
        });
    }
    let ax = x.abs();
    let theta = match solve_increasing(func, &deriv, &second, ax, ax) {
        Ok(t) => t,
        Err(Error::NoConvergence { .. }) => {
            log::warn!(
                "{func}: derivative root-find failed at x = {x}, falling back to golden section"
            );
            let mut width = 1.0;
            while deriv(width)? < ax && width < MAX_BRACKET {
                width *= 2.0;
            }
            let (t, _) = golden_section_max(
                |t| ax * t - g(t).unwrap_or(f64::INFINITY),
                0.0,
                width,
                1e-12 * width,
            );
            t
        }
        Err(e) => return Err(e),
    };
    let value = (ax * theta - g(theta)?).max(0.0);
    Ok(RatePoint {
        arg: x,
        value,
        optimizer_theta: x.signum() * theta,
    })
}

/// `Λ*(x) = sup_θ [xθ − Λ(θ)]`.
pub fn rate_lambda_star(x: f64) -> Result<RatePoint> {
    if !x.is_finite() {
        return Err(Error::domain(
            "rate_lambda_star",
            format!("x must be finite, got {x}"),
        ));
    }
    even_conjugate(
        "rate_lambda_star",
        x,
        |t| Ok(rate_lambda(t)),
        |t| Ok(rate_lambda_derivative(t)),
        |t| Ok(rate_lambda_second_derivative(t)),
    )
}

/// `Λₘ(θ) = Ψ(m) − Ψ(m + θ)` for `m > 0`, `θ > −m`.
pub fn rate_lambda_m(m: f64, theta: f64) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(Error::domain(
            "rate_lambda_m",
            format!("requires m > 0, got {m}"),
        ));
    }
    if !(theta > -m) || !theta.is_finite() {
        return Err(Error::domain(
            "rate_lambda_m",
            format!("requires theta > -m = {}, got {theta}", -m),
        ));
    }
    Ok(digamma(m)? - digamma(m + theta)?)
}

/// `(f − 1)*(x) = sup_β [xβ − (f(β) − 1)]`; `+∞` for `|x| >= 2`.
pub fn conjugate_f_minus_one(x: f64) -> Result<RatePoint> {
    if x.is_nan() {
        return Err(Error::domain("conjugate_f_minus_one", "x is NaN"));
    }
    if x.abs() >= 2.0 {
        return Ok(RatePoint {
            arg: x,
            value: f64::INFINITY,
            optimizer_theta: x.signum() * f64::INFINITY,
        });
    }
    even_conjugate(
        "conjugate_f_minus_one",
        x,
        |b| free_energy(b).map(|p| p.value - 1.0),
        free_energy_derivative,
        free_energy_second_derivative,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_energy_at_zero_is_one() {
        let p = free_energy(0.0).unwrap();
        assert_eq!(p.value, 1.0);
        assert!(p.maximizer_a.is_none());
    }

    #[test]
    fn free_energy_even() {
        for b in [0.1, 1.0, 10.0, 5e-5] {
            assert_eq!(
                free_energy(b).unwrap().value,
                free_energy(-b).unwrap().value
            );
        }
    }

    #[test]
    fn exact_branch_records_maximizer() {
        let p = free_energy(1.0).unwrap();
        assert_eq!(p.branch, Branch::Exact);
        let a = p.maximizer_a.unwrap();
        assert!((trigamma(a).unwrap() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn gamma_shape_at_minus_zeta_two() {
        let x = -PI * PI / 6.0;
        let (v, a) = gamma_shape_point(x).unwrap();
        assert!((a - 1.0).abs() < 1e-12);
        assert!((v - (PI * PI / 6.0 + crate::specialfn::EULER_GAMMA)).abs() < 1e-12);
        assert!(gamma_shape(0.0).is_err());
        assert!(gamma_shape(1.0).is_err());
    }

    #[test]
    fn rate_lambda_basics() {
        assert_eq!(rate_lambda(0.0), 0.0);
        for t in [0.05, 0.3, 1.0, 7.0] {
            assert_eq!(rate_lambda(t), rate_lambda(-t));
        }
        let h = 1e-4;
        assert!(((rate_lambda(h) - rate_lambda(-h)) / (2.0 * h)).abs() < 1e-6);
    }

    #[test]
    fn rate_lambda_series_matches_closed_form_at_switch() {
        let t = SMALL_THETA;
        let closed = -2.0 * t.ln() - digamma(1.0 / (t * t)).unwrap();
        assert!((rate_lambda(t * (1.0 - 1e-12)) - closed).abs() < 1e-13);
        let dclosed = -2.0 / t + 2.0 * trigamma(1.0 / (t * t)).unwrap() / t.powi(3);
        assert!((rate_lambda_derivative(t * (1.0 - 1e-12)) - dclosed).abs() < 1e-11);
    }

    #[test]
    fn rate_lambda_m_examples() {
        assert_eq!(rate_lambda_m(1.0, 0.0).unwrap(), 0.0);
        assert!((rate_lambda_m(1.0, 1.0).unwrap() + 1.0).abs() < 1e-14);
        assert!(rate_lambda_m(1.0, -1.0).is_err());
        assert!(rate_lambda_m(0.0, 1.0).is_err());
    }

    #[test]
    fn conjugate_outside_domain_is_infinite() {
        assert!(conjugate_f_minus_one(2.0).unwrap().value.is_infinite());
        assert!(conjugate_f_minus_one(-3.0).unwrap().value.is_infinite());
        assert_eq!(conjugate_f_minus_one(0.0).unwrap().value, 0.0);
    }

    #[test]
    fn derivative_branches_agree() {
        let b = SMALL_BETA_DERIV;
        let a = inv_trigamma(b * b).unwrap();
        let exact = 2.0 * a * trigamma_excess(a).unwrap() / b;
        let series = free_energy_derivative(b * (1.0 - 1e-12)).unwrap();
        assert!((exact - series).abs() < 1e-13, "{exact} {series}");
    }
}
