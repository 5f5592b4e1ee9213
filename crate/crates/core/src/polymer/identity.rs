//! Monte Carlo checks on a fixed environment: the order-statistics moment
//! identity `E[e^{βEₙ} | ℬ] = ((n−1)!/nⁿ⁻¹) Zₙ(β)` and the Chernoff bound on
//! the conditional tail of `Eₙ`.

use rand::Rng;

use super::transfer::{log_partition_dp, log_simplex_volume};
use crate::environment::{stream_rng, BrownianLattice};
use crate::error::{Error, Result};

const DOMAIN_ORDER_STATS: u64 = 0x4f52_4453; // "ORDS"

/// Largest `n` accepted by the Monte Carlo checks.
pub const MAX_MC_PATHS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentIdentity {
    /// Monte Carlo mean of `exp(βEₙ)`.
    pub lhs: f64,
    pub lhs_stderr: f64,
    /// `((n−1)!/nⁿ⁻¹)·Zₙ(β)` from the transfer recursion.
    pub rhs: f64,
}

impl MomentIdentity {
    /// `|lhs − rhs|` in units of the Monte Carlo standard error.
    pub fn z_score(&self) -> f64 {
        let d = (self.lhs - self.rhs).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.lhs_stderr
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffPoint {
    pub theta: f64,
    /// Monte Carlo estimate of `P(Eₙ > xn | ℬ)`.
    pub tail: f64,
    /// `exp(−(θxn − log E[e^{θEₙ} | ℬ]))`.
    pub bound: f64,
}

/// Draws `samples` energies `Eₙ(0, τ₁, …, τ_{n−1}, n)` where the `τ` are sorted
/// uniforms on `[0, n]` snapped to the nearest grid point.
fn energies(lat: &BrownianLattice, n: usize, samples: usize, seed: u64) -> Result<Vec<f64>> {
    if !(1..=MAX_MC_PATHS).contains(&n) {
        return Err(Error::param(
            "n",
            format!("must be in 1..={MAX_MC_PATHS}, got {n}"),
        ));
    }
    if samples < 2 {
        return Err(Error::param(
            "mc_samples",
            "at least 2 samples are required",
        ));
    }
    let nf = n as f64;
    let (j0, j1) = lat.span_indices(n, 0.0, nf)?;
    let grid = lat.grid();
    let mut rng = stream_rng(seed, 0, DOMAIN_ORDER_STATS, n as u64);
    let mut taus = vec![0.0; n - 1];
    let mut idx = vec![0usize; n + 1];
    idx[0] = j0;
    idx[n] = j1;
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        for t in taus.iter_mut() {
            *t = rng.random::<f64>() * nf;
        }
        taus.sort_by(f64::total_cmp);
        for (k, &t) in taus.iter().enumerate() {
            idx[k + 1] = grid.nearest_index(t);
        }
        let e: f64 = (0..n)
            .map(|k| lat.value(k, idx[k + 1]) - lat.value(k, idx[k]))
            .sum();
        out.push(e);
    }
    Ok(out)
}

/// Compares the Monte Carlo moment with the transfer-recursion value on `lat`.
pub fn moment_identity_check(
    lat: &BrownianLattice,
    beta: f64,
    n: usize,
    mc_samples: usize,
    seed: u64,
) -> Result<MomentIdentity> {
    let e = energies(lat, n, mc_samples, seed)?;
    let w: Vec<f64> = e.iter().map(|&x| (beta * x).exp()).collect();
    let rhs = (log_partition_dp(lat, beta, n)? - log_simplex_volume(n)).exp();
    Ok(MomentIdentity {
        lhs: crate::stats::mean(&w),
        lhs_stderr: crate::stats::std_error(&w),
        rhs,
    })
}

/// Conditional tail `P(Eₙ > xn | ℬ)` against its Chernoff bound for each `θ`.
pub fn chernoff_check(
    lat: &BrownianLattice,
    n: usize,
    x: f64,
    thetas: &[f64],
    mc_samples: usize,
    seed: u64,
) -> Result<Vec<ChernoffPoint>> {
    if !(x > 0.0) {
        return Err(Error::param("x", format!("must be positive, got {x}")));
    }
    let e = energies(lat, n, mc_samples, seed)?;
    let level = x * n as f64;
    let tail = e.iter().filter(|&&v| v > level).count() as f64 / e.len() as f64;
    thetas
        .iter()
        .map(|&theta| {
            if !(theta > 0.0) {
                return Err(Error::param(
                    "theta",
                    format!("must be positive, got {theta}"),
                ));
            }
            let log_mgf = log_partition_dp(lat, theta, n)? - log_simplex_volume(n);
            Ok(ChernoffPoint {
                theta,
                tail,
                bound: (log_mgf - theta * level).exp(),
            })
        })
        .collect()
}
