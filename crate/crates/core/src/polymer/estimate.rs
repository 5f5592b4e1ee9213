//! Replica estimators for the free energy and the last-passage constant.

use rayon::prelude::*;

use super::lpp::lpp_dp;
use super::transfer::log_partition_dp;
use crate::environment::{BrownianLattice, EstimateRecord};
use crate::error::{Error, Result};

/// Default grid step for an `n`-path problem: `min(0.025, 1/(4√n))`, rounded
/// down to a unit fraction so that it divides every integer span.
pub fn default_dt(n: usize) -> f64 {
    let k = (4.0 * (n as f64).sqrt()).max(40.0).ceil();
    1.0 / k
}

fn check_replicas(replicas: usize) -> Result<()> {
    if replicas < 2 {
        return Err(Error::param("replicas", "at least 2 replicas are required"));
    }
    Ok(())
}

/// Runs `f` on replica lattices `0..replicas` spanning `[t_min, t_max]` with
/// `n` paths. Results come back in replica order.
fn per_replica<F>(
    n: usize,
    t_min: f64,
    t_max: f64,
    dt: f64,
    seed: u64,
    replicas: usize,
    f: F,
) -> Result<Vec<f64>>
where
    F: Fn(&BrownianLattice) -> Result<f64> + Sync,
{
    (0..replicas as u64)
        .into_par_iter()
        .map(|r| {
            let lat = BrownianLattice::sample_replica(n, t_min, t_max, dt, seed, r, 0.0)?;
            f(&lat)
        })
        .collect()
}

/// Mean and standard error of `(1/n) log Zₙ(β)` over independent environments.
pub fn estimate_free_energy(
    beta: f64,
    n: usize,
    dt: f64,
    replicas: usize,
    seed: u64,
) -> Result<EstimateRecord> {
    check_replicas(replicas)?;
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    let nf = n as f64;
    let samples = per_replica(n, 0.0, nf, dt, seed, replicas, |lat| {
        Ok(log_partition_dp(lat, beta, n)? / nf)
    })?;
    EstimateRecord::from_samples(format!("free_energy(beta={beta})"), &samples, n, dt, seed)
}

/// Mean and standard error of `(1/n) Lₙ(n)` over independent environments.
pub fn lpp_limit_estimate(n: usize, dt: f64, replicas: usize, seed: u64) -> Result<EstimateRecord> {
    check_replicas(replicas)?;
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    let nf = n as f64;
    let samples = per_replica(n, 0.0, nf, dt, seed, replicas, |lat| {
        Ok(lpp_dp(lat, n, nf)? / nf)
    })?;
    EstimateRecord::from_samples("lpp_limit", &samples, n, dt, seed)
}
