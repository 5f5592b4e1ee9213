//! Log-domain transfer recursion for the partition function.
//!
//! The ordered simplex `t0 < s₁ < … < s_{n−1} < t1` is discretized by snapping
//! each `s_p` to its nearest grid point. Grid point `j` then owns a cell of
//! length `dt` (half that at the two ends), and `m` points landing in one cell
//! carry the ordered volume `wᵐ/m!`. The discrete sum is therefore the exact
//! expectation of the snapped continuous integrand, and at `β = 0` it returns
//! the simplex volume `(t1 − t0)ⁿ⁻¹/(n−1)!` exactly (up to rounding).
//!
//! The sweep runs backwards from the end point and yields the log partition
//! function for every start point in a single pass.

use crate::environment::BrownianLattice;
use crate::error::Result;
use crate::stats::{ln_factorial, logsumexp};

/// Largest number of points sharing one cell that the sweep tracks. Exact when
/// `n − 1 <= TIE_CAP`; beyond that the neglected mass is below `w¹³/13!` per cell.
pub const TIE_CAP: usize = 12;

/// What a [`TransferProfile`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    /// Log partition function indexed by start time, fixed end time.
    LogSumExp,
    /// Last-passage value `Lₖ(t)` indexed by end time, fixed start time.
    MaxPlus,
}

/// A transfer-recursion result over a contiguous block of grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferProfile {
    pub level: usize,
    pub mode: ProfileMode,
    /// Time of `log_values[0]`.
    pub t_first: f64,
    pub dt: f64,
    pub log_values: Vec<f64>,
}

impl TransferProfile {
    pub fn time(&self, i: usize) -> f64 {
        self.t_first + i as f64 * self.dt
    }
}

/// `log Z` for every start index in `j_first..=j_end`, end fixed at `j_end`,
/// using paths `0..n` in ascending order.
pub(crate) fn reverse_sweep(
    lat: &BrownianLattice,
    beta: f64,
    n: usize,
    j_first: usize,
    j_end: usize,
) -> Vec<f64> {
    let pts = n - 1;
    let cap = pts.min(TIE_CAP);
    let ln_dt = lat.dt().ln();
    let ln_half = (0.5 * lat.dt()).ln();
    let ln_fact: Vec<f64> = (0..=cap).map(ln_factorial).collect();
    let paths: Vec<&[f64]> = (0..n).map(|i| lat.path(i)).collect();

    // t[r]: log-mass of the last r points placed strictly above the current cell.
    let mut t = vec![f64::NEG_INFINITY; pts + 1];
    t[0] = 0.0;
    let mut c = vec![0.0; pts];
    let mut terms = [0.0_f64; TIE_CAP + 1];
    let mut out = vec![f64::NEG_INFINITY; j_end - j_first + 1];
    let head = beta * paths[n - 1][j_end];

    for j in (j_first..=j_end).rev() {
        for (q, cq) in c.iter_mut().enumerate() {
            *cq = beta * (paths[q][j] - paths[q + 1][j]);
        }

        // Start here: the first m points share the start's half cell.
        terms[0] = t[pts];
        let mut k = 1;
        if j < j_end {
            let mut s = 0.0;
            for m in 1..=cap {
                s += c[m - 1];
                terms[m] = t[pts - m] + m as f64 * ln_half - ln_fact[m] + s;
            }
            k = cap + 1;
        }
        out[j - j_first] = head - beta * paths[0][j] + logsumexp(&terms[..k]);

        let lw = if j == j_end { ln_half } else { ln_dt };
        for r in (1..=pts).rev() {
            let mm = r.min(cap);
            terms[0] = t[r];
            let mut s = 0.0;
            for m in 1..=mm {
                s += c[pts - r + m - 1];
                terms[m] = t[r - m] + m as f64 * lw - ln_fact[m] + s;
            }
            t[r] = logsumexp(&terms[..=mm]);
        }
    }
    out
}

/// Log partition function over `[t0, t1]` with paths `0..n`.
pub fn log_partition_interval(
    lat: &BrownianLattice,
    beta: f64,
    n: usize,
    t0: f64,
    t1: f64,
) -> Result<f64> {
    let (j0, j1) = lat.span_indices(n.max(1), t0, t1)?;
    Ok(reverse_sweep(lat, beta, n.max(1), j0, j1)[0])
}

/// `log Zₙ(β)` over `[0, n]`.
pub fn log_partition_dp(lat: &BrownianLattice, beta: f64, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(crate::Error::param("n", "must be positive"));
    }
    log_partition_interval(lat, beta, n, 0.0, n as f64)
}

/// Log partition function for every start time in `[t_first, t_end]`, end
/// fixed at `t_end`.
pub fn partition_profile(
    lat: &BrownianLattice,
    beta: f64,
    n: usize,
    t_first: f64,
    t_end: f64,
) -> Result<TransferProfile> {
    if n == 0 {
        return Err(crate::Error::param("n", "must be positive"));
    }
    let (j0, j1) = lat.span_indices(n, t_first, t_end)?;
    Ok(TransferProfile {
        level: n,
        mode: ProfileMode::LogSumExp,
        t_first: lat.grid().time(j0),
        dt: lat.dt(),
        log_values: reverse_sweep(lat, beta, n, j0, j1),
    })
}

/// `γₙ(x) = (1/n) log 𝒵ₙ(x)`: unit-β partition function over `[xn, 0]`.
pub fn gamma_n_dp(lat: &BrownianLattice, x: f64, n: usize) -> Result<f64> {
    if !(x < 0.0) {
        return Err(crate::Error::domain(
            "gamma_n_dp",
            format!("x must be negative, got {x}"),
        ));
    }
    if n == 0 {
        return Err(crate::Error::param("n", "must be positive"));
    }
    Ok(log_partition_interval(lat, 1.0, n, x * n as f64, 0.0)? / n as f64)
}

/// `log(nⁿ⁻¹/(n−1)!)`, the log volume of the ordered simplex in `[0, n]`.
pub fn log_simplex_volume(n: usize) -> f64 {
    (n as f64 - 1.0) * (n as f64).ln() - ln_factorial(n - 1)
}
