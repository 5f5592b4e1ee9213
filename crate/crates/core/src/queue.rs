//! The generalized Brownian queue
//! `r(t) = log ∫_{−∞}^t exp{B_{(s,t)} + C_{(s,t)} − m(t−s)} ds`,
//! its departure process, and queues in tandem.
//!
//! The integral is truncated at `−H` and evaluated by the trapezoid rule on the
//! lattice grid. Path 0 of the lattice is the arrival process and path `k` is
//! the service process of stage `k`.

use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;

use crate::environment::{stream_rng, BrownianLattice, EstimateRecord};
use crate::error::{Error, Result};
use crate::specialfn::{digamma, trigamma};
use crate::stats::{self, logaddexp, StatCheck};

/// Grid step used when none is given.
pub const DEFAULT_QUEUE_DT: f64 = 0.01;
/// Fraction of the window, at its old end, inspected for leftover mass.
const TAIL_FRACTION: f64 = 0.1;
/// Leftover mass (relative) above which a run is flagged.
const TAIL_MASS_LIMIT: f64 = 1e-8;

const DOMAIN_GAMMA: u64 = 0x4741_4d4d; // "GAMM"

#[derive(Debug, Clone, PartialEq)]
pub struct QueueSample {
    pub m: f64,
    pub r0: f64,
    pub horizon: f64,
    pub dt: f64,
    pub seed: u64,
    pub horizon_warning: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TandemResult {
    pub m: f64,
    pub n: usize,
    /// `(1/n) Σ rₖ(0)`.
    pub mean_r: f64,
    pub per_stage: Vec<f64>,
    pub horizon_warning: bool,
}

/// Horizon solving `mH − 5√(2H) = 20`, rounded up to an integer: the drift
/// beats a five-sigma excursion of `B + C` by `e⁻²⁰`.
pub fn default_horizon(m: f64) -> Result<f64> {
    check_m(m)?;
    let root = (5.0 * 2f64.sqrt() + (50.0 + 80.0 * m).sqrt()) / (2.0 * m);
    Ok((root * root).ceil())
}

fn check_m(m: f64) -> Result<()> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::param("m", format!("must be positive, got {m}")));
    }
    Ok(())
}

fn check_horizon(m: f64, horizon: f64, dt: f64) -> Result<f64> {
    check_m(m)?;
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::param("dt", format!("must be positive, got {dt}")));
    }
    if !(horizon >= 20.0 / m) {
        return Err(Error::param(
            "horizon",
            format!("must be at least 20/m = {}, got {horizon}", 20.0 / m),
        ));
    }
    Ok((horizon / dt - 1e-9).ceil() * dt)
}

/// One queue stage: given `X(t_j) = A(t_j) + C(t_j) − m t_j` on the grid,
/// returns `r(t_j)` for every `j` and whether the old end of the window holds
/// more than the allowed share of the mass at the last grid point.
fn stage(x: &[f64], dt: f64) -> (Vec<f64>, bool) {
    let ln_dt = dt.ln();
    let ln_half = (0.5 * dt).ln();
    let tail_end = ((x.len() as f64) * TAIL_FRACTION).ceil() as usize;
    let mut acc = f64::NEG_INFINITY;
    let mut tail_acc = f64::NEG_INFINITY;
    let mut r = Vec::with_capacity(x.len());
    for (j, &xj) in x.iter().enumerate() {
        r.push(xj + logaddexp(acc, ln_half - xj));
        let w = if j == 0 { ln_half } else { ln_dt };
        acc = logaddexp(acc, w - xj);
        if j + 1 == tail_end {
            tail_acc = acc;
        }
    }
    let total = r[r.len() - 1] - x[x.len() - 1];
    let warn = tail_acc - total > TAIL_MASS_LIMIT.ln();
    (r, warn)
}

fn drift_profile(lat: &BrownianLattice, arrivals: &[f64], service: usize, m: f64) -> Vec<f64> {
    let grid = lat.grid();
    let c = lat.path(service);
    arrivals
        .iter()
        .zip(c)
        .enumerate()
        .map(|(j, (a, cj))| a + cj - m * grid.time(j))
        .collect()
}

/// Runs `n` stages on `lat`, which must have at least `n + 1` paths and end at
/// time 0.
pub fn tandem_on_lattice(lat: &BrownianLattice, m: f64, n: usize) -> Result<TandemResult> {
    check_m(m)?;
    if n == 0 {
        return Err(Error::param("n", "must be positive"));
    }
    let (_, j0) = lat.span_indices(n + 1, lat.t_min(), 0.0)?;
    if j0 != lat.grid_size() {
        return Err(Error::GridMismatch(
            "tandem lattice must end at time 0".into(),
        ));
    }
    let dt = lat.dt();
    let mut arrivals = lat.path(0).to_vec();
    let mut per_stage = Vec::with_capacity(n);
    let mut warn = false;
    for k in 1..=n {
        let x = drift_profile(lat, &arrivals, k, m);
        let (r, w) = stage(&x, dt);
        warn |= w;
        let r0 = r[j0];
        for (a, rj) in arrivals.iter_mut().zip(&r) {
            *a += r0 - rj;
        }
        per_stage.push(r0);
    }
    Ok(TandemResult {
        m,
        n,
        mean_r: stats::mean(&per_stage),
        per_stage,
        horizon_warning: warn,
    })
}

fn queue_lattice(
    paths: usize,
    horizon: f64,
    dt: f64,
    seed: u64,
    replica: u64,
) -> Result<BrownianLattice> {
    BrownianLattice::sample_replica(paths, -horizon, 0.0, dt, seed, replica, 0.0)
}

/// `n` queues in tandem on environment `replica` of `seed`.
pub fn tandem_replica(
    m: f64,
    n: usize,
    horizon: f64,
    dt: f64,
    seed: u64,
    replica: u64,
) -> Result<TandemResult> {
    let h = check_horizon(m, horizon, dt)?;
    let res = tandem_on_lattice(&queue_lattice(n + 1, h, dt, seed, replica)?, m, n)?;
    if res.horizon_warning {
        log::warn!("queue horizon {h} leaves more than {TAIL_MASS_LIMIT:e} of the mass in its last 10% (m = {m})");
    }
    Ok(res)
}

/// `n` queues in tandem on one environment.
pub fn tandem(m: f64, n: usize, horizon: f64, dt: f64, seed: u64) -> Result<TandemResult> {
    tandem_replica(m, n, horizon, dt, seed, 0)
}

/// Samples `r(0)` for a single queue.
pub fn sample_r0(m: f64, horizon: f64, dt: f64, seed: u64) -> Result<QueueSample> {
    sample_r0_replica(m, horizon, dt, seed, 0)
}

pub fn sample_r0_replica(
    m: f64,
    horizon: f64,
    dt: f64,
    seed: u64,
    replica: u64,
) -> Result<QueueSample> {
    let t = tandem_replica(m, 1, horizon, dt, seed, replica)?;
    Ok(QueueSample {
        m,
        r0: t.per_stage[0],
        horizon: check_horizon(m, horizon, dt)?,
        dt,
        seed,
        horizon_warning: t.horizon_warning,
    })
}

/// `r(0)` on environments `0..samples`, in order.
pub fn sample_r0_batch(
    m: f64,
    horizon: f64,
    dt: f64,
    samples: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    check_horizon(m, horizon, dt)?;
    (0..samples as u64)
        .into_par_iter()
        .map(|r| Ok(sample_r0_replica(m, horizon, dt, seed, r)?.r0))
        .collect()
}

/// Tandem runs on environments `0..environments`, in order.
pub fn tandem_batch(
    m: f64,
    n: usize,
    horizon: f64,
    dt: f64,
    environments: usize,
    seed: u64,
) -> Result<Vec<TandemResult>> {
    check_horizon(m, horizon, dt)?;
    (0..environments as u64)
        .into_par_iter()
        .map(|r| tandem_replica(m, n, horizon, dt, seed, r))
        .collect()
}

/// Mean of `(1/n) Σ rₖ(0)` over independent environments.
pub fn tandem_estimate(
    m: f64,
    n: usize,
    horizon: f64,
    dt: f64,
    environments: usize,
    seed: u64,
) -> Result<EstimateRecord> {
    if environments < 2 {
        return Err(Error::param(
            "replicas",
            "at least 2 environments are required",
        ));
    }
    let runs = tandem_batch(m, n, horizon, dt, environments, seed)?;
    let means: Vec<f64> = runs.iter().map(|t| t.mean_r).collect();
    EstimateRecord::from_samples(format!("tandem_mean_r(m={m})"), &means, n, dt, seed)
}

/// `−log G` for `G ~ gamma(m, 1)`.
pub fn neg_log_gamma_samples(m: f64, samples: usize, seed: u64) -> Result<Vec<f64>> {
    check_m(m)?;
    let dist = Gamma::new(m, 1.0).map_err(|e| Error::param("m", e.to_string()))?;
    let mut rng = stream_rng(seed, 0, DOMAIN_GAMMA, m.to_bits());
    Ok((0..samples).map(|_| -dist.sample(&mut rng).ln()).collect())
}

/// Law of `r(0)` against `−log gamma(m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DufresneReport {
    pub m: f64,
    pub samples: usize,
    /// Mean of `r(0)` against `−Ψ(m)`.
    pub mean: StatCheck,
    /// Variance of `r(0)` against `Ψ₁(m)`.
    pub variance: StatCheck,
    /// Mean of `r(0)` against the mean of the gamma-sampler oracle.
    pub two_sample: StatCheck,
}

impl DufresneReport {
    pub fn checks(&self) -> [&StatCheck; 3] {
        [&self.mean, &self.variance, &self.two_sample]
    }
}

pub fn dufresne_check(
    m: f64,
    horizon: f64,
    dt: f64,
    samples: usize,
    seed: u64,
) -> Result<DufresneReport> {
    if samples < 2 {
        return Err(Error::param("samples", "at least 2 samples are required"));
    }
    let r = sample_r0_batch(m, horizon, dt, samples, seed)?;
    let oracle = neg_log_gamma_samples(m, samples, seed)?;
    let (mr, se) = (stats::mean(&r), stats::std_error(&r));
    let (mo, seo) = (stats::mean(&oracle), stats::std_error(&oracle));
    Ok(DufresneReport {
        m,
        samples,
        mean: StatCheck::within_stderr("mean r(0) vs -digamma(m)", mr, -digamma(m)?, se, 3.0, 0.0),
        variance: StatCheck::within_stderr(
            "var r(0) vs trigamma(m)",
            stats::sample_variance(&r),
            trigamma(m)?,
            stats::variance_std_error(&r),
            3.0,
            0.0,
        ),
        two_sample: StatCheck::within_stderr(
            "mean r(0) vs -log gamma(m) sampler",
            mr - mo,
            0.0,
            (se * se + seo * seo).sqrt(),
            3.0,
            0.0,
        ),
    })
}

/// End of the forward window used by the departure check.
const DEPARTURE_T: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct DepartureReport {
    pub m: f64,
    pub samples: usize,
    pub checks: Vec<StatCheck>,
}

impl DepartureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(StatCheck::passed)
    }
}

/// Per-environment departure statistics:
/// `(f₁(1) − f₁(0), f₁(2) − f₁(1), f₁(1) − f₁(1/2), r(1))`.
fn departure_sample(m: f64, horizon: f64, dt: f64, seed: u64, replica: u64) -> Result<[f64; 4]> {
    let lat = BrownianLattice::sample_replica(2, -horizon, DEPARTURE_T, dt, seed, replica, 0.0)?;
    let x = drift_profile(&lat, lat.path(0), 1, m);
    let (r, _) = stage(&x, dt);
    let g = lat.grid();
    let b = lat.path(0);
    let f = |t: f64| -> Result<f64> {
        let j = g.index_of(t)?;
        Ok(b[j] - b[lat.anchor_index()] + r[lat.anchor_index()] - r[j])
    };
    let j1 = g.index_of(1.0)?;
    Ok([
        f(1.0)? - f(0.0)?,
        f(2.0)? - f(1.0)?,
        f(1.0)? - f(0.5)?,
        r[j1],
    ])
}

/// Finite-dimensional checks that the departures of a stationary queue form a
/// standard Brownian motion independent of the later queue length.
pub fn departure_brownian_check(
    m: f64,
    horizon: f64,
    dt: f64,
    n_samples: usize,
    seed: u64,
) -> Result<DepartureReport> {
    let h = check_horizon(m, horizon, dt)?;
    if n_samples < 3 {
        return Err(Error::param("samples", "at least 3 samples are required"));
    }
    if ((0.5 / dt) - (0.5 / dt).round()).abs() > 1e-9 {
        return Err(Error::param("dt", "must divide 1/2"));
    }
    let rows: Vec<[f64; 4]> = (0..n_samples as u64)
        .into_par_iter()
        .map(|r| departure_sample(m, h, dt, seed, r))
        .collect::<Result<_>>()?;
    let col = |i: usize| rows.iter().map(|row| row[i]).collect::<Vec<f64>>();
    let (d1, d2, d_half, r1) = (col(0), col(1), col(2), col(3));
    let corr_check = |name: &str, a: &[f64], b: &[f64]| {
        let rho = stats::correlation(a, b);
        StatCheck::within_stderr(
            name,
            rho,
            0.0,
            stats::correlation_std_error(rho, a.len()),
            3.0,
            0.0,
        )
    };
    let var = stats::sample_variance(&d1);
    Ok(DepartureReport {
        m,
        samples: n_samples,
        checks: vec![
            StatCheck::within_stderr(
                "increment mean",
                stats::mean(&d1),
                0.0,
                stats::std_error(&d1),
                3.0,
                0.0,
            ),
            StatCheck::within_relative(
                "increment variance over lag 1",
                var,
                1.0,
                stats::variance_std_error(&d1),
                0.05,
            ),
            corr_check("lag-1 increment correlation", &d1, &d2),
            corr_check("corr(f1(1) - f1(1/2), r(1))", &d_half, &r1),
        ],
    })
}
