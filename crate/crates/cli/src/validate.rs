use std::f64::consts::PI;
use std::fmt;

use brownian_polymer::environment::BrownianLattice;
use brownian_polymer::freeenergy::{free_energy, gamma_shape, rate_lambda_star};
use brownian_polymer::optimize::golden_section_max;
use brownian_polymer::polymer::{
    estimate_free_energy, kac_concentration, log_partition_dp, log_simplex_volume, lpp_dp,
    moment_identity_check,
};
use brownian_polymer::queue::{default_horizon, departure_brownian_check, dufresne_check};
use brownian_polymer::rmt::{
    gue_largest_samples, gue_vs_lpp, largest_eigenvalue, sample_gue_tridiag,
};
use brownian_polymer::specialfn::{digamma, digamma_series, inv_trigamma, trigamma, EULER_GAMMA};
use brownian_polymer::stats::{self, logsumexp, StatCheck};

use crate::args::{Params, Range, Suite};
use crate::commands::{n_or, replicas_or};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

pub struct Row {
    pub suite: &'static str,
    pub check: &'static str,
    pub verdict: Verdict,
    pub detail: String,
}

type Checks = Vec<(&'static str, bool, String)>;

fn stat(c: StatCheck) -> (bool, String) {
    (c.passed(), c.detail())
}

fn log_grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..k)
        .map(|i| (a + (b - a) * i as f64 / (k - 1) as f64).exp())
        .collect()
}

fn specialfn_suite() -> Result<Checks, CliError> {
    let mut out = Checks::new();
    let d1 = digamma(1.0)?;
    out.push((
        "digamma(1) = -euler_gamma",
        (d1 + EULER_GAMMA).abs() < 1e-15,
        format!("digamma(1) = {d1:?}"),
    ));
    let t1 = trigamma(1.0)?;
    out.push((
        "trigamma(1) = pi^2/6",
        (t1 - PI * PI / 6.0).abs() < 1e-14,
        format!("trigamma(1) = {t1:?}"),
    ));

    let xs = log_grid(1e-3, 1e6, 400);
    let (mut worst_d, mut worst_t) = (0f64, 0f64);
    for &x in &xs {
        let rd = digamma(x + 1.0)? - digamma(x)? - 1.0 / x;
        let rt = trigamma(x + 1.0)? - trigamma(x)? + 1.0 / (x * x);
        worst_d = worst_d.max(rd.abs() / digamma(x)?.abs().max(1.0));
        worst_t = worst_t.max(rt.abs() / trigamma(x)?.max(1.0));
    }
    out.push((
        "digamma recurrence",
        worst_d <= 1e-10,
        format!("max scaled residual {worst_d:.2e}"),
    ));
    out.push((
        "trigamma recurrence",
        worst_t <= 1e-10,
        format!("max scaled residual {worst_t:.2e}"),
    ));

    let mut monotone = true;
    for w in xs.windows(2) {
        monotone &= digamma(w[1])? > digamma(w[0])? && trigamma(w[1])? < trigamma(w[0])?;
    }
    out.push((
        "monotonicity",
        monotone,
        "digamma increasing, trigamma decreasing on [1e-3, 1e6]".into(),
    ));

    let mut worst_inv = 0f64;
    for y in log_grid(1e-8, 1e8, 400) {
        let back = trigamma(inv_trigamma(y)?)?;
        worst_inv = worst_inv.max((back - y).abs() / y.max(1.0));
    }
    out.push((
        "inv_trigamma round trip",
        worst_inv <= 1e-10,
        format!("max scaled residual {worst_inv:.2e}"),
    ));

    let mut worst_series = 0f64;
    for i in 0..=50 {
        let x = 0.25 + 1.5 * i as f64 / 50.0;
        worst_series = worst_series.max((digamma(x)? - digamma_series(x - 1.0, 400)?.value).abs());
    }
    out.push((
        "series vs asymptotic",
        worst_series <= 1e-10,
        format!("max difference {worst_series:.2e}"),
    ));
    Ok(out)
}

fn freeenergy_suite() -> Result<Checks, CliError> {
    let f = |b: f64| free_energy(b).map(|p| p.value);
    let mut out = Checks::new();
    let f0 = f(0.0)?;
    out.push(("f(0) = 1", f0 == 1.0, format!("f(0) = {f0:?}")));
    let h = 1e-3;
    let slope = (f(h)? - f(-h)?) / (2.0 * h);
    out.push((
        "f'(0) = 0",
        slope.abs() <= 1e-6,
        format!("central difference {slope:.2e}"),
    ));
    let mut min_second = f64::INFINITY;
    for i in 1..200 {
        let b = -5.0 + 0.05 * i as f64;
        min_second = min_second.min(f(b - 0.05)? - 2.0 * f(b)? + f(b + 0.05)?);
    }
    out.push((
        "strict convexity on [-5, 5]",
        min_second > 0.0,
        format!("min second difference {min_second:.3e}"),
    ));
    let ratio = f(1e4)? / 1e4;
    out.push((
        "f(beta)/beta -> 2",
        (ratio - 2.0).abs() <= 0.05,
        format!("f(1e4)/1e4 = {ratio:.6}"),
    ));

    let mut worst = 0f64;
    for m in [0.5, 1.0, 2.0] {
        let mut err = None;
        let (_, best) = golden_section_max(
            |x| match gamma_shape(x) {
                Ok(g) => m * x + g,
                Err(e) => {
                    err.get_or_insert(e);
                    f64::NEG_INFINITY
                }
            },
            -200.0,
            -1e-9,
            1e-12,
        );
        if let Some(e) = err {
            return Err(e.into());
        }
        worst = worst.max((best + digamma(m)?).abs());
    }
    out.push((
        "sup[mx + gamma(x)] = -digamma(m)",
        worst <= 1e-8,
        format!("max error {worst:.2e}"),
    ));

    let r0 = rate_lambda_star(0.0)?.value;
    let r1 = rate_lambda_star(1.0)?.value;
    out.push((
        "rate function minimum",
        r0.abs() < 1e-12 && r1 > 0.0,
        format!("Lambda*(0) = {r0:.2e}, Lambda*(1) = {r1:.6}"),
    ));
    Ok(out)
}

fn environment_suite(seed: u64) -> Result<Checks, CliError> {
    let mut out = Checks::new();
    let lat = BrownianLattice::sample(3, -2.0, 3.0, 0.01, seed, 0.0)?;
    let mut worst = 0f64;
    let mut anchored = true;
    for i in 0..3 {
        anchored &= lat.value(i, lat.anchor_index()) == 0.0;
        let whole = lat.increment(i, -2.0, 3.0)?;
        let parts = lat.increment(i, -2.0, 0.5)? + lat.increment(i, 0.5, 3.0)?;
        worst = worst.max((whole - parts).abs());
    }
    out.push((
        "anchor and telescoping",
        anchored && worst < 1e-12,
        format!("telescoping residual {worst:.2e}"),
    ));

    let reps = 4000;
    let xs = (0..reps as u64)
        .map(|r| {
            BrownianLattice::sample_replica(1, 0.0, 1.0, 0.05, seed, r, 0.0)?.increment(0, 0.0, 1.0)
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let (ok, d) = stat(StatCheck::within_stderr(
        "var B(0,1)",
        stats::sample_variance(&xs),
        1.0,
        stats::variance_std_error(&xs),
        3.0,
        0.0,
    ));
    out.push(("unit variance", ok, d));

    let long = BrownianLattice::sample(1, 0.0, 80.0, 0.01, seed, 0.0)?;
    let p = long.path(0);
    let (a, b): (Vec<f64>, Vec<f64>) = (0..reps)
        .map(|k| (p[2 * k + 1] - p[2 * k], p[2 * k + 2] - p[2 * k + 1]))
        .unzip();
    let rho = stats::correlation(&a, &b);
    let (ok, d) = stat(StatCheck::within_stderr(
        "corr of disjoint increments",
        rho,
        0.0,
        stats::correlation_std_error(rho, reps),
        3.0,
        0.0,
    ));
    out.push(("independent increments", ok, d));
    Ok(out)
}

fn brute_two(lat: &BrownianLattice, beta: f64) -> f64 {
    let (b0, b1) = (lat.path(0), lat.path(1));
    let j1 = lat.grid_size();
    let dt = lat.dt();
    let terms: Vec<f64> = (0..=j1)
        .map(|s| {
            let w = if s == 0 || s == j1 { 0.5 * dt } else { dt };
            w.ln() + beta * (b0[s] - b0[0] + b1[j1] - b1[s])
        })
        .collect();
    logsumexp(&terms)
}

fn polymer_suite(p: &Params) -> Result<Checks, CliError> {
    let seed = p.seed;
    let mut out = Checks::new();
    let lat = BrownianLattice::sample(2, 0.0, 2.0, 0.01, seed, 0.0)?;
    let mut worst = 0f64;
    for beta in [0.5, 1.0, 2.0] {
        worst = worst.max((log_partition_dp(&lat, beta, 2)? - brute_two(&lat, beta)).abs());
    }
    out.push((
        "transfer vs brute force (n=2)",
        worst <= 1e-10,
        format!("max difference {worst:.2e}"),
    ));

    let (b0, b1) = (lat.path(0), lat.path(1));
    let j1 = lat.grid_size();
    let scan = (0..=j1)
        .map(|s| b0[s] - b0[0] + b1[j1] - b1[s])
        .fold(f64::NEG_INFINITY, f64::max);
    let l = lpp_dp(&lat, 2, 2.0)?;
    out.push((
        "max-plus vs scan (n=2)",
        l == scan,
        format!("L = {l:?}, scan = {scan:?}"),
    ));

    let zero = estimate_free_energy(0.0, 16, 0.05, 2, seed)?.mean;
    let vol = log_simplex_volume(16) / 16.0;
    out.push((
        "beta = 0 gives simplex volume",
        (zero - vol).abs() < 1e-12,
        format!("{zero:?} vs {vol:?}"),
    ));

    let samples = p.mc_samples.unwrap_or(200_000);
    if samples < 2 {
        return Err(CliError::Usage(format!(
            "--mc-samples {samples}: must be at least 2"
        )));
    }
    let r = moment_identity_check(&lat, 0.5, 2, samples, seed)?;
    out.push((
        "moment identity (n=2, beta=0.5)",
        r.z_score() <= 4.0,
        format!(
            "mc {:.6} +- {:.6}, transfer {:.6}, z = {:.2}",
            r.lhs,
            r.lhs_stderr,
            r.rhs,
            r.z_score()
        ),
    ));

    let n = n_or(p, 32)?;
    let replicas = replicas_or(p, 50)?;
    let xs =
        p.x.unwrap_or(Range {
            min: -3.5,
            max: -0.5,
            step: 0.02,
        })
        .values();
    if xs.len() < 3 || xs[xs.len() - 1] >= 0.0 {
        return Err(CliError::Usage(
            "--x: need at least 3 grid points, all negative".into(),
        ));
    }
    let d = kac_concentration(1.0, &[n], 0.025, &xs, seed, replicas)?;
    let peak = -PI * PI / 6.0;
    out.push((
        "kac density peak (m=1)",
        (d[0].argmax_x - peak).abs() <= 0.2,
        format!(
            "n = {n}: argmax {:.4} vs {peak:.4}, (1/n) log Xi = {:.4}",
            d[0].argmax_x, d[0].log_xi
        ),
    ));
    Ok(out)
}

fn queue_suite(seed: u64) -> Result<Checks, CliError> {
    let mut out = Checks::new();
    let h = default_horizon(1.0)?;
    let r = dufresne_check(1.0, h, 0.02, 2000, seed)?;
    let (ok, d) = stat(r.mean);
    out.push(("mean r(0) = -digamma(1)", ok, d));
    let (ok, d) = stat(r.variance);
    out.push(("var r(0) = trigamma(1)", ok, d));
    let (ok, d) = stat(r.two_sample);
    out.push(("r(0) vs -log gamma sampler", ok, d));
    let dep = departure_brownian_check(1.0, h, 0.02, 2000, seed)?;
    let detail: Vec<String> = dep
        .checks
        .iter()
        .map(|c| format!("{}: {}", c.name, c.detail()))
        .collect();
    out.push(("departures brownian", dep.passed(), detail.join("; ")));
    Ok(out)
}

fn rmt_suite(seed: u64) -> Result<Checks, CliError> {
    let mut out = Checks::new();
    let t = sample_gue_tridiag(40, seed)?;
    let l = largest_eigenvalue(&t);
    let bracket = t.sturm_count(l + 1e-8) == 40 && t.sturm_count(l - 1e-8) == 39;
    out.push(("sturm bracket", bracket, format!("lambda_max = {l:.10}")));

    let one = gue_largest_samples(1, 4000, seed)?;
    let (ok, d) = stat(StatCheck::within_stderr(
        "var lambda (n=1)",
        stats::sample_variance(&one),
        1.0,
        stats::variance_std_error(&one),
        3.0,
        0.0,
    ));
    out.push(("1x1 is standard normal", ok, d));

    let s = gue_largest_samples(64, 300, seed)?;
    let ratio = stats::mean(&s) / 16.0;
    out.push((
        "edge ratio (n=64)",
        (0.85..=1.0).contains(&ratio),
        format!("mean lambda_max / (2 sqrt n) = {ratio:.4}"),
    ));

    let r = gue_vs_lpp(4, 300, 1.0 / 512.0, seed)?;
    out.push((
        "gue vs lpp (n=4)",
        r.passed(),
        format!(
            "gue {:.4} lpp {:.4} se {:.4} allowance {:.4}",
            r.gue_mean,
            r.lpp_mean,
            r.combined_stderr(),
            r.allowance
        ),
    ));
    Ok(out)
}

pub fn run_suite(p: &Params) -> Result<Vec<Row>, CliError> {
    let suites: &[Suite] = match p.suite {
        Suite::All => &[
            Suite::Specialfn,
            Suite::Freeenergy,
            Suite::Environment,
            Suite::Polymer,
            Suite::Queue,
            Suite::Rmt,
        ],
        ref s => std::slice::from_ref(s),
    };
    let mut rows = Vec::new();
    for s in suites {
        let (name, checks) = match s {
            Suite::Specialfn => ("specialfn", specialfn_suite()?),
            Suite::Freeenergy => ("freeenergy", freeenergy_suite()?),
            Suite::Environment => ("environment", environment_suite(p.seed)?),
            Suite::Polymer => ("polymer", polymer_suite(p)?),
            Suite::Queue => ("queue", queue_suite(p.seed)?),
            Suite::Rmt => ("rmt", rmt_suite(p.seed)?),
            Suite::All => unreachable!(),
        };
        rows.extend(checks.into_iter().map(|(check, ok, detail)| Row {
            suite: name,
            check,
            verdict: if ok { Verdict::Pass } else { Verdict::Fail },
            detail,
        }));
    }
    Ok(rows)
}
