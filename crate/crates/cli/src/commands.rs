use brownian_polymer::freeenergy::{free_energy, Branch};
use brownian_polymer::polymer::{default_dt, estimate_free_energy, lpp_limit_estimate};
use brownian_polymer::queue::{default_horizon, tandem_estimate, DEFAULT_QUEUE_DT};
use brownian_polymer::rmt::gue_vs_lpp;
use brownian_polymer::specialfn::digamma;

use crate::args::{Params, Range};
use crate::output::{num, opt_num, summary, Table};
use crate::validate::{run_suite, Verdict};
use crate::{CliError, Status};

const MAX_N: usize = 100_000;
const MAX_REPLICAS: usize = 10_000_000;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub(crate) fn n_or(p: &Params, default: usize) -> Result<usize, CliError> {
    let n = p.n.unwrap_or(default);
    if !(1..=MAX_N).contains(&n) {
        return Err(usage(format!("--n {n}: must lie in [1, {MAX_N}]")));
    }
    Ok(n)
}

pub(crate) fn replicas_or(p: &Params, default: usize) -> Result<usize, CliError> {
    let r = p.replicas.unwrap_or(default);
    if !(2..=MAX_REPLICAS).contains(&r) {
        return Err(usage(format!(
            "--replicas {r}: must lie in [2, {MAX_REPLICAS}]"
        )));
    }
    Ok(r)
}

pub(crate) fn dt_or(p: &Params, default: f64) -> Result<f64, CliError> {
    let dt = p.dt.unwrap_or(default);
    if !(dt > 0.0 && dt <= 1.0) {
        return Err(usage(format!("--dt {dt}: must lie in (0, 1]")));
    }
    Ok(dt)
}

fn betas(p: &Params, default: Range) -> Vec<f64> {
    p.beta.unwrap_or(default).values()
}

pub fn free_energy_cmd(p: &Params, table_to_file: bool) -> Result<(Table, Status), CliError> {
    let mut t = Table::new(&["beta", "value", "maximizer_a", "branch"]);
    for beta in betas(
        p,
        Range {
            min: 0.0,
            max: 10.0,
            step: 1.0,
        },
    ) {
        let pt = free_energy(beta)?;
        let branch = match pt.branch {
            Branch::Exact => "exact",
            Branch::SmallBetaSeries => "small_beta_series",
        };
        summary(
            table_to_file,
            &format!("free-energy beta={beta} f={:.12} ({branch})", pt.value),
        );
        t.push(vec![
            num(beta),
            num(pt.value),
            opt_num(pt.maximizer_a),
            branch.into(),
        ]);
    }
    Ok((t, Status::Ok))
}

pub fn polymer_cmd(p: &Params, table_to_file: bool) -> Result<(Table, Status), CliError> {
    let n = n_or(p, 64)?;
    let dt = dt_or(p, default_dt(n))?;
    let replicas = replicas_or(p, 100)?;
    let mut t = Table::new(&[
        "beta", "n", "dt", "replicas", "seed", "mean", "stderr", "target_f", "abs_err",
    ]);
    for beta in betas(p, Range::scalar(1.0)) {
        let r = estimate_free_energy(beta, n, dt, replicas, p.seed)?;
        let target = free_energy(beta)?.value;
        let err = (r.mean - target).abs();
        summary(
            table_to_file,
            &format!(
                "polymer beta={beta} n={n}: mean {:.6} +- {:.6}, f = {target:.6}, |err| = {err:.6}",
                r.mean, r.stderr
            ),
        );
        t.push(vec![
            num(beta),
            n.to_string(),
            num(dt),
            replicas.to_string(),
            p.seed.to_string(),
            num(r.mean),
            num(r.stderr),
            num(target),
            num(err),
        ]);
    }
    Ok((t, Status::Ok))
}

pub fn lpp_cmd(p: &Params, table_to_file: bool) -> Result<(Table, Status), CliError> {
    let n = n_or(p, 64)?;
    let dt = dt_or(p, default_dt(n))?;
    let replicas = replicas_or(p, 100)?;
    let r = lpp_limit_estimate(n, dt, replicas, p.seed)?;
    summary(
        table_to_file,
        &format!("lpp n={n}: (1/n) L_n(n) = {:.6} +- {:.6}", r.mean, r.stderr),
    );
    let mut t = Table::new(&["n", "dt", "replicas", "seed", "mean", "stderr"]);
    t.push(vec![
        n.to_string(),
        num(dt),
        replicas.to_string(),
        p.seed.to_string(),
        num(r.mean),
        num(r.stderr),
    ]);
    Ok((t, Status::Ok))
}

pub fn queue_cmd(p: &Params, table_to_file: bool) -> Result<(Table, Status), CliError> {
    let n = n_or(p, 1)?;
    let dt = dt_or(p, DEFAULT_QUEUE_DT)?;
    let samples = replicas_or(p, 1000)?;
    let mut t = Table::new(&[
        "m", "n", "horizon", "dt", "samples", "seed", "mean_r", "target", "stderr",
    ]);
    for m in p.m.unwrap_or(Range::scalar(1.0)).values() {
        if !(m > 0.0) {
            return Err(usage(format!("--m {m}: must be positive")));
        }
        let horizon = match p.horizon {
            Some(h) if !(h > 0.0) || !h.is_finite() => {
                return Err(usage(format!("--horizon {h}: must be positive and finite")))
            }
            Some(h) => h,
            None => default_horizon(m)?,
        };
        let r = tandem_estimate(m, n, horizon, dt, samples, p.seed)?;
        let target = -digamma(m)?;
        summary(
            table_to_file,
            &format!(
                "queue m={m} n={n}: mean r = {:.6} +- {:.6}, -digamma(m) = {target:.6}",
                r.mean, r.stderr
            ),
        );
        t.push(vec![
            num(m),
            n.to_string(),
            num(horizon),
            num(dt),
            samples.to_string(),
            p.seed.to_string(),
            num(r.mean),
            num(target),
            num(r.stderr),
        ]);
    }
    Ok((t, Status::Ok))
}

pub fn gue_cmd(p: &Params, table_to_file: bool) -> Result<(Table, Status), CliError> {
    let n = n_or(p, 16)?;
    let replicas = replicas_or(p, 500)?;
    let dt = dt_or(p, 1.0 / 2048.0)?;
    let r = gue_vs_lpp(n, replicas, dt, p.seed)?;
    let verdict = if r.passed() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    summary(
        table_to_file,
        &format!(
            "gue n={n}: lambda_max {:.4} +- {:.4}, L_n(1) {:.4} +- {:.4}, allowance {:.4}: {verdict}",
            r.gue_mean, r.gue_stderr, r.lpp_mean, r.lpp_stderr, r.allowance
        ),
    );
    let mut t = Table::new(&[
        "n",
        "replicas",
        "seed",
        "gue_mean",
        "gue_stderr",
        "lpp_mean",
        "lpp_stderr",
        "verdict",
    ]);
    t.push(vec![
        n.to_string(),
        replicas.to_string(),
        p.seed.to_string(),
        num(r.gue_mean),
        num(r.gue_stderr),
        num(r.lpp_mean),
        num(r.lpp_stderr),
        verdict.to_string(),
    ]);
    let status = if r.passed() {
        Status::Ok
    } else {
        Status::Failed
    };
    Ok((t, status))
}

pub fn validate_cmd(p: &Params, table_to_file: bool) -> Result<(Table, Status), CliError> {
    let rows = run_suite(p)?;
    let mut t = Table::new(&["suite", "check", "verdict", "detail"]);
    let mut status = Status::Ok;
    for row in rows {
        summary(
            table_to_file,
            &format!(
                "[{}] {}/{}: {}",
                row.verdict, row.suite, row.check, row.detail
            ),
        );
        if row.verdict == Verdict::Fail {
            status = Status::Failed;
        }
        t.push(vec![
            row.suite.into(),
            row.check.into(),
            row.verdict.to_string(),
            row.detail,
        ]);
    }
    Ok((t, status))
}
