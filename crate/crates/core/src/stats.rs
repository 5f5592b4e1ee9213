//! Small numerical and statistical helpers shared by the estimators.

/// `log(exp(a) + exp(b))` without overflow.
#[inline]
pub fn logaddexp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    if a > b {
        a + (b - a).exp().ln_1p()
    } else {
        b + (a - b).exp().ln_1p()
    }
}

/// `log(sum(exp(x)))` over a slice. Empty input gives negative infinity.
pub fn logsumexp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    if max == f64::INFINITY {
        return max;
    }
    let s: f64 = xs.iter().map(|&x| (x - max).exp()).sum();
    max + s.ln()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance (denominator `len - 1`).
pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
}

/// Standard error of the mean.
pub fn std_error(xs: &[f64]) -> f64 {
    (sample_variance(xs) / xs.len() as f64).sqrt()
}

/// Standard error of the unbiased sample variance, from the fourth central moment.
pub fn variance_std_error(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let m = mean(xs);
    let m2 = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
    let m4 = xs.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
    ((m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n).max(0.0).sqrt()
}

/// Pearson correlation coefficient.
pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}

/// Approximate standard error of a sample correlation `rho` from `n` pairs.
pub fn correlation_std_error(rho: f64, n: usize) -> f64 {
    (1.0 - rho * rho) / ((n as f64) - 1.0).sqrt()
}

/// Ordinary least squares slope of `ys` on `xs` together with its standard error.
pub fn regression_slope(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = mean(xs);
    let my = mean(ys);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let se = (rss / (n - 2.0) / sxx).sqrt();
    (slope, se)
}

/// A named statistic compared against a target with a fixed-width window.
#[derive(Debug, Clone, PartialEq)]
pub struct StatCheck {
    pub name: String,
    pub value: f64,
    pub target: f64,
    pub stderr: f64,
    /// Allowed `|value − target|`.
    pub window: f64,
}

impl StatCheck {
    /// Window of `k` standard errors plus `slack`.
    pub fn within_stderr(
        name: impl Into<String>,
        value: f64,
        target: f64,
        stderr: f64,
        k: f64,
        slack: f64,
    ) -> Self {
        Self {
            name: name.into(),
            value,
            target,
            stderr,
            window: k * stderr + slack,
        }
    }

    /// Window of `rel·|target|`.
    pub fn within_relative(
        name: impl Into<String>,
        value: f64,
        target: f64,
        stderr: f64,
        rel: f64,
    ) -> Self {
        Self {
            name: name.into(),
            value,
            target,
            stderr,
            window: rel * target.abs(),
        }
    }

    pub fn passed(&self) -> bool {
        (self.value - self.target).abs() <= self.window
    }

    pub fn detail(&self) -> String {
        format!(
            "value={:.6} target={:.6} stderr={:.6} window={:.6}",
            self.value, self.target, self.stderr, self.window
        )
    }
}

/// `ln(k!)` by direct summation; only used for small `k`.
pub fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}
