use statrs::distribution::{ChiSquared as ChiSquaredDist, ContinuousCDF, StudentsT};

use super::AnalyticsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub df: f64,
    /// Two-sided.
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquared {
    pub stat: f64,
    pub p: f64,
}

fn mean_var(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let ss: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum();
    (mean, ss / (n - 1.0))
}

/// Unequal-variance two-sample t-test with Welch–Satterthwaite degrees of freedom.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TTest, AnalyticsError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(AnalyticsError::SampleTooSmall(a.len(), b.len()));
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    if va == 0.0 && vb == 0.0 {
        return Err(AnalyticsError::DegenerateSamples);
    }
    let (sa, sb) = (va / a.len() as f64, vb / b.len() as f64);
    let se2 = sa + sb;
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (a.len() as f64 - 1.0) + sb * sb / (b.len() as f64 - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).map_err(|e| AnalyticsError::InvalidArgument(e.to_string()))?;
    let p = (2.0 * dist.sf(t.abs())).min(1.0);
    Ok(TTest { t, df, p })
}

/// Goodness of fit of `successes` out of `n` against success rate `p0`, one degree of freedom.
pub fn chi_squared_gof(successes: u64, n: u64, p0: f64) -> Result<ChiSquared, AnalyticsError> {
    if n == 0 || successes > n {
        return Err(AnalyticsError::InvalidArgument(format!(
            "need 0 <= successes <= n and n >= 1, got {successes}/{n}"
        )));
    }
    if !(p0 > 0.0 && p0 < 1.0) {
        return Err(AnalyticsError::InvalidArgument(format!(
            "p0 must be in (0, 1), got {p0}"
        )));
    }
    let (s, n) = (successes as f64, n as f64);
    let (e1, e0) = (n * p0, n * (1.0 - p0));
    let stat = (s - e1).powi(2) / e1 + ((n - s) - e0).powi(2) / e0;
    let dist = ChiSquaredDist::new(1.0).expect("one degree of freedom");
    Ok(ChiSquared { stat, p: dist.sf(stat) })
}

pub fn bonferroni(alpha: f64, m: usize) -> Result<f64, AnalyticsError> {
    if m == 0 {
        return Err(AnalyticsError::InvalidArgument("test count must be at least 1".into()));
    }
    Ok(alpha / m as f64)
}

/// Linear-interpolation percentile of sorted data, `q` in [0, 100].
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Stratum 1..=4 per value, split at the quartiles. A value equal to a
/// boundary goes to the lower stratum.
pub fn quartile_strata(gaps: &[f64]) -> Result<Vec<u8>, AnalyticsError> {
    if gaps.len() < 4 {
        return Err(AnalyticsError::TooFewForQuartiles(gaps.len()));
    }
    let mut sorted = gaps.to_vec();
    sorted.sort_by(f64::total_cmp);
    let bounds = [25.0, 50.0, 75.0].map(|q| percentile(&sorted, q));
    Ok(gaps
        .iter()
        .map(|g| 1 + bounds.iter().filter(|b| g > b).count() as u8)
        .collect())
}
