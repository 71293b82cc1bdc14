use serde::Serialize;

use super::{HarnessError, SolveReport};

/// `log₂(ops) ≈ slope · log₂(d) + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
    pub points: usize,
}

/// Fits total ops against degree over the matched rows.
pub fn fit_loglog(rows: &[SolveReport]) -> Result<LogLogFit, HarnessError> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.matched && r.total_ops() > 0)
        .map(|r| (r.degree as f64, r.total_ops() as f64))
        .collect();
    fit_points(&pts)
}

/// Least squares on `(degree, ops)` pairs in log₂–log₂ space.
pub fn fit_points(pts: &[(f64, f64)]) -> Result<LogLogFit, HarnessError> {
    let logs: Vec<(f64, f64)> = pts
        .iter()
        .filter(|(d, ops)| *d > 0.0 && *ops > 0.0)
        .map(|(d, ops)| (d.log2(), ops.log2()))
        .collect();
    let n = logs.len();
    let distinct_x = {
        let mut xs: Vec<f64> = logs.iter().map(|p| p.0).collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.len()
    };
    if n < 3 || distinct_x < 2 {
        return Err(HarnessError::InsufficientData(n));
    }
    let nf = n as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = logs.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = logs.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    Ok(LogLogFit { slope, intercept, r2, points: n })
}
