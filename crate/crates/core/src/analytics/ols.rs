//! Least squares with classical or robust standard errors.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::beta::beta_reg;

use super::AnalyticsError;

/// P(T <= t) for Student's t with `df` degrees of freedom.
pub fn t_cdf(t: f64, df: f64) -> f64 {
    let tail = 0.5 * beta_reg(df / 2.0, 0.5, df / (df + t * t));
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Inverse of [`t_cdf`] by bisection, to 1e-10 in t.
pub fn t_quantile(p: f64, df: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0 && df > 0.0, "t_quantile({p}, {df})");
    if p < 0.5 {
        return -t_quantile(1.0 - p, df);
    }
    let mut hi = 1.0;
    while t_cdf(hi, df) < p {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if t_cdf(mid, df) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeKind {
    #[default]
    Classical,
    /// White's heteroskedasticity-consistent estimator with the n/(n-p)
    /// small-sample factor (HC1).
    Robust,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub term: String,
    pub estimate: f64,
    pub se: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Coefficient {
    pub fn covers(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OlsFit {
    pub coefficients: Vec<Coefficient>,
    pub df: usize,
    pub sigma2: f64,
    pub se_kind: SeKind,
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

impl OlsFit {
    pub fn get(&self, term: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.term == term)
    }

    pub fn estimates(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.estimate).collect()
    }
}

/// Solves the normal equations X'X b = X'y with a column-pivoted QR of
/// X'X, so a dependent column shows up as a vanishing pivot rather than
/// a garbage solution.
pub fn ols_fit(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    terms: &[String],
    se_kind: SeKind,
) -> Result<OlsFit, AnalyticsError> {
    let (n, p) = x.shape();
    if terms.len() != p || y.len() != n {
        return Err(AnalyticsError::Shape {
            rows: n,
            cols: p,
            names: terms.len(),
            responses: y.len(),
        });
    }
    if n < p + 2 {
        return Err(AnalyticsError::TooFewRows {
            rows: n,
            need: p + 2,
        });
    }
    let xtx = x.transpose() * x;
    let xty = x.transpose() * y;
    let qr = xtx.clone().col_piv_qr();
    let r = qr.r();
    let top = r[(0, 0)].abs();
    let rank = (0..p)
        .take_while(|&i| r[(i, i)].abs() > top * 1e-10)
        .count();
    if rank < p {
        return Err(AnalyticsError::RankDeficient { rank, cols: p });
    }
    let beta = qr
        .solve(&xty)
        .ok_or(AnalyticsError::RankDeficient { rank, cols: p })?;
    let inv = qr
        .try_inverse()
        .ok_or(AnalyticsError::RankDeficient { rank, cols: p })?;
    let resid = y - x * &beta;
    let df = n - p;
    let sigma2 = resid.norm_squared() / df as f64;
    let cov = match se_kind {
        SeKind::Classical => &inv * sigma2,
        SeKind::Robust => {
            let mut meat = DMatrix::zeros(p, p);
            for i in 0..n {
                let row = x.row(i);
                meat += row.transpose() * row * (resid[i] * resid[i]);
            }
            &inv * meat * &inv * (n as f64 / df as f64)
        }
    };
    let t = t_quantile(0.975, df as f64);
    let coefficients = (0..p)
        .map(|j| {
            let se = cov[(j, j)].max(0.0).sqrt();
            Coefficient {
                term: terms[j].clone(),
                estimate: beta[j],
                se,
                ci_low: beta[j] - t * se,
                ci_high: beta[j] + t * se,
            }
        })
        .collect();
    Ok(OlsFit {
        coefficients,
        df,
        sigma2,
        se_kind,
        residuals: resid.iter().copied().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_table_values() {
        // two-sided 95% critical values from printed tables
        for (df, want) in [
            (1.0, 12.706204736),
            (5.0, 2.570581836),
            (10.0, 2.228138852),
            (30.0, 2.042272456),
            (1000.0, 1.962339),
        ] {
            assert!((t_quantile(0.975, df) - want).abs() < 1e-6, "df {df}");
        }
    }

    #[test]
    fn quantile_inverts_cdf() {
        for df in [1.0, 2.5, 7.0, 40.0] {
            for p in [0.01, 0.3, 0.5, 0.9, 0.999] {
                assert!((t_cdf(t_quantile(p, df), df) - p).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn matches_statrs_inverse() {
        use statrs::distribution::{ContinuousCDF, StudentsT};
        for df in [3.0, 12.0, 203.0] {
            let d = StudentsT::new(0.0, 1.0, df).unwrap();
            assert!((t_quantile(0.975, df) - d.inverse_cdf(0.975)).abs() < 1e-6);
        }
    }
}
