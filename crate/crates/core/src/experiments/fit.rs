use serde::{Deserialize, Serialize};

use super::EnsembleRecord;
use crate::error::{Error, Result};

/// Which tail probability to fit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Ergotropy,
    Entropy,
}

/// Which variable is swept while the other is held fixed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMode {
    VaryEll { d: usize },
    VaryD { ell: f64 },
}

/// Ordinary least squares of `ln(−ln P)` against `ln x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    /// Points dropped because `P ∈ {0, 1}`.
    pub n_excluded: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub observable: Observable,
    pub mode: FitMode,
    /// Exponent of `ℓ`, present when `ℓ` was swept.
    pub x_exponent: Option<f64>,
    /// Exponent of `d`, present when `d` was swept.
    pub y_exponent: Option<f64>,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub n_excluded: usize,
}

impl FitResult {
    pub fn slope(&self) -> f64 {
        self.x_exponent.or(self.y_exponent).unwrap_or(f64::NAN)
    }
}

pub fn fit_log_log(xs: &[f64], probabilities: &[f64]) -> Result<LinearFit> {
    if xs.len() != probabilities.len() {
        return Err(Error::DimensionMismatch {
            left: xs.len(),
            right: probabilities.len(),
        });
    }
    let points: Vec<(f64, f64)> = xs
        .iter()
        .zip(probabilities)
        .filter(|(x, p)| **x > 0.0 && x.is_finite() && **p > 0.0 && **p < 1.0)
        .map(|(x, p)| (x.ln(), (-p.ln()).ln()))
        .collect();
    let excluded = xs.len() - points.len();
    if points.len() < 3 {
        return Err(Error::InsufficientFitPoints {
            usable: points.len(),
            excluded,
        });
    }
    let (slope, intercept, r_squared) =
        ols(&points).ok_or_else(|| Error::domain("fit abscissae are all equal"))?;
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        n_points: points.len(),
        n_excluded: excluded,
    })
}

/// Least-squares line through `(x, y)` points: slope, intercept and `R²`.
/// `None` when all abscissae coincide.
pub(crate) fn ols(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if !(sxx > 0.0) {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Some((slope, intercept, r_squared.clamp(0.0, 1.0)))
}

fn same_ell(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

/// Fits `ln(−ln P) ≈ const + x ln ℓ` at fixed `d`, or `const + y ln d` at fixed `ℓ`.
pub fn fit_concentration_exponents(
    records: &[EnsembleRecord],
    mode: FitMode,
    observable: Observable,
) -> Result<FitResult> {
    let prob = |r: &EnsembleRecord, c: &super::TailCount| match observable {
        Observable::Ergotropy => r.p_erg(c),
        Observable::Entropy => r.p_ent(c),
    };
    let (xs, ps): (Vec<f64>, Vec<f64>) = match mode {
        FitMode::VaryEll { d } => {
            let r = records
                .iter()
                .find(|r| r.d == d)
                .ok_or_else(|| Error::config(format!("no record for d = {d}")))?;
            let counts = r
                .tail_counts
                .as_ref()
                .ok_or_else(|| Error::config(format!("record for d = {d} has no tail counts")))?;
            counts.iter().map(|c| (c.ell, prob(r, c))).unzip()
        }
        FitMode::VaryD { ell } => records
            .iter()
            .filter_map(|r| {
                let c = r.tail_counts.as_ref()?.iter().find(|c| same_ell(c.ell, ell))?;
                Some((r.d as f64, prob(r, c)))
            })
            .unzip(),
    };
    let fit = fit_log_log(&xs, &ps)?;
    let (x_exponent, y_exponent) = match mode {
        FitMode::VaryEll { .. } => (Some(fit.slope), None),
        FitMode::VaryD { .. } => (None, Some(fit.slope)),
    };
    Ok(FitResult {
        observable,
        mode,
        x_exponent,
        y_exponent,
        intercept: fit.intercept,
        r_squared: fit.r_squared,
        n_points: fit.n_points,
        n_excluded: fit.n_excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_tail_has_slope_two() {
        let ells: Vec<f64> = (1..=10).map(|i| 0.1 * i as f64).collect();
        let ps: Vec<f64> = ells.iter().map(|l| (-l * l).exp()).collect();
        let fit = fit_log_log(&ells, &ps).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
        assert!(fit.r_squared > 0.999);
    }

    #[test]
    fn degenerate_points_are_dropped() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let err = fit_log_log(&xs, &[1.0, 0.5, 0.0, 0.2]).unwrap_err();
        assert!(matches!(err, Error::InsufficientFitPoints { usable: 2, excluded: 2 }));
        let fit = fit_log_log(&[1.0, 2.0, 3.0, 4.0, 5.0], &[1.0, 0.5, 0.3, 0.2, 0.0]).unwrap();
        assert_eq!((fit.n_points, fit.n_excluded), (3, 2));
    }
}
