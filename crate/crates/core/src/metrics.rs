//! Regression error metrics over `(truth, forecast)` pairs.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::PredictionPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Metric {
    Mae,
    Mse,
    Rmse,
    Mape,
    Wmape,
    Smape,
}

impl Metric {
    pub const ALL: [Metric; 6] = [
        Metric::Mae,
        Metric::Mse,
        Metric::Rmse,
        Metric::Mape,
        Metric::Wmape,
        Metric::Smape,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Mae => "MAE",
            Metric::Mse => "MSE",
            Metric::Rmse => "RMSE",
            Metric::Mape => "MAPE",
            Metric::Wmape => "wMAPE",
            Metric::Smape => "sMAPE",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Metric::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown metric {s:?}")))
    }
}

pub fn error_metric(pairs: &[PredictionPair], metric: Metric) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::InvalidInput("metrics need at least one pair".into()));
    }
    let m = pairs.len() as f64;
    let abs_err = |p: &PredictionPair| (p.truth - p.forecast).abs();
    let degenerate = |reason: String| Error::DivisionDegenerate {
        metric: metric.name(),
        reason,
    };
    let mse = || pairs.iter().map(|p| (p.truth - p.forecast).powi(2)).sum::<f64>() / m;

    Ok(match metric {
        Metric::Mae => pairs.iter().map(abs_err).sum::<f64>() / m,
        Metric::Mse => mse(),
        Metric::Rmse => mse().sqrt(),
        Metric::Mape => {
            let mut sum = 0.0;
            for (i, p) in pairs.iter().enumerate() {
                if p.truth == 0.0 {
                    return Err(degenerate(format!("truth of pair {i} is zero")));
                }
                sum += abs_err(p) / p.truth.abs();
            }
            sum / m
        }
        Metric::Wmape => {
            let denom: f64 = pairs.iter().map(|p| p.truth.abs()).sum();
            if denom == 0.0 {
                return Err(degenerate("sum of |truth| is zero".into()));
            }
            pairs.iter().map(abs_err).sum::<f64>() / denom
        }
        Metric::Smape => {
            let mut sum = 0.0;
            for (i, p) in pairs.iter().enumerate() {
                let denom = p.truth.abs() + p.forecast.abs();
                if denom == 0.0 {
                    return Err(degenerate(format!("|truth| + |forecast| of pair {i} is zero")));
                }
                sum += abs_err(p) / denom;
            }
            sum / m
        }
    })
}
