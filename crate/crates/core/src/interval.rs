use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which construction produced a region for the tail index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Log-posterior (empirical likelihood) ratio region, censored data.
    El,
    /// Highest-density region of the composite-likelihood posterior.
    Bcl,
    /// Highest-density region of the Jeffreys-prior Gamma posterior.
    B,
    /// Likelihood-ratio region from the censored partial likelihood.
    Ml,
    /// Entropy-tilting region for complete data.
    Cl2,
    /// Wald interval from the asymptotic normality of the ML estimate.
    Normal,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::El,
        Method::Bcl,
        Method::B,
        Method::Ml,
        Method::Cl2,
        Method::Normal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::El => "EL",
            Method::Bcl => "BCL",
            Method::B => "B",
            Method::Ml => "ML",
            Method::Cl2 => "CL2",
            Method::Normal => "NORMAL",
        }
    }

    /// Whether the method is defined for censored samples.
    pub fn supports_censoring(self) -> bool {
        !matches!(self, Method::Cl2)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

/// A confidence or credible region `[lower, upper]` for the tail index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lower: f64,
    pub upper: f64,
    /// Confidence level `1 - θ`.
    pub level: f64,
    pub method: Method,
}

impl Interval {
    pub fn new(lower: f64, upper: f64, level: f64, method: Method) -> Result<Self> {
        if !(lower >= 0.0 && lower < upper && upper.is_finite()) {
            return Err(Error::NumericalFailure(format!(
                "{method}: invalid interval [{lower}, {upper}]"
            )));
        }
        Ok(Self {
            lower,
            upper,
            level,
            method,
        })
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, alpha: f64) -> bool {
        self.lower <= alpha && alpha <= self.upper
    }

    /// True when `self` lies inside `other`.
    pub fn is_within(&self, other: &Interval) -> bool {
        other.lower <= self.lower && self.upper <= other.upper
    }
}

/// Converts a confidence level `1 - θ` into `θ`, rejecting values outside (0, 1).
pub fn theta_from_level(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "level {level} must lie strictly between 0 and 1"
        )));
    }
    Ok(1.0 - level)
}

pub(crate) fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "theta {theta} must lie strictly between 0 and 1"
        )));
    }
    Ok(())
}
