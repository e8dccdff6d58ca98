//! Observed samples, order statistics with concomitant censoring indicators,
//! and the classical Hill-type estimators built on the top `k` of them.

use crate::error::{Error, Result};

/// Observations `Z_i = min(X_i, Y_i)` paired with `δ_i = 1{X_i <= Y_i}`.
///
/// A complete (uncensored) sample is simply one whose statuses are all `true`.
#[derive(Debug, Clone, PartialEq)]
pub struct CensoredSample {
    values: Vec<f64>,
    statuses: Vec<bool>,
}

impl CensoredSample {
    pub fn new(values: Vec<f64>, statuses: Vec<bool>) -> Result<Self> {
        if values.len() != statuses.len() {
            return Err(Error::InvalidSample(format!(
                "{} values but {} statuses",
                values.len(),
                statuses.len()
            )));
        }
        if values.len() < 2 {
            return Err(Error::InvalidSample("need at least two observations".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidSample(format!(
                "observation {i} is {v}; values must be finite and strictly positive"
            )));
        }
        Ok(Self { values, statuses })
    }

    /// Sample with every observation uncensored.
    pub fn complete(values: Vec<f64>) -> Result<Self> {
        let statuses = vec![true; values.len()];
        Self::new(values, statuses)
    }

    /// Builds a sample from 0/1 status codes.
    pub fn from_codes(values: Vec<f64>, codes: &[u8]) -> Result<Self> {
        let statuses = codes
            .iter()
            .enumerate()
            .map(|(i, &c)| match c {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidSample(format!(
                    "status {i} is {other}; must be 0 or 1"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values, statuses)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn statuses(&self) -> &[bool] {
        &self.statuses
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_complete(&self) -> bool {
        self.statuses.iter().all(|&s| s)
    }

    /// Multiplies every observation by `c`, keeping statuses.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.values.iter().map(|v| v * c).collect(), self.statuses.clone())
    }

    pub fn ordered(&self) -> OrderedSample {
        OrderedSample::new(self)
    }
}

/// The sample sorted in decreasing order, statuses carried along as concomitants.
///
/// Ties are broken by original index (the later observation counts as larger),
/// which keeps concomitant order reproducible.
#[derive(Debug, Clone)]
pub struct OrderedSample {
    values: Vec<f64>,
    statuses: Vec<bool>,
    index: Vec<usize>,
}

impl OrderedSample {
    pub fn new(sample: &CensoredSample) -> Self {
        let mut order: Vec<usize> = (0..sample.len()).collect();
        order.sort_by(|&a, &b| {
            sample.values[b]
                .total_cmp(&sample.values[a])
                .then_with(|| b.cmp(&a))
        });
        Self {
            values: order.iter().map(|&i| sample.values[i]).collect(),
            statuses: order.iter().map(|&i| sample.statuses[i]).collect(),
            index: order,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values in decreasing order: `Z_{n,n}, Z_{n,n-1}, ...`.
    pub fn values_desc(&self) -> &[f64] {
        &self.values
    }

    pub fn statuses_desc(&self) -> &[bool] {
        &self.statuses
    }

    /// Original sample position of each sorted entry.
    pub fn original_index(&self) -> &[usize] {
        &self.index
    }

    /// The top-`k` view with `2 <= k <= n - 1`.
    pub fn tail(&self, k: usize) -> Result<TailStats> {
        if k < 2 {
            return Err(Error::InvalidK { k, n: self.len() });
        }
        self.tail_unchecked_min(k)
    }

    /// Same as [`tail`](Self::tail) but accepts `k = 1`.
    pub(crate) fn tail_unchecked_min(&self, k: usize) -> Result<TailStats> {
        let n = self.len();
        if k == 0 || k >= n {
            return Err(Error::InvalidK { k, n });
        }
        let threshold = self.values[k];
        if self.values[k - 1] <= threshold {
            return Err(Error::ThresholdTie { k });
        }
        let log_excesses = self.values[..k]
            .iter()
            .map(|&z| (z / threshold).ln())
            .collect();
        let indicators = self.statuses[..k].to_vec();
        Ok(TailStats::assemble(n, threshold, log_excesses, indicators))
    }
}

/// Sufficient statistics of the `k` largest observations.
#[derive(Debug, Clone, PartialEq)]
pub struct TailStats {
    n: usize,
    threshold: f64,
    log_excesses: Vec<f64>,
    indicators: Vec<bool>,
    p_hat: f64,
}

impl TailStats {
    fn assemble(n: usize, threshold: f64, log_excesses: Vec<f64>, indicators: Vec<bool>) -> Self {
        let k = indicators.len();
        let p_hat = indicators.iter().filter(|&&d| d).count() as f64 / k as f64;
        Self {
            n,
            threshold,
            log_excesses,
            indicators,
            p_hat,
        }
    }

    /// Builds tail statistics directly from log-excesses and indicators.
    ///
    /// `log_excesses` must be strictly positive and nonincreasing, and the
    /// tail must be shorter than the sample (`k < n`).
    pub fn from_parts(
        n: usize,
        threshold: f64,
        log_excesses: Vec<f64>,
        indicators: Vec<bool>,
    ) -> Result<Self> {
        let k = log_excesses.len();
        if k == 0 || k >= n {
            return Err(Error::InvalidK { k, n });
        }
        if indicators.len() != k {
            return Err(Error::InvalidSample(format!(
                "{k} log-excesses but {} indicators",
                indicators.len()
            )));
        }
        if !(threshold.is_finite() && threshold > 0.0) {
            return Err(Error::InvalidSample(format!("threshold {threshold} must be positive")));
        }
        if log_excesses.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err(Error::InvalidSample("log-excesses must be finite and positive".into()));
        }
        if log_excesses.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidSample("log-excesses must be nonincreasing".into()));
        }
        Ok(Self::assemble(n, threshold, log_excesses, indicators))
    }

    pub fn k(&self) -> usize {
        self.log_excesses.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `Z_{n,n-k}`, the (k+1)-th largest observation.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// `V_i = log(Z_{n,n-i+1} / Z_{n,n-k})`, nonincreasing in `i`.
    pub fn log_excesses(&self) -> &[f64] {
        &self.log_excesses
    }

    pub fn indicators(&self) -> &[bool] {
        &self.indicators
    }

    /// Fraction of uncensored observations among the top `k`.
    pub fn p_hat(&self) -> f64 {
        self.p_hat
    }

    pub fn uncensored_count(&self) -> usize {
        self.indicators.iter().filter(|&&d| d).count()
    }

    pub fn sum_log_excess(&self) -> f64 {
        self.log_excesses.iter().sum()
    }
}

/// Top-`k` view of a sample; see [`OrderedSample::tail`].
pub fn tail_view(sample: &CensoredSample, k: usize) -> Result<TailStats> {
    let n = sample.len();
    if k < 2 || k >= n {
        return Err(Error::InvalidK { k, n });
    }
    sample.ordered().tail(k)
}

/// Hill's estimate `H(k)` of the extreme value index `1/α`.
pub fn hill(tail: &TailStats) -> f64 {
    tail.sum_log_excess() / tail.k() as f64
}

/// Hill's estimate divided by the uncensored proportion `p̂`.
pub fn censored_hill(tail: &TailStats) -> Result<f64> {
    if tail.uncensored_count() == 0 {
        return Err(Error::AllCensored);
    }
    Ok(hill(tail) / tail.p_hat())
}
