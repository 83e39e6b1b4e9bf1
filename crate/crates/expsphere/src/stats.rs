//! Streaming mean/variance accumulation for the Monte Carlo estimators.
//!
//! Uses Welford's update per stream plus the standard pairwise merge, so
//! partial accumulators from independent streams combine in a fixed order
//! and results stay bitwise reproducible however the streams were
//! scheduled across threads.

/// Running mean and variance of one real-valued observable.
#[derive(Debug, Clone, Copy, Default)]
pub struct WelfordAccumulator {
    count: u64,
    mean: f64,
    m2: f64,
}

impl WelfordAccumulator {
    /// Empty accumulator.
    pub fn new() -> Self {
        Self::default()
    }

    /// Folds one observation into the running statistics.
    #[inline]
    pub fn update(&mut self, value: f64) {
        self.count += 1;
        let delta = value - self.mean;
        self.mean += delta / self.count as f64;
        let delta2 = value - self.mean;
        self.m2 += delta * delta2;
    }

    /// Merges another accumulator into this one.
    ///
    /// Merging in a fixed order is what keeps multi-stream runs
    /// deterministic, so callers must combine stream partials by stream
    /// index, never by completion order.
    pub fn merge(&mut self, other: &WelfordAccumulator) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let total = self.count + other.count;
        let delta = other.mean - self.mean;
        self.mean += delta * (other.count as f64 / total as f64);
        self.m2 += other.m2
            + delta * delta * (self.count as f64 * other.count as f64 / total as f64);
        self.count = total;
    }

    /// Number of observations folded in.
    pub fn count(&self) -> u64 {
        self.count
    }

    /// Sample mean (0 when empty).
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance (0 until two observations exist).
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean (0 until two observations exist).
    pub fn standard_error(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }
}
