//! Shared machinery for suite implementations: deterministic sampling and
//! worst-sample tracking.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chart::Chart;
use crate::error::Result;
use crate::tensorcalc::DiffEngine;
use crate::verify::config::RunConfig;

pub struct SuiteCtx {
    pub config: RunConfig,
}

fn fnv1a(text: &str) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in text.as_bytes() {
        hash ^= *byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

impl SuiteCtx {
    pub fn new(config: RunConfig) -> Self {
        SuiteCtx { config }
    }

    pub fn engine(&self) -> DiffEngine {
        self.config.engine.engine()
    }

    /// Per-(suite, geometry) deterministic generator.
    pub fn rng(&self, suite: &str, geometry: &str) -> ChaCha8Rng {
        let seed = self.config.seed ^ fnv1a(suite) ^ fnv1a(geometry).rotate_left(17);
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Suite-default sample count, unless overridden in the config.
    pub fn count(&self, default: usize) -> usize {
        self.config.sample_count.unwrap_or(default)
    }

    /// Absolute lower bound of the sampling margin: nested stencils must
    /// stay inside the chart.
    pub fn min_margin(&self) -> f64 {
        (6.0 * self.config.engine.step).max(0.06)
    }

    /// Fraction of each axis excluded on both sides. Beyond keeping
    /// stencils inside, this keeps samples away from the chart faces where
    /// polar-band coordinate factors degrade the oracle's accuracy below
    /// the suite tolerances.
    pub const MARGIN_FRACTION: f64 = 0.12;

    pub fn samples(
        &self,
        suite: &str,
        geometry: &str,
        chart: &Chart,
        count: usize,
    ) -> Vec<Vec<f64>> {
        let mut rng = self.rng(suite, geometry);
        let min_abs = self.min_margin();
        (0..count)
            .map(|_| {
                chart
                    .domain()
                    .sample_fraction(&mut rng, Self::MARGIN_FRACTION, min_abs)
            })
            .collect()
    }

    /// Samples of `(x, t)` for warped cases: base point plus a parameter in
    /// the inner 70% of the interval.
    pub fn samples_with_t(
        &self,
        suite: &str,
        geometry: &str,
        chart: &Chart,
        eps: f64,
        count: usize,
    ) -> Vec<(Vec<f64>, f64)> {
        use rand::Rng;
        let mut rng = self.rng(suite, geometry);
        let min_abs = self.min_margin();
        (0..count)
            .map(|_| {
                let x = chart
                    .domain()
                    .sample_fraction(&mut rng, Self::MARGIN_FRACTION, min_abs);
                let t = rng.random_range((1.0 - 0.7 * eps)..(1.0 + 0.7 * eps));
                (x, t)
            })
            .collect()
    }

    /// Is a geometry in scope given the configured filter? When a filter
    /// is present, only listed names run; otherwise defaults run.
    pub fn geometry_selected(&self, name: &str, default: bool) -> bool {
        match &self.config.geometries {
            Some(filter) => filter.iter().any(|g| g == name),
            None => default,
        }
    }
}

/// Maximize a residual over samples, tracking the worst sample.
pub fn max_over<S, F>(samples: &[S], mut f: F) -> Result<(f64, Option<S>)>
where
    S: Clone,
    F: FnMut(&S) -> Result<f64>,
{
    let mut worst: f64 = 0.0;
    let mut at: Option<S> = None;
    for sample in samples {
        let value = f(sample)?;
        if value >= worst {
            worst = value;
            at = Some(sample.clone());
        }
    }
    Ok((worst, at))
}

/// Spread (max - min) of a quantity over samples.
pub fn spread_over<S, F>(samples: &[S], mut f: F) -> Result<f64>
where
    F: FnMut(&S) -> Result<f64>,
{
    let mut lo = f64::MAX;
    let mut hi = f64::MIN;
    for sample in samples {
        let value = f(sample)?;
        lo = lo.min(value);
        hi = hi.max(value);
    }
    Ok(if hi >= lo { hi - lo } else { 0.0 })
}
