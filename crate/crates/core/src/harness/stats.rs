//! Streaming mean/variance accumulator with order-stable merging.

/// Welford accumulator; `m2` is the sum of squared deviations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunningStats {
    count: u64,
    mean: f64,
    m2: f64,
    min: f64,
    max: f64,
}

impl Default for RunningStats {
    fn default() -> Self {
        Self::new()
    }
}

impl RunningStats {
    pub fn new() -> Self {
        Self {
            count: 0,
            mean: 0.0,
            m2: 0.0,
            min: f64::INFINITY,
            max: f64::NEG_INFINITY,
        }
    }

    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    /// Combine two accumulators (Chan's parallel update).
    pub fn merge(&self, other: &Self) -> Self {
        if self.count == 0 {
            return *other;
        }
        if other.count == 0 {
            return *self;
        }
        let n1 = self.count as f64;
        let n2 = other.count as f64;
        let n = n1 + n2;
        let delta = other.mean - self.mean;
        Self {
            count: self.count + other.count,
            mean: self.mean + delta * n2 / n,
            m2: self.m2 + other.m2 + delta * delta * n1 * n2 / n,
            min: self.min.min(other.min),
            max: self.max.max(other.max),
        }
    }

    pub fn from_slice(xs: &[f64]) -> Self {
        let mut s = Self::new();
        for &x in xs {
            s.push(x);
        }
        s
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Sample variance; 0 when fewer than two samples (check [`count`]
    /// to tell the degenerate case apart).
    ///
    /// [`count`]: RunningStats::count
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }
}

/// Sample skewness and excess kurtosis.
pub fn skewness_kurtosis(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
}

/// Two-sample Kolmogorov-Smirnov statistic, `sup |F̂_a - F̂_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
    xb.sort_by(|p, q| p.partial_cmp(q).expect("finite samples"));
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        // both empirical CDFs jump together at a tied value
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] == x {
            i += 1;
        }
        while j < xb.len() && xb[j] == x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup
}

/// Pairwise reduction in index order; the tree shape depends only on the
/// input length, so the result is bit-stable for any worker schedule.
pub fn merge_ordered(mut parts: Vec<RunningStats>) -> RunningStats {
    if parts.is_empty() {
        return RunningStats::new();
    }
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|c| {
                if c.len() == 2 {
                    c[0].merge(&c[1])
                } else {
                    c[0]
                }
            })
            .collect();
    }
    parts[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_moments() {
        let s = RunningStats::from_slice(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.count(), 4);
        assert!((s.mean() - 2.5).abs() < 1e-15);
        assert!((s.variance() - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.min(), 1.0);
        assert_eq!(s.max(), 4.0);
    }

    #[test]
    fn degenerate_counts() {
        let mut s = RunningStats::new();
        assert_eq!(s.count(), 0);
        assert_eq!(s.variance(), 0.0);
        s.push(5.0);
        assert_eq!(s.count(), 1);
        assert_eq!(s.variance(), 0.0);
        assert_eq!(s.mean(), 5.0);
    }

    #[test]
    fn constant_stream_has_zero_variance() {
        let s = RunningStats::from_slice(&[5.0; 100]);
        assert_eq!(s.mean(), 5.0);
        assert_eq!(s.variance(), 0.0);
    }

    #[test]
    fn merge_matches_flat_accumulation() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37 % 113) as f64).sin()).collect();
        let flat = RunningStats::from_slice(&xs);
        let parts: Vec<RunningStats> = xs.chunks(64).map(RunningStats::from_slice).collect();
        let merged = merge_ordered(parts);
        assert_eq!(merged.count(), flat.count());
        assert!((merged.mean() - flat.mean()).abs() < 1e-12);
        let rel = (merged.variance() - flat.variance()).abs() / flat.variance();
        assert!(rel < 1e-9);
        assert_eq!(merged.min(), flat.min());
        assert_eq!(merged.max(), flat.max());
    }

    /// Merging is associative up to tolerance: any split of the data gives
    /// the same result.
    #[test]
    fn merge_split_invariance() {
        let xs: Vec<f64> = (0..500).map(|i| (i as f64 * 0.77).cos() * 3.0).collect();
        let a = merge_ordered(xs.chunks(7).map(RunningStats::from_slice).collect());
        let b = merge_ordered(xs.chunks(121).map(RunningStats::from_slice).collect());
        assert!((a.mean() - b.mean()).abs() < 1e-12);
        assert!((a.variance() - b.variance()).abs() / a.variance() < 1e-9);
    }

    #[test]
    fn shape_stats_on_known_data() {
        // symmetric data: zero skew, platykurtic
        let xs: Vec<f64> = (-50..=50).map(|i| i as f64).collect();
        let (skew, kurt) = skewness_kurtosis(&xs);
        assert!(skew.abs() < 1e-12);
        assert!((kurt + 1.2).abs() < 0.02); // uniform limit is -6/5

        // exponential-ish data is right-skewed
        let ys: Vec<f64> = (1..2000).map(|i| -((i as f64) / 2000.0).ln()).collect();
        let (skew, _) = skewness_kurtosis(&ys);
        assert!(skew.is_finite() && skew > 1.0);
    }

    #[test]
    fn ks_statistic_extremes() {
        let a: Vec<f64> = (0..100).map(|i| i as f64).collect();
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        let b: Vec<f64> = (0..100).map(|i| 1000.0 + i as f64).collect();
        assert_eq!(ks_two_sample(&a, &b), 1.0);
        let c: Vec<f64> = (0..100).map(|i| 0.5 + i as f64).collect();
        assert!(ks_two_sample(&a, &c) <= 0.011);
    }
}
