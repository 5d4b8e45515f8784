//! Moments, correlations and Kolmogorov-Smirnov distances.

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    let mut s = CompensatedSum::default();
    xs.iter().for_each(|&x| s.add(x));
    s.value() / xs.len() as f64
}

/// Mean of squares (power of a zero-mean signal).
pub fn power(xs: &[f64]) -> f64 {
    let mut s = CompensatedSum::default();
    xs.iter().for_each(|&x| s.add(x * x));
    s.value() / xs.len() as f64
}

/// Unbiased sample variance, two-pass.
pub fn variance(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let mut s = CompensatedSum::default();
    xs.iter().for_each(|&x| s.add((x - m) * (x - m)));
    s.value() / (xs.len() - 1) as f64
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn correlation(a: &[f64], b: &[f64]) -> Option<f64> {
    let (ma, mb) = (mean(a), mean(b));
    let (mut sab, mut saa, mut sbb) = (CompensatedSum::default(), CompensatedSum::default(), CompensatedSum::default());
    for (&x, &y) in a.iter().zip(b) {
        let (dx, dy) = (x - ma, y - mb);
        sab.add(dx * dy);
        saa.add(dx * dx);
        sbb.add(dy * dy);
    }
    let denom = (saa.value() * sbb.value()).sqrt();
    (denom > 0.0).then(|| sab.value() / denom)
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    v
}

/// One-sample KS statistic against the uniform law on `[lo, hi)`.
pub fn ks_uniform(xs: &[f64], lo: f64, hi: f64) -> f64 {
    if xs.is_empty() || hi <= lo {
        return 0.0;
    }
    let v = sorted(xs);
    let n = v.len() as f64;
    v.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    })
}

/// Two-sample KS distance `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let (a, b) = (sorted(a), sorted(b));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(1e16);
        for _ in 0..1000 {
            s.add(1.0);
        }
        s.add(-1e16);
        assert_eq!(s.value(), 1000.0);
    }

    #[test]
    fn moments_of_small_sample() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), 2.5);
        assert!((variance(&xs) - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(power(&xs), 7.5);
        assert!((correlation(&xs, &[2.0, 4.0, 6.0, 8.0]).unwrap() - 1.0).abs() < 1e-15);
        assert!(correlation(&xs, &[1.0; 4]).is_none());
    }

    #[test]
    fn ks_uniform_on_grid() {
        // Midpoints of n equal sub-intervals: D = 1/(2n).
        let n = 100;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!((ks_uniform(&xs, 0.0, 1.0) - 0.005).abs() < 1e-12);
        assert!((ks_uniform(&[0.0; 10], 0.0, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ks_two_sample_cases() {
        let a = [1.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&a, &[10.0, 11.0, 12.0]), 1.0);
        // F_a(2) = 2/3, F_b(2) = 0
        assert!((ks_two_sample(&a, &[2.5, 3.0, 3.5]) - 2.0 / 3.0).abs() < 1e-12);
    }
}
