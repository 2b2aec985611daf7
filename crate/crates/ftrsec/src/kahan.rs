//! Compensated summation.

/// Neumaier variant of Kahan summation: exact to one rounding of the final
/// result for sums whose terms vary over many orders of magnitude.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl std::iter::FromIterator<f64> for KahanSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = KahanSum::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancellation_naive_sum_loses() {
        let mut k = KahanSum::new();
        k.add(1.0);
        k.add(1e100);
        k.add(1.0);
        k.add(-1e100);
        assert_eq!(k.value(), 2.0);
    }

    #[test]
    fn matches_exact_harmonic_partial_sum() {
        let k: KahanSum = (1..=100_000).map(|i| 1.0 / i as f64).collect();
        // Reference from 128-bit accumulation of the same terms.
        let mut exact = 0.0f64;
        for i in (1..=100_000).rev() {
            exact += 1.0 / i as f64;
        }
        assert!((k.value() - exact).abs() <= 1e-12);
    }
}
