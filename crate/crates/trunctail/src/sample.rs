//! Ordered samples of positive observations.

use crate::error::{Error, Result};

/// Ascending positive observations with order-statistic access.
///
/// With `n` observations, the order statistics are
/// `X_(1,n) <= ... <= X_(n,n)`; estimators address them either from the top
/// (`from_top(1)` is the maximum) or through the threshold `X_(n-k,n)` that
/// cuts off the top `k` values.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedSample {
    values: Vec<f64>,
}

impl SortedSample {
    /// Sorts and validates: every value must be finite and strictly positive.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter {
                name: "sample",
                value: 0.0,
                reason: "must contain at least one observation",
            });
        }
        for &v in &values {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "observation",
                    value: v,
                    reason: "must be finite and > 0",
                });
            }
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("values are finite"));
        Ok(SortedSample { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `X_(n-j+1,n)`, the j-th largest observation (1-based, `from_top(1)` is
    /// the maximum).
    pub fn from_top(&self, j: usize) -> f64 {
        assert!(j >= 1 && j <= self.n(), "j = {j} out of 1..=n");
        self.values[self.n() - j]
    }

    /// `X_(n-k,n)`, the threshold below the top `k` observations.
    pub fn threshold(&self, k: usize) -> f64 {
        assert!(k >= 1 && k < self.n(), "k = {k} out of 1..n");
        self.values[self.n() - k - 1]
    }

    pub(crate) fn check_k(&self, k: usize) -> Result<()> {
        if k < 1 || k >= self.n() {
            Err(Error::KOutOfRange { k, n: self.n() })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_ascending() {
        let s = SortedSample::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(s.values(), &[1.0, 2.0, 3.0]);
        assert_eq!(s.n(), 3);
        assert_eq!(s.min(), 1.0);
        assert_eq!(s.max(), 3.0);
    }

    #[test]
    fn order_statistic_access() {
        let s = SortedSample::new(vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        assert_eq!(s.from_top(1), 8.0);
        assert_eq!(s.from_top(4), 1.0);
        assert_eq!(s.threshold(1), 4.0);
        assert_eq!(s.threshold(3), 1.0);
    }

    #[test]
    fn rejects_nonpositive_and_nonfinite() {
        assert!(SortedSample::new(vec![1.0, 0.0]).is_err());
        assert!(SortedSample::new(vec![1.0, -3.0]).is_err());
        assert!(SortedSample::new(vec![1.0, f64::NAN]).is_err());
        assert!(SortedSample::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(SortedSample::new(vec![]).is_err());
    }

    #[test]
    fn k_range_check() {
        let s = SortedSample::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(s.check_k(0).is_err());
        assert!(s.check_k(1).is_ok());
        assert!(s.check_k(2).is_ok());
        assert!(s.check_k(3).is_err());
    }

    #[test]
    fn duplicates_are_retained() {
        let s = SortedSample::new(vec![2.0, 2.0, 2.0]).unwrap();
        assert_eq!(s.n(), 3);
        assert_eq!(s.threshold(1), 2.0);
    }
}
