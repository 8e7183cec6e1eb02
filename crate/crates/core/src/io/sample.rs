use crate::dists::Support;
use crate::error::{Error, Result};

/// A validated, sorted set of positive observations.
///
/// Construction caches the distinct values with their multiplicities and
/// suffix sums of counts and of ln x, so any tail `x ≥ xmin` can be
/// summarized without touching the raw values.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    kind: Support,
    unique: Vec<f64>,
    counts: Vec<usize>,
    // suffix_n[i] = # values ≥ unique[i]; suffix_log[i] = Σ ln x over the same
    suffix_n: Vec<usize>,
    suffix_log: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>, kind: Support) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("a sample needs at least one value".into()));
        }
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::Domain(format!(
                    "observation {} = {v} is not a positive finite number",
                    i + 1
                )));
            }
            if kind == Support::Discrete && v.fract() != 0.0 {
                return Err(Error::KindMismatch {
                    line: i + 1,
                    value: v,
                });
            }
        }
        values.sort_by(f64::total_cmp);
        Ok(Self::from_sorted(values, kind))
    }

    fn from_sorted(values: Vec<f64>, kind: Support) -> Self {
        let mut unique: Vec<f64> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for &v in &values {
            match unique.last() {
                Some(&u) if u == v => *counts.last_mut().unwrap() += 1,
                _ => {
                    unique.push(v);
                    counts.push(1);
                }
            }
        }
        let k = unique.len();
        let mut suffix_n = vec![0; k];
        let mut suffix_log = vec![0.0; k];
        let (mut n, mut s) = (0usize, 0.0f64);
        for i in (0..k).rev() {
            n += counts[i];
            s += counts[i] as f64 * unique[i].ln();
            suffix_n[i] = n;
            suffix_log[i] = s;
        }
        Self {
            values,
            kind,
            unique,
            counts,
            suffix_n,
            suffix_log,
        }
    }

    pub fn kind(&self) -> Support {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sorted ascending.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unique_values(&self) -> &[f64] {
        &self.unique
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Number of observations strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        self.values.partition_point(|&v| v < x)
    }

    /// Observations strictly below `x`.
    pub fn below(&self, x: f64) -> &[f64] {
        &self.values[..self.count_below(x)]
    }

    /// The observations at or above `xmin`.
    pub fn tail(&self, xmin: f64) -> Tail<'_> {
        let start = self.count_below(xmin);
        let ustart = self.unique.partition_point(|&u| u < xmin);
        let sum_log = self.suffix_log.get(ustart).copied().unwrap_or(0.0);
        debug_assert_eq!(
            self.suffix_n.get(ustart).copied().unwrap_or(0),
            self.values.len() - start
        );
        Tail {
            xmin,
            values: &self.values[start..],
            unique: &self.unique[ustart..],
            counts: &self.counts[ustart..],
            sum_log,
        }
    }
}

/// A borrowed view of the observations `x ≥ xmin`.
#[derive(Debug, Clone, Copy)]
pub struct Tail<'a> {
    xmin: f64,
    values: &'a [f64],
    unique: &'a [f64],
    counts: &'a [usize],
    sum_log: f64,
}

impl<'a> Tail<'a> {
    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &'a [f64] {
        self.values
    }

    pub fn unique(&self) -> &'a [f64] {
        self.unique
    }

    pub fn counts(&self) -> &'a [usize] {
        self.counts
    }

    /// Σ ln x over the tail.
    pub fn sum_log(&self) -> f64 {
        self.sum_log
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_and_tabulates() {
        let s = Sample::new(vec![5.0, 1.0, 2.0, 5.0, 1.0], Support::Discrete).unwrap();
        assert_eq!(s.values(), &[1.0, 1.0, 2.0, 5.0, 5.0]);
        assert_eq!(s.unique_values(), &[1.0, 2.0, 5.0]);
        assert_eq!(s.counts(), &[2, 1, 2]);
        assert_eq!((s.min(), s.max()), (1.0, 5.0));
    }

    #[test]
    fn tail_summaries() {
        let s = Sample::new(vec![1.0, 2.0, 3.0, 3.0, 10.0], Support::Discrete).unwrap();
        let t = s.tail(3.0);
        assert_eq!(t.len(), 3);
        assert_eq!(t.unique(), &[3.0, 10.0]);
        assert_eq!(t.counts(), &[2, 1]);
        assert!((t.sum_log() - (2.0 * 3f64.ln() + 10f64.ln())).abs() < 1e-14);
        // thresholds between data points
        assert_eq!(s.tail(2.5).len(), 3);
        assert!(s.tail(11.0).is_empty());
        assert_eq!(s.tail(11.0).sum_log(), 0.0);
        assert_eq!(s.count_below(3.0), 2);
    }

    #[test]
    fn rejects_invalid_values() {
        assert!(Sample::new(vec![], Support::Continuous).is_err());
        assert!(matches!(
            Sample::new(vec![1.0, -1.0], Support::Continuous),
            Err(Error::Domain(_))
        ));
        assert!(Sample::new(vec![0.0], Support::Continuous).is_err());
        assert!(Sample::new(vec![f64::NAN], Support::Continuous).is_err());
        assert!(matches!(
            Sample::new(vec![1.0, 2.5], Support::Discrete),
            Err(Error::KindMismatch { line: 2, .. })
        ));
        assert!(Sample::new(vec![1.0, 2.5], Support::Continuous).is_ok());
    }
}
