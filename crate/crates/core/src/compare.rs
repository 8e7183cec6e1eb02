//! Vuong's likelihood-ratio test for two non-nested models fitted to the
//! same tail.
//!
//! No correction is applied for differing parameter counts, so comparisons
//! between one- and two-parameter families slightly favour the latter.

use crate::dists::{normal, Family, Model};
use crate::error::{Error, Result};
use crate::io::Sample;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonResult {
    pub family_a: Family,
    pub family_b: Family,
    pub xmin: f64,
    /// Σ (log p_a(xᵢ) − log p_b(xᵢ)); positive favours `a`.
    pub loglik_ratio: f64,
    /// R / (s·√n) with s the sample standard deviation of the differences.
    pub normalized_statistic: f64,
    /// 2Φ(−|z|): probability that |z| this large arises when neither model
    /// is closer to the truth.
    pub p_two_sided: f64,
    /// 1 − Φ(z): small when `a` is significantly better than `b`.
    pub p_one_sided: f64,
    pub n: usize,
}

/// Compares two parameterized models sharing an xmin on the tail of `data`.
pub fn compare_distributions(a: &Model, b: &Model, data: &Sample) -> Result<ComparisonResult> {
    if a.xmin() != b.xmin() {
        return Err(Error::XminMismatch(a.xmin(), b.xmin()));
    }
    if !a.is_parameterized() || !b.is_parameterized() {
        return Err(Error::NotParameterized);
    }
    let tail = data.tail(a.xmin());
    if tail.is_empty() {
        return Err(Error::EmptyTail(a.xmin()));
    }
    let la = a.log_pdf(tail.unique())?;
    let lb = b.log_pdf(tail.unique())?;
    let n = tail.len() as f64;

    let diffs: Vec<(f64, f64)> = la
        .iter()
        .zip(&lb)
        .zip(tail.counts())
        .map(|((x, y), &c)| (x - y, c as f64))
        .collect();
    let r: f64 = diffs.iter().map(|(d, c)| d * c).sum();
    let mean = r / n;
    let ss: f64 = diffs.iter().map(|(d, c)| c * (d - mean).powi(2)).sum();
    let sd = if tail.len() > 1 {
        (ss / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    if !sd.is_finite() || sd <= 0.0 {
        return Err(Error::DegenerateComparison);
    }
    let z = r / (sd * n.sqrt());
    Ok(ComparisonResult {
        family_a: a.family(),
        family_b: b.family(),
        xmin: a.xmin(),
        loglik_ratio: r,
        normalized_statistic: z,
        p_two_sided: 2.0 * normal::cdf(-z.abs()),
        p_one_sided: normal::sf(z),
        n: tail.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::Support;

    fn data() -> Sample {
        Sample::new(
            vec![1.0, 1.0, 2.0, 2.0, 3.0, 4.0, 6.0, 9.0, 14.0, 30.0, 75.0],
            Support::Discrete,
        )
        .unwrap()
    }

    #[test]
    fn swap_negates_statistic() {
        let a = Model::with_params(Family::DiscretePowerLaw, 2.0, &[2.1]).unwrap();
        let b = Model::with_params(Family::DiscreteExponential, 2.0, &[0.1]).unwrap();
        let ab = compare_distributions(&a, &b, &data()).unwrap();
        let ba = compare_distributions(&b, &a, &data()).unwrap();
        assert_eq!(ab.loglik_ratio, -ba.loglik_ratio);
        assert_eq!(ab.normalized_statistic, -ba.normalized_statistic);
        assert!((ab.p_two_sided - ba.p_two_sided).abs() < 1e-12);
        assert!((ab.p_one_sided + ba.p_one_sided - 1.0).abs() < 1e-12);
        assert_eq!(ab.n, 9);
    }

    #[test]
    fn ratio_matches_total_likelihoods() {
        let d = data();
        let a = Model::with_params(Family::DiscretePowerLaw, 1.0, &[1.8]).unwrap();
        let b = Model::with_params(Family::DiscreteLogNormal, 1.0, &[0.5, 1.2]).unwrap();
        let c = compare_distributions(&a, &b, &d).unwrap();
        let tail = d.tail(1.0);
        let expected = a.log_likelihood(&tail).unwrap() - b.log_likelihood(&tail).unwrap();
        assert!((c.loglik_ratio - expected).abs() < 1e-9);
        assert_eq!(c.loglik_ratio.signum(), c.normalized_statistic.signum());
        assert!((c.p_two_sided - 2.0 * normal::cdf(-c.normalized_statistic.abs())).abs() < 1e-12);
    }

    #[test]
    fn errors() {
        let d = data();
        let a = Model::with_params(Family::DiscretePowerLaw, 2.0, &[2.1]).unwrap();
        assert!(matches!(
            compare_distributions(&a, &a.clone(), &d),
            Err(Error::DegenerateComparison)
        ));
        let b = Model::with_params(Family::DiscretePowerLaw, 3.0, &[2.1]).unwrap();
        assert!(matches!(
            compare_distributions(&a, &b, &d),
            Err(Error::XminMismatch(..))
        ));
        let c = Model::new(Family::DiscreteExponential, 2.0).unwrap();
        assert!(matches!(
            compare_distributions(&a, &c, &d),
            Err(Error::NotParameterized)
        ));
    }
}
