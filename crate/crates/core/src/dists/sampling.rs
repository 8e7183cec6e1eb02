//! Random variate generation for the truncated families.
//!
//! Everything is inverse-transform from a single uniform per draw except the
//! Poisson, which rejects from the untruncated law while the tail mass is
//! large enough. The discrete power law is inverted exactly on its survival
//! function.

use super::{normal, zeta_unchecked, Family, Model};
use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// Largest integer that f64 still represents exactly.
const EXACT_INT_LIMIT: f64 = 9_007_199_254_740_992.0;

/// Exact sampler for the discrete power law.
///
/// Holds the survival function S(x) = ζ(α, x)/ζ(α, xmin) tabulated on
/// `xmin..=xmin + len`. A uniform u ∈ (0, 1] maps to the largest x with
/// S(x) ≥ u: inside the table by binary search, beyond it by doubling to
/// bracket and bisecting on freshly evaluated zeta values.
#[derive(Debug, Clone)]
pub struct DiscretePowerLawSampler {
    alpha: f64,
    xmin: f64,
    log_norm: f64,
    table: Vec<f64>,
}

impl DiscretePowerLawSampler {
    pub fn new(alpha: f64, xmin: f64, table_len: usize) -> Result<Self> {
        let model = Model::with_params(Family::DiscretePowerLaw, xmin, &[alpha])?;
        Ok(Self::from_model(&model, table_len))
    }

    fn from_model(model: &Model, table_len: usize) -> Self {
        let alpha = model.params().expect("parameterized model")[0];
        let xmin = model.xmin();
        let log_norm = model.log_norm();
        let mut table = vec![0.0; table_len + 1];
        let top = xmin + table_len as f64;
        table[table_len] = (zeta_unchecked(alpha, top).ln() - log_norm).exp();
        // Fill downward so every step adds a positive mass.
        for i in (0..table_len).rev() {
            let x = xmin + i as f64;
            table[i] = table[i + 1] + (-alpha * x.ln() - log_norm).exp();
        }
        Self {
            alpha,
            xmin,
            log_norm,
            table,
        }
    }

    fn survival(&self, x: f64) -> f64 {
        (zeta_unchecked(self.alpha, x).ln() - self.log_norm).exp()
    }

    /// Maps u ∈ (0, 1] to a draw.
    pub fn invert(&self, u: f64) -> f64 {
        let last = self.table.len() - 1;
        if u > self.table[last] {
            // table is decreasing; count entries with S ≥ u
            let k = self.table.partition_point(|&s| s >= u);
            return self.xmin + (k.max(1) - 1) as f64;
        }
        let mut lo = self.xmin + last as f64;
        let mut hi = lo.max(1.0) * 2.0;
        while self.survival(hi) >= u {
            lo = hi;
            hi *= 2.0;
            if hi > EXACT_INT_LIMIT {
                // Beyond exact integers: fall back to the continuous inverse.
                let tail = u * self.log_norm.exp() * (self.alpha - 1.0);
                return tail.powf(-1.0 / (self.alpha - 1.0)).floor().max(lo);
            }
        }
        while hi - lo > 1.0 {
            let mid = (lo + (hi - lo) / 2.0).floor();
            if self.survival(mid) >= u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.invert(open_unit(rng))
    }
}

/// Uniform on (0, 1].
fn open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    1.0 - rng.random::<f64>()
}

/// Continuous power-law inverse transform: xmin·u^(−1/(α−1)) for u ∈ (0, 1].
pub(crate) fn continuous_pl_inverse(xmin: f64, alpha: f64, u: f64) -> f64 {
    xmin * u.powf(-1.0 / (alpha - 1.0))
}

impl Model {
    /// `n` independent draws from the truncated model.
    pub fn rand<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        let p = self.params().ok_or(Error::NotParameterized)?.to_vec();
        let xmin = self.xmin();
        let out = match self.family() {
            Family::DiscretePowerLaw => {
                let sampler =
                    DiscretePowerLawSampler::from_model(self, (4 * n).clamp(256, 1 << 16));
                (0..n).map(|_| sampler.sample(rng)).collect()
            }
            Family::ContinuousPowerLaw => (0..n)
                .map(|_| continuous_pl_inverse(xmin, p[0], open_unit(rng)))
                .collect(),
            Family::ContinuousLogNormal => (0..n)
                .map(|_| {
                    let z = normal::inv_log_sf(self.log_norm() + open_unit(rng).ln());
                    (p[0] + p[1] * z).exp().max(xmin)
                })
                .collect(),
            Family::DiscreteLogNormal => (0..n)
                .map(|_| {
                    let z = normal::inv_log_sf(self.log_norm() + open_unit(rng).ln());
                    ((p[0] + p[1] * z).exp() + 0.5).floor().max(xmin)
                })
                .collect(),
            Family::ContinuousExponential => {
                (0..n).map(|_| xmin - open_unit(rng).ln() / p[0]).collect()
            }
            Family::DiscreteExponential => (0..n)
                .map(|_| xmin + (-open_unit(rng).ln() / p[0]).floor())
                .collect(),
            Family::Poisson => self.rand_poisson(n, p[0], rng)?,
        };
        Ok(out)
    }

    fn rand_poisson<R: Rng + ?Sized>(&self, n: usize, rate: f64, rng: &mut R) -> Result<Vec<f64>> {
        let xmin = self.xmin();
        if self.log_norm() > 0.25f64.ln() {
            let law = Poisson::new(rate)
                .map_err(|e| Error::Domain(format!("poisson rate {rate}: {e}")))?;
            return Ok((0..n)
                .map(|_| loop {
                    let x: f64 = law.sample(rng);
                    if x >= xmin {
                        break x;
                    }
                })
                .collect());
        }
        // Sequential inversion on the truncated mass function.
        let first = self.log_pdf_one(xmin).exp();
        Ok((0..n)
            .map(|_| {
                let u = open_unit(rng);
                let mut k = xmin;
                let mut pk = first;
                let mut cum = pk;
                while cum < u && pk > 0.0 {
                    pk *= rate / (k + 1.0);
                    k += 1.0;
                    cum += pk;
                }
                k
            })
            .collect())
    }
}
