//! Distribution families truncated to a lower threshold `xmin`.
//!
//! Seven families are available, four discrete and three continuous:
//!
//! | tag        | family                 | parameters |
//! |------------|------------------------|------------|
//! | `displ`    | discrete power law     | α          |
//! | `dislnorm` | discrete log-normal    | μ, σ       |
//! | `disexp`   | discrete exponential   | λ          |
//! | `dispois`  | Poisson                | λ          |
//! | `conpl`    | continuous power law   | α          |
//! | `conlnorm` | continuous log-normal  | μ, σ       |
//! | `conexp`   | continuous exponential | λ          |
//!
//! Every family is conditioned on `x ≥ xmin`. The discrete log-normal and
//! discrete exponential put the continuous mass of `[x − ½, x + ½)` on the
//! integer `x`, renormalized over `x ≥ xmin`.

pub mod normal;
mod sampling;
mod zeta;

pub use sampling::DiscretePowerLawSampler;
pub use zeta::hurwitz_zeta;
pub(crate) use zeta::{zeta_shifted_sorted, zeta_unchecked};

use crate::error::{Error, Result};
use crate::io::Tail;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{gamma_lr, ln_gamma};
use std::fmt;
use std::str::FromStr;

/// Power-law exponents at or below `1 + ALPHA_GUARD` are rejected.
pub const ALPHA_GUARD: f64 = 1e-8;

/// Whether a family lives on the integers or the positive reals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Support {
    Discrete,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "displ")]
    DiscretePowerLaw,
    #[serde(rename = "dislnorm")]
    DiscreteLogNormal,
    #[serde(rename = "disexp")]
    DiscreteExponential,
    #[serde(rename = "dispois")]
    Poisson,
    #[serde(rename = "conpl")]
    ContinuousPowerLaw,
    #[serde(rename = "conlnorm")]
    ContinuousLogNormal,
    #[serde(rename = "conexp")]
    ContinuousExponential,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::DiscretePowerLaw,
        Family::DiscreteLogNormal,
        Family::DiscreteExponential,
        Family::Poisson,
        Family::ContinuousPowerLaw,
        Family::ContinuousLogNormal,
        Family::ContinuousExponential,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Family::DiscretePowerLaw => "displ",
            Family::DiscreteLogNormal => "dislnorm",
            Family::DiscreteExponential => "disexp",
            Family::Poisson => "dispois",
            Family::ContinuousPowerLaw => "conpl",
            Family::ContinuousLogNormal => "conlnorm",
            Family::ContinuousExponential => "conexp",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            Family::DiscreteLogNormal | Family::ContinuousLogNormal => 2,
            _ => 1,
        }
    }

    pub fn support(self) -> Support {
        match self {
            Family::DiscretePowerLaw
            | Family::DiscreteLogNormal
            | Family::DiscreteExponential
            | Family::Poisson => Support::Discrete,
            _ => Support::Continuous,
        }
    }

    pub fn is_power_law(self) -> bool {
        matches!(self, Family::DiscretePowerLaw | Family::ContinuousPowerLaw)
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            Family::DiscretePowerLaw | Family::ContinuousPowerLaw => &["alpha"],
            Family::DiscreteLogNormal | Family::ContinuousLogNormal => &["meanlog", "sdlog"],
            Family::DiscreteExponential | Family::ContinuousExponential | Family::Poisson => {
                &["rate"]
            }
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.tag() == s)
            .ok_or_else(|| Error::Domain(format!("unknown family `{s}`")))
    }
}

/// Outcome of a moment computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", content = "value", rename_all = "lowercase")]
pub enum Moment {
    Finite(f64),
    Divergent,
}

/// A family with a threshold and (optionally) parameters.
///
/// Parameters are validated when set and the log normalizing mass of the
/// truncated family is recomputed eagerly, so read operations never repeat
/// that work. A model without parameters can still carry an `xmin` and act
/// as a template for fitting.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    family: Family,
    xmin: f64,
    params: Option<Vec<f64>>,
    /// ln of the truncation mass: ln ζ(α, xmin) for `displ`, ln P(X ≥ xmin)
    /// under the untruncated law for the log-normal and Poisson families,
    /// zero for the closed forms.
    log_norm: f64,
}

impl Model {
    pub fn new(family: Family, xmin: f64) -> Result<Self> {
        check_xmin(family, xmin)?;
        Ok(Self {
            family,
            xmin,
            params: None,
            log_norm: 0.0,
        })
    }

    pub fn with_params(family: Family, xmin: f64, params: &[f64]) -> Result<Self> {
        let mut m = Self::new(family, xmin)?;
        m.set_params(params)?;
        Ok(m)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn xmin(&self) -> f64 {
        self.xmin
    }

    pub fn params(&self) -> Option<&[f64]> {
        self.params.as_deref()
    }

    pub fn is_parameterized(&self) -> bool {
        self.params.is_some()
    }

    /// The cached log normalizing mass.
    pub fn log_norm(&self) -> f64 {
        self.log_norm
    }

    pub fn set_xmin(&mut self, xmin: f64) -> Result<()> {
        check_xmin(self.family, xmin)?;
        if let Some(p) = &self.params {
            self.log_norm = compute_log_norm(self.family, xmin, p)?;
        }
        self.xmin = xmin;
        Ok(())
    }

    pub fn set_params(&mut self, params: &[f64]) -> Result<()> {
        check_params(self.family, params)?;
        self.log_norm = compute_log_norm(self.family, self.xmin, params)?;
        self.params = Some(params.to_vec());
        Ok(())
    }

    /// Drops the parameters, keeping family and threshold.
    pub fn clear_params(&mut self) {
        self.params = None;
        self.log_norm = 0.0;
    }

    fn p(&self) -> Result<&[f64]> {
        self.params.as_deref().ok_or(Error::NotParameterized)
    }

    fn check_point(&self, x: f64) -> Result<()> {
        if x < self.xmin || x.is_nan() {
            return Err(Error::Domain(format!(
                "x = {x} lies below xmin = {}",
                self.xmin
            )));
        }
        Ok(())
    }

    /// Density (continuous) or mass (discrete) at each point. Points below
    /// `xmin` are an error.
    pub fn pdf(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.log_pdf(xs)
            .map(|v| v.into_iter().map(f64::exp).collect())
    }

    /// Like [`Model::pdf`] but maps points below `xmin` to zero.
    pub fn pdf_or_zero(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.p()?;
        Ok(xs
            .iter()
            .map(|&x| {
                if x < self.xmin {
                    0.0
                } else {
                    self.log_pdf_one(x).exp()
                }
            })
            .collect())
    }

    pub fn log_pdf(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.p()?;
        xs.iter()
            .map(|&x| {
                self.check_point(x)?;
                Ok(self.log_pdf_one(x))
            })
            .collect()
    }

    /// P(X ≤ x).
    pub fn cdf(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.p()?;
        xs.iter()
            .map(|&x| {
                self.check_point(x)?;
                Ok(self.cdf_one(x))
            })
            .collect()
    }

    /// P(X ≥ x). For the discrete families this includes the mass at `x`, so
    /// `survival(xmin) = 1`; for continuous families it equals `1 − cdf`.
    pub fn survival(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.p()?;
        xs.iter()
            .map(|&x| {
                self.check_point(x)?;
                Ok(self.sf_one(x))
            })
            .collect()
    }

    /// Σ ln pdf over the tail. Every observation must be at or above `xmin`.
    pub fn log_likelihood(&self, tail: &Tail<'_>) -> Result<f64> {
        self.p()?;
        if let Some(&first) = tail.unique().first() {
            self.check_point(first)?;
        }
        Ok(self.log_likelihood_unchecked(tail))
    }

    /// Σ ln pdf over raw observations.
    pub fn log_likelihood_values(&self, xs: &[f64]) -> Result<f64> {
        Ok(self.log_pdf(xs)?.into_iter().sum())
    }

    pub(crate) fn log_likelihood_unchecked(&self, tail: &Tail<'_>) -> f64 {
        let params = self.params.as_deref().expect("parameterized model");
        match self.family {
            Family::DiscretePowerLaw => {
                -(tail.len() as f64) * self.log_norm - params[0] * tail.sum_log()
            }
            Family::ContinuousPowerLaw => {
                let a = params[0];
                let n = tail.len() as f64;
                n * ((a - 1.0).ln() - self.xmin.ln()) - a * (tail.sum_log() - n * self.xmin.ln())
            }
            _ => tail
                .unique()
                .iter()
                .zip(tail.counts())
                .map(|(&x, &c)| c as f64 * self.log_pdf_one(x))
                .sum(),
        }
    }

    /// E[X^m] for the continuous power law: (α−1)/(α−1−m)·xmin^m when
    /// α > m + 1, divergent otherwise.
    pub fn moment(&self, m: u32) -> Result<Moment> {
        if self.family != Family::ContinuousPowerLaw {
            return Err(Error::Unsupported(format!(
                "closed-form moments of {}",
                self.family
            )));
        }
        if m == 0 {
            return Err(Error::Domain("moment order must be positive".into()));
        }
        let a = self.p()?[0];
        let m = f64::from(m);
        if a <= m + 1.0 {
            return Ok(Moment::Divergent);
        }
        Ok(Moment::Finite(
            (a - 1.0) / (a - 1.0 - m) * self.xmin.powf(m),
        ))
    }

    pub(crate) fn log_pdf_one(&self, x: f64) -> f64 {
        let p = self.params.as_deref().expect("parameterized model");
        let xmin = self.xmin;
        match self.family {
            Family::DiscretePowerLaw => -p[0] * x.ln() - self.log_norm,
            Family::ContinuousPowerLaw => {
                let a = p[0];
                (a - 1.0).ln() - xmin.ln() - a * (x / xmin).ln()
            }
            Family::DiscreteLogNormal => {
                let (mu, sd) = (p[0], p[1]);
                let lo = ((x - 0.5).ln() - mu) / sd;
                let hi = ((x + 0.5).ln() - mu) / sd;
                normal::log_sf_diff(lo, hi) - self.log_norm
            }
            Family::ContinuousLogNormal => {
                let (mu, sd) = (p[0], p[1]);
                let z = (x.ln() - mu) / sd;
                normal::log_pdf(z) - (x * sd).ln() - self.log_norm
            }
            Family::DiscreteExponential => {
                let rate = p[0];
                (-(-rate).exp_m1()).ln() - rate * (x - xmin)
            }
            Family::ContinuousExponential => {
                let rate = p[0];
                rate.ln() - rate * (x - xmin)
            }
            Family::Poisson => {
                let rate = p[0];
                x * rate.ln() - rate - ln_gamma(x + 1.0) - self.log_norm
            }
        }
    }

    pub(crate) fn sf_one(&self, x: f64) -> f64 {
        let p = self.params.as_deref().expect("parameterized model");
        let xmin = self.xmin;
        match self.family {
            Family::DiscretePowerLaw => (zeta_unchecked(p[0], x.ceil()).ln() - self.log_norm).exp(),
            Family::ContinuousPowerLaw => (x / xmin).powf(1.0 - p[0]),
            Family::DiscreteLogNormal => {
                let z = ((x.ceil() - 0.5).ln() - p[0]) / p[1];
                (normal::log_sf(z) - self.log_norm).exp()
            }
            Family::ContinuousLogNormal => {
                let z = (x.ln() - p[0]) / p[1];
                (normal::log_sf(z) - self.log_norm).exp()
            }
            Family::DiscreteExponential => (-p[0] * (x.ceil() - xmin)).exp(),
            Family::ContinuousExponential => (-p[0] * (x - xmin)).exp(),
            Family::Poisson => (log_poisson_sf(x.ceil(), p[0]) - self.log_norm).exp(),
        }
    }

    pub(crate) fn cdf_one(&self, x: f64) -> f64 {
        let p = self.params.as_deref().expect("parameterized model");
        let xmin = self.xmin;
        match self.family {
            Family::DiscretePowerLaw => {
                let above = zeta_unchecked(p[0], x.floor() + 1.0).ln() - self.log_norm;
                -above.exp_m1()
            }
            Family::DiscreteLogNormal => {
                let z = ((x.floor() + 0.5).ln() - p[0]) / p[1];
                -(normal::log_sf(z) - self.log_norm).exp_m1()
            }
            Family::DiscreteExponential => -(-p[0] * (x.floor() + 1.0 - xmin)).exp_m1(),
            Family::Poisson => -(log_poisson_sf(x.floor() + 1.0, p[0]) - self.log_norm).exp_m1(),
            Family::ContinuousPowerLaw => -((1.0 - p[0]) * (x / xmin).ln()).exp_m1(),
            Family::ContinuousLogNormal => {
                let z = (x.ln() - p[0]) / p[1];
                -(normal::log_sf(z) - self.log_norm).exp_m1()
            }
            Family::ContinuousExponential => -(-p[0] * (x - xmin)).exp_m1(),
        }
    }

    /// cdf at ascending points already known to be ≥ xmin. The discrete
    /// power law shares zeta evaluations between neighbouring points.
    pub(crate) fn cdf_sorted_unchecked(&self, xs: &[f64]) -> Vec<f64> {
        match self.family {
            Family::DiscretePowerLaw => {
                let a = self.params.as_deref().expect("parameterized model")[0];
                let floors: Vec<f64> = xs.iter().map(|x| x.floor()).collect();
                zeta_shifted_sorted(a, &floors)
                    .into_iter()
                    .map(|z| -(z.ln() - self.log_norm).exp_m1())
                    .collect()
            }
            _ => xs.iter().map(|&x| self.cdf_one(x)).collect(),
        }
    }
}

fn check_xmin(family: Family, xmin: f64) -> Result<()> {
    if !xmin.is_finite() {
        return Err(Error::InvalidParameter {
            name: "xmin",
            value: xmin,
            reason: "must be finite",
        });
    }
    match family.support() {
        Support::Discrete => {
            if xmin.fract() != 0.0 {
                return Err(Error::InvalidParameter {
                    name: "xmin",
                    value: xmin,
                    reason: "discrete families need an integer threshold",
                });
            }
            let lowest = if family == Family::Poisson { 0.0 } else { 1.0 };
            if xmin < lowest {
                return Err(Error::InvalidParameter {
                    name: "xmin",
                    value: xmin,
                    reason: "threshold below the support",
                });
            }
        }
        Support::Continuous => {
            if xmin <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "xmin",
                    value: xmin,
                    reason: "must be positive",
                });
            }
        }
    }
    Ok(())
}

fn check_params(family: Family, params: &[f64]) -> Result<()> {
    if params.len() != family.param_count() {
        return Err(Error::Domain(format!(
            "{family} takes {} parameter(s), got {}",
            family.param_count(),
            params.len()
        )));
    }
    let first = params[0];
    match family {
        Family::DiscretePowerLaw | Family::ContinuousPowerLaw => {
            if !first.is_finite() || first <= 1.0 + ALPHA_GUARD {
                return Err(Error::InvalidParameter {
                    name: "alpha",
                    value: first,
                    reason: "power-law exponent must exceed 1",
                });
            }
        }
        Family::DiscreteLogNormal | Family::ContinuousLogNormal => {
            if !first.is_finite() {
                return Err(Error::InvalidParameter {
                    name: "meanlog",
                    value: first,
                    reason: "must be finite",
                });
            }
            if !params[1].is_finite() || params[1] <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "sdlog",
                    value: params[1],
                    reason: "must be positive",
                });
            }
        }
        Family::DiscreteExponential | Family::ContinuousExponential | Family::Poisson => {
            if !first.is_finite() || first <= 0.0 {
                return Err(Error::InvalidParameter {
                    name: "rate",
                    value: first,
                    reason: "must be positive",
                });
            }
        }
    }
    Ok(())
}

fn compute_log_norm(family: Family, xmin: f64, p: &[f64]) -> Result<f64> {
    let v = match family {
        Family::DiscretePowerLaw => zeta_unchecked(p[0], xmin).ln(),
        Family::DiscreteLogNormal => normal::log_sf(((xmin - 0.5).ln() - p[0]) / p[1]),
        Family::ContinuousLogNormal => normal::log_sf((xmin.ln() - p[0]) / p[1]),
        Family::Poisson => log_poisson_sf(xmin, p[0]),
        _ => 0.0,
    };
    if !v.is_finite() {
        return Err(Error::Domain(format!(
            "{family} has no mass above xmin = {xmin} for parameters {p:?}"
        )));
    }
    Ok(v)
}

/// ln P(X ≥ k) for X ~ Poisson(rate), integer k ≥ 0.
pub(crate) fn log_poisson_sf(k: f64, rate: f64) -> f64 {
    if k <= 0.0 {
        return 0.0;
    }
    if k > rate {
        // pmf(k) · Σ_j rate^j k!/(k+j)!, summed until the terms vanish.
        let log_pmf_k = k * rate.ln() - rate - ln_gamma(k + 1.0);
        let mut term = 1.0;
        let mut total = 1.0;
        let mut j = 1.0;
        loop {
            term *= rate / (k + j);
            total += term;
            if term < 1e-17 * total {
                break;
            }
            j += 1.0;
        }
        log_pmf_k + total.ln()
    } else {
        gamma_lr(k, rate).ln()
    }
}
