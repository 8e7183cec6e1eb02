//! Bootstrap uncertainty for (xmin, parameters) and the bootstrap
//! goodness-of-fit test.
//!
//! Replicate `i` draws all of its randomness from substream `i` of the root
//! seed, so results do not depend on how replicates are spread over workers.

mod diagnostics;

pub use diagnostics::sequential_diagnostics;

use crate::dists::{Family, Model, Support};
use crate::error::{Error, Result};
use crate::fit::{estimate_xmin, ScanOptions, XminEstimate};
use crate::io::{NamedParams, Sample, Table};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;

/// Attempts per replicate before it is recorded as failed.
pub const MAX_ATTEMPTS: u32 = 5;
/// Retry fraction above which a warning is attached to the result.
pub const RETRY_WARNING_RATE: f64 = 0.1;

/// Generator for attempt `attempt` of replicate `index`.
pub fn substream(seed: u64, index: usize, attempt: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((attempt as u64) << 48) | index as u64);
    rng
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub scan: ScanOptions,
    pub workers: usize,
    pub seed: u64,
}

impl BootstrapConfig {
    pub fn new(replicates: usize, seed: u64) -> Self {
        Self {
            replicates,
            scan: ScanOptions::default(),
            workers: 1,
            seed,
        }
    }
}

/// How the part of a synthetic data set below xmin is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyMode {
    /// Resample the observed values below xmin with replacement.
    Empirical,
    /// Uniform on {1, …, xmin − 1}, or on [1, xmin) for continuous data.
    Uniform,
}

impl std::str::FromStr for BodyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "empirical" => Ok(Self::Empirical),
            "uniform" => Ok(Self::Uniform),
            other => Err(Error::Unsupported(format!("body mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Replicate {
    pub index: usize,
    /// Zero-based attempt that succeeded.
    pub attempt: u32,
    pub xmin: f64,
    pub params: Vec<f64>,
    pub ks: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantitySummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BootstrapResult {
    pub family: Family,
    pub seed: u64,
    pub replicates_requested: usize,
    /// Threshold, parameters and KS distance fitted to the original data.
    pub xmin: f64,
    pub params: NamedParams,
    pub gof: f64,
    pub summary: Vec<QuantitySummary>,
    pub retries: usize,
    /// Indices of replicates that failed every attempt.
    pub failed: Vec<usize>,
    pub warnings: Vec<String>,
    pub replicates: Vec<Replicate>,
    /// Mean wall-clock seconds per replicate. Left out of serialized output
    /// so reports stay reproducible.
    #[serde(skip)]
    pub sim_time_mean_seconds: f64,
}

impl BootstrapResult {
    /// One row per successful replicate: index, xmin, parameters, ks.
    pub fn replicate_table(&self) -> Table {
        let mut cols = vec!["index".to_string(), "xmin".to_string()];
        cols.extend(self.family.param_names().iter().map(|s| s.to_string()));
        cols.push("ks".into());
        let mut t = Table::new(cols);
        for r in &self.replicates {
            let mut row = vec![r.index as f64, r.xmin];
            row.extend(&r.params);
            row.push(r.ks);
            t.push(row);
        }
        t
    }

    /// Standard deviation of a summarized quantity (`xmin` or a parameter
    /// name).
    pub fn sd(&self, name: &str) -> Option<f64> {
        self.summary.iter().find(|q| q.name == name).map(|q| q.sd)
    }

    pub fn sequential_diagnostics(&self, trim: f64) -> Result<Table> {
        sequential_diagnostics(&self.replicates, self.family, trim, None)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GofResult {
    #[serde(flatten)]
    pub bootstrap: BootstrapResult,
    pub body_mode: BodyMode,
    /// Observations below the fitted xmin.
    pub n1: usize,
    /// Observations at or above the fitted xmin.
    pub n2: usize,
    /// Fraction of successful replicates with KS_sim ≥ KS_d.
    pub p_value: f64,
    /// Replicates with KS_sim ≥ KS_d.
    pub exceed_count: usize,
    /// Replicates with KS_d > KS_sim.
    pub raw_counter: usize,
}

impl GofResult {
    pub fn sequential_diagnostics(&self, trim: f64) -> Result<Table> {
        sequential_diagnostics(
            &self.bootstrap.replicates,
            self.bootstrap.family,
            trim,
            Some(self.bootstrap.gof),
        )
    }
}

/// The resample drawn for attempt `attempt` of replicate `index`.
pub fn bootstrap_sample(data: &Sample, seed: u64, index: usize, attempt: u32) -> Sample {
    let mut rng = substream(seed, index, attempt);
    let values = data.values();
    let draws = (0..values.len())
        .map(|_| values[rng.random_range(0..values.len())])
        .collect();
    Sample::new(draws, data.kind()).expect("resampled values are valid")
}

/// Synthetic data set for attempt `attempt` of goodness-of-fit replicate
/// `index`: `n1` body values below `fitted.xmin()` followed by `n2` draws
/// from `fitted`.
pub fn gof_sample(
    data: &Sample,
    fitted: &Model,
    mode: BodyMode,
    seed: u64,
    index: usize,
    attempt: u32,
) -> Result<Sample> {
    let mut rng = substream(seed, index, attempt);
    let xmin = fitted.xmin();
    let body = data.below(xmin);
    let n1 = body.len();
    let n2 = data.len() - n1;
    let mut values = Vec::with_capacity(data.len());
    match mode {
        BodyMode::Empirical => {
            values.extend((0..n1).map(|_| body[rng.random_range(0..n1)]));
        }
        BodyMode::Uniform => match data.kind() {
            Support::Discrete => {
                let top = xmin as u64 - 1;
                values.extend((0..n1).map(|_| rng.random_range(1..=top) as f64));
            }
            Support::Continuous => {
                let lo = if xmin > 1.0 { 1.0 } else { data.min() };
                values.extend((0..n1).map(|_| {
                    let x = lo + (xmin - lo) * rng.random::<f64>();
                    x.clamp(lo, xmin.next_down())
                }));
            }
        },
    }
    values.extend(fitted.rand(n2, &mut rng)?);
    Sample::new(values, data.kind())
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))
}

struct Outcome {
    replicate: Option<Replicate>,
    retries: usize,
    seconds: f64,
}

/// Runs `job(index, attempt)` for every replicate with up to
/// [`MAX_ATTEMPTS`] attempts each, preserving index order.
fn run_replicates<F>(cfg: &BootstrapConfig, job: F) -> Result<Vec<Outcome>>
where
    F: Fn(usize, u32) -> Result<XminEstimate> + Sync,
{
    if cfg.replicates == 0 {
        return Err(Error::Domain(
            "the number of replicates must be at least 1".into(),
        ));
    }
    let one = |index: usize| {
        let start = Instant::now();
        let mut replicate = None;
        let mut attempts = 0;
        for attempt in 0..MAX_ATTEMPTS {
            attempts += 1;
            match job(index, attempt) {
                Ok(est) => {
                    replicate = Some(Replicate {
                        index,
                        attempt,
                        xmin: est.xmin,
                        params: est.params,
                        ks: est.ks,
                    });
                    break;
                }
                Err(e) => log::debug!("replicate {index} attempt {attempt}: {e}"),
            }
        }
        Outcome {
            retries: attempts - 1,
            replicate,
            seconds: start.elapsed().as_secs_f64(),
        }
    };
    Ok(pool(cfg.workers)?.install(|| (0..cfg.replicates).into_par_iter().map(one).collect()))
}

fn assemble(
    template: &Model,
    cfg: &BootstrapConfig,
    original: &XminEstimate,
    outcomes: Vec<Outcome>,
) -> Result<BootstrapResult> {
    let family = template.family();
    let mut replicates = Vec::with_capacity(outcomes.len());
    let mut failed = Vec::new();
    let mut retries = 0;
    let mut seconds = 0.0;
    for (i, o) in outcomes.into_iter().enumerate() {
        retries += o.retries;
        seconds += o.seconds;
        match o.replicate {
            Some(r) => replicates.push(r),
            None => failed.push(i),
        }
    }
    if replicates.is_empty() {
        return Err(Error::DegenerateData(format!(
            "all {} replicates failed after {MAX_ATTEMPTS} attempts",
            cfg.replicates
        )));
    }
    let mut warnings = Vec::new();
    let rate = retries as f64 / cfg.replicates as f64;
    if rate > RETRY_WARNING_RATE {
        warnings.push(format!(
            "{retries} retries over {} replicates ({:.1}%)",
            cfg.replicates,
            100.0 * rate
        ));
    }
    if !failed.is_empty() {
        warnings.push(format!(
            "{} replicates failed and were excluded",
            failed.len()
        ));
    }
    Ok(BootstrapResult {
        family,
        seed: cfg.seed,
        replicates_requested: cfg.replicates,
        xmin: original.xmin,
        params: NamedParams {
            family,
            values: original.params.clone(),
        },
        gof: original.ks,
        summary: summarize(family, &replicates),
        retries,
        failed,
        warnings,
        replicates,
        sim_time_mean_seconds: seconds / cfg.replicates as f64,
    })
}

fn summarize(family: Family, reps: &[Replicate]) -> Vec<QuantitySummary> {
    let mut names = vec!["xmin"];
    names.extend(family.param_names());
    names
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let column: Vec<f64> = reps
                .iter()
                .map(|r| if j == 0 { r.xmin } else { r.params[j - 1] })
                .collect();
            let (mean, sd) = mean_sd(&column);
            QuantitySummary {
                name: name.to_string(),
                mean,
                sd,
            }
        })
        .collect()
}

/// Mean and sample standard deviation (n − 1 denominator; 0 for one value).
pub(crate) fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// Nonparametric bootstrap of the threshold and parameter estimates.
///
/// Each replicate resamples the data with replacement and reruns
/// [`estimate_xmin`] with the configured restrictions. Replicates whose
/// resample cannot be fitted are redrawn from a fresh substream.
pub fn bootstrap(
    template: &Model,
    data: &Sample,
    cfg: &BootstrapConfig,
) -> Result<BootstrapResult> {
    let original = estimate_xmin(template, data, &cfg.scan)?;
    let outcomes = run_replicates(cfg, |index, attempt| {
        let resample = bootstrap_sample(data, cfg.seed, index, attempt);
        estimate_xmin(template, &resample, &cfg.scan)
    })?;
    assemble(template, cfg, &original, outcomes)
}

/// Bootstrap goodness-of-fit test.
///
/// Fits the model, then for each replicate builds a synthetic data set with
/// the same number of observations below (`n1`) and above (`n2`) the fitted
/// xmin, refits it, and compares its KS distance with the original one. The
/// p-value is the fraction of replicates at least as far from their fit as
/// the data are from theirs; large values mean the model cannot be ruled out.
pub fn bootstrap_p(
    template: &Model,
    data: &Sample,
    cfg: &BootstrapConfig,
    mode: BodyMode,
) -> Result<GofResult> {
    let original = estimate_xmin(template, data, &cfg.scan)?;
    let fitted = original.model(template.family())?;
    let n1 = data.count_below(original.xmin);
    let n2 = data.len() - n1;
    if mode == BodyMode::Uniform
        && n1 > 0
        && data.kind() == Support::Discrete
        && original.xmin < 2.0
    {
        return Err(Error::Domain("uniform body needs xmin ≥ 2".into()));
    }
    let outcomes = run_replicates(cfg, |index, attempt| {
        let synthetic = gof_sample(data, &fitted, mode, cfg.seed, index, attempt)?;
        estimate_xmin(template, &synthetic, &cfg.scan)
    })?;
    let mut result = assemble(template, cfg, &original, outcomes)?;

    if template.family().is_power_law() && original.params[0] <= 2.0 {
        let msg = format!(
            "fitted exponent {:.4} ≤ 2: synthetic tails contain extremely large values",
            original.params[0]
        );
        result.warnings.push(msg);
    }

    let ks_d = original.ks;
    let exceed_count = result.replicates.iter().filter(|r| r.ks >= ks_d).count();
    let raw_counter = result.replicates.iter().filter(|r| ks_d > r.ks).count();
    Ok(GofResult {
        p_value: exceed_count as f64 / result.replicates.len() as f64,
        bootstrap: result,
        body_mode: mode,
        n1,
        n2,
        exceed_count,
        raw_counter,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fit::{estimate_pars, ks_statistic};

    fn small_pl(seed: u64, n: usize) -> Sample {
        let m = Model::with_params(Family::DiscretePowerLaw, 1.0, &[2.5]).unwrap();
        let xs = m.rand(n, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        Sample::new(xs, Support::Discrete).unwrap()
    }

    fn template() -> Model {
        Model::new(Family::DiscretePowerLaw, 1.0).unwrap()
    }

    #[test]
    fn substreams_are_distinct_and_stable() {
        let a: u64 = substream(1, 0, 0).random();
        let b: u64 = substream(1, 1, 0).random();
        let c: u64 = substream(1, 0, 1).random();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, substream(1, 0, 0).random::<u64>());
    }

    #[test]
    fn single_replicate_composes_with_estimate_pars() {
        let data = small_pl(3, 400);
        let mut cfg = BootstrapConfig::new(1, 42);
        cfg.scan.xmins = Some(vec![2.0]);
        let res = bootstrap(&template(), &data, &cfg).unwrap();
        assert_eq!(res.replicates.len(), 1);
        let r = &res.replicates[0];
        let resample = bootstrap_sample(&data, 42, 0, r.attempt);
        let m = Model::new(Family::DiscretePowerLaw, 2.0).unwrap();
        let direct = estimate_pars(&m, &resample, None).unwrap();
        assert_eq!(r.params, direct.params);
        let fitted = Model::with_params(Family::DiscretePowerLaw, r.xmin, &r.params).unwrap();
        assert_eq!(ks_statistic(&fitted, &resample).unwrap(), r.ks);
    }

    #[test]
    fn results_do_not_depend_on_workers() {
        let data = small_pl(5, 300);
        let mut cfg = BootstrapConfig::new(12, 9);
        let one = bootstrap(&template(), &data, &cfg).unwrap();
        cfg.workers = 3;
        let three = bootstrap(&template(), &data, &cfg).unwrap();
        assert_eq!(one.replicates, three.replicates);
        assert_eq!(one.summary, three.summary);
    }

    #[test]
    fn identical_values_are_degenerate() {
        let data = Sample::new(vec![4.0; 20], Support::Discrete).unwrap();
        let cfg = BootstrapConfig::new(3, 1);
        assert!(matches!(
            bootstrap(&template(), &data, &cfg),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn gof_p_value_recounts() {
        let data = small_pl(8, 300);
        let cfg = BootstrapConfig::new(20, 4);
        let g = bootstrap_p(&template(), &data, &cfg, BodyMode::Empirical).unwrap();
        assert_eq!(g.n1 + g.n2, data.len());
        let ks_d = g.bootstrap.gof;
        let count = g
            .bootstrap
            .replicates
            .iter()
            .filter(|r| r.ks >= ks_d)
            .count();
        assert_eq!(
            g.p_value,
            count as f64 / g.bootstrap.replicates.len() as f64
        );
        assert_eq!(g.exceed_count + g.raw_counter, g.bootstrap.replicates.len());
        assert!((0.0..=1.0).contains(&g.p_value));
    }

    #[test]
    fn synthetic_sets_respect_body_and_tail_sizes() {
        let data = small_pl(2, 500);
        let fitted = Model::with_params(Family::DiscretePowerLaw, 3.0, &[2.4]).unwrap();
        let n1 = data.count_below(3.0);
        for mode in [BodyMode::Empirical, BodyMode::Uniform] {
            let s = gof_sample(&data, &fitted, mode, 11, 0, 0).unwrap();
            assert_eq!(s.len(), data.len());
            assert_eq!(s.count_below(3.0), n1);
            assert!(s.values()[..n1].iter().all(|&x| (1.0..3.0).contains(&x)));
        }
    }

    #[test]
    fn continuous_uniform_body_stays_below_threshold() {
        let m = Model::with_params(Family::ContinuousPowerLaw, 0.5, &[2.5]).unwrap();
        let xs = m.rand(300, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let data = Sample::new(xs, Support::Continuous).unwrap();
        let fitted = Model::with_params(Family::ContinuousPowerLaw, 2.0, &[2.5]).unwrap();
        let n1 = data.count_below(2.0);
        let s = gof_sample(&data, &fitted, BodyMode::Uniform, 3, 0, 0).unwrap();
        assert_eq!(s.count_below(2.0), n1);
        assert!(s.values()[..n1].iter().all(|&x| (1.0..2.0).contains(&x)));
    }

    #[test]
    fn mean_sd_conventions() {
        assert_eq!(mean_sd(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_sd(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
