//! Point estimation: maximum likelihood conditional on `xmin`, the
//! Kolmogorov–Smirnov distance between data and model, and the scan over
//! candidate thresholds that picks the `xmin` minimizing that distance.

pub mod optim;

pub use optim::OptimizerDiag;

use crate::dists::{Family, Model, Support, ALPHA_GUARD};
use crate::error::{Error, Result};
use crate::io::{Sample, Table, Tail};
use optim::{golden_section, nelder_mead, Minimum, NelderMeadOptions};
use serde::Serialize;

/// Upper end of the exponent bracket searched for power laws.
pub const ALPHA_MAX: f64 = 20.0;
const ALPHA_MIN: f64 = 1.0 + 1e-6;
const GOLDEN_TOL: f64 = 1e-10;
/// KS distances closer than this are treated as ties.
const KS_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    Analytic,
    Optimizer,
    GridScan,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParsEstimate {
    pub params: Vec<f64>,
    pub neg_log_likelihood: f64,
    pub method: FitMethod,
    pub optimizer: Option<OptimizerDiag>,
}

/// A set of parameter vectors to evaluate instead of optimizing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParGrid(Vec<Vec<f64>>);

impl ParGrid {
    pub fn new(points: Vec<Vec<f64>>) -> Self {
        Self(points)
    }

    /// One-parameter grid `from, from + by, …` up to `to` inclusive.
    pub fn seq(from: f64, to: f64, by: f64) -> Result<Self> {
        Ok(Self(
            seq(from, to, by)?.into_iter().map(|v| vec![v]).collect(),
        ))
    }

    /// Cartesian product for two-parameter families.
    pub fn product(first: &[f64], second: &[f64]) -> Self {
        Self(
            first
                .iter()
                .flat_map(|&a| second.iter().map(move |&b| vec![a, b]))
                .collect(),
        )
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Arithmetic sequence `from..=to` in steps of `by`, tolerant of rounding at
/// the upper end.
pub fn seq(from: f64, to: f64, by: f64) -> Result<Vec<f64>> {
    if by.is_nan() || by <= 0.0 || !from.is_finite() || !to.is_finite() || to < from {
        return Err(Error::Domain(format!("bad sequence {from}:{to}:{by}")));
    }
    let steps = ((to - from) / by + 1e-9).floor() as usize;
    Ok((0..=steps).map(|i| from + i as f64 * by).collect())
}

/// Continuous power-law MLE: α̂ = 1 + n / Σ ln(xᵢ/xmin).
pub fn mle_continuous_pl(tail: &[f64], xmin: f64) -> Result<f64> {
    pl_closed_form(tail, xmin, 0.0)
}

/// Discrete power-law approximation: α̂ ≈ 1 + n / Σ ln(xᵢ/(xmin − ½)).
pub fn mle_discrete_pl_approx(tail: &[f64], xmin: f64) -> Result<f64> {
    if xmin == 0.5 {
        return Err(Error::Domain("xmin − 0.5 must be nonzero".into()));
    }
    pl_closed_form(tail, xmin, 0.5)
}

fn pl_closed_form(tail: &[f64], xmin: f64, shift: f64) -> Result<f64> {
    if tail.is_empty() {
        return Err(Error::EmptyTail(xmin));
    }
    if xmin.is_nan() || xmin <= 0.0 {
        return Err(Error::Domain(format!("xmin must be positive, got {xmin}")));
    }
    if let Some(&bad) = tail.iter().find(|&&x| x < xmin) {
        return Err(Error::Domain(format!("{bad} lies below xmin = {xmin}")));
    }
    if tail.iter().all(|&x| x == xmin) {
        return Err(Error::DegenerateData(
            "every tail value equals xmin; the exponent is unbounded".into(),
        ));
    }
    let base = xmin - shift;
    let denom: f64 = tail.iter().map(|&x| (x / base).ln()).sum();
    Ok(1.0 + tail.len() as f64 / denom)
}

/// Parameters maximizing the likelihood of the tail `x ≥ model.xmin()`.
///
/// Without a grid the fit is analytic where a closed form exists (continuous
/// power law, both exponentials), golden-section for the other one-parameter
/// families and Nelder–Mead for the log-normals. With a grid, the best grid
/// point wins.
pub fn estimate_pars(model: &Model, data: &Sample, grid: Option<&ParGrid>) -> Result<ParsEstimate> {
    let tail = data.tail(model.xmin());
    estimate_pars_tail(model, &tail, grid)
}

pub(crate) fn estimate_pars_tail(
    model: &Model,
    tail: &Tail<'_>,
    grid: Option<&ParGrid>,
) -> Result<ParsEstimate> {
    if tail.is_empty() {
        return Err(Error::EmptyTail(model.xmin()));
    }
    match grid {
        Some(g) => grid_scan(model, tail, g),
        None => optimize(model, tail),
    }
}

fn grid_scan(template: &Model, tail: &Tail<'_>, grid: &ParGrid) -> Result<ParsEstimate> {
    let mut m = template.clone();
    let mut best: Option<(Vec<f64>, f64)> = None;
    for point in grid.points() {
        if m.set_params(point).is_err() {
            continue;
        }
        let nll = -m.log_likelihood_unchecked(tail);
        if nll.is_finite() && best.as_ref().is_none_or(|(_, b)| nll < *b) {
            best = Some((point.clone(), nll));
        }
    }
    let (params, neg_log_likelihood) =
        best.ok_or_else(|| Error::Domain("no grid point gives a finite likelihood".into()))?;
    Ok(ParsEstimate {
        params,
        neg_log_likelihood,
        method: FitMethod::GridScan,
        optimizer: None,
    })
}

fn optimize(template: &Model, tail: &Tail<'_>) -> Result<ParsEstimate> {
    let xmin = template.xmin();
    if tail.unique().len() < 2 {
        return Err(Error::DegenerateData(format!(
            "all {} tail values equal {}",
            tail.len(),
            tail.unique()[0]
        )));
    }
    let n = tail.len() as f64;
    let mut m = template.clone();
    let family = template.family();
    let (params, method, optimizer) = match family {
        Family::ContinuousPowerLaw => {
            let denom = tail.sum_log() - n * xmin.ln();
            (vec![1.0 + n / denom], FitMethod::Analytic, None)
        }
        Family::ContinuousExponential => {
            let excess = mean_excess(tail, xmin);
            (vec![1.0 / excess], FitMethod::Analytic, None)
        }
        Family::DiscreteExponential => {
            // geometric on x − xmin with success probability 1 − e^(−λ)
            let excess = mean_excess(tail, xmin);
            (vec![(1.0 / excess).ln_1p()], FitMethod::Analytic, None)
        }
        Family::DiscretePowerLaw => {
            let sum_log = tail.sum_log();
            // −ℓ(α) = n ln ζ(α, xmin) + α Σ ln x
            let nll = |a: f64| n * crate::dists::zeta_unchecked(a, xmin).ln() + a * sum_log;
            let lo = (1.0 + ALPHA_GUARD).max(ALPHA_MIN);
            let min = golden_section(nll, lo, ALPHA_MAX, GOLDEN_TOL);
            (min.x, FitMethod::Optimizer, Some(min.diag))
        }
        Family::Poisson => {
            let hi = 2.0 * tail.unique()[tail.unique().len() - 1] + 10.0;
            let min = golden_section(
                |rate| match m.set_params(&[rate]) {
                    Ok(()) => -m.log_likelihood_unchecked(tail),
                    Err(_) => f64::INFINITY,
                },
                1e-10,
                hi,
                GOLDEN_TOL * hi.max(1.0),
            );
            (min.x, FitMethod::Optimizer, Some(min.diag))
        }
        Family::DiscreteLogNormal | Family::ContinuousLogNormal => {
            let min = fit_lognormal(&mut m, tail);
            (min.x, FitMethod::Optimizer, Some(min.diag))
        }
    };
    m.set_params(&params)?;
    let neg_log_likelihood = -m.log_likelihood_unchecked(tail);
    Ok(ParsEstimate {
        params,
        neg_log_likelihood,
        method,
        optimizer,
    })
}

fn mean_excess(tail: &Tail<'_>, xmin: f64) -> f64 {
    let total: f64 = tail
        .unique()
        .iter()
        .zip(tail.counts())
        .map(|(&x, &c)| c as f64 * (x - xmin))
        .sum();
    total / tail.len() as f64
}

/// Nelder–Mead over (μ, ln σ), started at the moments of ln x.
fn fit_lognormal(m: &mut Model, tail: &Tail<'_>) -> Minimum {
    let n = tail.len() as f64;
    let mean = tail.sum_log() / n;
    let var = tail
        .unique()
        .iter()
        .zip(tail.counts())
        .map(|(&x, &c)| c as f64 * (x.ln() - mean).powi(2))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
    let mut min = nelder_mead(
        |v| match m.set_params(&[v[0], v[1].exp()]) {
            Ok(()) => -m.log_likelihood_unchecked(tail),
            Err(_) => f64::INFINITY,
        },
        &[mean, sd.ln()],
        NelderMeadOptions::default(),
    );
    min.x[1] = min.x[1].exp();
    min
}

/// Largest gap between the tail's empirical CDF and the model CDF.
///
/// The empirical CDF is right-continuous, S(x) = #{tail ≤ x}/n, evaluated
/// at each distinct tail value. For continuous models the left limit at each
/// jump is compared too, which bounds the true supremum.
pub fn ks_statistic(model: &Model, data: &Sample) -> Result<f64> {
    if !model.is_parameterized() {
        return Err(Error::NotParameterized);
    }
    let tail = data.tail(model.xmin());
    if tail.is_empty() {
        return Err(Error::EmptyTail(model.xmin()));
    }
    Ok(ks_tail(model, &tail))
}

pub(crate) fn ks_tail(model: &Model, tail: &Tail<'_>) -> f64 {
    let fitted = model.cdf_sorted_unchecked(tail.unique());
    let n = tail.len() as f64;
    let both_sides = model.family().support() == Support::Continuous;
    let mut below = 0usize;
    let mut d = 0.0f64;
    for (&c, &p) in tail.counts().iter().zip(&fitted) {
        let left = below as f64 / n;
        below += c;
        let right = below as f64 / n;
        d = d.max((right - p).abs());
        if both_sides {
            d = d.max((left - p).abs());
        }
    }
    d
}

/// Restrictions on the threshold scan.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanOptions {
    /// Candidate thresholds; defaults to every distinct data value but the
    /// largest.
    pub xmins: Option<Vec<f64>>,
    /// Parameter grid used instead of the optimizer at every candidate.
    pub pars: Option<ParGrid>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub xmin: f64,
    pub params: Vec<f64>,
    pub ks: f64,
    pub n_tail: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct XminEstimate {
    pub xmin: f64,
    pub params: Vec<f64>,
    pub ks: f64,
    pub n_tail: usize,
    pub scan: Vec<ScanRow>,
}

impl XminEstimate {
    /// The fitted model at the selected threshold.
    pub fn model(&self, family: Family) -> Result<Model> {
        Model::with_params(family, self.xmin, &self.params)
    }

    /// One row per candidate: xmin, parameters, ks, n_tail.
    pub fn scan_table(&self, family: Family) -> Table {
        let mut cols = vec!["xmin".to_string()];
        cols.extend(family.param_names().iter().map(|s| s.to_string()));
        cols.extend(["ks", "n_tail"].map(String::from));
        let mut t = Table::new(cols);
        for r in &self.scan {
            let mut row = vec![r.xmin];
            row.extend(&r.params);
            row.extend([r.ks, r.n_tail as f64]);
            t.push(row);
        }
        t
    }
}

/// Picks the threshold whose conditional fit is closest to the data in KS
/// distance. Ties go to the smallest threshold.
pub fn estimate_xmin(template: &Model, data: &Sample, opts: &ScanOptions) -> Result<XminEstimate> {
    let family = template.family();
    if data.unique_values().len() < 2 {
        return Err(Error::DegenerateData(format!(
            "all {} observations equal {}",
            data.len(),
            data.min()
        )));
    }
    let default_candidates;
    let candidates: &[f64] = match &opts.xmins {
        Some(list) => list,
        None => {
            let u = data.unique_values();
            default_candidates = u[..u.len() - 1].to_vec();
            &default_candidates
        }
    };

    let mut scan = Vec::with_capacity(candidates.len());
    for &xmin in candidates {
        let model = Model::new(family, xmin)?;
        let tail = data.tail(xmin);
        if tail.len() < 2 {
            continue;
        }
        let Ok(est) = estimate_pars_tail(&model, &tail, opts.pars.as_ref()) else {
            continue;
        };
        let fitted = Model::with_params(family, xmin, &est.params)?;
        scan.push(ScanRow {
            xmin,
            params: est.params,
            ks: ks_tail(&fitted, &tail),
            n_tail: tail.len(),
        });
    }

    let best = select_minimum(&scan).ok_or(Error::InsufficientTail)?;
    let row = &scan[best];
    Ok(XminEstimate {
        xmin: row.xmin,
        params: row.params.clone(),
        ks: row.ks,
        n_tail: row.n_tail,
        scan,
    })
}

fn select_minimum(rows: &[ScanRow]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, r) in rows.iter().enumerate() {
        if !r.ks.is_finite() {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(b) => {
                let cur = &rows[b];
                let better = r.ks < cur.ks - KS_TIE
                    || ((r.ks - cur.ks).abs() <= KS_TIE && r.xmin < cur.xmin);
                Some(if better { i } else { b })
            }
        };
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn discrete(v: &[f64]) -> Sample {
        Sample::new(v.to_vec(), Support::Discrete).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert!((mle_continuous_pl(&[E], 1.0).unwrap() - 2.0).abs() < 1e-15);
        let a = mle_continuous_pl(&[E, E * E], 1.0).unwrap();
        assert!((a - 5.0 / 3.0).abs() < 1e-15);
        let a = mle_discrete_pl_approx(&[2.0], 1.0).unwrap();
        assert!((a - (1.0 + 1.0 / 4f64.ln())).abs() < 1e-15);
        assert!((a - 1.7213).abs() < 1e-4);
    }

    #[test]
    fn closed_form_errors() {
        assert!(matches!(
            mle_continuous_pl(&[3.0, 3.0], 3.0),
            Err(Error::DegenerateData(_))
        ));
        assert!(matches!(
            mle_continuous_pl(&[], 1.0),
            Err(Error::EmptyTail(_))
        ));
        assert!(matches!(
            mle_discrete_pl_approx(&[2.0], 0.5),
            Err(Error::Domain(_))
        ));
        assert!(mle_continuous_pl(&[0.5, 2.0], 1.0).is_err());
    }

    #[test]
    fn approximation_without_shift_is_the_continuous_mle() {
        let data = [3.0, 5.0, 9.0, 40.0];
        assert_eq!(
            pl_closed_form(&data, 3.0, 0.0).unwrap(),
            mle_continuous_pl(&data, 3.0).unwrap()
        );
    }

    #[test]
    fn continuous_pl_estimate_is_analytic() {
        let s = Sample::new(vec![E, E * E], Support::Continuous).unwrap();
        let m = Model::new(Family::ContinuousPowerLaw, 1.0).unwrap();
        let est = estimate_pars(&m, &s, None).unwrap();
        assert_eq!(est.method, FitMethod::Analytic);
        assert!((est.params[0] - 5.0 / 3.0).abs() < 1e-14);
        let check = Model::with_params(Family::ContinuousPowerLaw, 1.0, &est.params).unwrap();
        let ll = check.log_likelihood(&s.tail(1.0)).unwrap();
        assert!((est.neg_log_likelihood + ll).abs() < 1e-9);
    }

    #[test]
    fn discrete_pl_optimizer_agrees_with_fine_grid() {
        let s = discrete(&[1.0, 1.0, 1.0, 2.0, 2.0, 3.0, 5.0, 8.0, 13.0, 40.0]);
        let m = Model::new(Family::DiscretePowerLaw, 1.0).unwrap();
        let opt = estimate_pars(&m, &s, None).unwrap();
        let grid = ParGrid::seq(1.2, 3.0, 1e-4).unwrap();
        let scan = estimate_pars(&m, &s, Some(&grid)).unwrap();
        assert_eq!(scan.method, FitMethod::GridScan);
        assert!((opt.params[0] - scan.params[0]).abs() < 1e-4);
        assert!(opt.neg_log_likelihood <= scan.neg_log_likelihood + 1e-9);
    }

    #[test]
    fn exponential_closed_forms_maximize_likelihood() {
        let s = discrete(&[2.0, 2.0, 3.0, 4.0, 4.0, 7.0]);
        for family in [Family::DiscreteExponential, Family::ContinuousExponential] {
            let s = Sample::new(s.values().to_vec(), family.support()).unwrap();
            let m = Model::new(family, 2.0).unwrap();
            let est = estimate_pars(&m, &s, None).unwrap();
            let grid = ParGrid::seq(0.01, 3.0, 1e-4).unwrap();
            let g = estimate_pars(&m, &s, Some(&grid)).unwrap();
            assert!((est.params[0] - g.params[0]).abs() < 2e-4, "{family}");
        }
    }

    #[test]
    fn degenerate_tail_is_reported() {
        let s = discrete(&[4.0, 4.0, 4.0]);
        let m = Model::new(Family::DiscretePowerLaw, 4.0).unwrap();
        assert!(matches!(
            estimate_pars(&m, &s, None),
            Err(Error::DegenerateData(_))
        ));
        let m = Model::new(Family::DiscretePowerLaw, 5.0).unwrap();
        assert!(matches!(
            estimate_pars(&m, &s, None),
            Err(Error::EmptyTail(_))
        ));
    }

    #[test]
    fn ks_is_zero_when_cdfs_coincide() {
        // cdf(1) = 1 − e^(−50) rounds to 1, matching the ECDF of {1, 1}
        let m = Model::with_params(Family::DiscreteExponential, 1.0, &[50.0]).unwrap();
        assert_eq!(ks_statistic(&m, &discrete(&[1.0, 1.0])).unwrap(), 0.0);
    }

    #[test]
    fn ks_is_invariant_under_duplication() {
        let m = Model::with_params(Family::DiscretePowerLaw, 1.0, &[2.0]).unwrap();
        let once = discrete(&[1.0, 2.0, 7.0]);
        let twice = discrete(&[1.0, 1.0, 2.0, 2.0, 7.0, 7.0]);
        assert_eq!(
            ks_statistic(&m, &once).unwrap(),
            ks_statistic(&m, &twice).unwrap()
        );
    }

    #[test]
    fn ks_geometric_example() {
        // rate ln 2 above 1: cdf(1) = 1/2, cdf(2) = 3/4, cdf(3) = 7/8
        let m = Model::with_params(Family::DiscreteExponential, 1.0, &[2f64.ln()]).unwrap();
        let d = ks_statistic(&m, &discrete(&[1.0, 1.0, 2.0, 3.0])).unwrap();
        assert!((d - 0.125).abs() < 1e-15);
        let d = ks_statistic(&m, &discrete(&[1.0, 1.0, 2.0, 2.0])).unwrap();
        assert!((d - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ks_statistic_is_bounded() {
        let s = discrete(&[1.0, 5.0, 9.0, 100.0, 1000.0]);
        for a in [1.1, 2.0, 5.0, 15.0] {
            let m = Model::with_params(Family::DiscretePowerLaw, 1.0, &[a]).unwrap();
            let d = ks_statistic(&m, &s).unwrap();
            assert!((0.0..=1.0).contains(&d));
        }
    }

    #[test]
    fn continuous_ks_uses_both_sides_of_each_jump() {
        // single observation at the median of a unit exponential above 1
        let m = Model::with_params(Family::ContinuousExponential, 1.0, &[2f64.ln()]).unwrap();
        let s = Sample::new(vec![2.0], Support::Continuous).unwrap();
        assert!((ks_statistic(&m, &s).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn scan_picks_minimum_and_reports_table() {
        let s = discrete(&[1.0, 1.0, 2.0, 3.0, 3.0, 4.0, 6.0, 9.0, 15.0, 30.0, 70.0]);
        let m = Model::new(Family::DiscretePowerLaw, 1.0).unwrap();
        let est = estimate_xmin(&m, &s, &ScanOptions::default()).unwrap();
        let min = est.scan.iter().map(|r| r.ks).fold(f64::INFINITY, f64::min);
        assert_eq!(est.ks, min);
        assert!(est.scan.iter().all(|r| (0.0..=1.0).contains(&r.ks)));
        let row = est.scan.iter().find(|r| r.xmin == est.xmin).unwrap();
        assert_eq!(row.params, est.params);
        // default candidates exclude the largest value
        assert!(est.scan.iter().all(|r| r.xmin < 70.0));
    }

    #[test]
    fn restricted_scan_never_beats_full_scan() {
        let s = discrete(&[1.0, 1.0, 2.0, 3.0, 3.0, 4.0, 6.0, 9.0, 15.0, 30.0, 70.0]);
        let m = Model::new(Family::DiscretePowerLaw, 1.0).unwrap();
        let full = estimate_xmin(&m, &s, &ScanOptions::default()).unwrap();
        let opts = ScanOptions {
            xmins: Some(vec![2.0, 4.0]),
            pars: None,
        };
        let part = estimate_xmin(&m, &s, &opts).unwrap();
        assert!(full.ks <= part.ks);
        assert_eq!(part.scan.len(), 2);
    }

    #[test]
    fn scan_errors() {
        let m = Model::new(Family::DiscretePowerLaw, 1.0).unwrap();
        let same = discrete(&[3.0, 3.0, 3.0]);
        assert!(matches!(
            estimate_xmin(&m, &same, &ScanOptions::default()),
            Err(Error::DegenerateData(_))
        ));
        let s = discrete(&[1.0, 2.0, 3.0]);
        let opts = ScanOptions {
            xmins: Some(vec![3.0, 50.0]),
            pars: None,
        };
        assert!(matches!(
            estimate_xmin(&m, &s, &opts),
            Err(Error::InsufficientTail)
        ));
    }

    #[test]
    fn tie_break_prefers_smallest_threshold() {
        let rows = vec![
            ScanRow {
                xmin: 5.0,
                params: vec![2.0],
                ks: 0.1,
                n_tail: 3,
            },
            ScanRow {
                xmin: 2.0,
                params: vec![2.0],
                ks: 0.1 + 1e-14,
                n_tail: 5,
            },
            ScanRow {
                xmin: 3.0,
                params: vec![2.0],
                ks: 0.2,
                n_tail: 4,
            },
        ];
        assert_eq!(select_minimum(&rows), Some(1));
    }

    #[test]
    fn seq_is_inclusive() {
        let v = seq(1.5, 2.5, 0.01).unwrap();
        assert_eq!(v.len(), 101);
        assert!((v[100] - 2.5).abs() < 1e-12);
        assert_eq!(seq(2.0, 20.0, 2.0).unwrap().len(), 10);
        assert!(seq(2.0, 1.0, 1.0).is_err());
        assert!(seq(1.0, 2.0, 0.0).is_err());
    }
}
