use super::Replicate;
use crate::dists::Family;
use crate::error::{Error, Result};
use crate::io::Table;

const Z95: f64 = 1.96;

/// Running mean, standard deviation and approximate 95% band
/// (mean ± 1.96·sd/√i) of xmin and each parameter after every replicate.
///
/// When `ks_d` is given a running goodness-of-fit p-value column is added.
/// The first `trim` fraction of rows is dropped from the output (the
/// statistics themselves still accumulate from the first replicate).
pub fn sequential_diagnostics(
    replicates: &[Replicate],
    family: Family,
    trim: f64,
    ks_d: Option<f64>,
) -> Result<Table> {
    if !(0.0..1.0).contains(&trim) {
        return Err(Error::Domain(format!(
            "trim must lie in [0, 1), got {trim}"
        )));
    }
    if replicates.is_empty() {
        return Err(Error::Domain("no replicates to summarize".into()));
    }
    let mut names = vec!["xmin"];
    names.extend(family.param_names());

    let mut columns = vec!["iteration".to_string()];
    for name in &names {
        for suffix in ["mean", "sd", "lower", "upper"] {
            columns.push(format!("{name}_{suffix}"));
        }
    }
    if ks_d.is_some() {
        columns.push("p_value".into());
    }
    let mut table = Table::new(columns);

    let skip = (trim * replicates.len() as f64).floor() as usize;
    let mut acc = vec![Welford::default(); names.len()];
    let mut exceed = 0usize;
    for (i, r) in replicates.iter().enumerate() {
        acc[0].push(r.xmin);
        for (a, &p) in acc[1..].iter_mut().zip(&r.params) {
            a.push(p);
        }
        if ks_d.is_some_and(|d| r.ks >= d) {
            exceed += 1;
        }
        if i < skip {
            continue;
        }
        let count = (i + 1) as f64;
        let mut row = vec![count];
        for a in &acc {
            let sd = a.sd();
            let half = Z95 * sd / count.sqrt();
            row.extend([a.mean, sd, a.mean - half, a.mean + half]);
        }
        if ks_d.is_some() {
            row.push(exceed as f64 / count);
        }
        table.push(row);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn sd(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.m2.max(0.0) / (self.n - 1) as f64).sqrt()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reps(xmins: &[f64], alphas: &[f64]) -> Vec<Replicate> {
        xmins
            .iter()
            .zip(alphas)
            .enumerate()
            .map(|(index, (&xmin, &a))| Replicate {
                index,
                attempt: 0,
                xmin,
                params: vec![a],
                ks: 0.01 * index as f64,
            })
            .collect()
    }

    #[test]
    fn untrimmed_has_one_row_per_replicate() {
        let r = reps(&[1.0, 2.0, 4.0], &[2.0, 2.1, 2.2]);
        let t = sequential_diagnostics(&r, Family::DiscretePowerLaw, 0.0, None).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.columns.len(), 9);
    }

    #[test]
    fn final_mean_matches_plain_mean() {
        let xs = [3.0, 7.0, 7.0, 12.0, 5.0, 6.0];
        let alphas = [1.9, 1.95, 2.0, 1.93, 1.97, 1.91];
        let t = sequential_diagnostics(&reps(&xs, &alphas), Family::DiscretePowerLaw, 0.0, None)
            .unwrap();
        let last = t.rows.last().unwrap();
        let (m, s) = crate::resample::mean_sd(&alphas);
        assert!((last[5] - m).abs() < 1e-12);
        assert!((last[6] - s).abs() < 1e-12);
    }

    #[test]
    fn constant_column_has_zero_width() {
        let t = sequential_diagnostics(
            &reps(&[7.0; 5], &[2.0; 5]),
            Family::DiscretePowerLaw,
            0.0,
            None,
        )
        .unwrap();
        for row in &t.rows {
            assert_eq!(row[2], 0.0);
            assert_eq!(row[3], row[4]);
        }
    }

    #[test]
    fn trimming_and_p_column() {
        let r = reps(&[1.0; 10], &[2.0; 10]);
        let t = sequential_diagnostics(&r, Family::DiscretePowerLaw, 0.1, Some(0.045)).unwrap();
        assert_eq!(t.len(), 9);
        assert_eq!(t.rows[0][0], 2.0);
        // ks = 0.00, 0.01, …, 0.09; five of ten are ≥ 0.045
        assert_eq!(*t.rows.last().unwrap().last().unwrap(), 0.5);
        assert!(sequential_diagnostics(&r, Family::DiscretePowerLaw, 1.0, None).is_err());
        assert!(sequential_diagnostics(&r, Family::DiscretePowerLaw, -0.1, None).is_err());
    }
}
