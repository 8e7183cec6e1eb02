use super::Sample;
use crate::dists::Model;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A rectangular table of reals with named columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Values of the named column, if present.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// P(X ≥ x) at each distinct observation.
pub fn empirical_ccdf(data: &Sample) -> Table {
    let n = data.len() as f64;
    let mut table = Table::new(["x", "y"]);
    let mut at_or_above = data.len();
    for (&x, &c) in data.unique_values().iter().zip(data.counts()) {
        table.push(vec![x, at_or_above as f64 / n]);
        at_or_above -= c;
    }
    table
}

/// What [`fitted_curve`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CurveKind {
    /// Model survival multiplied by `anchor`, normally the empirical
    /// survival at xmin so the curve meets the data (see [`ccdf_anchor`]).
    Ccdf {
        anchor: f64,
    },
    /// Probability mass or density.
    Density,
    Cdf,
}

/// Fraction of observations at or above `xmin`.
pub fn ccdf_anchor(data: &Sample, xmin: f64) -> f64 {
    data.tail(xmin).len() as f64 / data.len() as f64
}

/// Evaluates a parameterized model on `grid`.
pub fn fitted_curve(model: &Model, grid: &[f64], kind: CurveKind) -> Result<Table> {
    if let Some(&x) = grid.iter().find(|&&x| x < model.xmin()) {
        return Err(Error::Domain(format!(
            "grid point {x} lies below xmin = {}",
            model.xmin()
        )));
    }
    let ys = match kind {
        CurveKind::Ccdf { anchor } => model
            .survival(grid)?
            .into_iter()
            .map(|s| s * anchor)
            .collect(),
        CurveKind::Density => model.pdf(grid)?,
        CurveKind::Cdf => model.cdf(grid)?,
    };
    let mut table = Table::new(["x", "y"]);
    for (&x, y) in grid.iter().zip(ys) {
        table.push(vec![x, y]);
    }
    Ok(table)
}

/// `n` points spaced evenly in log between `from` and `to`, rounded to
/// integers and deduplicated when `integral` is set.
pub fn log_grid(from: f64, to: f64, n: usize, integral: bool) -> Vec<f64> {
    if n <= 1 || to <= from {
        return vec![from];
    }
    let (a, b) = (from.ln(), to.ln());
    let mut out: Vec<f64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .map(|x| if integral { x.round() } else { x })
        .collect();
    out[0] = from;
    out[n - 1] = to;
    out.dedup();
    out
}
