use heavytail::io::{NamedParams, Report};
use heavytail::{Family, Moment, Table};
use serde::Serialize;

/// A resampling result together with its running diagnostics.
#[derive(Debug, Serialize)]
pub struct WithDiagnostics<R> {
    #[serde(flatten)]
    pub result: R,
    pub diagnostics: Table,
}

impl<R: Report> Report for WithDiagnostics<R> {
    const KIND: &'static str = R::KIND;

    fn to_table(&self) -> Table {
        self.result.to_table()
    }
}

#[derive(Debug, Serialize)]
pub struct Overlay {
    pub family: Family,
    pub xmin: f64,
    pub params: NamedParams,
    /// Model survival scaled to meet the empirical curve at xmin.
    pub curve: Table,
}

#[derive(Debug, Serialize)]
pub struct CcdfReport {
    pub n: usize,
    pub empirical: Table,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fitted: Option<Overlay>,
}

impl Report for CcdfReport {
    const KIND: &'static str = "ccdf";

    /// Long format: `series` is 0 for the data and 1 for the overlay.
    fn to_table(&self) -> Table {
        let mut t = Table::new(["x", "y", "series"]);
        for r in &self.empirical.rows {
            t.push(vec![r[0], r[1], 0.0]);
        }
        for r in self.fitted.iter().flat_map(|o| &o.curve.rows) {
            t.push(vec![r[0], r[1], 1.0]);
        }
        t
    }
}

#[derive(Debug, Serialize)]
pub struct MomentRow {
    pub order: u32,
    #[serde(flatten)]
    pub moment: Moment,
}

#[derive(Debug, Serialize)]
pub struct MomentReport {
    pub family: Family,
    pub xmin: f64,
    pub alpha: f64,
    pub moments: Vec<MomentRow>,
}

impl Report for MomentReport {
    const KIND: &'static str = "moment";

    /// Divergent moments are written as `inf`.
    fn to_table(&self) -> Table {
        let mut t = Table::new(["order", "value"]);
        for m in &self.moments {
            let v = match m.moment {
                Moment::Finite(v) => v,
                Moment::Divergent => f64::INFINITY,
            };
            t.push(vec![f64::from(m.order), v]);
        }
        t
    }
}
