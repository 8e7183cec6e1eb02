use super::{Sample, Table};
use crate::compare::ComparisonResult;
use crate::dists::{Family, Model};
use crate::error::{Error, Result};
use crate::fit::{ParsEstimate, XminEstimate};
use crate::resample::{BootstrapResult, GofResult};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;
use std::io::Write;

/// Version stamped into every JSON document; bump on breaking layout changes.
pub const SCHEMA_VERSION: u32 = 1;
pub const JSON_DIGITS: usize = 17;
pub const CSV_DIGITS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::Unsupported(format!("output format {other:?}"))),
        }
    }
}

/// Parameter values keyed by their conventional names (`alpha`, `meanlog`…).
#[derive(Debug, Clone, PartialEq)]
pub struct NamedParams {
    pub family: Family,
    pub values: Vec<f64>,
}

impl Serialize for NamedParams {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.values.len()))?;
        for (name, v) in self.family.param_names().iter().zip(&self.values) {
            map.serialize_entry(name, v)?;
        }
        map.end()
    }
}

/// Summary of a fitted tail model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitReport {
    pub family: Family,
    pub xmin: f64,
    pub params: NamedParams,
    pub ks: f64,
    pub n: usize,
    pub n_tail: usize,
    pub fraction_discarded: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neg_log_likelihood: Option<f64>,
}

impl FitReport {
    /// Report for the threshold chosen by the KS scan.
    pub fn from_scan(family: Family, est: &XminEstimate, data: &Sample) -> Result<Self> {
        let model = est.model(family)?;
        let tail = data.tail(est.xmin);
        let nll = -model.log_likelihood(&tail)?;
        Ok(Self::build(
            family,
            est.xmin,
            est.params.clone(),
            est.ks,
            data,
            Some(nll),
        ))
    }

    /// Report for a fit at a fixed threshold.
    pub fn from_pars(model: &Model, est: &ParsEstimate, ks: f64, data: &Sample) -> Self {
        Self::build(
            model.family(),
            model.xmin(),
            est.params.clone(),
            ks,
            data,
            Some(est.neg_log_likelihood),
        )
    }

    fn build(
        family: Family,
        xmin: f64,
        params: Vec<f64>,
        ks: f64,
        data: &Sample,
        neg_log_likelihood: Option<f64>,
    ) -> Self {
        let n = data.len();
        let n_tail = data.tail(xmin).len();
        Self {
            family,
            xmin,
            params: NamedParams {
                family,
                values: params,
            },
            ks,
            n,
            n_tail,
            fraction_discarded: 1.0 - n_tail as f64 / n as f64,
            neg_log_likelihood,
        }
    }
}

/// Anything the writers can emit.
pub trait Report: Serialize {
    /// Value of the `kind` field in JSON output.
    const KIND: &'static str;

    /// Row form used for CSV output.
    fn to_table(&self) -> Table;
}

impl Report for Table {
    const KIND: &'static str = "table";

    fn to_table(&self) -> Table {
        self.clone()
    }
}

impl Report for FitReport {
    const KIND: &'static str = "fit";

    fn to_table(&self) -> Table {
        let mut cols = vec!["xmin".to_string()];
        cols.extend(self.family.param_names().iter().map(|s| s.to_string()));
        cols.extend(["ks", "n", "n_tail", "fraction_discarded"].map(String::from));
        let mut row = vec![self.xmin];
        row.extend(&self.params.values);
        row.extend([
            self.ks,
            self.n as f64,
            self.n_tail as f64,
            self.fraction_discarded,
        ]);
        Table {
            columns: cols,
            rows: vec![row],
        }
    }
}

/// Full threshold scan with the selected row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub family: Family,
    pub xmin: f64,
    pub params: NamedParams,
    pub ks: f64,
    pub n_tail: usize,
    pub scan: Table,
}

impl ScanReport {
    pub fn new(family: Family, est: &XminEstimate) -> Self {
        Self {
            family,
            xmin: est.xmin,
            params: NamedParams {
                family,
                values: est.params.clone(),
            },
            ks: est.ks,
            n_tail: est.n_tail,
            scan: est.scan_table(family),
        }
    }
}

impl Report for ScanReport {
    const KIND: &'static str = "scan";

    fn to_table(&self) -> Table {
        self.scan.clone()
    }
}

impl Report for BootstrapResult {
    const KIND: &'static str = "bootstrap";

    fn to_table(&self) -> Table {
        self.replicate_table()
    }
}

impl Report for GofResult {
    const KIND: &'static str = "gof";

    fn to_table(&self) -> Table {
        self.bootstrap.replicate_table()
    }
}

impl Report for ComparisonResult {
    const KIND: &'static str = "compare";

    fn to_table(&self) -> Table {
        Table {
            columns: [
                "xmin",
                "loglik_ratio",
                "normalized_statistic",
                "p_two_sided",
                "p_one_sided",
                "n",
            ]
            .map(String::from)
            .to_vec(),
            rows: vec![vec![
                self.xmin,
                self.loglik_ratio,
                self.normalized_statistic,
                self.p_two_sided,
                self.p_one_sided,
                self.n as f64,
            ]],
        }
    }
}

pub fn write_report<R: Report, W: Write>(report: &R, format: OutputFormat, sink: W) -> Result<()> {
    match format {
        OutputFormat::Json => write_json(report, sink),
        OutputFormat::Csv => write_csv(&report.to_table(), sink),
    }
}

/// JSON document with `schema_version` and `kind` ahead of the report's own
/// fields. Reals carry 17 significant digits, so they reload bit-exact.
pub fn to_json_string<R: Report>(report: &R) -> Result<String> {
    let mut doc = serde_json::Map::new();
    doc.insert("schema_version".into(), SCHEMA_VERSION.into());
    doc.insert("kind".into(), R::KIND.into());
    match serde_json::to_value(report)? {
        Value::Object(fields) => doc.extend(fields),
        other => {
            doc.insert("value".into(), other);
        }
    }
    let mut out = String::new();
    render(&Value::Object(doc), 0, &mut out);
    out.push('\n');
    Ok(out)
}

pub fn write_json<R: Report, W: Write>(report: &R, mut sink: W) -> Result<()> {
    sink.write_all(to_json_string(report)?.as_bytes())?;
    Ok(())
}

fn render(v: &Value, indent: usize, out: &mut String) {
    const STEP: usize = 2;
    match v {
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => out.push_str(&u.to_string()),
            (_, Some(i), _) => out.push_str(&i.to_string()),
            (_, _, Some(f)) => out.push_str(&format_real(f, JSON_DIGITS)),
            _ => out.push_str("null"),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                render(item, indent, out);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, indent + STEP);
                render(item, indent + STEP, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, indent + STEP);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                render(item, indent + STEP, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn pad(out: &mut String, n: usize) {
    out.extend(std::iter::repeat_n(' ', n));
}

/// Table with a header row; reals carry 10 significant digits.
pub fn write_csv<W: Write>(table: &Table, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(sink);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&v| format_real(v, CSV_DIGITS)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv_table<R: std::io::Read>(source: R) -> Result<Table> {
    let mut r = csv::Reader::from_reader(source);
    let columns: Vec<String> = r.headers()?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| {
                f.parse::<f64>().map_err(|_| Error::Parse {
                    line: i + 2,
                    message: format!("not a number: {f:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(Table { columns, rows })
}

/// Decimal rendering with at most `digits` significant digits, trailing
/// zeros dropped. Integral values below 1e15 print without a fraction;
/// non-finite values print as `NaN`, `inf` or `-inf`.
pub fn format_real(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "NaN".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0".into();
    }
    if v.fract() == 0.0 && v.abs() < 1e15 {
        return format!("{}", v as i64);
    }
    let sci = format!("{:.*e}", digits.max(1) - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let all: String = mantissa.chars().filter(|c| *c != '.').collect();
    let sig = all.trim_end_matches('0');
    let sig = if sig.is_empty() { "0" } else { sig };

    let mut out = String::from(sign);
    if (-5..15).contains(&exp) {
        if exp >= 0 {
            let int_len = exp as usize + 1;
            if sig.len() <= int_len {
                out.push_str(sig);
                out.extend(std::iter::repeat_n('0', int_len - sig.len()));
            } else {
                out.push_str(&sig[..int_len]);
                out.push('.');
                out.push_str(&sig[int_len..]);
            }
        } else {
            out.push_str("0.");
            out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
            out.push_str(sig);
        }
    } else {
        out.push_str(&sig[..1]);
        if sig.len() > 1 {
            out.push('.');
            out.push_str(&sig[1..]);
        }
        out.push('e');
        out.push_str(&exp.to_string());
    }
    out
}
