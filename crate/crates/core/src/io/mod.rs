//! Data ingestion, the bundled example data set, plot-ready tables and the
//! JSON/CSV report writers.

mod load;
mod report;
mod sample;
mod table;

pub use load::{load_sample, load_sample_path, moby, write_values, InputFormat};
pub use report::{
    format_real, read_csv_table, to_json_string, write_csv, write_json, write_report, FitReport,
    NamedParams, OutputFormat, Report, ScanReport, CSV_DIGITS, JSON_DIGITS, SCHEMA_VERSION,
};
pub use sample::{Sample, Tail};
pub use table::{ccdf_anchor, empirical_ccdf, fitted_curve, log_grid, CurveKind, Table};
