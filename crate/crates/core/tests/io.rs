use heavytail::io::{self, CurveKind, InputFormat, OutputFormat, Table};
use heavytail::resample;
use heavytail::{BootstrapConfig, Error, Family, Model, Sample, Support};
use std::fs;

#[test]
fn moby_from_disk_matches_bundle() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/moby.txt");
    let s = io::load_sample_path(path.as_ref(), InputFormat::Lines, Support::Discrete).unwrap();
    assert_eq!(s, io::moby());
}

#[test]
fn ccdf_invariants() {
    let data = io::moby();
    let t = io::empirical_ccdf(&data);
    assert_eq!(t.len(), data.unique_values().len());
    assert_eq!(t.rows[0][1], 1.0);
    assert!(t.rows.windows(2).all(|w| w[1][1] < w[0][1]));
    let total: f64 = data
        .counts()
        .iter()
        .map(|&c| c as f64 / data.len() as f64)
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn reload_after_rewrite_is_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("values.txt");
    let original = io::moby();
    io::write_values(&original, fs::File::create(&path).unwrap()).unwrap();
    let back = io::load_sample_path(&path, InputFormat::Lines, Support::Discrete).unwrap();
    assert_eq!(back.values(), original.values());
}

#[test]
fn synthetic_stand_in_formats() {
    // two-column frequency file and a labelled CSV, as used by common
    // heavy-tail collections
    let freq = "# size,count\n1,40\n2,11\n3,5\n10,1\n";
    let s = io::load_sample(
        freq.as_bytes(),
        InputFormat::FrequencyTable,
        Support::Discrete,
    )
    .unwrap();
    assert_eq!(s.len(), 57);
    let csv = "year,deaths\n1816,2.5\n1823,1400\n1830,31.25\n";
    let s = io::load_sample(
        csv.as_bytes(),
        InputFormat::CsvColumn {
            column: 1,
            header: true,
        },
        Support::Continuous,
    )
    .unwrap();
    assert_eq!(s.values(), &[2.5, 31.25, 1400.0]);
    let err = io::load_sample(
        csv.as_bytes(),
        InputFormat::CsvColumn {
            column: 1,
            header: true,
        },
        Support::Discrete,
    )
    .unwrap_err();
    assert!(matches!(err, Error::KindMismatch { line: 2, .. }));
}

#[test]
fn replicate_table_round_trips_through_json() {
    let data = Sample::new(
        (1..200).map(|i| f64::from(i * i % 97 + 1)).collect(),
        Support::Discrete,
    )
    .unwrap();
    let t = Model::new(Family::DiscretePowerLaw, 1.0).unwrap();
    let res = resample::bootstrap(&t, &data, &BootstrapConfig::new(8, 5)).unwrap();
    let table = res.replicate_table();
    let json = io::to_json_string(&table).unwrap();
    let back: Table = serde_json::from_str(&json).unwrap();
    assert_eq!(back, table);

    let mut buf = Vec::new();
    io::write_report(&res, OutputFormat::Csv, &mut buf).unwrap();
    let reread = io::read_csv_table(buf.as_slice()).unwrap();
    assert_eq!(reread.columns, table.columns);
    let mut again = Vec::new();
    io::write_csv(&reread, &mut again).unwrap();
    assert_eq!(again, buf);
}

#[test]
fn fit_report_for_moby() {
    let data = io::moby();
    let t = Model::new(Family::DiscretePowerLaw, 1.0).unwrap();
    let est = heavytail::fit::estimate_xmin(&t, &data, &Default::default()).unwrap();
    let report = heavytail::FitReport::from_scan(Family::DiscretePowerLaw, &est, &data).unwrap();
    let json = io::to_json_string(&report).unwrap();
    assert!(json.contains("\"xmin\": 7,"));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["params"]["alpha"].as_f64().unwrap(), est.params[0]);
    assert_eq!(v["n_tail"], 2958);
    assert!((0.0..1.0).contains(&report.fraction_discarded));
}

#[test]
fn unwritable_sink_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = fs::File::open(dir.path()).ok();
    // a directory handle cannot be written to
    if let Some(f) = file {
        let err = io::write_report(&Table::new(["x"]), OutputFormat::Json, f).unwrap_err();
        assert!(matches!(err, Error::Io(_)));
    }
}

#[test]
fn figure_style_pmf_table() {
    let grid: Vec<f64> = (1..=20).map(f64::from).collect();
    let tables: Vec<Table> = [1.5, 2.0, 2.5]
        .iter()
        .map(|&a| {
            let m = Model::with_params(Family::DiscretePowerLaw, 1.0, &[a]).unwrap();
            io::fitted_curve(&m, &grid, CurveKind::Density).unwrap()
        })
        .collect();
    assert!(tables[2].rows[0][1] > tables[1].rows[0][1]);
    assert!(tables[1].rows[0][1] > tables[0].rows[0][1]);
    let m = Model::with_params(Family::DiscretePowerLaw, 1.0, &[2.0]).unwrap();
    let cdf = io::fitted_curve(&m, &grid, CurveKind::Cdf).unwrap();
    assert!(cdf.rows.windows(2).all(|w| w[1][1] >= w[0][1]));
}
