use crate::args::*;
use crate::reports::{CcdfReport, MomentReport, MomentRow, Overlay, WithDiagnostics};
use heavytail::fit::{self, ParGrid, ScanOptions};
use heavytail::io::{self, CurveKind, InputFormat, NamedParams, OutputFormat, Report, ScanReport};
use heavytail::resample::{self, BootstrapConfig};
use heavytail::{
    compare_distributions, BodyMode, Family, FitReport, Model, Sample, Support, Table,
};
use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_DATA: u8 = 3;
pub const DATA_DIR_VAR: &str = "HEAVYTAIL_DATA_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Fetch(String),
    #[error("{path}: {source}")]
    Input {
        path: String,
        source: heavytail::Error,
    },
    #[error(transparent)]
    Core(#[from] heavytail::Error),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Fetch(_) => "FetchError",
            CliError::Input { source: e, .. } | CliError::Core(e) => e.kind(),
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_DATA,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Parses `argv`, runs the subcommand and reports any failure on stderr as
/// one line of JSON.
pub fn run<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    use clap::Parser;

    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => return fail(&usage(e.render().to_string().trim_end())),
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

fn fail(e: &CliError) -> ExitCode {
    let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
    eprintln!("{line}");
    ExitCode::from(e.exit_code())
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Fit(a) => fit_cmd(a),
        Command::Scan(a) => scan_cmd(a),
        Command::Bootstrap(a) => bootstrap_cmd(a),
        Command::Gof(a) => gof_cmd(a),
        Command::Compare(a) => compare_cmd(a),
        Command::Ccdf(a) => ccdf_cmd(a),
        Command::Rand(a) => rand_cmd(a),
        Command::Moment(a) => moment_cmd(a),
        Command::Fetch(a) => fetch_cmd(a),
    }
}

fn fit_cmd(a: FitArgs) -> Result<()> {
    let data = load(&a.input, Some(a.family))?;
    let opts = scan_options(&a.scan, a.family)?;
    let report = match a.xmin {
        Some(xmin) => {
            let (model, est) = fit_at(a.family, xmin, &data, opts.pars.as_ref())?;
            let ks = fit::ks_statistic(&model, &data)?;
            FitReport::from_pars(&model, &est, ks, &data)
        }
        None => {
            let est = fit::estimate_xmin(&template(a.family, &data)?, &data, &opts)?;
            FitReport::from_scan(a.family, &est, &data)?
        }
    };
    emit(&report, &a.output)
}

fn scan_cmd(a: ScanArgs) -> Result<()> {
    let data = load(&a.input, Some(a.family))?;
    let opts = scan_options(&a.scan, a.family)?;
    let est = fit::estimate_xmin(&template(a.family, &data)?, &data, &opts)?;
    emit(&ScanReport::new(a.family, &est), &a.output)
}

fn bootstrap_cmd(a: BootstrapArgs) -> Result<()> {
    let data = load(&a.input, Some(a.family))?;
    let cfg = bootstrap_config(&a.resample, &a.scan, a.family)?;
    let res = resample::bootstrap(&template(a.family, &data)?, &data, &cfg)?;
    log_run(res.sim_time_mean_seconds, &res.warnings);
    let diagnostics = res.sequential_diagnostics(a.resample.trim)?;
    write_diagnostics(&diagnostics, a.resample.diagnostics.as_deref())?;
    emit(
        &WithDiagnostics {
            result: res,
            diagnostics,
        },
        &a.output,
    )
}

fn gof_cmd(a: GofArgs) -> Result<()> {
    let data = load(&a.input, Some(a.family))?;
    let cfg = bootstrap_config(&a.resample, &a.scan, a.family)?;
    let mode = match a.body_mode {
        Body::Empirical => BodyMode::Empirical,
        Body::Uniform => BodyMode::Uniform,
    };
    let res = resample::bootstrap_p(&template(a.family, &data)?, &data, &cfg, mode)?;
    log_run(res.bootstrap.sim_time_mean_seconds, &res.bootstrap.warnings);
    let diagnostics = res.sequential_diagnostics(a.resample.trim)?;
    write_diagnostics(&diagnostics, a.resample.diagnostics.as_deref())?;
    emit(
        &WithDiagnostics {
            result: res,
            diagnostics,
        },
        &a.output,
    )
}

fn compare_cmd(a: CompareArgs) -> Result<()> {
    if a.family.support() != a.against.support() {
        return Err(usage(format!(
            "{} and {} have different supports",
            a.family, a.against
        )));
    }
    let data = load(&a.input, Some(a.family))?;
    let xmin = match a.xmin {
        Some(x) => x,
        None => {
            fit::estimate_xmin(&template(a.family, &data)?, &data, &ScanOptions::default())?.xmin
        }
    };
    let (first, _) = fit_at(a.family, xmin, &data, None)?;
    let (second, _) = fit_at(a.against, xmin, &data, None)?;
    emit(&compare_distributions(&first, &second, &data)?, &a.output)
}

fn ccdf_cmd(a: CcdfArgs) -> Result<()> {
    let data = load(&a.input, a.family)?;
    let fitted = match a.family {
        None => None,
        Some(family) => {
            let model = match a.xmin {
                Some(xmin) => fit_at(family, xmin, &data, None)?.0,
                None => fit::estimate_xmin(&template(family, &data)?, &data, &Default::default())?
                    .model(family)?,
            };
            let xmin = model.xmin();
            let integral = family.support() == Support::Discrete;
            let grid = io::log_grid(xmin, data.max().max(xmin), a.points, integral);
            let anchor = io::ccdf_anchor(&data, xmin);
            let curve = io::fitted_curve(&model, &grid, CurveKind::Ccdf { anchor })?;
            let params = NamedParams {
                family,
                values: model.params().unwrap_or_default().to_vec(),
            };
            Some(Overlay {
                family,
                xmin,
                params,
                curve,
            })
        }
    };
    let report = CcdfReport {
        n: data.len(),
        empirical: io::empirical_ccdf(&data),
        fitted,
    };
    emit(&report, &a.output)
}

fn rand_cmd(a: RandArgs) -> Result<()> {
    use rand::SeedableRng;
    let model = Model::with_params(a.family, a.xmin, &a.params)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(a.seed);
    let mut table = Table::new(["x"]);
    for x in model.rand(a.n, &mut rng)? {
        table.push(vec![x]);
    }
    emit(&table, &a.output)
}

fn moment_cmd(a: MomentArgs) -> Result<()> {
    let model = Model::with_params(Family::ContinuousPowerLaw, a.xmin, &[a.alpha])?;
    let moments = a
        .orders
        .iter()
        .map(|&order| {
            Ok(MomentRow {
                order,
                moment: model.moment(order)?,
            })
        })
        .collect::<Result<_>>()?;
    let report = MomentReport {
        family: Family::ContinuousPowerLaw,
        xmin: a.xmin,
        alpha: a.alpha,
        moments,
    };
    emit(&report, &a.output)
}

fn fetch_cmd(a: FetchArgs) -> Result<()> {
    let status = std::process::Command::new("curl")
        .args([
            "--fail",
            "--silent",
            "--show-error",
            "--location",
            "--output",
        ])
        .arg(&a.output)
        .arg(&a.url)
        .status()
        .map_err(|e| CliError::Fetch(format!("cannot run curl: {e}")))?;
    if !status.success() {
        return Err(CliError::Fetch(format!(
            "curl failed for {} ({status})",
            a.url
        )));
    }
    log::info!("saved {} to {}", a.url, a.output.display());
    Ok(())
}

fn load(input: &InputArgs, family: Option<Family>) -> Result<Sample> {
    let declared = input.kind.map(|k| match k {
        Kind::Discrete => Support::Discrete,
        Kind::Continuous => Support::Continuous,
    });
    let kind = match (declared, family) {
        (Some(k), Some(f)) if k != f.support() => {
            return Err(usage(format!("--kind {k:?} does not match family {f}")))
        }
        (Some(k), _) => k,
        (None, Some(f)) => f.support(),
        (None, None) => Support::Discrete,
    };
    let format = match input.format {
        DataFormat::Lines => InputFormat::Lines,
        DataFormat::Csv => InputFormat::CsvColumn {
            column: input.column,
            header: input.header,
        },
        DataFormat::Freq => InputFormat::FrequencyTable,
    };
    let sample = match (&input.input, input.dataset) {
        (Some(path), _) => read(path, format, kind)?,
        (None, Some(Dataset::Moby)) => match std::env::var_os(DATA_DIR_VAR) {
            Some(dir) => {
                let path = PathBuf::from(dir).join("moby.txt");
                read(&path, InputFormat::Lines, kind)?
            }
            None if kind == Support::Discrete => io::moby(),
            None => Sample::new(io::moby().values().to_vec(), kind)?,
        },
        (None, None) => return Err(usage("no input given")),
    };
    Ok(sample)
}

fn read(path: &Path, format: InputFormat, kind: Support) -> Result<Sample> {
    io::load_sample_path(path, format, kind).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}

fn template(family: Family, data: &Sample) -> Result<Model> {
    Ok(Model::new(family, data.min())?)
}

fn fit_at(
    family: Family,
    xmin: f64,
    data: &Sample,
    grid: Option<&ParGrid>,
) -> Result<(Model, heavytail::ParsEstimate)> {
    let est = fit::estimate_pars(&Model::new(family, xmin)?, data, grid)?;
    Ok((Model::with_params(family, xmin, &est.params)?, est))
}

fn scan_options(flags: &ScanFlags, family: Family) -> Result<ScanOptions> {
    let pars = match (&flags.pars, &flags.pars2) {
        (None, _) => None,
        (Some(p), None) => Some(ParGrid::new(p.0.iter().map(|&v| vec![v]).collect())),
        (Some(p), Some(q)) => Some(ParGrid::product(&p.0, &q.0)),
    };
    let dims = if flags.pars2.is_some() { 2 } else { 1 };
    if pars.is_some() && dims != family.param_count() {
        return Err(usage(format!(
            "{family} has {} parameter(s) but the grid has {dims} axis(es)",
            family.param_count()
        )));
    }
    Ok(ScanOptions {
        xmins: flags.xmins.as_ref().map(|v| v.0.clone()),
        pars,
    })
}

fn bootstrap_config(
    r: &ResampleFlags,
    scan: &ScanFlags,
    family: Family,
) -> Result<BootstrapConfig> {
    if r.replicates == 0 {
        return Err(usage("--replicates must be positive"));
    }
    if !(0.0..1.0).contains(&r.trim) {
        return Err(usage(format!("--trim {} is outside [0, 1)", r.trim)));
    }
    Ok(BootstrapConfig {
        replicates: r.replicates,
        scan: scan_options(scan, family)?,
        workers: r.workers as usize,
        seed: r.seed,
    })
}

fn log_run(sim_time: f64, warnings: &[String]) {
    log::info!("mean simulation time {sim_time:.4} s per replicate");
    for w in warnings {
        log::warn!("{w}");
    }
}

fn write_diagnostics(table: &Table, path: Option<&Path>) -> Result<()> {
    if let Some(path) = path {
        io::write_csv(table, File::create(path).map_err(heavytail::Error::from)?)?;
    }
    Ok(())
}

fn emit<R: Report>(report: &R, out: &OutputArgs) -> Result<()> {
    let format = match out.output_format {
        Format::Json => OutputFormat::Json,
        Format::Csv => OutputFormat::Csv,
    };
    match &out.output {
        Some(path) => {
            let file = File::create(path).map_err(heavytail::Error::from)?;
            let mut sink = std::io::BufWriter::new(file);
            io::write_report(report, format, &mut sink)?;
            sink.flush().map_err(heavytail::Error::from)?;
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            io::write_report(report, format, &mut lock)?;
            lock.flush().map_err(heavytail::Error::from)?;
        }
    }
    Ok(())
}
