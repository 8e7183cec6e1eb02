use clap::{Args, Parser, Subcommand, ValueEnum};
use heavytail::{fit, Family};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "heavytail",
    version,
    about = "Fit, test and compare heavy-tailed distributions",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate xmin and the tail parameters, or fit at a fixed --xmin.
    Fit(FitArgs),
    /// Emit the KS distance for every xmin candidate.
    Scan(ScanArgs),
    /// Bootstrap the uncertainty of xmin and the parameters.
    Bootstrap(BootstrapArgs),
    /// Bootstrap goodness-of-fit p-value.
    Gof(GofArgs),
    /// Vuong likelihood-ratio test between two families at a shared xmin.
    Compare(CompareArgs),
    /// Empirical complementary CDF, optionally with a fitted overlay.
    Ccdf(CcdfArgs),
    /// Draw a synthetic sample from a parameterized model.
    Rand(RandArgs),
    /// Moments of a continuous power law, flagging divergent orders.
    Moment(MomentArgs),
    /// Download a data file with curl.
    Fetch(FetchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DataFormat {
    /// One value per line.
    Lines,
    /// Delimited rows, values taken from --column.
    Csv,
    /// Two columns: value, count.
    Freq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Discrete,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dataset {
    Moby,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Body {
    Empirical,
    Uniform,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Data file.
    #[arg(
        long,
        short,
        required_unless_present = "dataset",
        conflicts_with = "dataset"
    )]
    pub input: Option<PathBuf>,
    /// Bundled data set (HEAVYTAIL_DATA_DIR overrides its location).
    #[arg(long)]
    pub dataset: Option<Dataset>,
    #[arg(long, value_enum, default_value_t = DataFormat::Lines)]
    pub format: DataFormat,
    /// Zero-based column for --format csv.
    #[arg(long, default_value_t = 0)]
    pub column: usize,
    /// First row of a csv file is a header.
    #[arg(long)]
    pub header: bool,
    /// Sample support; defaults to the family's.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub output_format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanFlags {
    /// xmin candidates: a list `2,4,8` or a range `from:to:by`.
    #[arg(long, value_parser = parse_values)]
    pub xmins: Option<Values>,
    /// Parameter grid for one-parameter families: a list or `from:to:by`.
    #[arg(long, value_parser = parse_values)]
    pub pars: Option<Values>,
    /// Second parameter axis; the grid is the product with --pars.
    #[arg(long, value_parser = parse_values, requires = "pars")]
    pub pars2: Option<Values>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Fit at this threshold instead of scanning.
    #[arg(long, conflicts_with = "xmins")]
    pub xmin: Option<f64>,
    #[command(flatten)]
    pub scan: ScanFlags,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[command(flatten)]
    pub scan: ScanFlags,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ResampleFlags {
    /// Number of bootstrap replicates.
    #[arg(short = 'B', long = "replicates", default_value_t = 5000)]
    pub replicates: usize,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: u64,
    #[arg(long)]
    pub seed: u64,
    /// Fraction of leading replicates dropped from the diagnostics.
    #[arg(long, default_value_t = 0.0)]
    pub trim: f64,
    /// Also write the sequential diagnostics table here, as CSV.
    #[arg(long)]
    pub diagnostics: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[command(flatten)]
    pub resample: ResampleFlags,
    #[command(flatten)]
    pub scan: ScanFlags,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GofArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long, value_enum, default_value_t = Body::Empirical)]
    pub body_mode: Body,
    #[command(flatten)]
    pub resample: ResampleFlags,
    #[command(flatten)]
    pub scan: ScanFlags,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// First family (positive statistics favour it).
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// Second family.
    #[arg(long, value_parser = parse_family)]
    pub against: Family,
    /// Shared threshold; estimated for --family when omitted.
    #[arg(long)]
    pub xmin: Option<f64>,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CcdfArgs {
    /// Overlay this family, fitted to the tail.
    #[arg(long, value_parser = parse_family)]
    pub family: Option<Family>,
    /// Threshold for the overlay; estimated when omitted.
    #[arg(long, requires = "family")]
    pub xmin: Option<f64>,
    /// Number of log-spaced points in the overlay.
    #[arg(long, default_value_t = 100, requires = "family")]
    pub points: usize,
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct RandArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long, default_value_t = 1.0)]
    pub xmin: f64,
    /// Model parameters, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub params: Vec<f64>,
    /// Sample size.
    #[arg(short, long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MomentArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub xmin: f64,
    /// Moment orders, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub orders: Vec<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct FetchArgs {
    #[arg(long, default_value = crate::MOBY_URL)]
    pub url: String,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Values(pub Vec<f64>);

fn parse_values(s: &str) -> Result<Values, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    match parts.as_slice() {
        [list] => list
            .split(',')
            .map(num)
            .collect::<Result<_, _>>()
            .map(Values),
        [from, to, by] => fit::seq(num(from)?, num(to)?, num(by)?)
            .map(Values)
            .map_err(|e| e.to_string()),
        _ => Err(format!("`{s}` is neither a list nor from:to:by")),
    }
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|_| {
        let tags: Vec<_> = Family::ALL.iter().map(|f| f.tag()).collect();
        format!("unknown family `{s}`; expected one of {}", tags.join(", "))
    })
}
