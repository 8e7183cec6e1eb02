use super::Sample;
use crate::dists::Support;
use crate::error::{Error, Result};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

const MOBY: &str = include_str!("../../data/moby.txt");

/// Layout of a text data source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One observation per line.
    Lines,
    /// Delimited rows; observations are taken from one zero-based column.
    CsvColumn { column: usize, header: bool },
    /// Two columns `value,count`, expanded to `count` copies of `value`.
    FrequencyTable,
}

/// Reads a sample. Blank lines and lines starting with `#` are skipped;
/// fields may be separated by commas or whitespace.
pub fn load_sample<R: Read>(source: R, format: InputFormat, kind: Support) -> Result<Sample> {
    let mut values = Vec::new();
    let mut seen_header = false;
    for (idx, line) in BufReader::new(source).lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        match format {
            InputFormat::Lines => {
                if fields.len() != 1 {
                    return Err(parse_error(lineno, "expected one value per line"));
                }
                values.push(observation(fields[0], lineno, kind)?);
            }
            InputFormat::CsvColumn { column, header } => {
                if header && !seen_header {
                    seen_header = true;
                    continue;
                }
                let field = fields.get(column).ok_or_else(|| {
                    parse_error(lineno, &format!("missing column {}", column + 1))
                })?;
                values.push(observation(field, lineno, kind)?);
            }
            InputFormat::FrequencyTable => {
                if fields.len() != 2 {
                    return Err(parse_error(lineno, "expected `value,count`"));
                }
                let value = observation(fields[0], lineno, kind)?;
                let count: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_error(lineno, &format!("invalid count {:?}", fields[1])))?;
                values.extend(std::iter::repeat_n(value, count));
            }
        }
    }
    if values.is_empty() {
        return Err(Error::Domain("no observations in input".into()));
    }
    Sample::new(values, kind)
}

pub fn load_sample_path(path: &Path, format: InputFormat, kind: Support) -> Result<Sample> {
    load_sample(File::open(path)?, format, kind)
}

fn parse_error(line: usize, message: &str) -> Error {
    Error::Parse {
        line,
        message: message.to_string(),
    }
}

fn observation(token: &str, line: usize, kind: Support) -> Result<f64> {
    let v: f64 = token
        .parse()
        .map_err(|_| parse_error(line, &format!("not a number: {token:?}")))?;
    if !v.is_finite() {
        return Err(parse_error(
            line,
            &format!("not a finite number: {token:?}"),
        ));
    }
    if v <= 0.0 {
        return Err(Error::Domain(format!("line {line}: {v} is not positive")));
    }
    if kind == Support::Discrete && v.fract() != 0.0 {
        return Err(Error::KindMismatch { line, value: v });
    }
    Ok(v)
}

/// Word frequencies from Moby Dick: one count per distinct word.
pub fn moby() -> Sample {
    load_sample(MOBY.as_bytes(), InputFormat::Lines, Support::Discrete)
        .expect("bundled data is valid")
}

/// Writes one value per line in shortest round-trip form, suitable for
/// reloading with [`InputFormat::Lines`].
pub fn write_values<W: std::io::Write>(sample: &Sample, mut sink: W) -> Result<()> {
    for v in sample.values() {
        writeln!(sink, "{v}")?;
    }
    Ok(())
}
