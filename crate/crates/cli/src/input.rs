//! Sample ingestion: a headed CSV with a `value` column and an optional
//! `status` column (1 = observed, 0 = censored).

use std::fs::File;
use std::io::Read;
use std::path::Path;

use tailindex::CensoredSample;

use crate::error::{CliError, CliResult};

pub fn read_sample(path: &Path) -> CliResult<CensoredSample> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_sample(file)
}

/// Parses CSV text. Line numbers in errors are 1-based and count the header.
pub fn parse_sample<R: Read>(reader: R) -> CliResult<CensoredSample> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.eq_ignore_ascii_case(name));
    let value_col = find("value").ok_or_else(|| CliError::Parse {
        line: 1,
        message: format!("header must name a 'value' column, found '{}'", headers.iter().collect::<Vec<_>>().join(",")),
    })?;
    let status_col = find("status");

    let mut values = Vec::new();
    let mut codes = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |col: usize, name: &str| {
            record.get(col).ok_or_else(|| CliError::Parse {
                line,
                message: format!("missing {name} field"),
            })
        };
        let raw = field(value_col, "value")?;
        let v: f64 = raw.parse().map_err(|_| CliError::Parse {
            line,
            message: format!("value '{raw}' is not a number"),
        })?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::Parse {
                line,
                message: format!("value {raw} must be positive and finite"),
            });
        }
        values.push(v);
        if let Some(col) = status_col {
            let raw = field(col, "status")?;
            let code = match raw {
                "1" => 1,
                "0" => 0,
                other => {
                    return Err(CliError::Parse {
                        line,
                        message: format!("status '{other}' must be 0 or 1"),
                    })
                }
            };
            codes.push(code);
        }
    }
    let sample = if status_col.is_some() {
        CensoredSample::from_codes(values, &codes)?
    } else {
        CensoredSample::complete(values)?
    };
    Ok(sample)
}
