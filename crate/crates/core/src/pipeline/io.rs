use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::PointCloud;

/// Point-cloud file formats.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    /// Whitespace-separated coordinates, one point per line.
    Xyz,
    /// Comma-separated coordinates with an optional header row.
    Csv,
    /// Object File Format; only the vertex block is read.
    Off,
}

impl InputFormat {
    /// Guesses the format from a file extension, defaulting to XYZ.
    pub fn from_path(path: &Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("csv") => InputFormat::Csv,
            Some("off") => InputFormat::Off,
            _ => InputFormat::Xyz,
        }
    }
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xyz" | "txt" => Ok(InputFormat::Xyz),
            "csv" => Ok(InputFormat::Csv),
            "off" => Ok(InputFormat::Off),
            other => Err(Error::Parse {
                line: 0,
                message: format!("unknown format {other:?}"),
            }),
        }
    }
}

pub fn load_points(path: &Path, format: InputFormat) -> Result<PointCloud> {
    parse_points(&fs::read_to_string(path)?, format)
}

pub fn parse_points(text: &str, format: InputFormat) -> Result<PointCloud> {
    let rows = match format {
        InputFormat::Xyz => xyz_rows(text)?,
        InputFormat::Csv => csv_rows(text)?,
        InputFormat::Off => off_rows(text)?,
    };
    if rows.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let dim = rows[0].1.len();
    if dim != 2 && dim != 3 {
        return Err(Error::UnsupportedDimension(dim));
    }
    for (line, row) in &rows {
        if row.len() != dim {
            return Err(Error::Parse {
                line: *line,
                message: format!("expected {dim} coordinates, found {}", row.len()),
            });
        }
        for tok in row {
            if !is_number(tok) {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("{tok:?} is not a decimal number"),
                });
            }
        }
    }
    let coords: Vec<Vec<String>> = rows.into_iter().map(|(_, r)| r).collect();
    PointCloud::from_decimal_rows(&coords)
}

fn is_number(tok: &str) -> bool {
    tok.parse::<f64>().is_ok_and(f64::is_finite) && tok.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b))
}

type Rows = Vec<(usize, Vec<String>)>;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn xyz_rows(text: &str) -> Result<Rows> {
    Ok(content_lines(text)
        .map(|(k, l)| (k, l.split_whitespace().map(str::to_string).collect()))
        .collect())
}

fn csv_rows(text: &str) -> Result<Rows> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (k, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(k + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(k + 1, |p| p.line() as usize);
        let fields: Vec<String> = rec.iter().map(str::to_string).collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        // a first row that is not numeric is a header
        if rows.is_empty() && k == 0 && !fields.iter().all(|f| is_number(f)) {
            continue;
        }
        rows.push((line, fields));
    }
    Ok(rows)
}

fn off_rows(text: &str) -> Result<Rows> {
    let mut lines = content_lines(text);
    let (line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing OFF header".into(),
    })?;
    let mut tokens: Vec<&str> = header.split_whitespace().collect();
    let keyword = tokens.first().copied().unwrap_or("");
    if !keyword.ends_with("OFF") {
        return Err(Error::Parse {
            line,
            message: "missing OFF header".into(),
        });
    }
    tokens.remove(0);
    let mut counts_line = line;
    if tokens.is_empty() {
        let (l, c) = lines.next().ok_or(Error::Parse {
            line,
            message: "missing vertex count".into(),
        })?;
        counts_line = l;
        tokens = c.split_whitespace().collect();
    }
    let nv: usize = tokens.first().and_then(|t| t.parse().ok()).ok_or(Error::Parse {
        line: counts_line,
        message: "invalid vertex count".into(),
    })?;
    let mut rows = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, c) = lines.next().ok_or(Error::Parse {
            line: counts_line,
            message: format!("expected {nv} vertices"),
        })?;
        let coords: Vec<String> = c.split_whitespace().take(3).map(str::to_string).collect();
        rows.push((l, coords));
    }
    Ok(rows)
}
