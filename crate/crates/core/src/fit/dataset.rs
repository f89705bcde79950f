use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::{dbm_to_mw, Scalar};

/// Header line every dataset file must start with.
pub const DATASET_HEADER: &str = "input_dbm,harvested_mw";

/// Measured rectifier transfer: input power in dBm against harvested power in mW.
#[derive(Debug, Clone, PartialEq)]
pub struct HarvesterDataset<T> {
    input_dbm: Vec<T>,
    harvested_mw: Vec<T>,
    pub name: String,
    pub source: Option<String>,
}

impl<T: Scalar> HarvesterDataset<T> {
    /// Validates `(dBm, mW)` pairs: finite, strictly increasing input,
    /// nonnegative output, at least two points.
    pub fn new(name: impl Into<String>, points: &[(T, T)]) -> Result<Self> {
        for (i, &(d, v)) in points.iter().enumerate() {
            check_point(i, d, v, (i > 0).then(|| points[i - 1].0))
                .map_err(|message| Error::Dataset { line: None, message })?;
        }
        if points.len() < 2 {
            return Err(Error::Dataset {
                line: None,
                message: format!("{} point(s), need at least 2", points.len()),
            });
        }
        Ok(HarvesterDataset {
            input_dbm: points.iter().map(|p| p.0).collect(),
            harvested_mw: points.iter().map(|p| p.1).collect(),
            name: name.into(),
            source: None,
        })
    }

    pub fn len(&self) -> usize {
        self.input_dbm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.input_dbm.is_empty()
    }

    pub fn input_dbm(&self) -> &[T] {
        &self.input_dbm
    }

    pub fn harvested_mw(&self) -> &[T] {
        &self.harvested_mw
    }

    /// Input powers converted to mW.
    pub fn input_mw(&self) -> impl Iterator<Item = T> + '_ {
        self.input_dbm.iter().map(|&d| dbm_to_mw(d))
    }

    /// `(input mW, harvested mW)` pairs.
    pub fn points_mw(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.input_mw().zip(self.harvested_mw.iter().copied())
    }
}

fn check_point<T: Scalar>(i: usize, d: T, v: T, prev: Option<T>) -> std::result::Result<(), String> {
    if !d.is_finite() || !v.is_finite() {
        return Err(format!("point {i}: non-finite value"));
    }
    if v < T::zero() {
        return Err(format!("point {i}: negative harvested power {v}"));
    }
    if let Some(p) = prev {
        if d <= p {
            return Err(format!("point {i}: input {d} dBm not above previous {p} dBm"));
        }
    }
    Ok(())
}

/// Reads a dataset CSV: the exact [`DATASET_HEADER`], then one
/// `dBm,mW` pair per line; lines starting with `#` are ignored.
pub fn load_dataset<T: Scalar>(path: impl AsRef<Path>) -> Result<HarvesterDataset<T>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Dataset {
        line: None,
        message: format!("{}: {e}", path.display()),
    })?;
    let mut ds = parse_dataset(file)?;
    ds.name = path
        .file_stem()
        .map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned());
    ds.source = Some(path.display().to_string());
    Ok(ds)
}

/// [`load_dataset`] on an arbitrary reader.
pub fn parse_dataset<T: Scalar, R: std::io::Read>(reader: R) -> Result<HarvesterDataset<T>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .flexible(true)
        .from_reader(reader);

    let mut header_seen = false;
    let mut points: Vec<(T, T)> = Vec::new();
    let mut last_line = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Dataset {
            line: e.position().map(|p| p.line()),
            message: e.to_string(),
        })?;
        let line = rec.position().map(|p| p.line());
        last_line = line;
        let fail = |message: String| Error::Dataset { line, message };
        if !header_seen {
            let got: Vec<&str> = rec.iter().collect();
            if got.join(",") != DATASET_HEADER {
                return Err(fail(format!(
                    "expected header `{DATASET_HEADER}`, found `{}`",
                    got.join(",")
                )));
            }
            header_seen = true;
            continue;
        }
        if rec.len() != 2 {
            return Err(fail(format!("expected 2 fields, found {}", rec.len())));
        }
        let parse = |s: &str| -> Result<T> {
            s.trim()
                .parse::<f64>()
                .ok()
                .and_then(T::from_f64)
                .ok_or_else(|| fail(format!("`{s}` is not a number")))
        };
        let (d, v) = (parse(&rec[0])?, parse(&rec[1])?);
        check_point(points.len(), d, v, points.last().map(|p| p.0)).map_err(fail)?;
        points.push((d, v));
    }
    if !header_seen {
        return Err(Error::Dataset {
            line: None,
            message: "empty file, missing header".into(),
        });
    }
    if points.len() < 2 {
        return Err(Error::Dataset {
            line: last_line,
            message: format!("{} data point(s), need at least 2", points.len()),
        });
    }
    HarvesterDataset::new("dataset", &points)
}
