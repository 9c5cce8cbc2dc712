//! JSON and CSV formats for curves, gauges and results.
//!
//! Floats are written in shortest round-trip form, so a curve or gauge
//! written and read back has bit-identical samples.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::annulus::{relative_support, AnnulusResult};
use crate::curve::SupportCurve;
use crate::error::GeomError;
use crate::gauge::Gauge;
use crate::grid::AngleGrid;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error(transparent)]
    Stream(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl IoError {
    /// True for failures of the filesystem rather than of the content.
    pub fn is_io(&self) -> bool {
        match self {
            IoError::File { .. } | IoError::Stream(_) => true,
            IoError::Csv(e) => e.is_io_error(),
            IoError::Json(e) => e.is_io(),
            IoError::Geom(_) => false,
        }
    }
}

pub type IoResult<T> = std::result::Result<T, IoError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFile {
    pub n: usize,
    pub h: Vec<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeFile {
    pub n: usize,
    pub h_tilde: Vec<f64>,
    /// Informational; recomputed on load.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub label: Option<String>,
}

impl From<&SupportCurve> for CurveFile {
    fn from(c: &SupportCurve) -> Self {
        CurveFile { n: c.len(), h: c.support().to_vec(), label: c.label().map(str::to_owned) }
    }
}

impl CurveFile {
    pub fn into_curve(self) -> IoResult<SupportCurve> {
        let grid = AngleGrid::new(self.n)?;
        let curve = SupportCurve::from_samples(grid, self.h)?;
        Ok(match self.label {
            Some(l) => curve.with_label(l),
            None => curve,
        })
    }
}

impl From<&Gauge> for GaugeFile {
    fn from(g: &Gauge) -> Self {
        GaugeFile {
            n: g.grid().len(),
            h_tilde: g.support().to_vec(),
            alpha: Some(g.alpha()),
            label: g.label().map(str::to_owned),
        }
    }
}

impl GaugeFile {
    pub fn into_gauge(self) -> IoResult<Gauge> {
        let grid = AngleGrid::new(self.n)?;
        let gauge = Gauge::from_support(&grid, self.h_tilde)?;
        Ok(match self.label {
            Some(l) => gauge.with_label(l),
            None => gauge,
        })
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> IoResult<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> IoResult<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn curve_to_json(curve: &SupportCurve) -> IoResult<String> {
    to_json(&CurveFile::from(curve))
}

pub fn curve_from_json(text: &str) -> IoResult<SupportCurve> {
    from_json::<CurveFile>(text)?.into_curve()
}

pub fn gauge_to_json(gauge: &Gauge) -> IoResult<String> {
    to_json(&GaugeFile::from(gauge))
}

pub fn gauge_from_json(text: &str) -> IoResult<Gauge> {
    from_json::<GaugeFile>(text)?.into_gauge()
}

fn open(path: &Path) -> IoResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

fn create(path: &Path) -> IoResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn read_text(path: &Path) -> IoResult<String> {
    let mut s = String::new();
    open(path)?.read_to_string(&mut s)?;
    Ok(s)
}

pub fn write_text(path: &Path, text: &str) -> IoResult<()> {
    let mut w = create(path)?;
    w.write_all(text.as_bytes())?;
    if !text.ends_with('\n') {
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_curve(path: &Path) -> IoResult<SupportCurve> {
    curve_from_json(&read_text(path)?)
}

pub fn load_gauge(path: &Path) -> IoResult<Gauge> {
    gauge_from_json(&read_text(path)?)
}

/// Writes serializable rows as CSV with a header line.
pub fn write_csv<W: Write, T: Serialize>(w: W, rows: impl IntoIterator<Item = T>) -> IoResult<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> IoResult<()> {
    write_csv(create(path)?, rows)
}

pub fn read_csv<R: Read, T: DeserializeOwned>(r: R) -> IoResult<Vec<T>> {
    csv::Reader::from_reader(r).deserialize().map(|row| row.map_err(IoError::from)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub theta: f64,
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
    pub k: f64,
}

/// `(theta, h, h', h'', k)` per node.
pub fn curve_rows(curve: &SupportCurve) -> Vec<CurveRow> {
    let (dh, d2h) = curve.derivatives();
    let k = curve.curvature();
    curve
        .grid()
        .thetas()
        .enumerate()
        .map(|(j, theta)| CurveRow { theta, h: curve.support()[j], dh: dh[j], d2h: d2h[j], k: k[j] })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub theta: f64,
    pub g: f64,
    pub rho_in: f64,
    pub rho_out: f64,
}

/// Relative support `g(theta)` at the annulus center, with the two radii.
pub fn annulus_profile(curve: &SupportCurve, gauge: &Gauge, result: &AnnulusResult) -> IoResult<Vec<ProfileRow>> {
    let g = relative_support(curve, gauge, result.center)?;
    Ok(curve
        .grid()
        .thetas()
        .zip(g)
        .map(|(theta, g)| ProfileRow { theta, g, rho_in: result.rho_in, rho_out: result.rho_out })
        .collect())
}
