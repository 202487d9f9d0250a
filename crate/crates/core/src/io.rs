//! File formats: JSON matrices, JSON reports and CSV tables.
//!
//! Floats are written with 17 significant digits and a lowercase exponent
//! (`1.7320508075688772e0`), with `-0` written as `0`, so every file
//! re-parses to the exact values that produced it.

use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use thiserror::Error;

use crate::geometry::{grid_angle, ConvexRegion, EllipseDisc};
use crate::linalg::ComplexMatrix;
use crate::quadratic::{Attainment, EllipsePrediction, QuadraticSignature};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed data: {0}")]
    Malformed(String),
}

/// 17 significant digits, lowercase exponent, `-0` and `+0` both `0`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.16e}")
}

/// JSON formatter that writes floats with [`fmt_f64`].
pub struct FloatFormatter<F>(F);

impl FloatFormatter<PrettyFormatter<'static>> {
    pub fn pretty() -> Self {
        FloatFormatter(PrettyFormatter::new())
    }
}

impl FloatFormatter<CompactFormatter> {
    pub fn compact() -> Self {
        FloatFormatter(CompactFormatter)
    }
}

impl<F: Formatter> Formatter for FloatFormatter<F> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        if value.is_finite() {
            writer.write_all(fmt_f64(value).as_bytes())
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn end_object_key<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_object_key(writer)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> std::io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Pretty JSON with [`fmt_f64`] floats and a trailing newline.
pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FloatFormatter::pretty());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

fn to_json_compact<T: Serialize>(value: &T) -> Result<String, IoError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FloatFormatter::compact());
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

pub fn complex_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// `{"n": n, "entries": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct MatrixFile {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(a: &ComplexMatrix) -> Self {
        let n = a.dim();
        Self {
            n,
            entries: (0..n).map(|i| a.row(i).iter().map(|&z| complex_pair(z)).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix, IoError> {
        if self.entries.len() != self.n || self.entries.iter().any(|r| r.len() != self.n) {
            return Err(IoError::Malformed(format!(
                "entries do not form a {0}x{0} array",
                self.n
            )));
        }
        if self.n == 0 {
            return Err(IoError::Malformed("empty matrix".into()));
        }
        let data: Vec<Complex64> = self.entries.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_row_major(self.n, data).map_err(|e| IoError::Malformed(e.to_string()))
    }
}

/// One matrix row per line.
pub fn matrix_to_json(a: &ComplexMatrix) -> Result<String, IoError> {
    let file = MatrixFile::from_matrix(a);
    let mut out = format!("{{\n  \"n\": {},\n  \"entries\": [\n", file.n);
    for (i, row) in file.entries.iter().enumerate() {
        out.push_str("    ");
        out.push_str(&to_json_compact(row)?);
        out.push_str(if i + 1 < file.n { ",\n" } else { "\n" });
    }
    out.push_str("  ]\n}\n");
    Ok(out)
}

pub fn matrix_from_json(text: &str) -> Result<ComplexMatrix, IoError> {
    let file: MatrixFile = serde_json::from_str(text)?;
    file.to_matrix()
}

pub fn write_matrix(path: &Path, a: &ComplexMatrix) -> Result<(), IoError> {
    std::fs::write(path, matrix_to_json(a)?)?;
    Ok(())
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix, IoError> {
    matrix_from_json(&std::fs::read_to_string(path)?)
}

pub const BOUNDARY_HEADER: [&str; 4] = ["psi", "h", "re(z)", "im(z)"];

/// Rows `psi,h,re(z),im(z)`.
pub fn write_boundary<W: Write>(writer: W, region: &ConvexRegion) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(BOUNDARY_HEADER)?;
    for ((&psi, &h), z) in region.angles.iter().zip(&region.support_values).zip(&region.boundary_points) {
        w.write_record([fmt_f64(psi), fmt_f64(h), fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    w.flush()?;
    Ok(())
}

fn parse_field(record: &csv::StringRecord, i: usize) -> Result<f64, IoError> {
    let field = record.get(i).ok_or_else(|| IoError::Malformed(format!("missing column {i}")))?;
    field
        .trim()
        .parse()
        .map_err(|_| IoError::Malformed(format!("not a number: {field:?}")))
}

/// Reads a boundary table written on a uniform angle grid.
pub fn read_boundary<R: Read>(reader: R) -> Result<ConvexRegion, IoError> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    if header.iter().collect::<Vec<_>>() != BOUNDARY_HEADER {
        return Err(IoError::Malformed(format!("unexpected header {header:?}")));
    }
    let mut psi = Vec::new();
    let mut h = Vec::new();
    let mut z = Vec::new();
    for record in r.records() {
        let record = record?;
        psi.push(parse_field(&record, 0)?);
        h.push(parse_field(&record, 1)?);
        z.push(Complex64::new(parse_field(&record, 2)?, parse_field(&record, 3)?));
    }
    let m = psi.len();
    for (i, &p) in psi.iter().enumerate() {
        if (p - grid_angle(i, m)).abs() > 1e-12 {
            return Err(IoError::Malformed(format!("row {i}: angle {p} is off the uniform grid")));
        }
    }
    ConvexRegion::new(h, z).map_err(|e| IoError::Malformed(e.to_string()))
}

/// One truncation size of a sweep. Empty cells stand for unavailable values.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub norm: f64,
    pub ess_estimate: Option<f64>,
    pub major_computed: Option<f64>,
    pub major_predicted: Option<f64>,
}

pub fn write_sweep<W: Write>(writer: W, rows: &[SweepRow]) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["N", "norm", "ess_estimate", "major_computed", "major_predicted"])?;
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for row in rows {
        w.write_record([
            row.n.to_string(),
            fmt_f64(row.norm),
            opt(row.ess_estimate),
            opt(row.major_computed),
            opt(row.major_predicted),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_sweep<R: Read>(reader: R) -> Result<Vec<SweepRow>, IoError> {
    let mut r = csv::Reader::from_reader(reader);
    let rows = r.deserialize().collect::<Result<Vec<SweepRow>, _>>()?;
    Ok(rows)
}

/// Ellipse block `{"foci", "major", "minor", "closed"}`.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct EllipseBlock {
    pub foci: [[f64; 2]; 2],
    pub major: f64,
    pub minor: f64,
    pub closed: String,
}

impl EllipseBlock {
    pub fn new(e: &EllipseDisc) -> Self {
        let (f1, f2) = e.foci();
        Self {
            foci: [complex_pair(f1), complex_pair(f2)],
            major: e.major_axis(),
            minor: e.minor_axis(),
            closed: e.boundary.as_yes_no().into(),
        }
    }
}

impl From<&EllipsePrediction> for EllipseBlock {
    fn from(p: &EllipsePrediction) -> Self {
        Self::new(&p.ellipse)
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct SignatureBlock {
    pub mu: [f64; 2],
    pub nu: [f64; 2],
    pub lambda: [[f64; 2]; 2],
    pub s: f64,
    pub residual: f64,
    pub quadratic: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub prediction: Option<EllipseBlock>,
}

impl SignatureBlock {
    pub fn new(sig: &QuadraticSignature, prediction: Option<&EllipsePrediction>) -> Self {
        Self {
            mu: complex_pair(sig.mu),
            nu: complex_pair(sig.nu),
            lambda: [complex_pair(sig.lambda1), complex_pair(sig.lambda2)],
            s: sig.s,
            residual: sig.residual,
            quadratic: sig.is_quadratic(),
            prediction: prediction.map(EllipseBlock::from),
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct OracleBlock {
    pub trials: usize,
    pub seed: u64,
    /// Largest distance by which a sampled point leaves the computed outer
    /// polygon; rounding level when the computation is right.
    pub max_outer_excess: f64,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct ComputationBlock {
    pub grid: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hausdorff_vs_prediction: Option<f64>,
    pub witness_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle: Option<OracleBlock>,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct SandwichBlock {
    pub outer: EllipseBlock,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inner: Option<EllipseBlock>,
    pub grid: usize,
    pub outer_violation: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub inner_violation: Option<f64>,
    pub outer_gap: f64,
}

impl From<&crate::cnumrange::SandwichReport> for SandwichBlock {
    fn from(r: &crate::cnumrange::SandwichReport) -> Self {
        Self {
            outer: EllipseBlock::new(&r.outer),
            inner: r.inner.as_ref().map(EllipseBlock::new),
            grid: r.grid,
            outer_violation: r.outer_violation,
            inner_violation: r.inner_violation,
            outer_gap: r.outer_gap,
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct PredictorBlock {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub norm: Option<f64>,
    pub ess_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ellipse_w: Option<EllipseBlock>,
    pub ellipse_wess: EllipseBlock,
    pub attained: Attainment,
    pub formula: String,
}

impl From<&crate::operators::PredictorResult> for PredictorBlock {
    fn from(p: &crate::operators::PredictorResult) -> Self {
        Self {
            norm: p.norm,
            ess_norm: p.ess_norm,
            ellipse_w: p.ellipse_w.as_ref().map(EllipseBlock::new),
            ellipse_wess: EllipseBlock::new(&p.ellipse_wess),
            attained: p.attained,
            formula: p.provenance.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct Provenance {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub version: String,
    /// Seconds since the Unix epoch.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timestamp: Option<u64>,
}

impl Provenance {
    pub fn new(command: impl Into<String>, seed: Option<u64>, with_timestamp: bool) -> Self {
        let timestamp = with_timestamp
            .then(|| std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).ok())
            .flatten()
            .map(|d| d.as_secs());
        Self {
            command: command.into(),
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            timestamp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub signature: Option<SignatureBlock>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub predictor: Option<PredictorBlock>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub computation: Option<ComputationBlock>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sandwich: Option<SandwichBlock>,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(provenance: Provenance) -> Self {
        Self {
            c: None,
            signature: None,
            predictor: None,
            computation: None,
            sandwich: None,
            provenance,
        }
    }

    pub fn to_json(&self) -> Result<String, IoError> {
        to_json_pretty(self)
    }

    pub fn from_json(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }
}
