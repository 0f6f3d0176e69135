//! Dataset loading, bundled fixtures and result (de)serialization.
//!
//! Results are written deterministically: JSON objects keep a fixed key
//! order, CSV columns are fixed, floats carry 17 significant digits so that
//! reading a file back gives bit-identical values, and every file is UTF-8
//! with LF line endings.

use std::fmt;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ndarray::Array2;
use serde_json::{Map, Number, Value};

use crate::discern::{DiscernResult, KEstimationCurve, MIN_ESTIMATED_K};
use crate::error::{Error, Result};
use crate::kestimators::{ScanMethod, ScanResult};
use crate::kmeans::ClusteringResult;
use crate::metrics::EvaluationReport;
use crate::types::{normalize_labels, CentroidSet, Dataset, LabelVector, MetricKind};

/// Where and how to read a feature matrix and its optional labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub features_path: PathBuf,
    /// Separate labels file: one label per row, taken from its last column.
    pub labels_path: Option<PathBuf>,
    /// Zero-based column of the features file holding the labels.
    pub label_column: Option<usize>,
    pub delimiter: u8,
    /// Whether the first record of the features file is a header.
    pub has_header: bool,
    pub labels_has_header: bool,
    pub metric: MetricKind,
}

impl DatasetSpec {
    /// Comma-separated (tab for `.tsv`), no header, no labels, Euclidean.
    pub fn new(features_path: impl Into<PathBuf>) -> Self {
        let features_path = features_path.into();
        let delimiter = match features_path.extension().and_then(|e| e.to_str()) {
            Some("tsv") | Some("tab") => b'\t',
            _ => b',',
        };
        DatasetSpec {
            features_path,
            labels_path: None,
            label_column: None,
            delimiter,
            has_header: false,
            labels_has_header: false,
            metric: MetricKind::default(),
        }
    }

    pub fn with_labels_file(mut self, path: impl Into<PathBuf>) -> Self {
        self.labels_path = Some(path.into());
        self
    }

    pub fn with_label_column(mut self, column: usize) -> Self {
        self.label_column = Some(column);
        self
    }

    pub fn with_delimiter(mut self, delimiter: u8) -> Self {
        self.delimiter = delimiter;
        self
    }

    pub fn with_header(mut self, has_header: bool) -> Self {
        self.has_header = has_header;
        self
    }

    pub fn with_labels_header(mut self, has_header: bool) -> Self {
        self.labels_has_header = has_header;
        self
    }

    pub fn with_metric(mut self, metric: MetricKind) -> Self {
        self.metric = metric;
        self
    }
}

/// Reads and validates the dataset described by `spec`.
///
/// Labels become contiguous ids: integer labels keep their numeric order,
/// anything else is numbered by first appearance.
pub fn load_dataset(spec: &DatasetSpec) -> Result<Dataset> {
    if spec.labels_path.is_some() && spec.label_column.is_some() {
        return Err(Error::Invalid(
            "give either a labels file or a label column, not both".into(),
        ));
    }
    let text = read_text(&spec.features_path)?;
    let (features, column_labels) = parse_features(
        &text,
        &spec.features_path,
        spec.delimiter,
        spec.has_header,
        spec.label_column,
    )?;
    let raw_labels = match &spec.labels_path {
        Some(path) => {
            let labels = parse_label_file(&read_text(path)?, path, spec.delimiter, spec.labels_has_header)?;
            if labels.len() != features.nrows() {
                return Err(Error::LengthMismatch {
                    features: features.nrows(),
                    labels: labels.len(),
                });
            }
            Some(labels)
        }
        None => column_labels,
    };
    let data = Dataset::new(features, spec.metric)?;
    match raw_labels {
        Some(raw) => data.with_labels(label_ids(&raw)),
        None => Ok(data),
    }
}

/// Returns the first record of a delimited file when every field in it is
/// non-numeric, which is taken to mean the file has a header.
pub fn sniff_header(path: &Path, delimiter: u8) -> Result<Option<Vec<String>>> {
    let text = read_text(path)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(false)
        .flexible(true)
        .from_reader(text.as_bytes());
    let Some(first) = reader.records().next() else {
        return Ok(None);
    };
    let first = first.map_err(|e| csv_error(path, e))?;
    let fields: Vec<String> = first.iter().map(|f| f.trim().to_string()).collect();
    let numeric = |f: &String| f.parse::<f64>().is_ok();
    Ok((!fields.is_empty() && !fields.iter().any(numeric)).then_some(fields))
}

fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::io(path, e))?;
    Ok(text)
}

fn csv_error(path: &Path, err: csv::Error) -> Error {
    let (line, column) = match err.position() {
        Some(pos) => (pos.line(), 0),
        None => (0, 0),
    };
    let message = match err.kind() {
        csv::ErrorKind::UnequalLengths { expected_len, len, .. } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => err.to_string(),
    };
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message,
    }
}

type Features = (Array2<f64>, Option<Vec<String>>);

fn parse_features(
    text: &str,
    path: &Path,
    delimiter: u8,
    has_header: bool,
    label_column: Option<usize>,
) -> Result<Features> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(has_header)
        .from_reader(text.as_bytes());
    let mut values = Vec::new();
    let mut labels = label_column.map(|_| Vec::new());
    let mut width = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if let Some(col) = label_column {
            if col >= record.len() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    column: col + 1,
                    message: format!("label column {col} out of range for {} fields", record.len()),
                });
            }
        }
        for (column, field) in record.iter().enumerate() {
            if Some(column) == label_column {
                if let Some(labels) = labels.as_mut() {
                    labels.push(field.trim().to_string());
                }
                continue;
            }
            let value: f64 = field.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                column: column + 1,
                message: format!("'{field}' is not a number"),
            })?;
            if !value.is_finite() {
                let feature = column - usize::from(label_column.is_some_and(|c| c < column));
                return Err(Error::NonFinite { row: rows, column: feature });
            }
            values.push(value);
        }
        let w = record.len() - usize::from(label_column.is_some());
        width.get_or_insert(w);
        rows += 1;
    }
    let width = width.unwrap_or(0);
    if rows == 0 || width == 0 {
        return Err(Error::Invalid(format!("{}: no feature values", path.display())));
    }
    let features = Array2::from_shape_vec((rows, width), values).expect("rectangular records");
    Ok((features, labels))
}

fn parse_label_file(text: &str, path: &Path, delimiter: u8, has_header: bool) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .has_headers(has_header)
        .flexible(true)
        .from_reader(text.as_bytes());
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        match record.iter().next_back() {
            Some(label) if !label.trim().is_empty() => labels.push(label.trim().to_string()),
            _ => {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: record.position().map_or(0, |p| p.line()),
                    column: record.len().max(1),
                    message: "missing label".into(),
                })
            }
        }
    }
    Ok(labels)
}

fn label_ids(raw: &[String]) -> Vec<usize> {
    let numeric: Option<Vec<i64>> = raw.iter().map(|s| s.parse().ok()).collect();
    match numeric {
        Some(values) => {
            let mut distinct = values.clone();
            distinct.sort_unstable();
            distinct.dedup();
            values
                .iter()
                .map(|v| distinct.binary_search(v).expect("present"))
                .collect()
        }
        None => normalize_labels(raw),
    }
}

/// Datasets bundled with the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Iris,
    Wine,
}

impl Fixture {
    pub const ALL: [Fixture; 2] = [Fixture::Iris, Fixture::Wine];

    pub fn name(self) -> &'static str {
        match self {
            Fixture::Iris => "iris",
            Fixture::Wine => "wine",
        }
    }

    /// Metric conventionally used for this dataset.
    pub fn default_metric(self) -> MetricKind {
        match self {
            Fixture::Iris => MetricKind::Cosine,
            Fixture::Wine => MetricKind::Euclidean,
        }
    }

    pub fn label_column(self) -> usize {
        match self {
            Fixture::Iris => 4,
            Fixture::Wine => 0,
        }
    }

    /// Raw CSV text, header included.
    pub fn csv(self) -> &'static str {
        match self {
            Fixture::Iris => include_str!("../../../fixtures/iris.csv"),
            Fixture::Wine => include_str!("../../../fixtures/wine.csv"),
        }
    }

    /// Loads the fixture with its default metric and ground-truth labels.
    pub fn load(self) -> Result<Dataset> {
        self.load_with(self.default_metric())
    }

    pub fn load_with(self, metric: MetricKind) -> Result<Dataset> {
        let origin = PathBuf::from(format!("<{}>", self.name()));
        let (features, labels) = parse_features(self.csv(), &origin, b',', true, Some(self.label_column()))?;
        let labels = labels.expect("label column given");
        Dataset::new(features, metric)?.with_labels(label_ids(&labels))
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iris" => Ok(Fixture::Iris),
            "wine" => Ok(Fixture::Wine),
            other => Err(Error::Invalid(format!("unknown fixture '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn extension(self) -> &'static str {
        self.as_str()
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Invalid(format!("unknown format '{other}'"))),
        }
    }
}

/// Formats `v` like C's `%.17g`: enough digits to read back exactly.
pub fn format_g17(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        trim_fraction(&format!("{:.*}", (16 - exp) as usize, v)).to_string()
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// A result type that can be written to and read back from disk.
///
/// Loading what was saved reproduces the value exactly. CSV is only offered
/// for flat results; composite results are JSON-only.
pub trait Persist: Sized {
    const KIND: &'static str;

    fn to_json(&self) -> Result<Value>;
    fn from_json(value: &Value) -> Result<Self>;

    fn to_csv(&self) -> Result<String> {
        Err(Error::UnsupportedFormat {
            format: "csv",
            what: Self::KIND,
        })
    }

    fn from_csv(_text: &str) -> Result<Self> {
        Err(Error::UnsupportedFormat {
            format: "csv",
            what: Self::KIND,
        })
    }
}

pub fn to_string<T: Persist>(result: &T, format: Format) -> Result<String> {
    match format {
        Format::Csv => result.to_csv(),
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&result.to_json()?)
                .map_err(|e| Error::Invalid(e.to_string()))?;
            text.push('\n');
            Ok(text)
        }
    }
}

pub fn from_str<T: Persist>(text: &str, format: Format) -> Result<T> {
    match format {
        Format::Csv => T::from_csv(text),
        Format::Json => {
            let value: Value = serde_json::from_str(text)
                .map_err(|e| Error::Invalid(format!("{} JSON: {e}", T::KIND)))?;
            T::from_json(&value)
        }
    }
}

pub fn save_result<T: Persist>(result: &T, path: &Path, format: Format) -> Result<()> {
    let text = to_string(result, format)?;
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn load_result<T: Persist>(path: &Path, format: Format) -> Result<T> {
    from_str(&read_text(path)?, format).map_err(|e| match e {
        Error::Invalid(message) => Error::Parse {
            path: path.to_path_buf(),
            line: 0,
            column: 0,
            message,
        },
        other => other,
    })
}

// JSON helpers

fn num(v: f64) -> Result<Value> {
    if !v.is_finite() {
        return Err(Error::Invalid(format!("cannot write non-finite value {v} as JSON")));
    }
    let n = Number::from_str(&format_g17(v)).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(Value::Number(n))
}

fn opt_num(v: Option<f64>) -> Result<Value> {
    v.map_or(Ok(Value::Null), num)
}

fn nums(values: &[f64]) -> Result<Value> {
    values.iter().map(|&v| num(v)).collect::<Result<_>>().map(Value::Array)
}

fn ints(values: &[usize]) -> Value {
    Value::Array(values.iter().map(|&v| Value::from(v)).collect())
}

fn object(entries: Vec<(&str, Value)>) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

fn field<'a>(value: &'a Value, key: &str) -> Result<&'a Value> {
    value
        .get(key)
        .ok_or_else(|| Error::Invalid(format!("missing field '{key}'")))
}

fn as_f64(value: &Value, key: &str) -> Result<f64> {
    value
        .as_f64()
        .ok_or_else(|| Error::Invalid(format!("field '{key}' is not a number")))
}

fn get_f64(value: &Value, key: &str) -> Result<f64> {
    as_f64(field(value, key)?, key)
}

fn get_opt_f64(value: &Value, key: &str) -> Result<Option<f64>> {
    match field(value, key)? {
        Value::Null => Ok(None),
        v => as_f64(v, key).map(Some),
    }
}

fn as_usize(value: &Value, key: &str) -> Result<usize> {
    value
        .as_u64()
        .and_then(|v| usize::try_from(v).ok())
        .ok_or_else(|| Error::Invalid(format!("field '{key}' is not a non-negative integer")))
}

fn get_usize(value: &Value, key: &str) -> Result<usize> {
    as_usize(field(value, key)?, key)
}

fn get_array<'a>(value: &'a Value, key: &str) -> Result<&'a [Value]> {
    field(value, key)?
        .as_array()
        .map(Vec::as_slice)
        .ok_or_else(|| Error::Invalid(format!("field '{key}' is not an array")))
}

fn get_f64s(value: &Value, key: &str) -> Result<Vec<f64>> {
    get_array(value, key)?.iter().map(|v| as_f64(v, key)).collect()
}

fn get_usizes(value: &Value, key: &str) -> Result<Vec<usize>> {
    get_array(value, key)?.iter().map(|v| as_usize(v, key)).collect()
}

fn get_bool(value: &Value, key: &str) -> Result<bool> {
    field(value, key)?
        .as_bool()
        .ok_or_else(|| Error::Invalid(format!("field '{key}' is not a boolean")))
}

fn get_str<'a>(value: &'a Value, key: &str) -> Result<&'a str> {
    field(value, key)?
        .as_str()
        .ok_or_else(|| Error::Invalid(format!("field '{key}' is not a string")))
}

// CSV helpers

fn cell(v: Option<f64>) -> String {
    v.map_or_else(String::new, format_g17)
}

fn csv_rows(text: &str, expected_header: &[&str]) -> Result<Vec<csv::StringRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(expected_header.is_empty())
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Invalid(e.to_string()))?
        .clone();
    if !expected_header.is_empty() && header.iter().ne(expected_header.iter().copied()) {
        return Err(Error::Invalid(format!(
            "expected header '{}', found '{}'",
            expected_header.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut rows = vec![header];
    for record in reader.records() {
        rows.push(record.map_err(|e| Error::Invalid(e.to_string()))?);
    }
    Ok(rows)
}

fn parse_cell<T: FromStr>(record: &csv::StringRecord, i: usize, what: &str) -> Result<T> {
    let raw = record.get(i).unwrap_or("");
    raw.trim().parse().map_err(|_| {
        let line = record.position().map_or(0, |p| p.line());
        Error::Invalid(format!("line {line}: bad {what} '{raw}'"))
    })
}

fn parse_opt_cell(record: &csv::StringRecord, i: usize, what: &str) -> Result<Option<f64>> {
    match record.get(i).map(str::trim) {
        None | Some("") => Ok(None),
        Some(_) => parse_cell(record, i, what).map(Some),
    }
}

impl Persist for LabelVector {
    const KIND: &'static str = "label vector";

    fn to_json(&self) -> Result<Value> {
        Ok(object(vec![
            ("k", Value::from(self.k())),
            ("labels", ints(self.as_slice())),
        ]))
    }

    fn from_json(value: &Value) -> Result<Self> {
        LabelVector::new(get_usizes(value, "labels")?, get_usize(value, "k")?)
    }

    fn to_csv(&self) -> Result<String> {
        let mut out = String::from("index,label\n");
        for (i, l) in self.as_slice().iter().enumerate() {
            out.push_str(&format!("{i},{l}\n"));
        }
        Ok(out)
    }

    /// `k` is taken as one past the largest label.
    fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(text, &["index", "label"])?;
        let mut labels = Vec::with_capacity(rows.len() - 1);
        for (i, record) in rows[1..].iter().enumerate() {
            let index: usize = parse_cell(record, 0, "index")?;
            if index != i {
                return Err(Error::Invalid(format!("row {i} has index {index}")));
            }
            labels.push(parse_cell(record, 1, "label")?);
        }
        Ok(LabelVector::from_assignments(labels))
    }
}

impl Persist for CentroidSet {
    const KIND: &'static str = "centroid set";

    fn to_json(&self) -> Result<Value> {
        let centers = self.iter().map(nums).collect::<Result<Vec<_>>>()?;
        Ok(object(vec![
            ("k", Value::from(self.k())),
            ("dim", Value::from(self.dim())),
            ("source_indices", self.source_indices().map_or(Value::Null, ints)),
            ("centers", Value::Array(centers)),
        ]))
    }

    fn from_json(value: &Value) -> Result<Self> {
        let (k, dim) = (get_usize(value, "k")?, get_usize(value, "dim")?);
        let rows = get_array(value, "centers")?;
        if rows.len() != k {
            return Err(Error::Invalid(format!("expected {k} centers, found {}", rows.len())));
        }
        let mut flat = Vec::with_capacity(k * dim);
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::Invalid("center is not an array".into()))?;
            if row.len() != dim {
                return Err(Error::Invalid(format!("expected {dim} coordinates, found {}", row.len())));
            }
            for v in row {
                flat.push(as_f64(v, "centers")?);
            }
        }
        let centers = Array2::from_shape_vec((k, dim), flat).expect("checked shape");
        let set = CentroidSet::new(centers)?;
        match field(value, "source_indices")? {
            Value::Null => Ok(set),
            _ => set.with_source_indices(get_usizes(value, "source_indices")?),
        }
    }

    fn to_csv(&self) -> Result<String> {
        let mut out = String::from("source_index");
        for j in 0..self.dim() {
            out.push_str(&format!(",x{j}"));
        }
        out.push('\n');
        for (i, row) in self.iter().enumerate() {
            if let Some(indices) = self.source_indices() {
                out.push_str(&indices[i].to_string());
            }
            for &v in row {
                out.push(',');
                out.push_str(&format_g17(v));
            }
            out.push('\n');
        }
        Ok(out)
    }

    fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(text, &[])?;
        let dim = rows[0].len().saturating_sub(1);
        let mut flat = Vec::new();
        let mut sources = Vec::new();
        for record in &rows[1..] {
            if record.len() != dim + 1 {
                return Err(Error::Invalid(format!("expected {} fields, found {}", dim + 1, record.len())));
            }
            sources.push(match record.get(0).map(str::trim) {
                Some("") | None => None,
                Some(_) => Some(parse_cell::<usize>(record, 0, "source index")?),
            });
            for j in 1..=dim {
                flat.push(parse_cell::<f64>(record, j, "coordinate")?);
            }
        }
        let k = rows.len() - 1;
        let centers = Array2::from_shape_vec((k, dim), flat).expect("checked shape");
        let set = CentroidSet::new(centers)?;
        let sources: Option<Vec<usize>> = sources.iter().copied().collect();
        match sources {
            Some(indices) => set.with_source_indices(indices),
            None => Ok(set),
        }
    }
}

impl Persist for KEstimationCurve {
    const KIND: &'static str = "K estimation curve";

    fn to_json(&self) -> Result<Value> {
        let kappa = self.kappa.iter().map(|&v| opt_num(v)).collect::<Result<_>>()?;
        Ok(object(vec![
            ("estimated_k", Value::from(self.estimated_k)),
            ("r", nums(&self.r_values)?),
            ("kappa", Value::Array(kappa)),
        ]))
    }

    fn from_json(value: &Value) -> Result<Self> {
        let r_values = get_f64s(value, "r")?;
        let kappa = get_array(value, "kappa")?
            .iter()
            .map(|v| if v.is_null() { Ok(None) } else { as_f64(v, "kappa").map(Some) })
            .collect::<Result<Vec<_>>>()?;
        if kappa.len() != r_values.len() {
            return Err(Error::Invalid("r and kappa differ in length".into()));
        }
        Ok(KEstimationCurve {
            r_values,
            kappa,
            estimated_k: get_usize(value, "estimated_k")?,
        })
    }

    fn to_csv(&self) -> Result<String> {
        let mut out = String::from("l,R,kappa\n");
        for (l, (&r, &k)) in self.r_values.iter().zip(&self.kappa).enumerate() {
            out.push_str(&format!("{l},{},{}\n", format_g17(r), cell(k)));
        }
        Ok(out)
    }

    /// The estimated K is recovered from the curvature column: the scheme
    /// is identified by whether the last entry is defined, which fixes the
    /// window the minimum was taken over.
    fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(text, &["l", "R", "kappa"])?;
        let mut r_values = Vec::new();
        let mut kappa = Vec::new();
        for (i, record) in rows[1..].iter().enumerate() {
            let l: usize = parse_cell(record, 0, "l")?;
            if l != i {
                return Err(Error::Invalid(format!("row {i} has l = {l}")));
            }
            r_values.push(parse_cell(record, 1, "R")?);
            kappa.push(parse_opt_cell(record, 2, "kappa")?);
        }
        let margin = if kappa.last().is_some_and(Option::is_some) { 2 } else { 1 };
        let upper = kappa.len().saturating_sub(margin + 1);
        let estimated_k = crate::discern::estimate_k(&kappa, MIN_ESTIMATED_K, upper)?;
        Ok(KEstimationCurve {
            r_values,
            kappa,
            estimated_k,
        })
    }
}

impl Persist for ClusteringResult {
    const KIND: &'static str = "clustering result";

    fn to_json(&self) -> Result<Value> {
        Ok(object(vec![
            ("iterations_run", Value::from(self.iterations_run)),
            ("converged", Value::from(self.converged)),
            ("sse_trace", nums(&self.sse_trace)?),
            ("labels", self.labels.to_json()?),
            ("centroids", self.centroids.to_json()?),
        ]))
    }

    fn from_json(value: &Value) -> Result<Self> {
        Ok(ClusteringResult {
            labels: LabelVector::from_json(field(value, "labels")?)?,
            centroids: CentroidSet::from_json(field(value, "centroids")?)?,
            sse_trace: get_f64s(value, "sse_trace")?,
            iterations_run: get_usize(value, "iterations_run")?,
            converged: get_bool(value, "converged")?,
        })
    }
}

impl Persist for DiscernResult {
    const KIND: &'static str = "DISCERN result";

    fn to_json(&self) -> Result<Value> {
        Ok(object(vec![
            ("k", Value::from(self.k())),
            ("centroid_indices", ints(&self.centroid_indices)),
            ("centroids", self.centroids.to_json()?),
            ("curve", self.curve.as_ref().map_or(Ok(Value::Null), Persist::to_json)?),
        ]))
    }

    fn from_json(value: &Value) -> Result<Self> {
        let curve = match field(value, "curve")? {
            Value::Null => None,
            v => Some(KEstimationCurve::from_json(v)?),
        };
        Ok(DiscernResult {
            centroid_indices: get_usizes(value, "centroid_indices")?,
            centroids: CentroidSet::from_json(field(value, "centroids")?)?,
            curve,
        })
    }
}

impl Persist for ScanResult {
    const KIND: &'static str = "scan result";

    fn to_json(&self) -> Result<Value> {
        Ok(object(vec![
            ("method", Value::from(self.method.as_str())),
            ("chosen_k", Value::from(self.chosen_k)),
            ("low_confidence", Value::from(self.low_confidence)),
            ("runs_per_k", Value::from(self.runs_per_k)),
            ("seed", Value::from(self.seed)),
            ("k_values", ints(&self.k_values)),
            ("scores", nums(&self.scores)?),
            ("mean_scores", nums(&self.mean_scores)?),
        ]))
    }

    fn from_json(value: &Value) -> Result<Self> {
        let seed = field(value, "seed")?
            .as_u64()
            .ok_or_else(|| Error::Invalid("field 'seed' is not an integer".into()))?;
        let result = ScanResult {
            method: get_str(value, "method")?.parse()?,
            k_values: get_usizes(value, "k_values")?,
            scores: get_f64s(value, "scores")?,
            mean_scores: get_f64s(value, "mean_scores")?,
            chosen_k: get_usize(value, "chosen_k")?,
            runs_per_k: get_usize(value, "runs_per_k")?,
            seed,
            low_confidence: get_bool(value, "low_confidence")?,
        };
        if result.scores.len() != result.k_values.len() || result.mean_scores.len() != result.k_values.len() {
            return Err(Error::Invalid("scan columns differ in length".into()));
        }
        Ok(result)
    }

    fn to_csv(&self) -> Result<String> {
        let mut out = String::from("method,k,score,mean_score,chosen,runs_per_k,seed,low_confidence\n");
        for (i, &k) in self.k_values.iter().enumerate() {
            out.push_str(&format!(
                "{},{k},{},{},{},{},{},{}\n",
                self.method,
                format_g17(self.scores[i]),
                format_g17(self.mean_scores[i]),
                k == self.chosen_k,
                self.runs_per_k,
                self.seed,
                self.low_confidence,
            ));
        }
        Ok(out)
    }

    fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(
            text,
            &["method", "k", "score", "mean_score", "chosen", "runs_per_k", "seed", "low_confidence"],
        )?;
        let body = &rows[1..];
        let first = body
            .first()
            .ok_or_else(|| Error::Invalid("scan result has no rows".into()))?;
        let method: ScanMethod = parse_cell::<String>(first, 0, "method")?.parse()?;
        let mut result = ScanResult {
            method,
            k_values: Vec::new(),
            scores: Vec::new(),
            mean_scores: Vec::new(),
            chosen_k: 0,
            runs_per_k: parse_cell(first, 5, "runs_per_k")?,
            seed: parse_cell(first, 6, "seed")?,
            low_confidence: parse_cell(first, 7, "low_confidence")?,
        };
        let mut chosen = None;
        for record in body {
            let k: usize = parse_cell(record, 1, "k")?;
            result.k_values.push(k);
            result.scores.push(parse_cell(record, 2, "score")?);
            result.mean_scores.push(parse_cell(record, 3, "mean_score")?);
            if parse_cell::<bool>(record, 4, "chosen")?
                && chosen.replace(k).is_some() {
                    return Err(Error::Invalid("more than one chosen k".into()));
                }
        }
        result.chosen_k = chosen.ok_or_else(|| Error::Invalid("no chosen k".into()))?;
        Ok(result)
    }
}

impl Persist for EvaluationReport {
    const KIND: &'static str = "evaluation report";

    fn to_json(&self) -> Result<Value> {
        Ok(object(vec![
            ("k", Value::from(self.k)),
            ("silhouette", opt_num(self.silhouette)?),
            ("sse", num(self.sse)?),
            ("ari", opt_num(self.ari)?),
            ("purity", opt_num(self.purity)?),
        ]))
    }

    fn from_json(value: &Value) -> Result<Self> {
        Ok(EvaluationReport {
            k: get_usize(value, "k")?,
            silhouette: get_opt_f64(value, "silhouette")?,
            sse: get_f64(value, "sse")?,
            ari: get_opt_f64(value, "ari")?,
            purity: get_opt_f64(value, "purity")?,
        })
    }

    fn to_csv(&self) -> Result<String> {
        Ok(format!(
            "k,silhouette,sse,ari,purity\n{},{},{},{},{}\n",
            self.k,
            cell(self.silhouette),
            format_g17(self.sse),
            cell(self.ari),
            cell(self.purity),
        ))
    }

    fn from_csv(text: &str) -> Result<Self> {
        let rows = csv_rows(text, &["k", "silhouette", "sse", "ari", "purity"])?;
        let [_, record] = rows.as_slice() else {
            return Err(Error::Invalid(format!("expected one report row, found {}", rows.len() - 1)));
        };
        Ok(EvaluationReport {
            k: parse_cell(record, 0, "k")?,
            silhouette: parse_opt_cell(record, 1, "silhouette")?,
            sse: parse_cell(record, 2, "sse")?,
            ari: parse_opt_cell(record, 3, "ari")?,
            purity: parse_opt_cell(record, 4, "purity")?,
        })
    }
}

/// Reads one label per row from the last column of a delimited file, so
/// both bare label lists and `index,label` files work.
pub fn load_labels(path: &Path, delimiter: u8, has_header: bool) -> Result<LabelVector> {
    let raw = parse_label_file(&read_text(path)?, path, delimiter, has_header)?;
    if raw.is_empty() {
        return Err(Error::Invalid(format!("{}: no labels", path.display())));
    }
    Ok(LabelVector::from_assignments(label_ids(&raw)))
}
