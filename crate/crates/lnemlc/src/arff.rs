//! ARFF reading and writing for multi-label datasets.
//!
//! Labels are identified by count and position: the last (or first)
//! `label_count` attributes, each a `{0,1}` nominal or numeric 0/1 column.
//! Dense rows and sparse `{index value, ...}` rows are both accepted.
//! Nominal features with values other than exactly `{0,1}` are expanded to
//! one indicator column per value, named `attr=value`.

use std::fmt::Write as _;
use std::path::Path;

use lnemlc_core::dataset::MultiLabelDataset;
use lnemlc_core::Matrix;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ArffOptions {
    pub label_count: usize,
    pub labels_at_end: bool,
}

impl ArffOptions {
    pub fn new(label_count: usize) -> Self {
        ArffOptions {
            label_count,
            labels_at_end: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum ArffError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: missing value '?' is not supported")]
    MissingValue { line: usize },
    #[error("line {line}: unsupported attribute type '{kind}'")]
    UnsupportedType { line: usize, kind: String },
    #[error("line {line}: label attribute '{name}' must be binary")]
    NonBinaryLabel { line: usize, name: String },
    #[error("line {line}: value '{value}' is invalid for attribute '{name}'")]
    BadValue { line: usize, name: String, value: String },
    #[error("{label_count} labels requested but the file declares {attributes} attributes")]
    LabelCount { label_count: usize, attributes: usize },
    #[error("no @data section")]
    NoData,
    #[error(transparent)]
    Dataset(#[from] lnemlc_core::Error),
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Numeric,
    Nominal(Vec<String>),
}

#[derive(Debug, Clone)]
struct Attribute {
    name: String,
    kind: Kind,
    line: usize,
}

impl Attribute {
    fn is_binary_nominal(&self) -> bool {
        matches!(&self.kind, Kind::Nominal(v) if v.len() == 2 && v[0] == "0" && v[1] == "1")
    }

    /// Output columns this attribute occupies as a feature.
    fn width(&self) -> usize {
        match &self.kind {
            Kind::Nominal(v) if !self.is_binary_nominal() => v.len(),
            _ => 1,
        }
    }
}

pub fn read_arff(path: impl AsRef<Path>, options: ArffOptions) -> Result<MultiLabelDataset, ArffError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ArffError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_arff(&text, options)
}

/// Splits on `sep` outside single or double quotes, trimming each piece.
fn split_quoted(s: &str, sep: char) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut quote = None;
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match quote {
            Some(q) if c == q => {
                quote = None;
                cur.push(c);
            }
            Some(_) if c == '\\' => {
                cur.push(c);
                if let Some(n) = chars.next() {
                    cur.push(n);
                }
            }
            Some(_) => cur.push(c),
            None if c == '\'' || c == '"' => {
                quote = Some(c);
                cur.push(c);
            }
            None if c == sep => out.push(std::mem::take(&mut cur).trim().to_string()),
            None => cur.push(c),
        }
    }
    out.push(cur.trim().to_string());
    out
}

fn unquote(s: &str) -> String {
    let s = s.trim();
    let bytes = s.as_bytes();
    if bytes.len() >= 2 && (bytes[0] == b'\'' || bytes[0] == b'"') && bytes[bytes.len() - 1] == bytes[0] {
        let inner = &s[1..s.len() - 1];
        let mut out = String::with_capacity(inner.len());
        let mut chars = inner.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                if let Some(n) = chars.next() {
                    out.push(n);
                }
            } else {
                out.push(c);
            }
        }
        out
    } else {
        s.to_string()
    }
}

/// Splits `token rest` where `token` may be quoted.
fn take_token(s: &str) -> (String, &str) {
    let s = s.trim_start();
    let Some(first) = s.chars().next() else { return (String::new(), s) };
    if first == '\'' || first == '"' {
        let mut escaped = false;
        for (i, c) in s.char_indices().skip(1) {
            if escaped {
                escaped = false;
            } else if c == '\\' {
                escaped = true;
            } else if c == first {
                return (unquote(&s[..=i]), &s[i + 1..]);
            }
        }
        (unquote(s), "")
    } else {
        let end = s.find(|c: char| c.is_whitespace() || c == '{').unwrap_or(s.len());
        (s[..end].to_string(), &s[end..])
    }
}

fn parse_attribute(rest: &str, line: usize) -> Result<Attribute, ArffError> {
    let (name, rest) = take_token(rest);
    if name.is_empty() {
        return Err(ArffError::Syntax {
            line,
            message: "attribute without a name".into(),
        });
    }
    let rest = rest.trim();
    let kind = if let Some(body) = rest.strip_prefix('{') {
        let body = body.strip_suffix('}').ok_or_else(|| ArffError::Syntax {
            line,
            message: format!("unterminated nominal specification for '{name}'"),
        })?;
        Kind::Nominal(split_quoted(body, ',').iter().map(|v| unquote(v)).collect())
    } else {
        match rest.split_whitespace().next().unwrap_or("").to_ascii_lowercase().as_str() {
            "numeric" | "real" | "integer" => Kind::Numeric,
            other => {
                return Err(ArffError::UnsupportedType {
                    line,
                    kind: other.to_string(),
                })
            }
        }
    };
    Ok(Attribute { name, kind, line })
}

fn numeric_value(raw: &str, attr: &Attribute, line: usize) -> Result<f64, ArffError> {
    let v: f64 = raw.parse().map_err(|_| ArffError::BadValue {
        line,
        name: attr.name.clone(),
        value: raw.to_string(),
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ArffError::BadValue {
            line,
            name: attr.name.clone(),
            value: raw.to_string(),
        })
    }
}

fn nominal_index(raw: &str, values: &[String], attr: &Attribute, line: usize) -> Result<usize, ArffError> {
    let v = unquote(raw);
    values.iter().position(|x| *x == v).ok_or_else(|| ArffError::BadValue {
        line,
        name: attr.name.clone(),
        value: raw.to_string(),
    })
}

/// Column-wise destination of each attribute.
enum Slot {
    Feature(usize),
    Label(usize),
}

pub fn parse_arff(text: &str, options: ArffOptions) -> Result<MultiLabelDataset, ArffError> {
    let mut attributes = Vec::new();
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut in_data = false;
    for (no, raw) in lines.by_ref() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let lower = line.to_ascii_lowercase();
        if lower.starts_with("@relation") {
            continue;
        } else if lower.starts_with("@attribute") {
            attributes.push(parse_attribute(&line["@attribute".len()..], no)?);
        } else if lower.starts_with("@data") {
            in_data = true;
            break;
        } else {
            return Err(ArffError::Syntax {
                line: no,
                message: format!("unexpected header line '{line}'"),
            });
        }
    }
    if !in_data {
        return Err(ArffError::NoData);
    }
    let l = options.label_count;
    if l > attributes.len() {
        return Err(ArffError::LabelCount {
            label_count: l,
            attributes: attributes.len(),
        });
    }
    let label_range = if options.labels_at_end {
        attributes.len() - l..attributes.len()
    } else {
        0..l
    };

    let mut slots = Vec::with_capacity(attributes.len());
    let mut feature_names = Vec::new();
    let mut label_names = Vec::new();
    for (a, attr) in attributes.iter().enumerate() {
        if label_range.contains(&a) {
            if let Kind::Nominal(_) = attr.kind {
                if !attr.is_binary_nominal() {
                    return Err(ArffError::NonBinaryLabel {
                        line: attr.line,
                        name: attr.name.clone(),
                    });
                }
            }
            slots.push(Slot::Label(label_names.len()));
            label_names.push(attr.name.clone());
        } else {
            slots.push(Slot::Feature(feature_names.len()));
            match &attr.kind {
                Kind::Nominal(values) if !attr.is_binary_nominal() => {
                    feature_names.extend(values.iter().map(|v| format!("{}={v}", attr.name)));
                }
                _ => feature_names.push(attr.name.clone()),
            }
        }
    }
    let m = feature_names.len();

    let mut x = Vec::new();
    let mut y = Vec::new();
    let mut n = 0;
    for (no, raw) in lines {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('%') {
            continue;
        }
        let mut xr = vec![0.0; m];
        let mut yr = vec![0u8; l];
        // sparse rows leave omitted attributes at 0, i.e. the first value of
        // a nominal attribute
        for (attr, slot) in attributes.iter().zip(&slots) {
            if let (Kind::Nominal(_), Slot::Feature(c)) = (&attr.kind, slot) {
                if !attr.is_binary_nominal() {
                    xr[*c] = 1.0;
                }
            }
        }
        let mut assign = |a: usize, value: &str| -> Result<(), ArffError> {
            let attr = attributes.get(a).ok_or_else(|| ArffError::Syntax {
                line: no,
                message: format!("attribute index {a} out of range"),
            })?;
            if value == "?" {
                return Err(ArffError::MissingValue { line: no });
            }
            match (&slots[a], &attr.kind) {
                (Slot::Label(j), Kind::Nominal(values)) => yr[*j] = nominal_index(value, values, attr, no)? as u8,
                (Slot::Label(j), Kind::Numeric) => {
                    let v = numeric_value(value, attr, no)?;
                    if v != 0.0 && v != 1.0 {
                        return Err(ArffError::NonBinaryLabel {
                            line: no,
                            name: attr.name.clone(),
                        });
                    }
                    yr[*j] = v as u8;
                }
                (Slot::Feature(c), Kind::Numeric) => xr[*c] = numeric_value(value, attr, no)?,
                (Slot::Feature(c), Kind::Nominal(values)) => {
                    let idx = nominal_index(value, values, attr, no)?;
                    if attr.is_binary_nominal() {
                        xr[*c] = idx as f64;
                    } else {
                        xr[*c..*c + attr.width()].iter_mut().for_each(|v| *v = 0.0);
                        xr[*c + idx] = 1.0;
                    }
                }
            }
            Ok(())
        };
        if let Some(body) = line.strip_prefix('{') {
            let body = body.strip_suffix('}').ok_or_else(|| ArffError::Syntax {
                line: no,
                message: "unterminated sparse row".into(),
            })?;
            if !body.trim().is_empty() {
                for entry in split_quoted(body, ',') {
                    let (index, value) = entry.split_once(char::is_whitespace).ok_or_else(|| ArffError::Syntax {
                        line: no,
                        message: format!("sparse entry '{entry}' needs 'index value'"),
                    })?;
                    let a: usize = index.parse().map_err(|_| ArffError::Syntax {
                        line: no,
                        message: format!("bad sparse index '{index}'"),
                    })?;
                    assign(a, value.trim())?;
                }
            }
        } else {
            let fields = split_quoted(line, ',');
            if fields.len() != attributes.len() {
                return Err(ArffError::Syntax {
                    line: no,
                    message: format!("expected {} values, found {}", attributes.len(), fields.len()),
                });
            }
            for (a, value) in fields.iter().enumerate() {
                assign(a, value)?;
            }
        }
        x.extend(xr);
        y.extend(yr);
        n += 1;
    }
    let features = Matrix::from_vec(n, m, x)?;
    let labels = Matrix::from_vec(n, l, y)?;
    Ok(MultiLabelDataset::new(features, labels, feature_names, label_names)?)
}

fn quote_name(name: &str) -> String {
    let plain = !name.is_empty()
        && name
            .chars()
            .all(|c| !c.is_whitespace() && !matches!(c, ',' | '\'' | '"' | '{' | '}' | '%' | '\\'));
    if plain {
        name.to_string()
    } else {
        format!("'{}'", name.replace('\\', "\\\\").replace('\'', "\\'"))
    }
}

/// Dense ARFF with numeric features followed by `{0,1}` labels.
pub fn write_arff(dataset: &MultiLabelDataset, relation: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "@relation {}", quote_name(relation));
    out.push('\n');
    for name in dataset.feature_names() {
        let _ = writeln!(out, "@attribute {} numeric", quote_name(name));
    }
    for name in dataset.label_names() {
        let _ = writeln!(out, "@attribute {} {{0,1}}", quote_name(name));
    }
    out.push_str("\n@data\n");
    let (x, y) = (dataset.features(), dataset.labels());
    for i in 0..dataset.n_samples() {
        let mut first = true;
        for v in x.row(i) {
            if !first {
                out.push(',');
            }
            first = false;
            let _ = write!(out, "{v}");
        }
        for v in y.row(i) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn save_arff(dataset: &MultiLabelDataset, relation: &str, path: impl AsRef<Path>) -> std::io::Result<()> {
    std::fs::write(path, write_arff(dataset, relation))
}
