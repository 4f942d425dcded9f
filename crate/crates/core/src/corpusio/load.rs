use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use super::CorpusError;
use crate::datasets::DatasetSpec;
use crate::normalize::TweetRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Jsonl,
    Tsv { header: bool },
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "jsonl" | "json" => Ok(Format::Jsonl),
            "tsv" => Ok(Format::Tsv { header: false }),
            "tsv-header" => Ok(Format::Tsv { header: true }),
            other => Err(format!("unknown format {other:?} (jsonl, tsv, tsv-header)")),
        }
    }
}

/// A field location: a zero-based TSV column, or a key (JSON field or TSV
/// header name).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    Index(usize),
    Name(String),
}

impl From<&str> for Column {
    fn from(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMap {
    pub id: Column,
    pub text: Column,
    pub label: Column,
    pub topic: Option<Column>,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            id: "id".into(),
            text: "text".into(),
            label: "label".into(),
            topic: Some("topic".into()),
        }
    }
}

impl ColumnMap {
    /// Positional TSV layout `id, text, label[, topic]`.
    pub fn positional(with_topic: bool) -> Self {
        Self {
            id: Column::Index(0),
            text: Column::Index(1),
            label: Column::Index(2),
            topic: with_topic.then_some(Column::Index(3)),
        }
    }
}

impl FromStr for ColumnMap {
    type Err = String;

    /// Parses `id=0,text=1,label=2,topic=3` (indices or names).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut map = ColumnMap {
            topic: None,
            ..ColumnMap::default()
        };
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (key, col) = part
                .split_once('=')
                .ok_or_else(|| format!("expected field=column, got {part:?}"))?;
            let col = Column::from(col.trim());
            match key.trim() {
                "id" => map.id = col,
                "text" => map.text = col,
                "label" => map.label = col,
                "topic" => map.topic = Some(col),
                other => return Err(format!("unknown field {other:?}")),
            }
        }
        Ok(map)
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CorpusError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CorpusError::io(path, e))
}

fn scalar_to_string(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

/// Reads a labelled dataset. With a spec, every label must belong to its
/// class set and records are tagged with the spec's name.
pub fn load_dataset(
    path: &Path,
    format: Format,
    columns: &ColumnMap,
    spec: Option<&DatasetSpec>,
) -> Result<Vec<TweetRecord>, CorpusError> {
    let reader = open(path)?;
    let parse_err = |line: usize, message: String| CorpusError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut header: Option<Vec<String>> = None;
    let mut records = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| CorpusError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let get: Box<dyn Fn(&Column) -> Result<Option<String>, String>> = match format {
            Format::Jsonl => {
                let obj: Value =
                    serde_json::from_str(&line).map_err(|e| parse_err(lineno, e.to_string()))?;
                if !obj.is_object() {
                    return Err(parse_err(lineno, "expected a JSON object".into()));
                }
                Box::new(move |col: &Column| match col {
                    Column::Name(k) => Ok(obj.get(k).and_then(scalar_to_string)),
                    Column::Index(i) => Err(format!("column index {i} used with JSONL input")),
                })
            }
            Format::Tsv { header: has_header } => {
                let fields: Vec<String> = line.split('\t').map(str::to_string).collect();
                if has_header && header.is_none() {
                    header = Some(fields);
                    continue;
                }
                let names = header.clone();
                Box::new(move |col: &Column| {
                    let idx = match col {
                        Column::Index(i) => *i,
                        Column::Name(n) => names
                            .as_ref()
                            .and_then(|h| h.iter().position(|f| f == n))
                            .ok_or_else(|| format!("no header column named {n:?}"))?,
                    };
                    Ok(fields.get(idx).cloned())
                })
            }
        };
        let required = |col: &Column, what: &str| -> Result<String, CorpusError> {
            get(col)
                .map_err(|m| parse_err(lineno, m))?
                .filter(|v| !v.trim().is_empty())
                .ok_or_else(|| parse_err(lineno, format!("missing or empty {what}")))
        };
        let id = required(&columns.id, "id")?;
        let text = required(&columns.text, "text")?;
        let label = required(&columns.label, "label")?;
        let topic = match &columns.topic {
            Some(col) => get(col)
                .map_err(|m| parse_err(lineno, m))?
                .filter(|t| !t.trim().is_empty()),
            None => None,
        };
        if let Some(spec) = spec {
            if !spec.has_class(&label) {
                return Err(CorpusError::UnknownLabel {
                    path: path.to_path_buf(),
                    line: lineno,
                    label,
                    dataset: spec.name.clone(),
                });
            }
        }
        records.push(TweetRecord {
            id,
            text,
            label,
            topic,
            dataset: spec.map(|s| s.name.clone()).unwrap_or_default(),
        });
    }
    Ok(records)
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>, CorpusError> {
    let reader = open(path)?;
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| CorpusError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let item = serde_json::from_str(&line).map_err(|e| CorpusError::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            message: e.to_string(),
        })?;
        out.push(item);
    }
    Ok(out)
}

pub fn write_jsonl<'a, T, I>(path: &Path, items: I) -> Result<usize, CorpusError>
where
    T: Serialize + 'a,
    I: IntoIterator<Item = &'a T>,
{
    let file = File::create(path).map_err(|e| CorpusError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let mut n = 0;
    for item in items {
        serde_json::to_writer(&mut w, item).map_err(|e| CorpusError::io(path, e.into()))?;
        w.write_all(b"\n").map_err(|e| CorpusError::io(path, e))?;
        n += 1;
    }
    w.flush().map_err(|e| CorpusError::io(path, e))?;
    Ok(n)
}

/// Number of non-empty lines.
pub fn count_lines(path: &Path) -> Result<usize, CorpusError> {
    let reader = open(path)?;
    let mut n = 0;
    for line in reader.lines() {
        if !line.map_err(|e| CorpusError::io(path, e))?.trim().is_empty() {
            n += 1;
        }
    }
    Ok(n)
}
