//! Append-only JSON-lines checkpoints for classification sweeps.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use mstiff::Dim;
use serde::{Deserialize, Serialize};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Decision for one `(m, D)` cell, as emitted and as replayed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub m: u64,
    pub d: Dim,
    pub verdict: String,
    pub digest: String,
}

impl Cell {
    pub fn exists(&self) -> bool {
        self.verdict == "exists"
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckpointRecord {
    pub m: u64,
    pub d: Dim,
    pub verdict: String,
    pub digest: String,
    pub timestamp: String,
    pub version: String,
}

impl CheckpointRecord {
    pub fn cell(&self) -> Cell {
        Cell { m: self.m, d: self.d, verdict: self.verdict.clone(), digest: self.digest.clone() }
    }
}

#[derive(Debug)]
pub struct CorruptCheckpoint {
    pub path: PathBuf,
    pub line: usize,
    pub reason: String,
}

impl std::fmt::Display for CorruptCheckpoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "corrupt checkpoint {} at line {}: {}", self.path.display(), self.line, self.reason)
    }
}

impl std::error::Error for CorruptCheckpoint {}

/// Reads every complete record. A final line without a newline is an
/// interrupted write and is dropped; any other malformed line is an error.
pub fn load(path: &Path) -> anyhow::Result<BTreeMap<(u64, Dim), Cell>> {
    let mut out = BTreeMap::new();
    if !path.exists() {
        return Ok(out);
    }
    let mut text = String::new();
    BufReader::new(File::open(path)?).read_to_string(&mut text).map_err(|e| CorruptCheckpoint {
        path: path.to_owned(),
        line: 0,
        reason: e.to_string(),
    })?;
    let complete = text.rfind('\n').map_or("", |i| &text[..=i]);
    for (i, line) in complete.as_bytes().lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CheckpointRecord = serde_json::from_str(&line).map_err(|e| CorruptCheckpoint {
            path: path.to_owned(),
            line: i + 1,
            reason: e.to_string(),
        })?;
        let cell = rec.cell();
        if !matches!(cell.verdict.as_str(), "exists" | "not_exists") {
            return Err(CorruptCheckpoint { path: path.to_owned(), line: i + 1, reason: format!("verdict {:?}", cell.verdict) }.into());
        }
        let key = (cell.m, cell.d);
        if let Some(prev) = out.get(&key) {
            if *prev != cell {
                return Err(CorruptCheckpoint { path: path.to_owned(), line: i + 1, reason: format!("conflicting record for {key:?}") }.into());
            }
        }
        out.insert(key, cell);
    }
    Ok(out)
}

/// Serialized appender; every record is flushed before the next is written.
pub struct Appender {
    file: File,
}

impl Appender {
    pub fn open(path: &Path) -> anyhow::Result<Self> {
        if path.exists() {
            // drop an interrupted final record so new records start on a fresh line
            let bytes = std::fs::read(path)?;
            let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
            if keep < bytes.len() {
                OpenOptions::new().write(true).open(path)?.set_len(keep as u64)?;
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Appender { file })
    }

    pub fn append(&mut self, cells: &[Cell]) -> anyhow::Result<()> {
        let timestamp = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        let mut buf = String::new();
        for c in cells {
            let rec = CheckpointRecord {
                m: c.m,
                d: c.d,
                verdict: c.verdict.clone(),
                digest: c.digest.clone(),
                timestamp: timestamp.clone(),
                version: VERSION.into(),
            };
            buf.push_str(&serde_json::to_string(&rec)?);
            buf.push('\n');
        }
        self.file.write_all(buf.as_bytes())?;
        self.file.flush()?;
        Ok(())
    }
}
