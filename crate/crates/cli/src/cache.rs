//! Append-only JSONL store of point-count results.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

/// One computed count, as stored in the cache and emitted by `--json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub p: u64,
    pub q: u64,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub s: String,
    pub t: String,
    pub genus: u64,
    pub count: u64,
    pub hw_lower: f64,
    pub hw_upper: f64,
    pub status: String,
    pub superspecial_verdict: Option<bool>,
    pub superspecial_predicted: Option<bool>,
    pub timestamp: u64,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RecordKey {
    pub p: u64,
    pub q: u64,
    pub abc: (u64, u64, u64),
    pub s: String,
    pub t: String,
}

impl ResultRecord {
    pub fn key(&self) -> RecordKey {
        RecordKey {
            p: self.p,
            q: self.q,
            abc: (self.a, self.b, self.c),
            s: self.s.clone(),
            t: self.t.clone(),
        }
    }

    /// Equal up to the bookkeeping fields.
    pub fn same_numbers(&self, other: &Self) -> bool {
        let strip = |r: &Self| Self {
            timestamp: 0,
            tool_version: String::new(),
            ..r.clone()
        };
        strip(self) == strip(other)
    }
}

pub struct Cache {
    path: PathBuf,
    records: HashMap<RecordKey, ResultRecord>,
}

impl Cache {
    /// Load every well-formed line; a missing file is an empty cache.
    pub fn open(path: &Path) -> Result<Self> {
        let mut records = HashMap::new();
        match File::open(path) {
            Ok(file) => {
                for (n, line) in BufReader::new(file).lines().enumerate() {
                    let line = line.with_context(|| format!("reading {}", path.display()))?;
                    if line.trim().is_empty() {
                        continue;
                    }
                    match serde_json::from_str::<ResultRecord>(&line) {
                        Ok(rec) => {
                            records.entry(rec.key()).or_insert(rec);
                        }
                        Err(e) => eprintln!(
                            "warning: skipping corrupt cache line {} in {}: {e}",
                            n + 1,
                            path.display()
                        ),
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(e).with_context(|| format!("opening {}", path.display())),
        }
        Ok(Self {
            path: path.to_path_buf(),
            records,
        })
    }

    pub fn get(&self, key: &RecordKey) -> Option<&ResultRecord> {
        self.records.get(key)
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// Append unless the key is already present. Returns whether a line was written.
    pub fn insert(&mut self, record: ResultRecord) -> Result<bool> {
        let key = record.key();
        if self.records.contains_key(&key) {
            return Ok(false);
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening {} for append", self.path.display()))?;
        // a previous run may have died mid-line
        let mut line = String::new();
        if file.metadata()?.len() > 0 && !ends_with_newline(&self.path)? {
            line.push('\n');
        }
        line.push_str(&serde_json::to_string(&record)?);
        line.push('\n');
        file.write_all(line.as_bytes())
            .with_context(|| format!("appending to {}", self.path.display()))?;
        self.records.insert(key, record);
        Ok(true)
    }
}

fn ends_with_newline(path: &Path) -> Result<bool> {
    use std::io::{Read, Seek, SeekFrom};
    let mut f = File::open(path)?;
    f.seek(SeekFrom::End(-1))?;
    let mut last = [0u8; 1];
    f.read_exact(&mut last)?;
    Ok(last[0] == b'\n')
}
