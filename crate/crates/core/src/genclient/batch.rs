//! Resumable batch generation.
//!
//! Workers pull records from a shared cursor and send finished generations
//! to a single writer, which buffers out-of-order results and appends lines
//! in input order. Ids already present in the output file are skipped, so an
//! interrupted run can simply be restarted.

use std::collections::{BTreeMap, HashSet};
use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;

use serde::{Deserialize, Serialize};

use super::{CandidateLine, GenError, Generation, GenerationClient, GenerationParams, Transport};
use crate::corpusio::CorpusError;
use crate::normalize::TweetRecord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub total: usize,
    pub skipped_existing: usize,
    pub written: usize,
    /// Ids for which the backend returned fewer candidates than requested.
    pub short: Vec<String>,
    pub failures: Vec<Failure>,
}

/// Reads ids already written. A trailing partial line from an interrupted
/// run is truncated away.
fn existing_ids(path: &Path) -> Result<HashSet<String>, CorpusError> {
    let mut ids = HashSet::new();
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(ids),
        Err(e) => return Err(CorpusError::io(path, e)),
    };
    let mut reader = BufReader::new(file);
    let mut good_len = 0u64;
    let mut buf = String::new();
    loop {
        buf.clear();
        let n = reader
            .read_line(&mut buf)
            .map_err(|e| CorpusError::io(path, e))?;
        if n == 0 {
            break;
        }
        if buf.trim().is_empty() {
            good_len += n as u64;
            continue;
        }
        match serde_json::from_str::<CandidateLine>(buf.trim_end()) {
            Ok(line) if buf.ends_with('\n') => {
                ids.insert(line.id);
                good_len += n as u64;
            }
            _ => break,
        }
    }
    let file = OpenOptions::new()
        .write(true)
        .open(path)
        .map_err(|e| CorpusError::io(path, e))?;
    file.set_len(good_len).map_err(|e| CorpusError::io(path, e))?;
    Ok(ids)
}

pub fn batch_generate<T: Transport>(
    client: &GenerationClient<T>,
    records: &[TweetRecord],
    params: &GenerationParams,
    concurrency: usize,
    out: &Path,
) -> Result<RunReport, GenError> {
    params.validate()?;
    let done = existing_ids(out)?;
    let pending: Vec<&TweetRecord> = records.iter().filter(|r| !done.contains(&r.id)).collect();
    let mut report = RunReport {
        total: records.len(),
        skipped_existing: records.len() - pending.len(),
        ..Default::default()
    };
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(out)
        .map_err(|e| CorpusError::io(out, e))?;

    let workers = concurrency.max(1).min(pending.len().max(1));
    let cursor = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<Generation, GenError>)>();

    thread::scope(|scope| -> Result<(), GenError> {
        for _ in 0..workers {
            let tx = tx.clone();
            let (cursor, pending) = (&cursor, &pending);
            scope.spawn(move || loop {
                let i = cursor.fetch_add(1, Ordering::SeqCst);
                let Some(rec) = pending.get(i) else { break };
                let result = client.generate_paraphrases(&rec.text, params);
                if tx.send((i, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut buffer = BTreeMap::new();
        let mut next = 0;
        for (i, result) in rx {
            buffer.insert(i, result);
            while let Some(result) = buffer.remove(&next) {
                let rec = pending[next];
                match result {
                    Ok(g) => {
                        if g.short {
                            report.short.push(rec.id.clone());
                        }
                        let line = CandidateLine {
                            id: rec.id.clone(),
                            candidates: g.candidates,
                        };
                        let mut text = serde_json::to_string(&line).expect("line serializes");
                        text.push('\n');
                        file.write_all(text.as_bytes())
                            .and_then(|_| file.flush())
                            .map_err(|e| CorpusError::io(out, e))?;
                        report.written += 1;
                    }
                    Err(e) => report.failures.push(Failure {
                        id: rec.id.clone(),
                        error: e.to_string(),
                    }),
                }
                next += 1;
            }
        }
        Ok(())
    })?;
    Ok(report)
}
