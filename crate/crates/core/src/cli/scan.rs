//! Exhaustive classification over triples with bounded denominators, written as JSONL.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::arith::Rational;
use crate::criteria::{classify, ClassificationRecord, HGParams};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    /// Largest denominator of q, a, b; at least 2.
    pub max_denominator: u64,
    pub output: PathBuf,
    /// Keep only `a ≤ b`. Integer translation is always quotiented out by using
    /// representatives in `(0, 1)`.
    pub dedup: bool,
    /// Worker threads; at least 1.
    pub parallelism: usize,
}

/// One line of scan output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub record: ClassificationRecord,
    /// Wall-clock time spent in `classify`. Excluded from determinism guarantees.
    pub micros: u64,
    pub version: String,
}

/// Reduced fractions in `(0, 1)` with denominator at most `max_den`, ascending.
pub fn fractions(max_den: u64) -> Vec<Rational> {
    let mut out: Vec<Rational> = (2..=max_den as i64)
        .flat_map(|d| (1..d).map(move |n| (n, d)))
        .filter(|&(n, d)| crate::arith::units::gcd(n as u64, d as u64) == 1)
        .map(|(n, d)| Rational::new(n, d))
        .collect();
    out.sort();
    out
}

/// All triples in canonical order: lexicographic on `(q, a, b)` by value.
pub fn triples(config: &ScanConfig) -> Vec<HGParams> {
    let fr = fractions(config.max_denominator);
    let mut out = Vec::new();
    for q in &fr {
        for (i, a) in fr.iter().enumerate() {
            let start = if config.dedup { i } else { 0 };
            for b in &fr[start..] {
                out.push(HGParams::new(q.clone(), a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Classifies every triple and writes one record per line in canonical order.
/// Returns the number of records written.
pub fn run_scan(config: &ScanConfig) -> Result<usize, CliError> {
    if config.max_denominator < 2 {
        return Err(CliError::Precondition(format!("max denominator must be at least 2, got {}", config.max_denominator)));
    }
    if config.parallelism == 0 {
        return Err(CliError::Precondition("parallelism must be at least 1".into()));
    }
    let file = File::create(&config.output).map_err(|e| CliError::Io(format!("{}: {e}", config.output.display())))?;
    let work = triples(config);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| CliError::Precondition(e.to_string()))?;
    let version = env!("CARGO_PKG_VERSION").to_string();
    let records: Vec<Result<ScanRecord, CliError>> = pool.install(|| {
        work.par_iter()
            .map(|p| {
                let start = Instant::now();
                let record = classify(p).map_err(|e| CliError::Precondition(e.to_string()))?;
                let micros = start.elapsed().as_micros() as u64;
                Ok(ScanRecord { record, micros, version: version.clone() })
            })
            .collect()
    });
    let mut w = BufWriter::new(file);
    let mut n = 0;
    for r in records {
        let line = serde_json::to_string(&r?).expect("serializable record");
        writeln!(w, "{line}")?;
        n += 1;
    }
    w.flush()?;
    Ok(n)
}
