use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::poly::EvalMode;

pub const CSV_HEADER: &str =
    "family,degree,method,eval_mode,seed,real_adds,real_muls,iters,roots_found,expected,max_residual,matched,wall_ms";

/// One output line. Field order is the column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub family: String,
    pub degree: usize,
    pub method: String,
    pub eval_mode: EvalMode,
    pub seed: u64,
    pub real_adds: u64,
    pub real_muls: u64,
    pub iters: usize,
    pub roots_found: usize,
    pub expected: usize,
    pub max_residual: f64,
    pub matched: bool,
    pub wall_ms: f64,
}

pub fn write_csv<W: Write>(out: W, rows: &[CsvRow]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn parse_csv<R: Read>(input: R) -> Result<Vec<CsvRow>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(HarnessError::Spec(format!("unexpected csv header `{}`", header.join(","))));
    }
    r.deserialize().map(|row| row.map_err(HarnessError::from)).collect()
}
